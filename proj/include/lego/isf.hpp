#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "lego/system_data.hpp"

namespace lego {

class NetworkError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Injection shift factors under DC assumptions. Entry (line, column) is the
/// flow on the line (positive from_bus -> to_bus) caused by one unit injected
/// at the column's bus and withdrawn at the slack. Columns cover every bus
/// except the slack.
struct IsfMatrix {
    std::vector<int> bus_of_column;  // bus index per column
    int n_lines = 0;
    std::vector<double> values;      // row-major, n_lines x columns

    int n_columns() const { return static_cast<int>(bus_of_column.size()); }
    double at(int line, int column) const { return values[static_cast<std::size_t>(line) * n_columns() + column]; }
    /// Column of a bus, -1 for the slack.
    int column_of_bus(int bus) const;
};

/// Connected components of the network as lists of bus indices.
std::vector<std::vector<int>> network_islands(const SystemData& system);

/// Columns are solved in parallel.
IsfMatrix compute_isf(const SystemData& system);
/// Serial reference for compute_isf.
IsfMatrix compute_isf_serial(const SystemData& system);

}  // namespace lego
