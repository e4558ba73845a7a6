#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace lego {

enum class SolveStatus { Optimal, Feasible, Infeasible, Unbounded, Limit };

std::string_view to_string(SolveStatus status);
SolveStatus parse_status(std::string_view text);

/// True for optimal and feasible: values are present for every variable.
inline bool has_values(SolveStatus s) { return s == SolveStatus::Optimal || s == SolveStatus::Feasible; }

struct Solution {
    SolveStatus status = SolveStatus::Infeasible;
    double objective = 0.0;
    std::map<std::string, double, std::less<>> values;
    double wall_seconds = 0.0;
    std::string log_tail;

    std::optional<double> find(std::string_view name) const {
        auto it = values.find(name);
        if (it == values.end()) return std::nullopt;
        return it->second;
    }
    double value(std::string_view name) const {
        auto it = values.find(name);
        if (it == values.end()) throw std::out_of_range("solution has no value for " + std::string(name));
        return it->second;
    }
    double value_or(std::string_view name, double fallback) const {
        auto it = values.find(name);
        return it == values.end() ? fallback : it->second;
    }
};

}  // namespace lego
