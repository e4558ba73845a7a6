#pragma once

// AC-feasible points from the Newton power flow, mapped onto the variables
// of the relaxation.

#include <cstdint>
#include <string>
#include <vector>

#include "lego/model.hpp"
#include "lego/solution.hpp"
#include "lego/system_data.hpp"
#include "reference_flows.hpp"

namespace lego::testing {

/// Random 2- or 3-bus case (3: triangle) with shunts, line charging, one
/// thermal unit at the slack and one FACTS device at b2.
SystemData ac_case(int n_buses, std::uint64_t seed);

struct AcPoint {
    Solution solution;
    std::vector<double> values;  // by model variable index
};

/// Assignment of every AC variable from a converged power flow; the FACTS
/// device supplies q_facts (GVar) at b2.
AcPoint point_from_power_flow(const SystemData& system, const ModelInstance& model, const AcState& state,
                              double q_facts);

struct AcPointCheck {
    bool converged = false;
    std::vector<std::string> violations;  // AC rows and AC variable bounds above tol
    double min_cone_residual = 0.0;
    double max_voltage_error = 0.0;       // recovered vs power-flow magnitudes and angles
};

/// Solves the power flow on ac_case(n_buses, seed) and checks the point
/// against the relaxation rows of an RC model.
AcPointCheck check_power_flow_point(int n_buses, std::uint64_t seed, double tol = 1e-9);

}  // namespace lego::testing
