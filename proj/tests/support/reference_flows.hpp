#pragma once

// Independent power-flow references used by the tests: the angle form of the
// DC flow and a Newton-Raphson AC power flow on the pi line model.

#include <cstdint>
#include <vector>

#include "lego/system_data.hpp"

namespace lego::testing {

/// DC flows per line from bus injections (GW). The slack absorbs the
/// imbalance; angles come from the reduced susceptance matrix.
std::vector<double> angle_dc_flows(const SystemData& system, const std::vector<double>& injection);

struct AcState {
    std::vector<double> v;      // magnitude per bus, p.u.
    std::vector<double> theta;  // rad, slack at 0
    bool converged = false;
    int iterations = 0;
};

/// Solves the AC power flow with the slack at v_slack and every other bus PQ
/// with the given net injections (p.u. on the base power).
AcState newton_power_flow(const SystemData& system, const std::vector<double>& p_inj, const std::vector<double>& q_inj,
                          double v_slack = 1.0, double tol = 1e-12, int max_iter = 50);

/// Net injections (p.u.) the network draws at a state: line flows out of the
/// bus plus shunt consumption.
void bus_injections(const SystemData& system, const AcState& state, std::vector<double>& p, std::vector<double>& q);

struct PiFlow {
    double p_from = 0.0, q_from = 0.0;  // p.u. leaving the from bus
    double p_to = 0.0, q_to = 0.0;      // p.u. leaving the to bus
};

PiFlow line_flow(const Line& line, double va, double ta, double vb, double tb);

/// Connected random network with n buses, a spanning tree plus extra edges.
SystemData random_network(int n_buses, int extra_edges, std::uint64_t seed);

}  // namespace lego::testing
