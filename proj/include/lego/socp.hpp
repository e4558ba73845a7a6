#pragma once

// Second-order cone relaxation of the AC power flow. One (cij, sij) pair per
// connected bus pair (lo, hi) in bus order, with
//   cij = V_lo V_hi cos(theta_hi - theta_lo),  sij = V_lo V_hi sin(theta_hi - theta_lo).
// A line oriented hi -> lo uses sij with a flipped sign.

#include <string>
#include <utility>
#include <vector>

#include "lego/model.hpp"
#include "lego/solution.hpp"
#include "lego/system_data.hpp"
#include "lego/temporal.hpp"

namespace lego {

struct SocpOptions {
    /// Adds fp^2 + fq^2 <= Amax^2 per directed flow on top of the separate boxes.
    bool apparent_power_circle = false;
};

/// Connected bus pairs (lo, hi) by bus index, sorted.
std::vector<std::pair<int, int>> bus_pairs(const SystemData& system);

void build_socp(const SystemData& system, const TemporalStructure& time, ModelInstance& model,
                const SocpOptions& options = {});

struct ConeResidual {
    int rp = 1;
    int k = 1;
    std::string line;  // from-to-circuit
    double residual = 0.0;
};

/// cii_from * cii_to - cij^2 - sij^2 per step and line.
std::vector<ConeResidual> cone_residual(const Solution& solution, const SystemData& system,
                                        const TemporalStructure& time);

struct BusVoltage {
    int rp = 1;
    int k = 1;
    std::string bus;
    double magnitude = 0.0;
    double angle = 0.0;  // rad, slack at 0
};

struct VoltageRecovery {
    std::vector<BusVoltage> voltages;
    /// Largest angle mismatch around any mesh (0 on radial networks), per step.
    std::vector<double> cycle_error;
};

/// Throws if some cii is below -tol.
VoltageRecovery recover_voltages(const Solution& solution, const SystemData& system, const TemporalStructure& time,
                                 double tol = 1e-7);

}  // namespace lego
