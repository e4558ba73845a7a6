#pragma once

// RoCoF inertia block. Synchronous inertia comes from committed thermal
// units; virtual inertia (VI) from renewable and storage units with H > 0.
// Every bilinear term pairs a bounded continuous variable with a binary
// (commitment or investment bit), so the linear form is exact.

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "lego/model.hpp"
#include "lego/solution.hpp"
#include "lego/system_data.hpp"
#include "lego/temporal.hpp"

namespace lego {

/// Which output drives the VI gain numerator. OwnOutput uses the VI unit's
/// own dispatch; ThermalOutput is the literal printed index (total thermal
/// output), kept for comparison.
enum class ViNumerator { OwnOutput, ThermalOutput };

struct InertiaConfig {
    double f_base = 50.0;
    double rocof_limit = 1.0;
    double inertia_cap = 30.0;
    double disturbance = 0.0;
    std::map<StepRef, double> disturbance_overrides;
    ViNumerator numerator = ViNumerator::OwnOutput;

    static InertiaConfig from_settings(const InertiaSettings& s);
    double disturbance_at(StepRef step) const;
    /// Throws BuildError on f_base <= 0, rocof_limit <= 0, disturbance < 0 or cap <= 0.
    void validate() const;
};

struct ViUnit {
    std::string id;
    double unit_size = 0.0;
    double inertia_const = 0.0;
    int existing = 0;
    int build_max = 0;
    int profile = -1;  // profile column for renewables, -1 for storage
};

/// VI units: renewables then storage, each with H > 0, in dataset order.
std::vector<ViUnit> virtual_inertia_units(const SystemData& system);
/// Availability factor of a VI unit at a step (storage: 1).
double participation(const SystemData& system, const ViUnit& unit, StepRef step);

/// Adds aux = cont * bin with aux in [0, U] where cont lies in [0, U].
VarId linearize_binary_product(ModelInstance& model, VarId cont, VarId bin, const std::string& aux_name);

/// Bits b_0..b_{n-1} with x = sum 2^b b_i and sum 2^b b_i <= upper bound of x.
std::vector<VarId> binary_expand_integer(ModelInstance& model, VarId x, const std::string& unit_id);

void build_inertia(const SystemData& system, const TemporalStructure& time, ModelInstance& model,
                   const InertiaConfig& config);

struct InertiaPoint {
    int rp = 1;
    int k = 1;
    double m_sg = 0.0;
    double m_vi = 0.0;
    double m = 0.0;
    bool rocof_ok = true;
    bool within_cap = true;           // m_sg, m_vi, m <= inertia cap
    std::vector<double> thermal_gain;  // per thermal unit
    std::vector<double> vi_gain;       // per virtual_inertia_units entry
};

using ValueLookup = std::function<double(const std::string&)>;

/// Nonlinear recomputation for one step from commitment, output and
/// investment values. Integral values are rounded first; zero denominators
/// give zero gains.
InertiaPoint evaluate_inertia_point(const SystemData& system, const InertiaConfig& config, StepRef step,
                                    const ValueLookup& value);

/// All steps, computed in parallel.
std::vector<InertiaPoint> evaluate_inertia(const Solution& solution, const SystemData& system,
                                           const TemporalStructure& time, const InertiaConfig& config);
/// Serial reference for evaluate_inertia.
std::vector<InertiaPoint> evaluate_inertia_serial(const Solution& solution, const SystemData& system,
                                                  const TemporalStructure& time, const InertiaConfig& config);

}  // namespace lego
