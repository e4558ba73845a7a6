#pragma once

// Builders for the standard planning blocks: objective and general bounds,
// thermal unit commitment, storage, renewables with the clean-production
// policy row, and the DC power flow through injection shift factors.
//
// Assembly order: build_general_bounds registers the variables shared across
// blocks (investments x, non-served energy pns, unit output p, storage
// consumption cs and the reserve allocations). The remaining blocks add their
// own variables and rows. build_objective runs last.

#include "lego/isf.hpp"
#include "lego/model.hpp"
#include "lego/system_data.hpp"
#include "lego/temporal.hpp"

namespace lego {

class BuildError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Whether a storage unit balances its state of charge across windows of
/// chronological periods (hydro under representative periods) instead of
/// cyclically inside each representative period.
bool uses_inter_period_soc(const StorageUnit& unit, const TemporalStructure& time);

void build_general_bounds(const SystemData& system, const TemporalStructure& time, ModelInstance& model);
void build_thermal(const SystemData& system, const TemporalStructure& time, ModelInstance& model);
void build_storage(const SystemData& system, const TemporalStructure& time, ModelInstance& model);
/// Adds the availability rows and, when `include_clean_row`, the policy row
/// limiting weighted thermal energy to (1 - kappa) of weighted demand.
void build_renewable_policy(const SystemData& system, const TemporalStructure& time, ModelInstance& model,
                            double kappa, bool include_clean_row = true);
void build_dc_opf(const SystemData& system, const TemporalStructure& time, ModelInstance& model,
                  const IsfMatrix& isf);
void build_objective(const SystemData& system, const TemporalStructure& time, ModelInstance& model);

/// Investment cost per built unit (MEUR/y) for a generator, storage or FACTS id.
double unit_investment_cost(const SystemData& system, const std::string& unit_id);

}  // namespace lego
