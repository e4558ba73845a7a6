#pragma once

// Case assembly and the multi-stage ex-post procedures.
//
//   BC   = general + thermal + storage + renewables/policy + DC flow
//   IC   = BC + inertia
//   RC   = general + thermal + storage + renewables/policy + SOCP AC flow
//   LEGO = RC + inertia

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lego/inertia.hpp"
#include "lego/model.hpp"
#include "lego/model_io.hpp"
#include "lego/socp.hpp"
#include "lego/solution.hpp"
#include "lego/system_data.hpp"
#include "lego/temporal.hpp"

namespace lego {

enum class CaseKind { BC, IC, RC, LEGO };

std::string_view to_string(CaseKind kind);
/// Accepts bc, ic, rc, lego in any case.
CaseKind parse_case_kind(std::string_view text);

struct CaseSpec {
    CaseKind kind = CaseKind::BC;
    double kappa = 0.0;
    bool dc = true;
    bool ac = false;
    bool inertia = false;
    /// When false the clean-production row is left out and only reported.
    bool enforce_clean_row = true;
    InertiaConfig inertia_config;
    SocpOptions socp;

    /// Blocks set per kind; inertia settings and kappa taken from the system.
    static CaseSpec for_kind(CaseKind kind, const SystemData& system);
    static CaseSpec for_kind(CaseKind kind, double kappa, const InertiaConfig& inertia);
};

/// Throws BuildError when the block flags contradict each other or the kind.
void validate_case(const CaseSpec& spec);

ModelInstance assemble_case(const CaseSpec& spec, const SystemData& system, const TemporalStructure& time);

struct SolveOptions {
    std::string solver = "scip";
    double time_limit = 0.0;
    double mip_gap = 1e-9;
    ModelFormat format = ModelFormat::Lp;
    std::filesystem::path work_dir;  // empty: temporary
};

struct CostBreakdown {
    double startup = 0.0;
    double commitment = 0.0;
    double thermal_variable = 0.0;
    double renewable_om = 0.0;
    double storage_om = 0.0;
    double reserves = 0.0;
    double non_served = 0.0;
    double investment = 0.0;

    double total() const;
};

struct CapacityEntry {
    std::string technology;  // thermal, renewable, storage, facts
    std::string unit;
    std::string bus;
    int existing = 0;
    int built = 0;
    double unit_size = 0.0;  // GW (GVar for facts)
    double total() const { return unit_size * (existing + built); }
};

struct RunReport {
    std::string case_kind;
    std::string mode = "native";  // native, ops-only, add-investments, ex-post-ac
    double kappa = 0.0;
    SolveStatus status = SolveStatus::Infeasible;
    double objective = 0.0;
    double wall_seconds = 0.0;
    std::optional<double> base_objective;

    CostBreakdown cost;
    std::vector<CapacityEntry> capacity;
    double clean_share = 0.0;
    bool clean_target_met = false;
    double ens_total = 0.0;      // GWh
    double average_inertia = 0.0;  // s
    int facts_built = 0;
    std::vector<InertiaPoint> inertia;

    bool ac = false;
    std::vector<ConeResidual> cones;
    VoltageRecovery voltages;
    std::map<std::string, double> reactive_by_technology;  // weighted GVarh
};

/// Recomputes all metrics from solution values and dataset coefficients.
RunReport compute_metrics(const Solution& solution, const SystemData& system, const TemporalStructure& time,
                          const CaseSpec& spec);

struct CaseRun {
    ModelInstance model;
    Solution solution;
    RunReport report;
};

/// Assemble, solve and, when the solve produced values, compute metrics.
CaseRun run_case(const CaseSpec& spec, const SystemData& system, const TemporalStructure& time,
                 const SolveOptions& options);

/// Investment decisions x of generators and storage in a solution.
std::map<std::string, double> investment_values(const Solution& solution, const SystemData& system);

enum class ExPostMode { OpsOnly, AddInvestments };

/// Re-runs the inertia-constrained model on a DC base solution. OpsOnly fixes
/// every investment and reports (does not enforce) the clean-production row
/// unless enforce_clean_row is set; AddInvestments lower-bounds them.
CaseRun run_ex_post_inertia(const Solution& base, ExPostMode mode, const SystemData& system,
                            const TemporalStructure& time, const InertiaConfig& config, const SolveOptions& options,
                            bool enforce_clean_row = false);

/// Re-runs the AC relaxation with base investments as lower bounds. FACTS
/// devices are free unless allow_facts is false.
CaseRun run_ex_post_ac(const Solution& base, const SystemData& system, const TemporalStructure& time,
                       const SolveOptions& options, bool allow_facts = true);

/// report.json plus capacity.csv, inertia.csv, cone.csv, voltages.csv and
/// reactive.csv. Wall time goes to timing.txt only so the rest is
/// deterministic.
void write_report(const std::filesystem::path& dir, const RunReport& report);

}  // namespace lego
