#pragma once

// Brute-force oracles for tiny instances. Integer variables are enumerated
// depth-first with row-activity pruning; every surviving assignment is closed
// with a continuous solve. The best leaf is the ground truth the MILP solver
// must reproduce.

#include <cstdint>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "lego/inertia.hpp"
#include "lego/model.hpp"
#include "lego/system_data.hpp"
#include "lego/temporal.hpp"
#include "lego/workflows.hpp"

namespace lego {

class OracleError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct TinyInstance {
    SystemData system;
    TemporalStructure time;
    std::uint64_t seed = 0;
};

/// Random instance with at most 3 buses, 3 units and 4 steps in one rp.
/// Unit counts and horizon are trimmed until the free decisions (commitment,
/// investment bits, storage mode) fit in `max_decision_bits`.
TinyInstance random_tiny_instance(std::uint64_t seed, bool with_inertia, int max_decision_bits = 12);

/// Free binary decisions of an instance: commitment per thermal unit and
/// step, investment bits per unit, and charge/discharge mode per storage
/// unit and step.
int decision_bits(const SystemData& system, const TemporalStructure& time);

struct OracleLimits {
    long max_leaves = 1L << 16;
};

enum class LeafStatus { Optimal, Infeasible, Unbounded };

struct LeafOutcome {
    LeafStatus status = LeafStatus::Infeasible;
    double objective = 0.0;
    std::map<std::string, double> values;  // may be empty
};

/// Solves the continuous problem left once every integer variable is fixed
/// through its bounds.
using LeafSolver = std::function<LeafOutcome(const ModelInstance& fixed)>;

struct OracleResult {
    bool feasible = false;
    bool unbounded = false;
    double objective = 0.0;
    std::map<std::string, double> assignment;  // every variable of the best leaf
    long leaves = 0;                           // integer assignments that survived pruning
    long feasible_leaves = 0;
};

/// Integer assignments surviving the row-activity pruning, in DFS order.
/// Each entry lists the values of model integer variables by index order.
/// Throws OracleError past `limits.max_leaves` or on unbounded integer domains.
std::vector<std::vector<double>> enumerate_integer_points(const ModelInstance& model, const OracleLimits& limits = {});

/// Exact LP closure of one leaf: presolve plus the dense simplex. Refuses
/// models with quadratic rows.
LeafOutcome solve_leaf_lp(const ModelInstance& fixed);

/// Leaves solved in parallel; the lowest objective wins, ties go to the
/// earliest leaf so the result does not depend on the thread count.
OracleResult brute_force_optimum(const ModelInstance& model, const OracleLimits& limits = {});
OracleResult brute_force_optimum(const ModelInstance& model, const LeafSolver& leaf, const OracleLimits& limits = {});
/// Serial reference.
OracleResult brute_force_optimum_serial(const ModelInstance& model, const OracleLimits& limits = {});

struct LinearizationReport {
    long points = 0;  // (step, integer assignment, output sample) triples
    long lps = 0;
    double max_error = 0.0;
    std::vector<std::string> mismatches;  // readable counterexamples

    bool ok() const { return mismatches.empty(); }
};

/// For every step, every integer assignment of the inertia block and sampled
/// unit outputs, the linear block must pin (gains, M^SG, M^VI, M) to the
/// nonlinear evaluation, and be infeasible exactly when that evaluation
/// breaks the RoCoF or cap limits.
LinearizationReport check_linearization(const TinyInstance& instance, const InertiaConfig& config,
                                        int samples_per_point = 2, double tol = 1e-6);

/// |a - b| <= rel_tol * max(|a|, |b|) + 1e-9.
bool objectives_agree(double a, double b, double rel_tol);

struct CampaignEntry {
    std::uint64_t seed = 0;
    CaseKind kind = CaseKind::BC;
    bool pass = false;
    bool oracle_feasible = false;
    std::string solver_status;
    double oracle_objective = 0.0;
    double solver_objective = 0.0;
    long leaves = 0;
    std::string note;
};

struct CampaignSummary {
    std::vector<CampaignEntry> entries;

    int passed() const;
    int total() const { return static_cast<int>(entries.size()); }
};

/// Instances seed, seed+1, ..., seed+n-1, each assembled for every kind and
/// solved both by enumeration and by the configured solver. AC kinds close
/// their leaves with the same solver (cone subproblems).
CampaignSummary run_oracle_campaign(int n, std::uint64_t seed, const std::vector<CaseKind>& kinds,
                                    const SolveOptions& options, double rel_tol = 1e-6);

}  // namespace lego
