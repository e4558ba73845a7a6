#include "lego/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "lego/dense_lp.hpp"
#include "lego/solver.hpp"
#include "lego/text_io.hpp"

namespace lego {

namespace {

struct RowView {
    std::vector<std::pair<int, double>> terms;
    Sense sense = Sense::LessEqual;
    double rhs = 0.0;
};

struct Compiled {
    std::vector<std::string> names;
    std::vector<double> lower, upper, cost;
    std::vector<char> integral;
    std::vector<RowView> rows;
    double cost_constant = 0.0;
    bool has_quad = false;
};

Compiled compile(const ModelInstance& m) {
    Compiled c;
    const auto vars = m.variables();
    for (const auto& v : vars) {
        c.names.push_back(v.name);
        c.lower.push_back(v.lower);
        c.upper.push_back(v.upper);
        c.integral.push_back(v.is_integral() ? 1 : 0);
    }
    c.cost.assign(vars.size(), 0.0);
    for (const auto& t : m.objective().terms()) c.cost[t.var.index] += t.coef;
    c.cost_constant = m.objective().constant();
    for (const auto& r : m.rows()) {
        RowView rv;
        rv.sense = r.sense;
        rv.rhs = r.rhs;
        for (const auto& t : r.expr.terms()) rv.terms.emplace_back(static_cast<int>(t.var.index), t.coef);
        c.rows.push_back(std::move(rv));
    }
    c.has_quad = !m.quad_rows().empty();
    return c;
}

double feas_tol(double rhs) { return 1e-9 * (1.0 + std::abs(rhs)); }

bool range_feasible(double lo_act, double hi_act, Sense sense, double rhs) {
    const double tol = feas_tol(rhs);
    switch (sense) {
        case Sense::LessEqual: return lo_act <= rhs + tol;
        case Sense::GreaterEqual: return hi_act >= rhs - tol;
        case Sense::Equal: return lo_act <= rhs + tol && hi_act >= rhs - tol;
    }
    return true;
}

// Depth-first enumeration of integer assignments.
class Enumerator {
public:
    Enumerator(const Compiled& c, const OracleLimits& limits) : c_(c), limits_(limits) {
        const int n = static_cast<int>(c.names.size());
        for (int j = 0; j < n; ++j) {
            if (!c.integral[j]) continue;
            const double lo = std::ceil(c.lower[j] - 1e-9), hi = std::floor(c.upper[j] + 1e-9);
            if (!std::isfinite(lo) || !std::isfinite(hi)) {
                throw OracleError("integer variable " + c.names[j] + " has an unbounded domain");
            }
            ints_.push_back(j);
        }
        rows_of_.assign(static_cast<std::size_t>(n), {});
        for (std::size_t r = 0; r < c.rows.size(); ++r) {
            bool touches = false;
            bool all_int = true;
            for (auto [j, a] : c.rows[r].terms) {
                touches = touches || c.integral[j];
                all_int = all_int && c.integral[j];
            }
            if (!touches) continue;
            const int id = static_cast<int>(rows_.size());
            rows_.push_back(static_cast<int>(r));
            all_int_.push_back(all_int ? 1 : 0);
            for (auto [j, a] : c.rows[r].terms) {
                if (c.integral[j]) rows_of_[j].push_back(id);
            }
        }
        order_vars();
        assigned_.assign(static_cast<std::size_t>(n), 0);
        value_.assign(static_cast<std::size_t>(n), 0.0);
    }

    std::vector<std::vector<double>> run() {
        dfs(0);
        return std::move(leaves_);
    }

private:
    void order_vars() {
        std::vector<char> placed(c_.names.size(), 0);
        std::vector<int> unplaced(rows_.size(), 0);
        for (std::size_t r = 0; r < rows_.size(); ++r) {
            for (auto [j, a] : c_.rows[rows_[r]].terms) unplaced[r] += c_.integral[j] ? 1 : 0;
        }
        while (order_.size() < ints_.size()) {
            int best = -1;
            for (std::size_t r = 0; r < rows_.size(); ++r) {
                if (unplaced[r] > 0 && (best < 0 || unplaced[r] < unplaced[best])) best = static_cast<int>(r);
            }
            if (best < 0) break;
            for (auto [j, a] : c_.rows[rows_[best]].terms) {
                if (!c_.integral[j] || placed[j]) continue;
                placed[j] = 1;
                order_.push_back(j);
                for (int rr : rows_of_[j]) --unplaced[rr];
            }
        }
        for (int j : ints_) {
            if (!placed[j]) order_.push_back(j);
        }
    }

    bool row_ok(int id) const {
        const auto& r = c_.rows[rows_[id]];
        double lo = 0.0, hi = 0.0;
        for (auto [j, a] : r.terms) {
            if (assigned_[j]) {
                lo += a * value_[j];
                hi += a * value_[j];
            } else {
                lo += a > 0 ? a * c_.lower[j] : a * c_.upper[j];
                hi += a > 0 ? a * c_.upper[j] : a * c_.lower[j];
            }
        }
        return range_feasible(lo, hi, r.sense, r.rhs);
    }

    // Value forced by an integer-only equality whose other terms are set.
    bool forced_value(int var, double& out) const {
        for (int id : rows_of_[var]) {
            if (!all_int_[id]) continue;
            const auto& r = c_.rows[rows_[id]];
            if (r.sense != Sense::Equal) continue;
            double act = 0.0, coef = 0.0;
            bool others_set = true;
            for (auto [j, a] : r.terms) {
                if (j == var) {
                    coef += a;
                } else if (assigned_[j]) {
                    act += a * value_[j];
                } else {
                    others_set = false;
                    break;
                }
            }
            if (!others_set || coef == 0.0) continue;
            out = (r.rhs - act) / coef;
            return true;
        }
        return false;
    }

    void dfs(std::size_t pos) {
        if (pos == order_.size()) {
            if (static_cast<long>(leaves_.size()) >= limits_.max_leaves) {
                throw OracleError("instance is not enumerable: more than " + std::to_string(limits_.max_leaves) +
                                  " integer assignments");
            }
            std::vector<double> leaf;
            leaf.reserve(ints_.size());
            for (int j : ints_) leaf.push_back(value_[j]);
            leaves_.push_back(std::move(leaf));
            return;
        }
        const int j = order_[pos];
        const double lo = std::ceil(c_.lower[j] - 1e-9), hi = std::floor(c_.upper[j] + 1e-9);
        double forced = 0.0;
        if (forced_value(j, forced)) {
            const double r = std::round(forced);
            if (std::abs(r - forced) > 1e-9 || r < lo || r > hi) return;
            try_value(pos, j, r);
            return;
        }
        for (double v = lo; v <= hi; v += 1.0) try_value(pos, j, v);
    }

    void try_value(std::size_t pos, int j, double v) {
        assigned_[j] = 1;
        value_[j] = v;
        bool ok = true;
        for (int id : rows_of_[j]) {
            if (!row_ok(id)) {
                ok = false;
                break;
            }
        }
        if (ok) dfs(pos + 1);
        assigned_[j] = 0;
    }

    const Compiled& c_;
    OracleLimits limits_;
    std::vector<int> ints_;
    std::vector<int> order_;
    std::vector<int> rows_;
    std::vector<char> all_int_;
    std::vector<std::vector<int>> rows_of_;
    std::vector<char> assigned_;
    std::vector<double> value_;
    std::vector<std::vector<double>> leaves_;
};

struct LeafSolve {
    LeafStatus status = LeafStatus::Infeasible;
    double objective = 0.0;
    std::vector<double> x;
};

// Presolve (fixed-variable substitution, singleton rows to bounds) followed
// by the dense simplex on whatever is left.
LeafSolve solve_compiled(const Compiled& c, std::vector<double> lo, std::vector<double> hi,
                         const std::vector<double>& cost, double cost_constant) {
    LeafSolve out;
    const int n = static_cast<int>(lo.size());
    for (int j = 0; j < n; ++j) {
        if (lo[j] > hi[j] + 1e-9 * (1.0 + std::abs(lo[j]))) return out;
        if (lo[j] > hi[j]) hi[j] = lo[j];
    }
    auto is_fixed = [&](int j) { return hi[j] - lo[j] <= 0.0; };
    std::vector<char> active(c.rows.size(), 1);
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t r = 0; r < c.rows.size(); ++r) {
            if (!active[r]) continue;
            const auto& row = c.rows[r];
            double rhs = row.rhs;
            int free_var = -1;
            double free_coef = 0.0;
            int n_free = 0;
            for (auto [j, a] : row.terms) {
                if (is_fixed(j)) {
                    rhs -= a * lo[j];
                } else {
                    ++n_free;
                    free_var = j;
                    free_coef = a;
                }
            }
            if (n_free == 0) {
                if (!range_feasible(0.0, 0.0, row.sense, rhs)) return out;
                active[r] = 0;
                continue;
            }
            if (n_free > 1) continue;
            const double b = rhs / free_coef;
            const int j = free_var;
            const bool upper_bound = row.sense == Sense::Equal || (row.sense == Sense::LessEqual) == (free_coef > 0);
            const bool lower_bound = row.sense == Sense::Equal || (row.sense == Sense::LessEqual) != (free_coef > 0);
            if (upper_bound && b < hi[j]) hi[j] = b;
            if (lower_bound && b > lo[j]) lo[j] = b;
            if (lo[j] > hi[j]) {
                if (lo[j] - hi[j] > 1e-9 * (1.0 + std::abs(b))) return out;
                hi[j] = lo[j];
            }
            active[r] = 0;
            changed = true;
        }
    }

    std::vector<int> col_of(static_cast<std::size_t>(n), -1);
    std::vector<char> in_rows(static_cast<std::size_t>(n), 0);
    for (std::size_t r = 0; r < c.rows.size(); ++r) {
        if (!active[r]) continue;
        for (auto [j, a] : c.rows[r].terms) in_rows[j] = 1;
    }
    out.x.assign(static_cast<std::size_t>(n), 0.0);
    DenseLp lp;
    std::vector<int> cols;
    for (int j = 0; j < n; ++j) {
        if (is_fixed(j)) {
            out.x[j] = lo[j];
            continue;
        }
        if (!in_rows[j]) {
            // Isolated column: sits at its cheapest bound.
            double v;
            if (cost[j] > 0) {
                v = lo[j];
            } else if (cost[j] < 0) {
                v = hi[j];
            } else {
                v = std::isfinite(lo[j]) ? lo[j] : (std::isfinite(hi[j]) ? hi[j] : 0.0);
            }
            if (!std::isfinite(v)) {
                out.status = LeafStatus::Unbounded;
                return out;
            }
            out.x[j] = v;
            continue;
        }
        col_of[j] = static_cast<int>(cols.size());
        cols.push_back(j);
        lp.cost.push_back(cost[j]);
        lp.lower.push_back(lo[j]);
        lp.upper.push_back(hi[j]);
    }
    for (std::size_t r = 0; r < c.rows.size(); ++r) {
        if (!active[r]) continue;
        DenseRow dr;
        dr.coef.assign(cols.size(), 0.0);
        dr.sense = c.rows[r].sense;
        dr.rhs = c.rows[r].rhs;
        for (auto [j, a] : c.rows[r].terms) {
            if (col_of[j] >= 0) {
                dr.coef[col_of[j]] += a;
            } else {
                dr.rhs -= a * out.x[j];
            }
        }
        lp.rows.push_back(std::move(dr));
    }
    if (!cols.empty()) {
        auto res = solve_dense_lp(lp);
        if (res.status == LpStatus::Infeasible) return out;
        if (res.status == LpStatus::Unbounded) {
            out.status = LeafStatus::Unbounded;
            return out;
        }
        if (res.status != LpStatus::Optimal) throw OracleError("leaf LP hit the iteration limit");
        for (std::size_t i = 0; i < cols.size(); ++i) out.x[cols[i]] = res.x[i];
    } else {
        for (const auto& r : lp.rows) {
            if (!range_feasible(0.0, 0.0, r.sense, r.rhs)) return out;
        }
    }
    out.status = LeafStatus::Optimal;
    out.objective = cost_constant;
    for (int j = 0; j < n; ++j) out.objective += cost[j] * out.x[j];
    return out;
}

std::vector<int> integer_columns(const Compiled& c) {
    std::vector<int> out;
    for (std::size_t j = 0; j < c.integral.size(); ++j) {
        if (c.integral[j]) out.push_back(static_cast<int>(j));
    }
    return out;
}

LeafSolve solve_point(const Compiled& c, const std::vector<int>& ints, const std::vector<double>& leaf) {
    auto lo = c.lower, hi = c.upper;
    for (std::size_t i = 0; i < ints.size(); ++i) lo[ints[i]] = hi[ints[i]] = leaf[i];
    return solve_compiled(c, std::move(lo), std::move(hi), c.cost, c.cost_constant);
}

// Lowest objective, earliest leaf on ties.
OracleResult pick_best(const Compiled& c, const std::vector<LeafSolve>& solved) {
    OracleResult res;
    res.leaves = static_cast<long>(solved.size());
    int best = -1;
    for (std::size_t i = 0; i < solved.size(); ++i) {
        if (solved[i].status == LeafStatus::Unbounded) res.unbounded = true;
        if (solved[i].status != LeafStatus::Optimal) continue;
        ++res.feasible_leaves;
        if (best < 0 || solved[i].objective < solved[best].objective) best = static_cast<int>(i);
    }
    if (best >= 0 && !res.unbounded) {
        res.feasible = true;
        res.objective = solved[best].objective;
        const auto& x = solved[best].x;
        for (std::size_t j = 0; j < c.names.size() && j < x.size(); ++j) res.assignment[c.names[j]] = x[j];
    }
    return res;
}

}  // namespace

int decision_bits(const SystemData& s, const TemporalStructure& t) {
    auto bits = [](int n) {
        int b = 0;
        while ((1 << b) < n + 1) ++b;
        return b;
    };
    const int steps = static_cast<int>(t.steps().size());
    int total = static_cast<int>(s.thermal.size()) * steps + static_cast<int>(s.storage.size()) * steps;
    for (const auto& u : s.thermal) total += bits(u.build_max);
    for (const auto& u : s.renewable) total += bits(u.build_max);
    for (const auto& u : s.storage) total += bits(u.build_max);
    return total;
}

TinyInstance random_tiny_instance(std::uint64_t seed, bool with_inertia, int max_decision_bits) {
    std::mt19937_64 rng(seed);
    auto uni = [&](double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); };
    auto pick = [&](int a, int b) { return std::uniform_int_distribution<int>(a, b)(rng); };
    auto round3 = [](double v) { return std::round(v * 1000.0) / 1000.0; };

    SystemData s;
    const int n_bus = pick(1, 3);
    for (int i = 0; i < n_bus; ++i) {
        Bus b;
        b.id = "b" + std::to_string(i + 1);
        b.reactive_ratio = 0.2;
        b.is_slack = i == 0;
        s.buses.push_back(b);
    }
    auto add_line = [&](int a, int b) {
        Line l;
        l.from_bus = s.buses[a].id;
        l.to_bus = s.buses[b].id;
        l.circuit = "c1";
        const double r = round3(uni(0.005, 0.03)), x = round3(uni(0.05, 0.3));
        l.conductance = r / (r * r + x * x);
        l.susceptance = -x / (r * r + x * x);
        l.reactance = x;
        l.flow_limit = round3(uni(0.1, 0.8));
        l.apparent_limit = 1000.0;
        s.lines.push_back(l);
    };
    if (n_bus >= 2) add_line(0, 1);
    if (n_bus == 3) {
        add_line(1, 2);
        if (pick(0, 1) == 1) add_line(0, 2);
    }

    const int n_units = pick(1, 3);
    const int n_thermal = std::min(n_units, pick(1, 2));
    int remaining = n_units - n_thermal;
    const bool has_renewable = remaining > 0 && pick(0, 3) > 0;
    remaining -= has_renewable ? 1 : 0;
    const bool has_storage = remaining > 0;
    auto bus_of = [&]() { return s.buses[pick(0, n_bus - 1)].id; };

    for (int t = 0; t < n_thermal; ++t) {
        ThermalUnit u;
        u.id = "g" + std::to_string(t + 1);
        u.bus = bus_of();
        u.p_max = round3(uni(0.2, 0.6));
        u.p_min = round3(u.p_max * uni(0.0, 0.4));
        u.q_min = -0.3 * u.p_max;
        u.q_max = 0.5 * u.p_max;
        u.inertia_const = round3(uni(2.0, 6.0));
        u.c_startup = round3(uni(0.005, 0.05));
        u.c_commit = round3(uni(0.001, 0.01));
        u.c_var = round3(uni(0.02, 0.09));
        u.c_inv = round3(uni(0.01, 0.2));
        u.ramp_up = round3(uni(0.1, 0.6));
        u.ramp_down = round3(uni(0.1, 0.6));
        const bool candidate = pick(0, 2) == 0;
        u.existing = candidate ? 0 : 1;
        u.build_max = candidate ? 1 : 0;
        s.thermal.push_back(u);
    }
    s.profile_keys = {"pf1"};
    if (has_renewable) {
        RenewableUnit r;
        r.id = "r1";
        r.bus = bus_of();
        r.unit_size = round3(uni(0.1, 0.3));
        r.inertia_const = with_inertia && pick(0, 1) == 1 ? round3(uni(2.0, 6.0)) : 0.0;
        r.c_om = round3(uni(0.0, 0.01));
        r.c_inv = round3(uni(0.01, 0.1));
        r.existing = pick(0, 1);
        r.build_max = pick(0, 3);
        r.profile_key = "pf1";
        r.q_min = -0.1;
        r.q_max = 0.1;
        s.renewable.push_back(r);
    }
    if (has_storage) {
        StorageUnit st;
        st.id = "s1";
        st.bus = bus_of();
        st.unit_size = round3(uni(0.1, 0.2));
        st.energy_to_power = pick(2, 4);
        st.eff_charge = round3(uni(0.8, 1.0));
        st.eff_discharge = round3(uni(0.8, 1.0));
        st.min_soc_frac = round3(uni(0.0, 0.2));
        st.max_soc_frac = 1.0;
        st.inertia_const = with_inertia && pick(0, 1) == 1 ? round3(uni(1.0, 4.0)) : 0.0;
        st.c_om = round3(uni(0.0, 0.005));
        st.c_inv = round3(uni(0.01, 0.1));
        st.existing = pick(0, 1);
        st.build_max = 1 - st.existing + pick(0, 1) * st.existing;
        st.q_min = -0.05;
        st.q_max = 0.05;
        s.storage.push_back(st);
    }

    int steps = pick(1, 4);
    s.n_rep_periods = 1;
    auto fits = [&]() {
        s.steps_per_rp = steps;
        return decision_bits(s, TemporalStructure::hourly_identity(steps)) <= max_decision_bits;
    };
    while (!fits() && steps > 1) --steps;
    while (!fits() && !s.storage.empty()) s.storage.pop_back();
    while (!fits() && s.thermal.size() > 1) s.thermal.pop_back();
    while (!fits() && !s.renewable.empty() && s.renewable[0].build_max > 0) --s.renewable[0].build_max;
    if (!fits()) throw OracleError("cannot fit a tiny instance into the decision budget");

    s.demand_p = StepGrid(1, steps, n_bus);
    s.demand_q = StepGrid(1, steps, n_bus);
    s.profiles = StepGrid(1, steps, 1);
    s.inflows = StepGrid(1, steps, static_cast<int>(s.storage.size()));
    for (int k = 1; k <= steps; ++k) {
        for (int i = 0; i < n_bus; ++i) {
            s.demand_p(1, k, i) = round3(uni(0.0, 0.4));
            s.demand_q(1, k, i) = round3(uni(0.0, 0.08));
        }
        s.profiles(1, k, 0) = round3(uni(0.0, 1.0));
    }
    s.base_power = 100.0;
    s.max_angle_diff = 0.5;
    s.reserve_up = pick(0, 1) == 1 ? 0.05 : 0.0;
    s.reserve_down = pick(0, 1) == 1 ? 0.05 : 0.0;
    s.reserve_up_cost = 0.1;
    s.reserve_down_cost = 0.1;
    s.ens_cost = round3(uni(2.0, 5.0));
    s.kappa = pick(0, 2) * 0.25;
    static constexpr double kDisturbance[] = {0.0, 0.05, 0.15};
    s.inertia.disturbance = kDisturbance[pick(0, 2)];
    validate_system(s);
    return TinyInstance{std::move(s), TemporalStructure::hourly_identity(steps), seed};
}

std::vector<std::vector<double>> enumerate_integer_points(const ModelInstance& model, const OracleLimits& limits) {
    const auto c = compile(model);
    return Enumerator(c, limits).run();
}

LeafOutcome solve_leaf_lp(const ModelInstance& fixed) {
    const auto c = compile(fixed);
    if (c.has_quad) throw OracleError("the LP leaf solver does not handle quadratic rows");
    for (std::size_t j = 0; j < c.integral.size(); ++j) {
        if (c.integral[j] && c.lower[j] != c.upper[j]) {
            throw OracleError("integer variable " + c.names[j] + " is not fixed");
        }
    }
    auto sol = solve_compiled(c, c.lower, c.upper, c.cost, c.cost_constant);
    LeafOutcome out;
    out.status = sol.status;
    out.objective = sol.objective;
    if (sol.status == LeafStatus::Optimal) {
        for (std::size_t j = 0; j < c.names.size(); ++j) out.values[c.names[j]] = sol.x[j];
    }
    return out;
}

OracleResult brute_force_optimum(const ModelInstance& model, const OracleLimits& limits) {
    const auto c = compile(model);
    if (c.has_quad) throw OracleError("the LP leaf solver does not handle quadratic rows");
    const auto leaves = Enumerator(c, limits).run();
    const auto ints = integer_columns(c);
    std::vector<LeafSolve> solved(leaves.size());
    const long n = static_cast<long>(leaves.size());
    bool failed = false;
    std::string error;
#pragma omp parallel for schedule(dynamic, 4)
    for (long i = 0; i < n; ++i) {
        try {
            solved[static_cast<std::size_t>(i)] = solve_point(c, ints, leaves[static_cast<std::size_t>(i)]);
        } catch (const std::exception& e) {
#pragma omp critical
            {
                if (!failed) error = e.what();
                failed = true;
            }
        }
    }
    if (failed) throw OracleError(error);
    return pick_best(c, solved);
}

OracleResult brute_force_optimum_serial(const ModelInstance& model, const OracleLimits& limits) {
    const auto c = compile(model);
    if (c.has_quad) throw OracleError("the LP leaf solver does not handle quadratic rows");
    const auto leaves = Enumerator(c, limits).run();
    const auto ints = integer_columns(c);
    std::vector<LeafSolve> solved;
    solved.reserve(leaves.size());
    for (const auto& leaf : leaves) solved.push_back(solve_point(c, ints, leaf));
    return pick_best(c, solved);
}

OracleResult brute_force_optimum(const ModelInstance& model, const LeafSolver& leaf_solver,
                                 const OracleLimits& limits) {
    const auto c = compile(model);
    const auto leaves = Enumerator(c, limits).run();
    const auto ints = integer_columns(c);
    // External leaf solvers may not be thread safe, so leaves run in order.
    std::vector<LeafSolve> solved;
    for (const auto& leaf : leaves) {
        ModelInstance fixed = model;
        for (std::size_t i = 0; i < ints.size(); ++i) {
            auto& v = fixed.var_mut(VarId{static_cast<std::uint32_t>(ints[i])});
            v.lower = v.upper = leaf[i];
        }
        auto out = leaf_solver(fixed);
        LeafSolve ls;
        ls.status = out.status;
        ls.objective = out.objective;
        if (out.status == LeafStatus::Optimal) {
            ls.x.assign(c.names.size(), 0.0);
            for (std::size_t j = 0; j < c.names.size(); ++j) {
                auto it = out.values.find(c.names[j]);
                if (it != out.values.end()) ls.x[j] = it->second;
            }
        }
        solved.push_back(std::move(ls));
    }
    return pick_best(c, solved);
}

namespace {

// One-step copy of the system at `st` so the inertia block can be built and
// enumerated step by step.
SystemData step_slice(const SystemData& s, StepRef st) {
    SystemData out = s;
    out.n_rep_periods = 1;
    out.steps_per_rp = 1;
    auto slice = [&](const StepGrid& g) {
        StepGrid r(1, 1, g.n_cols());
        for (int c = 0; c < g.n_cols(); ++c) r(1, 1, c) = g(st.rp, st.k, c);
        return r;
    };
    out.demand_p = slice(s.demand_p);
    out.demand_q = slice(s.demand_q);
    out.profiles = slice(s.profiles);
    out.inflows = slice(s.inflows);
    return out;
}

}  // namespace

LinearizationReport check_linearization(const TinyInstance& inst, const InertiaConfig& config, int samples_per_point,
                                        double tol) {
    LinearizationReport report;
    const auto& s = inst.system;
    const auto vi = virtual_inertia_units(s);
    const StepRef one{1, 1};
    std::mt19937_64 rng(inst.seed ^ 0x9e3779b97f4a7c15ULL);
    std::uniform_real_distribution<double> frac(0.0, 1.0);

    for (auto st : inst.time.steps()) {
        const SystemData slice = step_slice(s, st);
        InertiaConfig cfg = config;
        cfg.disturbance = config.disturbance_at(st);
        cfg.disturbance_overrides.clear();

        ModelInstance h;
        for (const auto& u : slice.thermal) {
            h.add_variable(make_name("u", 1, 1, u.id), VarKind::Binary, 0, 1);
            h.add_variable(make_name("p", 1, 1, u.id), VarKind::Continuous, 0, kInf);
        }
        for (const auto& v : vi) {
            h.add_variable(make_name("x", v.id), VarKind::Integer, 0, v.build_max);
            h.add_variable(make_name("p", 1, 1, v.id), VarKind::Continuous, 0, kInf);
        }
        build_inertia(slice, TemporalStructure::hourly_identity(1), h, cfg);

        const auto c = compile(h);
        const auto ints = integer_columns(c);
        const auto leaves = Enumerator(c, OracleLimits{}).run();
        auto col = [&](const std::string& name) { return static_cast<int>(h.at(name).index); };

        std::vector<std::pair<std::string, int>> targets = {
            {"msg", col(make_name("msg", 1, 1))},
            {"mvi", col(make_name("mvi", 1, 1))},
            {"inertia", col(make_name("inertia", 1, 1))},
        };
        for (const auto& u : slice.thermal) targets.emplace_back("gain " + u.id, col(make_name("gain", 1, 1, u.id)));
        for (const auto& v : vi) targets.emplace_back("gain " + v.id, col(make_name("gain", 1, 1, v.id)));

        for (const auto& leaf : leaves) {
            std::map<std::string, double> point;
            for (std::size_t i = 0; i < ints.size(); ++i) point[c.names[ints[i]]] = leaf[i];
            for (int sample = 0; sample < samples_per_point; ++sample) {
                auto lo = c.lower, hi = c.upper;
                for (std::size_t i = 0; i < ints.size(); ++i) lo[ints[i]] = hi[ints[i]] = leaf[i];
                for (const auto& u : slice.thermal) {
                    const double on = point.at(make_name("u", 1, 1, u.id));
                    const double p = sample == 0 ? u.p_max * on : u.p_max * on * frac(rng);
                    point[make_name("p", 1, 1, u.id)] = p;
                }
                for (const auto& v : vi) {
                    const double avail = v.unit_size * participation(slice, v, one) *
                                         (v.existing + point.at(make_name("x", v.id)));
                    point[make_name("p", 1, 1, v.id)] = sample == 0 ? avail : avail * frac(rng);
                }
                for (const auto& [name, value] : point) {
                    const int j = col(name);
                    lo[j] = hi[j] = value;
                }
                const auto eval = evaluate_inertia_point(slice, cfg, one, [&](const std::string& n) {
                    return point.at(n);
                });
                std::vector<double> expected = {eval.m_sg, eval.m_vi, eval.m};
                expected.insert(expected.end(), eval.thermal_gain.begin(), eval.thermal_gain.end());
                expected.insert(expected.end(), eval.vi_gain.begin(), eval.vi_gain.end());
                ++report.points;

                auto describe = [&]() {
                    std::ostringstream os;
                    os << "seed " << inst.seed << " step (" << st.rp << "," << st.k << ")";
                    for (const auto& [name, value] : point) os << ' ' << name << '=' << format_double(value);
                    return os.str();
                };
                const std::vector<double> zero(c.cost.size(), 0.0);
                const auto feas = solve_compiled(c, lo, hi, zero, 0.0);
                ++report.lps;
                const bool admissible = eval.rocof_ok && eval.within_cap;
                if (feas.status != LeafStatus::Optimal) {
                    if (admissible) report.mismatches.push_back(describe() + ": linear block infeasible");
                    continue;
                }
                if (!admissible) {
                    report.mismatches.push_back(describe() + ": linear block feasible past the RoCoF or cap limit");
                    continue;
                }
                for (std::size_t t = 0; t < targets.size(); ++t) {
                    for (double dir : {1.0, -1.0}) {
                        std::vector<double> cost(c.cost.size(), 0.0);
                        cost[targets[t].second] = dir;
                        const auto r = solve_compiled(c, lo, hi, cost, 0.0);
                        ++report.lps;
                        if (r.status != LeafStatus::Optimal) {
                            report.mismatches.push_back(describe() + ": extreme of " + targets[t].first + " not found");
                            continue;
                        }
                        const double err = std::abs(r.x[targets[t].second] - expected[t]);
                        report.max_error = std::max(report.max_error, err);
                        if (err > tol) {
                            report.mismatches.push_back(describe() + ": " + targets[t].first + " linear " +
                                                        format_double(r.x[targets[t].second]) + " vs nonlinear " +
                                                        format_double(expected[t]));
                        }
                    }
                }
            }
        }
    }
    return report;
}

}  // namespace lego

namespace lego {

bool objectives_agree(double a, double b, double rel_tol) {
    return std::abs(a - b) <= rel_tol * std::max(std::abs(a), std::abs(b)) + 1e-9;
}

int CampaignSummary::passed() const {
    return static_cast<int>(std::count_if(entries.begin(), entries.end(), [](const auto& e) { return e.pass; }));
}

namespace {

LeafSolver external_leaf_solver(const SolveOptions& options) {
    return [options](const ModelInstance& fixed) {
        SolverRequest req;
        req.model = &fixed;
        req.solver = options.solver;
        req.time_limit = options.time_limit;
        req.mip_gap = options.mip_gap;
        req.format = options.format;
        const auto sol = solve(req);
        LeafOutcome out;
        if (sol.status == SolveStatus::Optimal) {
            out.status = LeafStatus::Optimal;
            out.objective = sol.objective;
            out.values.insert(sol.values.begin(), sol.values.end());
        } else if (sol.status == SolveStatus::Unbounded) {
            out.status = LeafStatus::Unbounded;
        } else if (sol.status != SolveStatus::Infeasible) {
            throw OracleError("leaf solve ended with status " + std::string(to_string(sol.status)));
        }
        return out;
    };
}

}  // namespace

CampaignSummary run_oracle_campaign(int n, std::uint64_t seed, const std::vector<CaseKind>& kinds,
                                    const SolveOptions& options, double rel_tol) {
    CampaignSummary summary;
    for (int i = 0; i < n; ++i) {
        const std::uint64_t s = seed + static_cast<std::uint64_t>(i);
        const auto inst = random_tiny_instance(s, true);
        for (auto kind : kinds) {
            CampaignEntry e;
            e.seed = s;
            e.kind = kind;
            try {
                const auto spec = CaseSpec::for_kind(kind, inst.system);
                const auto model = assemble_case(spec, inst.system, inst.time);
                const bool ac = kind == CaseKind::RC || kind == CaseKind::LEGO;
                const auto oracle = ac ? brute_force_optimum(model, external_leaf_solver(options))
                                       : brute_force_optimum(model);
                e.oracle_feasible = oracle.feasible;
                e.oracle_objective = oracle.objective;
                e.leaves = oracle.leaves;

                SolverRequest req;
                req.model = &model;
                req.solver = options.solver;
                req.time_limit = options.time_limit;
                req.mip_gap = options.mip_gap;
                req.format = options.format;
                const auto sol = solve(req);
                e.solver_status = std::string(to_string(sol.status));
                e.solver_objective = sol.objective;
                if (oracle.feasible) {
                    e.pass = sol.status == SolveStatus::Optimal &&
                             objectives_agree(sol.objective, oracle.objective, rel_tol);
                    if (!e.pass) e.note = "objective mismatch";
                } else {
                    e.pass = sol.status == SolveStatus::Infeasible;
                    if (!e.pass) e.note = "oracle infeasible but solver " + e.solver_status;
                }
            } catch (const std::exception& ex) {
                e.note = ex.what();
            }
            summary.entries.push_back(std::move(e));
        }
    }
    return summary;
}

}  // namespace lego
