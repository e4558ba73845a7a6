#include "lego/workflows.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

#include <json.hpp>

#include "lego/isf.hpp"
#include "lego/model_core.hpp"
#include "lego/solver.hpp"
#include "lego/text_io.hpp"

namespace lego {

std::string_view to_string(CaseKind k) {
    switch (k) {
        case CaseKind::BC: return "bc";
        case CaseKind::IC: return "ic";
        case CaseKind::RC: return "rc";
        case CaseKind::LEGO: return "lego";
    }
    return "bc";
}

CaseKind parse_case_kind(std::string_view text) {
    std::string t(text);
    for (auto& c : t) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (t == "bc") return CaseKind::BC;
    if (t == "ic") return CaseKind::IC;
    if (t == "rc") return CaseKind::RC;
    if (t == "lego") return CaseKind::LEGO;
    throw BuildError("unknown case kind '" + std::string(text) + "' (expected bc, ic, rc or lego)");
}

CaseSpec CaseSpec::for_kind(CaseKind kind, double kappa, const InertiaConfig& inertia) {
    CaseSpec s;
    s.kind = kind;
    s.kappa = kappa;
    s.dc = kind == CaseKind::BC || kind == CaseKind::IC;
    s.ac = !s.dc;
    s.inertia = kind == CaseKind::IC || kind == CaseKind::LEGO;
    s.inertia_config = inertia;
    return s;
}

CaseSpec CaseSpec::for_kind(CaseKind kind, const SystemData& system) {
    return for_kind(kind, system.kappa, InertiaConfig::from_settings(system.inertia));
}

void validate_case(const CaseSpec& s) {
    if (s.dc && s.ac) throw BuildError("case requests both the DC and the AC network block");
    if (!s.dc && !s.ac) throw BuildError("case requests no network block");
    const bool want_dc = s.kind == CaseKind::BC || s.kind == CaseKind::IC;
    const bool want_inertia = s.kind == CaseKind::IC || s.kind == CaseKind::LEGO;
    if (s.dc != want_dc) throw BuildError(std::string("case ") + std::string(to_string(s.kind)) + " has the wrong network block");
    if (s.inertia != want_inertia) {
        throw BuildError(std::string("case ") + std::string(to_string(s.kind)) +
                         (want_inertia ? " requires" : " excludes") + " the inertia block");
    }
    if (!(s.kappa >= 0.0 && s.kappa <= 1.0)) throw BuildError("kappa must lie in [0, 1]");
}

ModelInstance assemble_case(const CaseSpec& spec, const SystemData& system, const TemporalStructure& time) {
    validate_case(spec);
    ModelInstance m;
    build_general_bounds(system, time, m);
    build_thermal(system, time, m);
    build_storage(system, time, m);
    build_renewable_policy(system, time, m, spec.kappa, spec.enforce_clean_row);
    if (spec.dc) {
        build_dc_opf(system, time, m, compute_isf(system));
    } else {
        build_socp(system, time, m, spec.socp);
    }
    if (spec.inertia) build_inertia(system, time, m, spec.inertia_config);
    build_objective(system, time, m);
    return m;
}

double CostBreakdown::total() const {
    return startup + commitment + thermal_variable + renewable_om + storage_om + reserves + non_served + investment;
}

RunReport compute_metrics(const Solution& sol, const SystemData& s, const TemporalStructure& t, const CaseSpec& spec) {
    RunReport r;
    r.case_kind = std::string(to_string(spec.kind));
    r.kappa = spec.kappa;
    r.status = sol.status;
    r.objective = sol.objective;
    r.wall_seconds = sol.wall_seconds;
    r.ac = spec.ac;
    if (!has_values(sol.status)) return r;

    auto val = [&](const std::string& name) { return sol.value(name); };
    auto& c = r.cost;
    double thermal_energy = 0.0, demand_energy = 0.0;
    for (auto st : t.steps()) {
        const int rp = st.rp, k = st.k;
        const double w = t.weight(st);
        for (const auto& u : s.thermal) {
            double p = val(make_name("p", rp, k, u.id));
            c.startup += w * u.c_startup * val(make_name("y", rp, k, u.id));
            c.commitment += w * u.c_commit * val(make_name("u", rp, k, u.id));
            c.thermal_variable += w * u.c_var * p;
            c.reserves += w * u.c_var *
                          (s.reserve_up_cost * val(make_name("resup", rp, k, u.id)) +
                           s.reserve_down_cost * val(make_name("resdn", rp, k, u.id)));
            thermal_energy += w * p;
        }
        for (const auto& u : s.renewable) c.renewable_om += w * u.c_om * val(make_name("p", rp, k, u.id));
        for (const auto& u : s.storage) {
            c.storage_om += w * u.c_om * val(make_name("p", rp, k, u.id));
            c.reserves += w * u.c_om *
                          (s.reserve_up_cost * val(make_name("resup", rp, k, u.id)) +
                           s.reserve_down_cost * val(make_name("resdn", rp, k, u.id)));
        }
        for (const auto& b : s.buses) {
            double pns = val(make_name("pns", rp, k, b.id));
            c.non_served += w * s.ens_cost * pns;
            r.ens_total += w * pns;
        }
        demand_energy += w * s.demand_total(rp, k);
    }

    auto add_capacity = [&](const std::string& tech, const std::string& id, const std::string& bus, int existing,
                            double size, double cost_per_unit) {
        int built = static_cast<int>(std::lround(sol.value_or(make_name("x", id), 0.0)));
        c.investment += cost_per_unit * built;
        r.capacity.push_back({tech, id, bus, existing, built, size});
        return built;
    };
    for (const auto& u : s.thermal) add_capacity("thermal", u.id, u.bus, u.existing, u.p_max, u.c_inv * u.p_max);
    for (const auto& u : s.renewable) {
        add_capacity("renewable", u.id, u.bus, u.existing, u.unit_size, u.c_inv * u.unit_size);
    }
    for (const auto& u : s.storage) add_capacity("storage", u.id, u.bus, u.existing, u.unit_size, u.c_inv * u.unit_size);
    if (spec.ac) {
        for (const auto& f : s.facts) r.facts_built += add_capacity("facts", f.id, f.bus, 0, f.q_max, f.c_inv * f.q_max);
    }

    r.clean_share = demand_energy > 0.0 ? 1.0 - thermal_energy / demand_energy : 1.0;
    r.clean_target_met = r.clean_share >= spec.kappa - 1e-6;

    r.inertia = evaluate_inertia(sol, s, t, spec.inertia_config);
    double wsum = 0.0, msum = 0.0;
    for (const auto& p : r.inertia) {
        double w = t.weight({p.rp, p.k});
        wsum += w;
        msum += w * p.m;
    }
    r.average_inertia = wsum > 0.0 ? msum / wsum : 0.0;

    if (spec.ac) {
        r.cones = cone_residual(sol, s, t);
        r.voltages = recover_voltages(sol, s, t, 1e-6);
        for (auto st : t.steps()) {
            const double w = t.weight(st);
            auto q = [&](const std::string& id) { return w * val(make_name("q", st.rp, st.k, id)); };
            for (const auto& u : s.thermal) r.reactive_by_technology["thermal"] += q(u.id);
            for (const auto& u : s.renewable) r.reactive_by_technology["renewable"] += q(u.id);
            for (const auto& u : s.storage) r.reactive_by_technology["storage"] += q(u.id);
            for (const auto& f : s.facts) r.reactive_by_technology["facts"] += q(f.id);
        }
    }
    return r;
}

std::map<std::string, double> investment_values(const Solution& sol, const SystemData& s) {
    std::map<std::string, double> out;
    auto take = [&](const std::string& id) { out[make_name("x", id)] = sol.value(make_name("x", id)); };
    for (const auto& u : s.thermal) take(u.id);
    for (const auto& u : s.renewable) take(u.id);
    for (const auto& u : s.storage) take(u.id);
    return out;
}

namespace {

CaseRun solve_model(ModelInstance model, const CaseSpec& spec, const SystemData& s, const TemporalStructure& t,
                    const SolveOptions& opt) {
    CaseRun run{std::move(model), {}, {}};
    SolverRequest req;
    req.model = &run.model;
    req.solver = opt.solver;
    req.time_limit = opt.time_limit;
    req.mip_gap = opt.mip_gap;
    req.format = opt.format;
    req.work_dir = opt.work_dir;
    run.solution = solve(req);
    run.report = compute_metrics(run.solution, s, t, spec);
    return run;
}

}  // namespace

CaseRun run_case(const CaseSpec& spec, const SystemData& system, const TemporalStructure& time,
                 const SolveOptions& opt) {
    return solve_model(assemble_case(spec, system, time), spec, system, time, opt);
}

CaseRun run_ex_post_inertia(const Solution& base, ExPostMode mode, const SystemData& s, const TemporalStructure& t,
                            const InertiaConfig& config, const SolveOptions& opt, bool enforce_clean_row) {
    if (!has_values(base.status)) throw BuildError("base run has no solution to start from");
    auto spec = CaseSpec::for_kind(CaseKind::IC, s.kappa, config);
    spec.enforce_clean_row = mode == ExPostMode::AddInvestments || enforce_clean_row;
    auto model = assemble_case(spec, s, t);
    model = fix_variables(model, investment_values(base, s),
                          mode == ExPostMode::OpsOnly ? FixMode::Fix : FixMode::LowerBound);
    auto run = solve_model(std::move(model), spec, s, t, opt);
    run.report.mode = mode == ExPostMode::OpsOnly ? "ops-only" : "add-investments";
    run.report.base_objective = base.objective;
    return run;
}

CaseRun run_ex_post_ac(const Solution& base, const SystemData& s, const TemporalStructure& t, const SolveOptions& opt,
                       bool allow_facts) {
    if (!has_values(base.status)) throw BuildError("base run has no solution to start from");
    auto spec = CaseSpec::for_kind(CaseKind::RC, s);
    auto model = assemble_case(spec, s, t);
    model = fix_variables(model, investment_values(base, s), FixMode::LowerBound);
    if (!allow_facts) {
        std::map<std::string, double> none;
        for (const auto& f : s.facts) none[make_name("x", f.id)] = 0.0;
        model = fix_variables(model, none, FixMode::Fix);
    }
    auto run = solve_model(std::move(model), spec, s, t, opt);
    run.report.mode = "ex-post-ac";
    run.report.base_objective = base.objective;
    return run;
}

void write_report(const std::filesystem::path& dir, const RunReport& r) {
    std::filesystem::create_directories(dir);
    using nlohmann::json;
    json j;
    j["format_version"] = 1;
    j["case"] = r.case_kind;
    j["mode"] = r.mode;
    j["kappa"] = r.kappa;
    j["status"] = std::string(to_string(r.status));
    if (has_values(r.status)) {
        j["objective"] = r.objective;
        j["cost"] = {{"startup", r.cost.startup},
                     {"commitment", r.cost.commitment},
                     {"thermal_variable", r.cost.thermal_variable},
                     {"renewable_om", r.cost.renewable_om},
                     {"storage_om", r.cost.storage_om},
                     {"reserves", r.cost.reserves},
                     {"non_served", r.cost.non_served},
                     {"investment", r.cost.investment},
                     {"total", r.cost.total()}};
        j["clean_share"] = r.clean_share;
        j["clean_target_met"] = r.clean_target_met;
        j["ens_total_gwh"] = r.ens_total;
        j["average_inertia_s"] = r.average_inertia;
        j["facts_built"] = r.facts_built;
        std::map<std::string, double> by_tech;
        for (const auto& c : r.capacity) by_tech[c.technology] += c.total();
        j["capacity_by_technology"] = by_tech;
        if (r.ac) {
            double worst = 0.0;
            for (const auto& c : r.cones) worst = std::max(worst, c.residual);
            j["max_cone_residual"] = worst;
            j["reactive_by_technology"] = r.reactive_by_technology;
        }
    }
    if (r.base_objective) {
        j["base_objective"] = *r.base_objective;
        if (has_values(r.status)) j["cost_delta"] = r.objective - *r.base_objective;
    }
    write_text_file(dir / "report.json", j.dump(2) + "\n");

    std::ostringstream cap;
    cap << "technology,unit,bus,existing,built,unit_size,total\n";
    for (const auto& c : r.capacity) {
        cap << c.technology << ',' << c.unit << ',' << c.bus << ',' << c.existing << ',' << c.built << ','
            << format_double(c.unit_size) << ',' << format_double(c.total()) << '\n';
    }
    write_text_file(dir / "capacity.csv", cap.str());

    std::ostringstream in;
    in << "rp,k,M_SG,M_VI,M,rocof_ok\n";
    for (const auto& p : r.inertia) {
        in << p.rp << ',' << p.k << ',' << format_double(p.m_sg) << ',' << format_double(p.m_vi) << ','
           << format_double(p.m) << ',' << (p.rocof_ok ? 1 : 0) << '\n';
    }
    write_text_file(dir / "inertia.csv", in.str());

    if (r.ac) {
        std::ostringstream cone;
        cone << "rp,k,line,residual\n";
        for (const auto& c : r.cones) {
            cone << c.rp << ',' << c.k << ',' << c.line << ',' << format_double(c.residual) << '\n';
        }
        write_text_file(dir / "cone.csv", cone.str());
        std::ostringstream volt;
        volt << "rp,k,bus,Vmag\n";
        for (const auto& v : r.voltages.voltages) {
            volt << v.rp << ',' << v.k << ',' << v.bus << ',' << format_double(v.magnitude) << '\n';
        }
        write_text_file(dir / "voltages.csv", volt.str());
        std::ostringstream react;
        react << "technology,weighted_gvarh\n";
        for (const auto& [tech, q] : r.reactive_by_technology) react << tech << ',' << format_double(q) << '\n';
        write_text_file(dir / "reactive.csv", react.str());
    }
    write_text_file(dir / "timing.txt", "solve_wall_seconds " + format_double(r.wall_seconds) + "\n");
}

}  // namespace lego
