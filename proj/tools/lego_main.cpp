// lego: assemble, solve and report generation-expansion planning cases.
//
//   lego run --data DIR --case bc|ic|rc|lego [--kappa K] --out DIR
//   lego expost inertia --mode ops-only|add-investments --base DIR --out DIR
//   lego expost ac --base DIR --out DIR
//   lego validate DIR
//   lego oracle --n 50 --seed 7
//
// Exit codes: 0 optimal or feasible, 2 infeasible, 3 other solver outcome,
// 1 error. LEGO_SOLVER_BIN overrides the solver adapter executable.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "lego/model_io.hpp"
#include "lego/oracle.hpp"
#include "lego/solver.hpp"
#include "lego/system_data.hpp"
#include "lego/temporal.hpp"
#include "lego/text_io.hpp"
#include "lego/workflows.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace lego;

namespace {

struct SolverFlags {
    std::string solver = "scip";
    double time_limit = 0.0;
    double mip_gap = 1e-9;
    std::string format = "lp";

    SolveOptions options(const fs::path& work_dir) const {
        SolveOptions o;
        o.solver = solver;
        o.time_limit = time_limit;
        o.mip_gap = mip_gap;
        o.format = format == "mps" ? ModelFormat::Mps : ModelFormat::Lp;
        o.work_dir = work_dir;
        return o;
    }
    json to_json() const {
        return {{"solver", solver}, {"time_limit", time_limit}, {"mip_gap", mip_gap}, {"format", format}};
    }
    static SolverFlags from_json(const json& j) {
        SolverFlags f;
        f.solver = j.at("solver").get<std::string>();
        f.time_limit = j.at("time_limit").get<double>();
        f.mip_gap = j.at("mip_gap").get<double>();
        f.format = j.at("format").get<std::string>();
        return f;
    }
};

void add_solver_flags(CLI::App* app, SolverFlags& f) {
    app->add_option("--solver", f.solver, "solver id")->capture_default_str();
    app->add_option("--time-limit", f.time_limit, "solver time limit in seconds, 0 for none")->capture_default_str();
    app->add_option("--mip-gap", f.mip_gap, "relative MIP gap")->capture_default_str();
    app->add_option("--format", f.format, "model file format")
        ->check(CLI::IsMember({"lp", "mps"}))
        ->capture_default_str();
}

json inertia_json(const InertiaConfig& c) {
    return {{"f_base_hz", c.f_base},
            {"rocof_limit_hz_s", c.rocof_limit},
            {"inertia_cap_s", c.inertia_cap},
            {"disturbance", c.disturbance},
            {"vi_numerator", c.numerator == ViNumerator::OwnOutput ? "own" : "thermal"}};
}

InertiaConfig inertia_from_json(const json& j) {
    InertiaConfig c;
    c.f_base = j.at("f_base_hz").get<double>();
    c.rocof_limit = j.at("rocof_limit_hz_s").get<double>();
    c.inertia_cap = j.at("inertia_cap_s").get<double>();
    c.disturbance = j.at("disturbance").get<double>();
    c.numerator = j.at("vi_numerator").get<std::string>() == "own" ? ViNumerator::OwnOutput
                                                                   : ViNumerator::ThermalOutput;
    return c;
}

void write_json(const fs::path& path, const json& j) { write_text_file(path, j.dump(2) + "\n"); }

int exit_code(SolveStatus s) {
    switch (s) {
        case SolveStatus::Optimal:
        case SolveStatus::Feasible: return 0;
        case SolveStatus::Infeasible: return 2;
        default: return 3;
    }
}

struct Loaded {
    SystemData system;
    TemporalStructure time;
};

Loaded load(const fs::path& data) {
    Loaded l;
    l.system = load_system(data);
    l.time = load_temporal(data, l.system.n_rep_periods, l.system.steps_per_rp, l.system.moving_window);
    return l;
}

void finish_run(const fs::path& out, CaseRun& run) {
    write_solution_file(out / "solution.txt", run.solution);
    run.report.wall_seconds = run.solution.wall_seconds;
    write_report(out, run.report);
    std::cout << "status " << to_string(run.solution.status);
    if (has_values(run.solution.status)) std::cout << ", objective " << format_double(run.solution.objective);
    std::cout << ", report in " << out.string() << "\n";
}

struct RunFlags {
    std::string data;
    std::string kind = "bc";
    std::optional<double> kappa;
    std::optional<double> disturbance;
    std::string numerator = "own";
    bool apparent_circle = false;
    bool emit_only = false;
    std::string out;
    SolverFlags solver;
};

int cmd_run(const RunFlags& f) {
    const fs::path data = fs::weakly_canonical(f.data);
    auto [system, time] = load(data);
    auto spec = CaseSpec::for_kind(parse_case_kind(f.kind), system);
    if (f.kappa) spec.kappa = *f.kappa;
    if (f.disturbance) spec.inertia_config.disturbance = *f.disturbance;
    spec.inertia_config.numerator = f.numerator == "own" ? ViNumerator::OwnOutput : ViNumerator::ThermalOutput;
    spec.socp.apparent_power_circle = f.apparent_circle;
    validate_case(spec);
    if (spec.inertia) spec.inertia_config.validate();

    const fs::path out = f.out;
    fs::create_directories(out);
    json echo = {{"command", "run"},
                 {"dataset", data.string()},
                 {"case", std::string(to_string(spec.kind))},
                 {"kappa", spec.kappa},
                 {"dc", spec.dc},
                 {"ac", spec.ac},
                 {"inertia", spec.inertia},
                 {"enforce_clean_row", spec.enforce_clean_row},
                 {"inertia_settings", inertia_json(spec.inertia_config)},
                 {"apparent_power_circle", spec.socp.apparent_power_circle},
                 {"rep_periods", system.n_rep_periods},
                 {"steps_per_rp", system.steps_per_rp},
                 {"moving_window", time.moving_window()},
                 {"emit_only", f.emit_only},
                 {"solver", f.solver.to_json()}};
    write_json(out / "spec.json", echo);

    if (f.emit_only) {
        const auto opt = f.solver.options(out);
        const auto model = assemble_case(spec, system, time);
        const auto file = out / (std::string("model") + std::string(file_extension(opt.format)));
        write_text_file(file, emit(model, opt.format));
        std::cout << "model written to " << file.string() << " (" << model.variables().size() << " variables, "
                  << model.rows().size() + model.quad_rows().size() << " rows)\n";
        return 0;
    }
    auto run = run_case(spec, system, time, f.solver.options(out));
    finish_run(out, run);
    return exit_code(run.solution.status);
}

struct ExpostFlags {
    std::string base;
    std::string out;
    std::string mode = "ops-only";
    bool enforce_clean = false;
    bool no_facts = false;
    std::optional<double> disturbance;
};

struct BaseRun {
    json spec;
    Loaded data;
    Solution solution;
    SolverFlags solver;
};

BaseRun load_base(const fs::path& base) {
    BaseRun b;
    const auto spec_file = base / "spec.json";
    if (!fs::exists(spec_file)) throw std::runtime_error("base run has no spec.json: " + base.string());
    b.spec = json::parse(read_text_file(spec_file));
    const auto sol_file = base / "solution.txt";
    if (!fs::exists(sol_file)) throw std::runtime_error("base run has no solution: " + sol_file.string());
    b.solution = read_solution_file(sol_file, nullptr);
    if (!has_values(b.solution.status)) {
        throw std::runtime_error("base run ended " + std::string(to_string(b.solution.status)) +
                                 " and has no solution to start from");
    }
    b.data = load(b.spec.at("dataset").get<std::string>());
    b.data.system.kappa = b.spec.at("kappa").get<double>();
    b.solver = SolverFlags::from_json(b.spec.at("solver"));
    return b;
}

int cmd_expost_inertia(const ExpostFlags& f) {
    const fs::path base = f.base;
    auto b = load_base(base);
    auto config = inertia_from_json(b.spec.at("inertia_settings"));
    if (f.disturbance) config.disturbance = *f.disturbance;
    const auto mode = f.mode == "ops-only" ? ExPostMode::OpsOnly : ExPostMode::AddInvestments;
    const fs::path out = f.out;
    fs::create_directories(out);
    write_json(out / "spec.json", {{"command", "expost inertia"},
                                   {"base", fs::weakly_canonical(base).string()},
                                   {"dataset", b.spec.at("dataset")},
                                   {"mode", f.mode},
                                   {"kappa", b.data.system.kappa},
                                   {"enforce_clean_row", mode == ExPostMode::AddInvestments || f.enforce_clean},
                                   {"inertia_settings", inertia_json(config)},
                                   {"solver", b.solver.to_json()}});
    auto run = run_ex_post_inertia(b.solution, mode, b.data.system, b.data.time, config, b.solver.options(out),
                                   f.enforce_clean);
    finish_run(out, run);
    return exit_code(run.solution.status);
}

int cmd_expost_ac(const ExpostFlags& f) {
    const fs::path base = f.base;
    auto b = load_base(base);
    const fs::path out = f.out;
    fs::create_directories(out);
    write_json(out / "spec.json", {{"command", "expost ac"},
                                   {"base", fs::weakly_canonical(base).string()},
                                   {"dataset", b.spec.at("dataset")},
                                   {"kappa", b.data.system.kappa},
                                   {"allow_facts", !f.no_facts},
                                   {"solver", b.solver.to_json()}});
    auto run = run_ex_post_ac(b.solution, b.data.system, b.data.time, b.solver.options(out), !f.no_facts);
    finish_run(out, run);
    return exit_code(run.solution.status);
}

int cmd_validate(const std::string& dir) {
    auto [system, time] = load(dir);
    std::cout << "OK, " << system.buses.size() << " buses, " << system.lines.size() << " lines\n";
    return 0;
}

struct OracleFlags {
    int n = 50;
    std::uint64_t seed = 7;
    std::string kinds = "bc,ic";
    bool linearization = true;
    SolverFlags solver;
};

int cmd_oracle(const OracleFlags& f) {
    std::vector<CaseKind> kinds;
    std::stringstream ss(f.kinds);
    for (std::string k; std::getline(ss, k, ',');) kinds.push_back(parse_case_kind(k));
    bool ok = true;
    if (f.linearization) {
        int pass = 0;
        for (int i = 0; i < f.n; ++i) {
            const auto inst = random_tiny_instance(f.seed + static_cast<std::uint64_t>(i), true);
            const auto rep = check_linearization(inst, InertiaConfig::from_settings(inst.system.inertia));
            if (rep.ok()) {
                ++pass;
            } else {
                std::cout << "linearization seed " << inst.seed << ": " << rep.mismatches.front() << "\n";
            }
        }
        std::cout << "linearization " << pass << "/" << f.n << " pass\n";
        ok = ok && pass == f.n;
    }
    const auto summary = run_oracle_campaign(f.n, f.seed, kinds, f.solver.options({}));
    for (auto kind : kinds) {
        int pass = 0, total = 0;
        for (const auto& e : summary.entries) {
            if (e.kind != kind) continue;
            ++total;
            pass += e.pass ? 1 : 0;
            if (!e.pass) {
                std::cout << to_string(kind) << " seed " << e.seed << ": " << e.note << " (oracle "
                          << (e.oracle_feasible ? format_double(e.oracle_objective) : "infeasible") << ", solver "
                          << e.solver_status << " " << format_double(e.solver_objective) << ")\n";
            }
        }
        std::cout << to_string(kind) << " " << pass << "/" << total << " pass\n";
        ok = ok && pass == total;
    }
    return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Generation-expansion planning model compiler and workflow runner"};
    app.require_subcommand(1);

    RunFlags run;
    auto* run_cmd = app.add_subcommand("run", "assemble and solve a case");
    run_cmd->add_option("--data", run.data, "dataset directory")->required()->check(CLI::ExistingDirectory);
    run_cmd->add_option("--case", run.kind, "case kind")
        ->check(CLI::IsMember({"bc", "ic", "rc", "lego"}, CLI::ignore_case))
        ->capture_default_str();
    run_cmd->add_option("--kappa", run.kappa, "clean-production share in [0, 1] (default: dataset value)");
    run_cmd->add_option("--disturbance", run.disturbance, "RoCoF disturbance for every step (default: dataset)");
    run_cmd->add_option("--vi-numerator", run.numerator, "VI gain numerator")
        ->check(CLI::IsMember({"own", "thermal"}))
        ->capture_default_str();
    run_cmd->add_flag("--apparent-circle", run.apparent_circle, "add apparent-power circles to the AC block");
    run_cmd->add_flag("--emit-only", run.emit_only, "write the model file without solving");
    run_cmd->add_option("--out", run.out, "run directory")->required();
    add_solver_flags(run_cmd, run.solver);

    auto* expost_cmd = app.add_subcommand("expost", "re-run a base solution under stricter physics");
    expost_cmd->require_subcommand(1);
    ExpostFlags ex;
    auto* inertia_cmd = expost_cmd->add_subcommand("inertia", "add the inertia block to a DC base run");
    inertia_cmd->add_option("--mode", ex.mode, "fix investments or allow additions")
        ->check(CLI::IsMember({"ops-only", "add-investments"}))
        ->capture_default_str();
    inertia_cmd->add_option("--base", ex.base, "base run directory")->required()->check(CLI::ExistingDirectory);
    inertia_cmd->add_option("--out", ex.out, "output directory")->required();
    inertia_cmd->add_flag("--enforce-clean", ex.enforce_clean, "enforce the clean-production row in ops-only mode");
    inertia_cmd->add_option("--disturbance", ex.disturbance, "RoCoF disturbance override");
    auto* ac_cmd = expost_cmd->add_subcommand("ac", "re-run a DC base run with the AC relaxation");
    ac_cmd->add_option("--base", ex.base, "base run directory")->required()->check(CLI::ExistingDirectory);
    ac_cmd->add_option("--out", ex.out, "output directory")->required();
    ac_cmd->add_flag("--no-facts", ex.no_facts, "forbid FACTS investments");

    std::string validate_dir;
    auto* validate_cmd = app.add_subcommand("validate", "check a dataset");
    validate_cmd->add_option("dataset", validate_dir, "dataset directory")->required();

    OracleFlags oracle;
    auto* oracle_cmd = app.add_subcommand("oracle", "compare solver optima with brute-force enumeration");
    oracle_cmd->add_option("--n", oracle.n, "instances per case kind")->capture_default_str();
    oracle_cmd->add_option("--seed", oracle.seed, "first instance seed")->capture_default_str();
    oracle_cmd->add_option("--kinds", oracle.kinds, "comma-separated case kinds")->capture_default_str();
    oracle_cmd->add_flag("!--no-linearization", oracle.linearization, "skip the linearization check");
    add_solver_flags(oracle_cmd, oracle.solver);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run_cmd) return cmd_run(run);
        if (*inertia_cmd) return cmd_expost_inertia(ex);
        if (*ac_cmd) return cmd_expost_ac(ex);
        if (*validate_cmd) return cmd_validate(validate_dir);
        if (*oracle_cmd) return cmd_oracle(oracle);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
