#include "lego/solver.hpp"

#include <sys/wait.h>
#include <fcntl.h>
#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <sstream>

#include "lego/text_io.hpp"

#ifndef LEGO_DEFAULT_ADAPTER
#define LEGO_DEFAULT_ADAPTER "lego_solver_adapter.py"
#endif

namespace lego {

std::string_view to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::Optimal: return "optimal";
        case SolveStatus::Feasible: return "feasible";
        case SolveStatus::Infeasible: return "infeasible";
        case SolveStatus::Unbounded: return "unbounded";
        case SolveStatus::Limit: return "limit";
    }
    return "limit";
}

SolveStatus parse_status(std::string_view t) {
    if (t == "optimal") return SolveStatus::Optimal;
    if (t == "feasible") return SolveStatus::Feasible;
    if (t == "infeasible") return SolveStatus::Infeasible;
    if (t == "unbounded") return SolveStatus::Unbounded;
    if (t == "limit") return SolveStatus::Limit;
    throw SolverError("unknown solve status '" + std::string(t) + "'");
}

namespace {

std::mutex registry_mutex;

std::map<std::string, std::filesystem::path>& registry() {
    static std::map<std::string, std::filesystem::path> adapters = {
        {"scip", LEGO_DEFAULT_ADAPTER},
        {"highs", LEGO_DEFAULT_ADAPTER},
    };
    return adapters;
}

std::string tail_of(const std::filesystem::path& log, std::size_t max_lines = 20) {
    std::ifstream in(log);
    std::vector<std::string> lines;
    for (std::string line; std::getline(in, line);) lines.push_back(line);
    std::string out;
    std::size_t start = lines.size() > max_lines ? lines.size() - max_lines : 0;
    for (std::size_t i = start; i < lines.size(); ++i) out += lines[i] + "\n";
    return out;
}

int run_process(const std::filesystem::path& exe, const std::vector<std::string>& args,
                const std::filesystem::path& log) {
    std::vector<std::string> argv_store{exe.string()};
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& a : argv_store) argv.push_back(a.data());
    argv.push_back(nullptr);

    pid_t pid = fork();
    if (pid < 0) throw SolverError("fork failed");
    if (pid == 0) {
        int fd = open(log.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
        if (fd >= 0) {
            dup2(fd, STDOUT_FILENO);
            dup2(fd, STDERR_FILENO);
            close(fd);
        }
        execvp(argv[0], argv.data());
        dprintf(STDERR_FILENO, "cannot execute %s\n", argv[0]);
        _exit(127);
    }
    int status = 0;
    while (waitpid(pid, &status, 0) < 0) {
        if (errno != EINTR) throw SolverError("waitpid failed");
    }
    if (WIFEXITED(status)) return WEXITSTATUS(status);
    return 128 + (WIFSIGNALED(status) ? WTERMSIG(status) : 0);
}

struct WorkDir {
    std::filesystem::path path;
    bool owned = false;

    explicit WorkDir(const std::filesystem::path& requested) {
        if (!requested.empty()) {
            std::filesystem::create_directories(requested);
            path = requested;
            return;
        }
        std::string tmpl = (std::filesystem::temp_directory_path() / "lego-solve-XXXXXX").string();
        if (!mkdtemp(tmpl.data())) throw SolverError("cannot create a temporary directory");
        path = tmpl;
        owned = true;
    }
    ~WorkDir() {
        if (owned) {
            std::error_code ec;
            std::filesystem::remove_all(path, ec);
        }
    }
    WorkDir(const WorkDir&) = delete;
    WorkDir& operator=(const WorkDir&) = delete;
};

}  // namespace

void register_adapter(const std::string& solver, const std::filesystem::path& exe) {
    std::lock_guard lock(registry_mutex);
    registry()[solver] = exe;
}

std::vector<std::string> registered_solvers() {
    std::lock_guard lock(registry_mutex);
    std::vector<std::string> out;
    for (const auto& [id, path] : registry()) out.push_back(id);
    return out;
}

std::filesystem::path adapter_for(const std::string& solver) {
    std::filesystem::path path;
    {
        std::lock_guard lock(registry_mutex);
        auto it = registry().find(solver);
        if (it == registry().end()) throw SolverError("no adapter registered for solver '" + solver + "'");
        path = it->second;
    }
    if (const char* env = std::getenv("LEGO_SOLVER_BIN"); env && *env) path = env;
    return path;
}

Solution read_solution_file(const std::filesystem::path& path, const ModelInstance* model) {
    std::ifstream in(path);
    if (!in) throw SolverError("solver produced no solution file " + path.string());
    Solution sol;
    std::string line;
    bool have_status = false;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string key, value;
        ls >> key >> value;
        if (key.empty() || value.empty()) throw SolverError("malformed solution line: " + line);
        if (key == "status") {
            sol.status = parse_status(value);
            have_status = true;
        } else if (key == "objective") {
            sol.objective = parse_double(value);
        } else {
            sol.values[key] = parse_double(value);
        }
    }
    if (!have_status) throw SolverError("solution file has no status line");
    if (!has_values(sol.status)) {
        sol.values.clear();
        return sol;
    }
    if (!model) return sol;
    for (const auto& v : model->variables()) {
        auto it = sol.values.find(v.name);
        if (it == sol.values.end()) throw SolverError("solution misses variable " + v.name);
        if (v.is_integral()) {
            double r = std::round(it->second);
            if (std::abs(r - it->second) > 1e-6) {
                throw SolverError("integral variable " + v.name + " has fractional value " + format_double(it->second));
            }
            it->second = r;
        }
    }
    return sol;
}

void write_solution_file(const std::filesystem::path& path, const Solution& sol) {
    std::ostringstream out;
    out << "status " << to_string(sol.status) << "\n";
    out << "objective " << format_double(sol.objective) << "\n";
    for (const auto& [name, v] : sol.values) out << name << ' ' << format_double(v) << '\n';
    write_text_file(path, out.str());
}

Solution solve(const SolverRequest& req) {
    if (!req.model) throw SolverError("solve request without a model");
    if (req.mip_gap < 0.0) throw SolverError("mip gap must be >= 0");
    const auto adapter = adapter_for(req.solver);
    WorkDir dir(req.work_dir);
    const auto model_file = dir.path / (std::string("model") + std::string(file_extension(req.format)));
    const auto params_file = dir.path / "params.txt";
    const auto solution_file = dir.path / "solution.txt";
    const auto log_file = dir.path / "solver.log";
    std::filesystem::remove(solution_file);

    write_text_file(model_file, emit(*req.model, req.format));
    std::ostringstream params;
    params << "solver=" << req.solver << "\n"
           << "time_limit=" << format_double(req.time_limit) << "\n"
           << "mip_gap=" << format_double(req.mip_gap) << "\n"
           << "threads=" << req.threads << "\n"
           << "feastol=" << format_double(req.feastol) << "\n";
    write_text_file(params_file, params.str());

    auto start = std::chrono::steady_clock::now();
    int code = run_process(adapter, {model_file.string(), params_file.string(), solution_file.string()}, log_file);
    double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::string tail = tail_of(log_file);
    if (code != 0) {
        throw SolverError("solver adapter " + adapter.string() + " exited with code " + std::to_string(code) +
                          "; log tail:\n" + tail);
    }
    Solution sol;
    try {
        sol = read_solution_file(solution_file, req.model);
    } catch (const SolverError& e) {
        throw SolverError(std::string(e.what()) + "; log tail:\n" + tail);
    }
    sol.wall_seconds = wall;
    sol.log_tail = std::move(tail);
    return sol;
}

ModelInstance fix_variables(const ModelInstance& model, const std::map<std::string, double>& values, FixMode mode) {
    ModelInstance out = model;
    for (const auto& [name, value] : values) {
        VarId id = out.at(name);
        auto& v = out.var_mut(id);
        const auto& orig = model.var(id);
        if (value < orig.lower - 1e-9 || value > orig.upper + 1e-9) {
            throw ModelError("value " + format_double(value) + " for " + name + " lies outside its bounds [" +
                             format_double(orig.lower) + ", " + format_double(orig.upper) + "]");
        }
        double x = v.is_integral() ? std::round(value) : value;
        x = std::clamp(x, orig.lower, orig.upper);
        if (mode == FixMode::Fix) {
            v.lower = v.upper = x;
        } else {
            v.lower = x;
        }
    }
    return out;
}

}  // namespace lego
