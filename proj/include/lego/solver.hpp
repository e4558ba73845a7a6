#pragma once

// External solver adapters. An adapter is an executable called as
//   adapter MODEL_FILE PARAMS_FILE SOLUTION_FILE
// PARAMS_FILE holds key=value lines (solver, time_limit, mip_gap, threads,
// feastol). The adapter writes "status <s>", "objective <v>" and then one
// "name value" line per variable. LEGO_SOLVER_BIN overrides the adapter path.

#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "lego/model.hpp"
#include "lego/model_io.hpp"
#include "lego/solution.hpp"

namespace lego {

class SolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct SolverRequest {
    const ModelInstance* model = nullptr;
    std::string solver = "scip";
    double time_limit = 0.0;  // seconds, 0: none
    double mip_gap = 1e-9;
    int threads = 1;
    double feastol = 1e-9;
    ModelFormat format = ModelFormat::Lp;
    /// Keeps model, params, solution and log here; a temporary directory
    /// that is removed afterwards when empty.
    std::filesystem::path work_dir;
};

/// Registers or replaces the adapter executable for a solver id.
void register_adapter(const std::string& solver, const std::filesystem::path& executable);
std::vector<std::string> registered_solvers();
/// Adapter path for a solver id; throws SolverError when none is registered.
std::filesystem::path adapter_for(const std::string& solver);

Solution solve(const SolverRequest& request);

/// Reads an adapter solution file. With a model, optimal/feasible results
/// must give every model variable a value and integral values are snapped
/// when within 1e-6 of an integer.
Solution read_solution_file(const std::filesystem::path& path, const ModelInstance* model = nullptr);
void write_solution_file(const std::filesystem::path& path, const Solution& solution);

enum class FixMode { Fix, LowerBound };

/// Copy of the model with bounds moved to the given values: Fix sets both
/// bounds, LowerBound raises only the lower bound. Values outside the
/// original bounds are an error.
ModelInstance fix_variables(const ModelInstance& model, const std::map<std::string, double>& values, FixMode mode);

}  // namespace lego
