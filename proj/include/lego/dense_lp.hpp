#pragma once

// Small dense LP solver (bounded-variable primal simplex, two phases) used
// by the validation oracles on enumerated tiny instances.

#include <vector>

#include "lego/model.hpp"

namespace lego {

struct DenseRow {
    std::vector<double> coef;  // one entry per column
    Sense sense = Sense::LessEqual;
    double rhs = 0.0;
};

struct DenseLp {
    std::vector<double> cost;
    std::vector<double> lower;
    std::vector<double> upper;
    std::vector<DenseRow> rows;

    int n_cols() const { return static_cast<int>(cost.size()); }
};

enum class LpStatus { Optimal, Infeasible, Unbounded, IterationLimit };

struct LpResult {
    LpStatus status = LpStatus::Infeasible;
    double objective = 0.0;
    std::vector<double> x;
};

/// Minimizes cost.x subject to the rows and column bounds.
LpResult solve_dense_lp(const DenseLp& lp);

}  // namespace lego
