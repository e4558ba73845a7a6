#include "lego/dense_lp.hpp"

#include <algorithm>
#include <cmath>

namespace lego {

namespace {

constexpr double kPivotTol = 1e-9;
constexpr double kCostTol = 1e-9;

class Tableau {
public:
    explicit Tableau(const DenseLp& lp) : n_(lp.n_cols()), m_(static_cast<int>(lp.rows.size())) {
        const int n = n_, m = m_;
        lo_.assign(lp.lower.begin(), lp.lower.end());
        up_.assign(lp.upper.begin(), lp.upper.end());
        for (const auto& r : lp.rows) {
            lo_.push_back(r.sense == Sense::GreaterEqual ? -kInf : 0.0);
            up_.push_back(r.sense == Sense::LessEqual ? kInf : 0.0);
        }
        x_.assign(static_cast<std::size_t>(n + m), 0.0);
        for (int j = 0; j < n; ++j) {
            x_[j] = std::isfinite(lo_[j]) ? lo_[j] : (std::isfinite(up_[j]) ? up_[j] : 0.0);
        }
        std::vector<double> resid(static_cast<std::size_t>(m));
        std::vector<int> art_sign(static_cast<std::size_t>(m), 0);
        int n_art = 0;
        for (int i = 0; i < m; ++i) {
            const auto& r = lp.rows[static_cast<std::size_t>(i)];
            double act = 0.0;
            for (int j = 0; j < n; ++j) act += r.coef[static_cast<std::size_t>(j)] * x_[j];
            resid[i] = r.rhs - act;
            const int s = n + i;
            if (resid[i] < lo_[s] || resid[i] > up_[s]) {
                art_sign[i] = resid[i] >= 0.0 ? 1 : -1;
                ++n_art;
            }
        }
        cols_ = n + m + n_art;
        t_.assign(static_cast<std::size_t>(m) * cols_, 0.0);
        basis_.assign(static_cast<std::size_t>(m), -1);
        is_basic_.assign(static_cast<std::size_t>(cols_), 0);
        int next_art = n + m;
        for (int i = 0; i < m; ++i) {
            const auto& r = lp.rows[static_cast<std::size_t>(i)];
            double* row = &t_[static_cast<std::size_t>(i) * cols_];
            const double sg = art_sign[i] == 0 ? 1.0 : art_sign[i];
            for (int j = 0; j < n; ++j) row[j] = sg * r.coef[static_cast<std::size_t>(j)];
            row[n + i] = sg;
            if (art_sign[i] == 0) {
                basis_[i] = n + i;
                x_[n + i] = resid[i];
            } else {
                row[next_art] = 1.0;
                lo_.push_back(0.0);
                up_.push_back(kInf);
                x_.push_back(std::abs(resid[i]));
                basis_[i] = next_art++;
            }
            is_basic_[basis_[i]] = 1;
        }
        first_art_ = n + m;
    }

    bool has_artificials() const { return cols_ > first_art_; }

    LpStatus run(const std::vector<double>& cost) {
        cost_ = cost;
        d_.assign(static_cast<std::size_t>(cols_), 0.0);
        for (int j = 0; j < cols_; ++j) {
            if (is_basic_[j]) continue;
            double v = cost_[j];
            for (int i = 0; i < m_; ++i) v -= cost_[basis_[i]] * at(i, j);
            d_[j] = v;
        }
        const long max_iter = 200L * (m_ + cols_) + 1000;
        int degenerate = 0;
        bool bland = false;
        for (long it = 0; it < max_iter; ++it) {
            int enter = -1;
            int dir = 0;
            double best = 0.0;
            for (int j = 0; j < cols_; ++j) {
                if (is_basic_[j] || lo_[j] == up_[j]) continue;
                int dj = 0;
                const bool at_lo = std::isfinite(lo_[j]) && x_[j] <= lo_[j];
                const bool at_up = std::isfinite(up_[j]) && x_[j] >= up_[j];
                if (d_[j] < -kCostTol && !at_up) dj = 1;
                if (d_[j] > kCostTol && !at_lo) dj = -1;
                if (dj == 0) continue;
                if (bland) {
                    enter = j;
                    dir = dj;
                    break;
                }
                if (std::abs(d_[j]) > best) {
                    best = std::abs(d_[j]);
                    enter = j;
                    dir = dj;
                }
            }
            if (enter < 0) return LpStatus::Optimal;

            double step = std::isfinite(lo_[enter]) && std::isfinite(up_[enter]) ? up_[enter] - lo_[enter] : kInf;
            int leave = -1;
            double leave_alpha = 0.0;
            for (int i = 0; i < m_; ++i) {
                const double alpha = at(i, enter) * dir;
                const int b = basis_[i];
                double ti;
                if (alpha > kPivotTol && std::isfinite(lo_[b])) {
                    ti = (x_[b] - lo_[b]) / alpha;
                } else if (alpha < -kPivotTol && std::isfinite(up_[b])) {
                    ti = (up_[b] - x_[b]) / -alpha;
                } else {
                    continue;
                }
                ti = std::max(ti, 0.0);
                bool better = ti < step - 1e-12;
                if (!better && leave >= 0 && ti <= step + 1e-12) {
                    better = bland ? b < basis_[leave] : std::abs(alpha) > std::abs(leave_alpha);
                }
                if (!better && leave < 0 && ti <= step + 1e-12 && ti < kInf) better = ti <= step;
                if (better) {
                    step = ti;
                    leave = i;
                    leave_alpha = alpha;
                }
            }
            if (!std::isfinite(step)) return LpStatus::Unbounded;

            x_[enter] += dir * step;
            for (int i = 0; i < m_; ++i) x_[basis_[i]] -= at(i, enter) * dir * step;
            degenerate = step < 1e-12 ? degenerate + 1 : 0;
            if (degenerate > 50) bland = true;
            if (leave < 0) {
                // Bound flip of the entering column.
                x_[enter] = dir > 0 ? up_[enter] : lo_[enter];
                continue;
            }
            const int out = basis_[leave];
            x_[out] = leave_alpha > 0 ? lo_[out] : up_[out];
            pivot(leave, enter);
        }
        return LpStatus::IterationLimit;
    }

    double artificial_sum() const {
        double s = 0.0;
        for (int j = first_art_; j < cols_; ++j) s += std::abs(x_[j]);
        return s;
    }

    void close_artificials() {
        for (int j = first_art_; j < cols_; ++j) {
            lo_[j] = 0.0;
            up_[j] = 0.0;
            if (!is_basic_[j]) x_[j] = 0.0;
        }
    }

    int cols() const { return cols_; }
    int first_art() const { return first_art_; }
    double value(int j) const { return x_[j]; }

private:
    double at(int i, int j) const { return t_[static_cast<std::size_t>(i) * cols_ + j]; }

    void pivot(int r, int c) {
        double* pr = &t_[static_cast<std::size_t>(r) * cols_];
        const double inv = 1.0 / pr[c];
        for (int j = 0; j < cols_; ++j) pr[j] *= inv;
        pr[c] = 1.0;
        for (int i = 0; i < m_; ++i) {
            if (i == r) continue;
            double* pi = &t_[static_cast<std::size_t>(i) * cols_];
            const double f = pi[c];
            if (f == 0.0) continue;
            for (int j = 0; j < cols_; ++j) pi[j] -= f * pr[j];
            pi[c] = 0.0;
        }
        const double f = d_[c];
        if (f != 0.0) {
            for (int j = 0; j < cols_; ++j) d_[j] -= f * pr[j];
        }
        d_[c] = 0.0;
        is_basic_[basis_[r]] = 0;
        basis_[r] = c;
        is_basic_[c] = 1;
    }

    int n_, m_;
    int cols_ = 0;
    int first_art_ = 0;
    std::vector<double> t_;
    std::vector<double> lo_, up_, x_, cost_, d_;
    std::vector<int> basis_;
    std::vector<char> is_basic_;
};

}  // namespace

LpResult solve_dense_lp(const DenseLp& lp) {
    LpResult res;
    const int n = lp.n_cols();
    for (int j = 0; j < n; ++j) {
        if (lp.lower[static_cast<std::size_t>(j)] > lp.upper[static_cast<std::size_t>(j)] + 1e-12) return res;
    }
    Tableau tab(lp);
    double scale = 1.0;
    for (const auto& r : lp.rows) scale = std::max(scale, std::abs(r.rhs));
    if (tab.has_artificials()) {
        std::vector<double> phase1(static_cast<std::size_t>(tab.cols()), 0.0);
        for (int j = tab.first_art(); j < tab.cols(); ++j) phase1[static_cast<std::size_t>(j)] = 1.0;
        auto st = tab.run(phase1);
        if (st == LpStatus::IterationLimit) {
            res.status = st;
            return res;
        }
        if (tab.artificial_sum() > 1e-8 * scale) return res;
        tab.close_artificials();
    }
    std::vector<double> phase2(static_cast<std::size_t>(tab.cols()), 0.0);
    std::copy(lp.cost.begin(), lp.cost.end(), phase2.begin());
    res.status = tab.run(phase2);
    if (res.status != LpStatus::Optimal) return res;
    res.x.resize(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
        double v = tab.value(j);
        v = std::clamp(v, lp.lower[static_cast<std::size_t>(j)], lp.upper[static_cast<std::size_t>(j)]);
        res.x[static_cast<std::size_t>(j)] = v;
        res.objective += lp.cost[static_cast<std::size_t>(j)] * v;
    }
    return res;
}

}  // namespace lego
