#include <doctest.h>

#include <random>

#include "lego/dense_lp.hpp"

using namespace lego;

namespace {

DenseLp make(std::vector<double> c, std::vector<double> lo, std::vector<double> hi) {
    DenseLp lp;
    lp.cost = std::move(c);
    lp.lower = std::move(lo);
    lp.upper = std::move(hi);
    return lp;
}

}  // namespace

TEST_CASE("textbook lp") {
    // max 3x + 5y st x <= 4, 2y <= 12, 3x + 2y <= 18 -> (2, 6), 36
    auto lp = make({-3, -5}, {0, 0}, {kInf, kInf});
    lp.rows.push_back({{1, 0}, Sense::LessEqual, 4});
    lp.rows.push_back({{0, 2}, Sense::LessEqual, 12});
    lp.rows.push_back({{3, 2}, Sense::LessEqual, 18});
    auto r = solve_dense_lp(lp);
    REQUIRE(r.status == LpStatus::Optimal);
    CHECK(r.objective == doctest::Approx(-36));
    CHECK(r.x[0] == doctest::Approx(2));
    CHECK(r.x[1] == doctest::Approx(6));
}

TEST_CASE("equalities, negative bounds and free columns") {
    auto lp = make({1, 1, 0}, {-2, -kInf, -kInf}, {2, kInf, kInf});
    lp.rows.push_back({{1, -1, 0}, Sense::Equal, 1});
    lp.rows.push_back({{0, 1, 1}, Sense::GreaterEqual, -5});
    lp.rows.push_back({{0, 0, 1}, Sense::LessEqual, 0});
    auto r = solve_dense_lp(lp);
    REQUIRE(r.status == LpStatus::Optimal);
    // x - y = 1, min x + y = 2x - 1 with x >= -2 and y = x - 1 >= -5 - z, z <= 0.
    CHECK(r.objective == doctest::Approx(-5));
}

TEST_CASE("infeasible and unbounded are reported") {
    auto lp = make({1}, {0}, {1});
    lp.rows.push_back({{1}, Sense::GreaterEqual, 2});
    CHECK(solve_dense_lp(lp).status == LpStatus::Infeasible);
    auto ub = make({-1, 0}, {0, 0}, {kInf, kInf});
    ub.rows.push_back({{1, -1}, Sense::LessEqual, 1});
    CHECK(solve_dense_lp(ub).status == LpStatus::Unbounded);
}

TEST_CASE("random boxed problems satisfy their rows") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-1, 1);
    for (int t = 0; t < 50; ++t) {
        const int n = 6, m = 5;
        auto lp = make(std::vector<double>(n), std::vector<double>(n, -1), std::vector<double>(n, 1));
        for (auto& c : lp.cost) c = u(rng);
        std::vector<double> x0(n);
        for (auto& v : x0) v = 0.5 * u(rng);
        for (int i = 0; i < m; ++i) {
            DenseRow row;
            row.coef.resize(n);
            double act = 0;
            for (int j = 0; j < n; ++j) act += (row.coef[j] = u(rng)) * x0[j];
            row.sense = static_cast<Sense>(i % 3);
            row.rhs = act;
            lp.rows.push_back(row);
        }
        auto r = solve_dense_lp(lp);
        REQUIRE(r.status == LpStatus::Optimal);
        double at_x0 = 0;
        for (int j = 0; j < n; ++j) at_x0 += lp.cost[j] * x0[j];
        CHECK(r.objective <= at_x0 + 1e-9);
        for (const auto& row : lp.rows) {
            double act = 0;
            for (int j = 0; j < n; ++j) act += row.coef[j] * r.x[j];
            if (row.sense != Sense::GreaterEqual) CHECK(act <= row.rhs + 1e-8);
            if (row.sense != Sense::LessEqual) CHECK(act >= row.rhs - 1e-8);
        }
    }
}
