#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "fixtures.hpp"
#include "lego/solver.hpp"
#include "lego/text_io.hpp"

using namespace lego;

namespace {

/// Points LEGO_SOLVER_BIN at a shell script for the lifetime of the guard.
class FakeAdapter {
public:
    FakeAdapter(const std::string& name, const std::string& body) {
        path_ = lego::testing::scratch_dir("adapter_" + name) / "adapter.sh";
        write_text_file(path_, "#!/bin/sh\n" + body);
        std::filesystem::permissions(path_, std::filesystem::perms::owner_all);
        setenv("LEGO_SOLVER_BIN", path_.c_str(), 1);
    }
    ~FakeAdapter() { unsetenv("LEGO_SOLVER_BIN"); }

private:
    std::filesystem::path path_;
};

ModelInstance two_vars() {
    ModelInstance m;
    VarId a = m.add_variable("a()", VarKind::Continuous, 0, 1);
    VarId b = m.add_variable("b()", VarKind::Integer, 0, 3);
    m.add_row("r()", LinearExpr().add(a, 1).add(b, 1), Sense::GreaterEqual, 1);
    m.set_objective(LinearExpr().add(a, 1).add(b, 2));
    return m;
}

}  // namespace

TEST_CASE("adapter output becomes a solution with snapped integers") {
    FakeAdapter fake("ok", "printf 'status optimal\\nobjective 1\\na() 1\\nb() 1e-8\\n' > \"$3\"\n");
    auto m = two_vars();
    SolverRequest req;
    req.model = &m;
    req.work_dir = lego::testing::scratch_dir("solver_ok");
    auto sol = solve(req);
    CHECK(sol.status == SolveStatus::Optimal);
    CHECK(sol.objective == 1.0);
    CHECK(sol.value("b()") == 0.0);
    CHECK(std::filesystem::exists(req.work_dir / "model.lp"));
    CHECK(read_text_file(req.work_dir / "params.txt").find("mip_gap=") != std::string::npos);
}

TEST_CASE("infeasible results carry no values") {
    FakeAdapter fake("inf", "printf 'status infeasible\\nobjective 0\\n' > \"$3\"\n");
    auto m = two_vars();
    SolverRequest req;
    req.model = &m;
    auto sol = solve(req);
    CHECK(sol.status == SolveStatus::Infeasible);
    CHECK(sol.values.empty());
}

TEST_CASE("adapter failures are solver errors") {
    auto m = two_vars();
    SolverRequest req;
    req.model = &m;
    {
        FakeAdapter fake("crash", "echo boom >&2\nexit 4\n");
        CHECK_THROWS_AS(solve(req), SolverError);
    }
    {
        FakeAdapter fake("missing", "printf 'status optimal\\nobjective 1\\na() 1\\n' > \"$3\"\n");
        CHECK_THROWS_AS(solve(req), SolverError);
    }
    {
        FakeAdapter fake("fractional", "printf 'status optimal\\nobjective 1\\na() 0\\nb() 0.5\\n' > \"$3\"\n");
        CHECK_THROWS_AS(solve(req), SolverError);
    }
    CHECK_THROWS_AS(adapter_for("no-such-solver"), SolverError);
}

TEST_CASE("solution files round trip") {
    Solution s;
    s.status = SolveStatus::Feasible;
    s.objective = 0.1 + 0.2;
    s.values["x(g1)"] = 3;
    s.values["p(1,1,g1)"] = 1.0 / 3.0;
    auto path = lego::testing::scratch_dir("solution_rt") / "solution.txt";
    write_solution_file(path, s);
    auto back = read_solution_file(path);
    CHECK(back.status == s.status);
    CHECK(back.objective == s.objective);
    CHECK(back.values == s.values);
    CHECK(parse_status("limit") == SolveStatus::Limit);
    CHECK_THROWS_AS(parse_status("done"), SolverError);
}

TEST_CASE("fixing moves bounds and refuses values outside them") {
    auto m = two_vars();
    auto fixed = fix_variables(m, {{"b()", 2.0000001}, {"a()", 0.5}}, FixMode::Fix);
    CHECK(fixed.var(fixed.at("b()")).lower == 2.0);
    CHECK(fixed.var(fixed.at("b()")).upper == 2.0);
    auto lb = fix_variables(m, {{"b()", 1}}, FixMode::LowerBound);
    CHECK(lb.var(lb.at("b()")).lower == 1.0);
    CHECK(lb.var(lb.at("b()")).upper == 3.0);
    CHECK_THROWS_AS(fix_variables(m, {{"b()", 4}}, FixMode::Fix), ModelError);
    CHECK_THROWS_AS(fix_variables(m, {{"zz()", 1}}, FixMode::Fix), ModelError);
}

TEST_CASE("registered adapters are listed") {
    register_adapter("fake", "/bin/true");
    auto ids = registered_solvers();
    CHECK(std::find(ids.begin(), ids.end(), "fake") != ids.end());
    CHECK(std::find(ids.begin(), ids.end(), "scip") != ids.end());
}
