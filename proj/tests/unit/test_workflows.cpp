#include <doctest.h>

#include "fixtures.hpp"
#include "lego/oracle.hpp"
#include "lego/model_core.hpp"
#include "lego/workflows.hpp"

using namespace lego;

TEST_CASE("case kinds parse and set their blocks") {
    CHECK(parse_case_kind("LEGO") == CaseKind::LEGO);
    CHECK(parse_case_kind("ic") == CaseKind::IC);
    CHECK_THROWS_AS(parse_case_kind("dc"), BuildError);
    auto bc = CaseSpec::for_kind(CaseKind::BC, 0.3, InertiaConfig{});
    CHECK((bc.dc && !bc.ac && !bc.inertia));
    auto lego = CaseSpec::for_kind(CaseKind::LEGO, 0.3, InertiaConfig{});
    CHECK((!lego.dc && lego.ac && lego.inertia));
    CHECK(lego.kappa == 0.3);
}

TEST_CASE("contradictory specs are refused") {
    auto s = CaseSpec::for_kind(CaseKind::BC, 0.3, InertiaConfig{});
    s.ac = true;
    CHECK_THROWS_AS(validate_case(s), BuildError);
    s = CaseSpec::for_kind(CaseKind::RC, 0.3, InertiaConfig{});
    s.dc = true;
    s.ac = false;
    CHECK_THROWS_AS(validate_case(s), BuildError);
    s = CaseSpec::for_kind(CaseKind::IC, 0.3, InertiaConfig{});
    s.inertia = false;
    CHECK_THROWS_AS(validate_case(s), BuildError);
    s = CaseSpec::for_kind(CaseKind::BC, 0.3, InertiaConfig{});
    s.inertia = true;
    CHECK_THROWS_AS(validate_case(s), BuildError);
    s = CaseSpec::for_kind(CaseKind::BC, -0.1, InertiaConfig{});
    CHECK_THROWS_AS(validate_case(s), BuildError);
}

TEST_CASE("inertia and network families appear only in their kinds") {
    auto s = load_system(lego::testing::data_dir() / "mini3");
    auto t = TemporalStructure::hourly_identity(6);
    auto has = [](const ModelInstance& m, const char* fam) { return m.row_census().contains(fam); };
    auto bc = assemble_case(CaseSpec::for_kind(CaseKind::BC, s), s, t);
    auto ic = assemble_case(CaseSpec::for_kind(CaseKind::IC, s), s, t);
    auto rc = assemble_case(CaseSpec::for_kind(CaseKind::RC, s), s, t);
    auto lg = assemble_case(CaseSpec::for_kind(CaseKind::LEGO, s), s, t);
    CHECK((has(bc, "dc_flow") && !has(bc, "cone") && !has(bc, "rocof")));
    CHECK((has(ic, "dc_flow") && !has(ic, "cone") && has(ic, "rocof")));
    CHECK((!has(rc, "dc_flow") && has(rc, "cone") && !has(rc, "rocof")));
    CHECK((!has(lg, "dc_flow") && has(lg, "cone") && has(lg, "rocof")));
}

TEST_CASE("metrics rebuild the objective of a solved case") {
    auto s = load_system(lego::testing::data_dir() / "mini3");
    auto t = TemporalStructure::hourly_identity(6);
    SolveOptions opt;
    opt.work_dir = lego::testing::scratch_dir("metrics_bc");
    auto run = run_case(CaseSpec::for_kind(CaseKind::IC, 0.5, InertiaConfig::from_settings(s.inertia)), s, t, opt);
    REQUIRE(run.solution.status == SolveStatus::Optimal);
    CHECK(run.report.cost.total() == doctest::Approx(run.solution.objective).epsilon(1e-6));
    CHECK(run.report.clean_share >= 0.5 - 1e-6);
    CHECK(run.report.clean_target_met);
    CHECK(run.report.inertia.size() == 6);
    for (const auto& pt : run.report.inertia) CHECK(pt.rocof_ok);
    const auto inv = investment_values(run.solution, s);
    CHECK(inv.contains("x(wind)"));
    CHECK(inv.contains("x(ccgt)"));

    auto dir = lego::testing::scratch_dir("metrics_report");
    write_report(dir, run.report);
    for (const char* f : {"report.json", "capacity.csv", "inertia.csv", "timing.txt"}) {
        CHECK(std::filesystem::exists(dir / f));
    }
}

TEST_CASE("ex-post runs need a base solution") {
    auto s = load_system(lego::testing::data_dir() / "mini3");
    auto t = TemporalStructure::hourly_identity(6);
    Solution none;
    none.status = SolveStatus::Infeasible;
    CHECK_THROWS_AS(run_ex_post_inertia(none, ExPostMode::OpsOnly, s, t, InertiaConfig{}, SolveOptions{}), BuildError);
    CHECK_THROWS_AS(run_ex_post_ac(none, s, t, SolveOptions{}), BuildError);
}

TEST_CASE("fewer blocks never cost more at fixed kappa") {
    int compared = 0;
    for (std::uint64_t seed = 20; seed < 26; ++seed) {
        auto inst = random_tiny_instance(seed, true);
        const auto cfg = InertiaConfig::from_settings(inst.system.inertia);
        std::map<CaseKind, Solution> sol;
        for (auto kind : {CaseKind::BC, CaseKind::IC, CaseKind::RC}) {
            sol[kind] = run_case(CaseSpec::for_kind(kind, inst.system.kappa, cfg), inst.system, inst.time, {}).solution;
        }
        const auto& bc = sol[CaseKind::BC];
        for (auto kind : {CaseKind::IC, CaseKind::RC}) {
            const auto& other = sol[kind];
            if (!has_values(bc.status)) {
                CHECK_FALSE(has_values(other.status));
                continue;
            }
            if (!has_values(other.status)) continue;
            ++compared;
            CHECK(bc.objective <= other.objective * (1 + 1e-6) + 1e-9);
        }
    }
    CHECK(compared > 0);
}
