#include <doctest.h>

#include <map>
#include <string>

#include "fixtures.hpp"
#include "lego/inertia.hpp"
#include "lego/model_core.hpp"
#include "lego/oracle.hpp"

using namespace lego;

namespace {

SystemData nuclear_and_ccgt() {
    auto s = lego::testing::two_bus_system(1);
    ThermalUnit nuc = s.thermal[0];
    nuc.id = "nuclear";
    nuc.p_min = nuc.p_max = 0.772;
    nuc.inertia_const = 8;
    nuc.existing = 1;
    nuc.build_max = 0;
    ThermalUnit ccgt = s.thermal[0];
    ccgt.id = "ccgt";
    ccgt.p_max = 0.668;
    ccgt.inertia_const = 4;
    s.thermal = {nuc, ccgt};
    return s;
}

ValueLookup table(std::map<std::string, double> values) {
    return [values = std::move(values)](const std::string& n) {
        auto it = values.find(n);
        return it == values.end() ? 0.0 : it->second;
    };
}

}  // namespace

TEST_CASE("two committed synchronous units give the hand value") {
    auto s = nuclear_and_ccgt();
    InertiaConfig cfg;
    auto pt = evaluate_inertia_point(s, cfg, {1, 1},
                                     table({{"u(1,1,nuclear)", 1}, {"u(1,1,ccgt)", 1}, {"p(1,1,nuclear)", 0.772}}));
    CHECK(pt.m_sg == doctest::Approx(2.0 * 8848.0 / 1440.0).epsilon(1e-12));
    CHECK(pt.m == doctest::Approx(12.289).epsilon(1e-4));
    CHECK(pt.thermal_gain[0] == doctest::Approx(772.0 / 1440.0));
    CHECK(pt.m_vi == 0.0);
}

TEST_CASE("all units off give zero inertia") {
    auto s = nuclear_and_ccgt();
    InertiaConfig cfg;
    cfg.disturbance = 0.05;
    auto pt = evaluate_inertia_point(s, cfg, {1, 1}, table({}));
    CHECK(pt.m == 0.0);
    CHECK(pt.m_sg == 0.0);
    CHECK_FALSE(pt.rocof_ok);
    cfg.disturbance = 0.0;
    CHECK(evaluate_inertia_point(s, cfg, {1, 1}, table({})).rocof_ok);
}

TEST_CASE("virtual inertia follows the unit's share of its available capacity") {
    auto s = lego::testing::two_bus_system(1);
    s.profile_keys = {"wind"};
    s.profiles = StepGrid(1, 1, 1);
    s.profiles(1, 1, 0) = 0.5;
    RenewableUnit w;
    w.id = "wvi";
    w.bus = "b2";
    w.unit_size = 0.1;
    w.inertia_const = 2;
    w.build_max = 3;
    w.profile_key = "wind";
    s.renewable = {w};
    auto vi = virtual_inertia_units(s);
    REQUIRE(vi.size() == 1);
    CHECK(participation(s, vi[0], {1, 1}) == 0.5);
    InertiaConfig cfg;
    auto pt = evaluate_inertia_point(s, cfg, {1, 1}, table({{"x(wvi)", 3}, {"p(1,1,wvi)", 0.12}}));
    const double gain = 0.12 / (0.1 * 0.5 * 3);
    CHECK(pt.vi_gain[0] == doctest::Approx(gain));
    CHECK(pt.m_vi == doctest::Approx(2 * gain * 2 * 3));
    CHECK(pt.m == doctest::Approx(pt.m_vi));
}

TEST_CASE("binary products are exact at integral points") {
    ModelInstance m;
    VarId c = m.add_variable("c()", VarKind::Continuous, 0, 2.5);
    VarId b = m.add_variable("b()", VarKind::Binary, 0, 1);
    VarId w = linearize_binary_product(m, c, b, "w()");
    for (double bv : {0.0, 1.0}) {
        for (double cv : {0.0, 0.7, 2.5}) {
            std::vector<double> vals(3);
            vals[c.index] = cv;
            vals[b.index] = bv;
            vals[w.index] = cv * bv;
            CHECK(m.max_violation(vals) < 1e-12);
            vals[w.index] = cv * bv + 0.1;
            CHECK(m.max_violation(vals) > 1e-3);
        }
    }
    VarId x = m.add_variable("cont()", VarKind::Continuous, 0, 1);
    CHECK_THROWS_AS(linearize_binary_product(m, c, x, "bad()"), ModelError);
}

TEST_CASE("binary expansion covers exactly the integer range") {
    ModelInstance m;
    VarId x = m.add_variable("x(u)", VarKind::Integer, 0, 5);
    auto bits = binary_expand_integer(m, x, "u");
    REQUIRE(bits.size() == 3);
    for (int v = 0; v <= 7; ++v) {
        std::vector<double> vals(m.variables().size());
        vals[x.index] = std::min(v, 5);
        for (int i = 0; i < 3; ++i) vals[bits[i].index] = (v >> i) & 1;
        const bool ok = m.max_violation(vals) < 1e-12;
        CHECK(ok == (v <= 5));
    }
}

TEST_CASE("configuration is validated") {
    InertiaConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    cfg.f_base = 0;
    CHECK_THROWS_AS(cfg.validate(), BuildError);
    cfg = {};
    cfg.disturbance = -1;
    CHECK_THROWS_AS(cfg.validate(), BuildError);
    cfg = {};
    cfg.disturbance_overrides[{1, 2}] = 0.3;
    CHECK(cfg.disturbance_at({1, 2}) == 0.3);
    CHECK(cfg.disturbance_at({1, 1}) == 0.0);
}

TEST_CASE("linearized block pins every integer point of tiny instances") {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        auto inst = random_tiny_instance(seed, true);
        for (auto num : {ViNumerator::OwnOutput, ViNumerator::ThermalOutput}) {
            auto cfg = InertiaConfig::from_settings(inst.system.inertia);
            cfg.numerator = num;
            auto rep = check_linearization(inst, cfg);
            CHECK_MESSAGE(rep.ok(), (rep.mismatches.empty() ? "" : rep.mismatches.front()));
            CHECK(rep.points > 0);
        }
    }
}

TEST_CASE("parallel evaluation equals the serial reference") {
    auto inst = random_tiny_instance(9, true);
    const auto& s = inst.system;
    Solution sol;
    int i = 0;
    for (auto st : inst.time.steps()) {
        for (const auto& u : s.thermal) {
            sol.values[make_name("u", st.rp, st.k, u.id)] = (i++ % 2);
            sol.values[make_name("p", st.rp, st.k, u.id)] = u.p_max * 0.5;
        }
        for (const auto& u : s.renewable) sol.values[make_name("p", st.rp, st.k, u.id)] = 0.01 * i;
        for (const auto& u : s.storage) sol.values[make_name("p", st.rp, st.k, u.id)] = 0.0;
    }
    for (const auto& u : s.renewable) sol.values[make_name("x", u.id)] = 1;
    for (const auto& u : s.storage) sol.values[make_name("x", u.id)] = 0;
    auto cfg = InertiaConfig::from_settings(s.inertia);
    auto a = evaluate_inertia(sol, s, inst.time, cfg);
    auto b = evaluate_inertia_serial(sol, s, inst.time, cfg);
    REQUIRE(a.size() == b.size());
    for (std::size_t j = 0; j < a.size(); ++j) {
        CHECK(a[j].m == b[j].m);
        CHECK(a[j].vi_gain == b[j].vi_gain);
    }
}
