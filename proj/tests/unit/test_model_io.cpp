#include <doctest.h>

#include "fixtures.hpp"
#include "lego/model_io.hpp"
#include "lego/workflows.hpp"

using namespace lego;

namespace {

ModelInstance small_mixed() {
    ModelInstance m;
    VarId a = m.add_variable("p(1,10,g1)", VarKind::Continuous, -1.5, 2);
    VarId b = m.add_variable("p(1,2,g1)", VarKind::Continuous, 0, kInf);
    VarId c = m.add_variable("u(1,2,g1)", VarKind::Binary, 0, 1);
    VarId d = m.add_variable("x(g1)", VarKind::Integer, 0, 7);
    m.add_row("cap(1,2)", LinearExpr().add(a, 1).add(b, -0.1).add(c, 3), Sense::LessEqual, 4.25);
    m.add_row("bal(1,2)", LinearExpr().add(b, 1).add(d, 2), Sense::Equal, 1e-3);
    m.add_row("low(1)", LinearExpr().add(a, 1), Sense::GreaterEqual, -1);
    QuadRow q;
    q.name = "cone(1,1,b1,b2)";
    q.quad = {{a, a, 1.0}, {b, b, 1.0}, {c, d, -1.0}};
    m.add_quad_row(q);
    m.set_objective(LinearExpr().add(a, 0.3).add(d, 1e6));
    return m;
}

}  // namespace

TEST_CASE("canonical order compares numeric indices as numbers") {
    CHECK(canonical_less("p(1,2,g1)", "p(1,10,g1)"));
    CHECK(canonical_less("p(1,10,g1)", "u(1,1,g1)"));
    CHECK_FALSE(canonical_less("p(1,10,g1)", "p(1,2,g1)"));
}

TEST_CASE("lp and mps round trips are byte identical") {
    auto m = small_mixed();
    for (auto fmt : {ModelFormat::Lp, ModelFormat::Mps}) {
        const auto text = emit(m, fmt);
        const auto back = parse(text, fmt);
        CHECK(emit(back, fmt) == text);
        CHECK(back.variables().size() == m.variables().size());
        CHECK(back.rows().size() == m.rows().size());
        CHECK(back.quad_rows().size() == 1);
        CHECK(back.var(back.at("u(1,2,g1)")).kind == VarKind::Binary);
        CHECK(back.var(back.at("x(g1)")).kind == VarKind::Integer);
        CHECK(back.var(back.at("p(1,2,g1)")).upper == kInf);
    }
    CHECK(emit_lp(parse_mps(emit_mps(m))) == emit_lp(m));
}

TEST_CASE("assembled cases round trip through both formats") {
    auto s = load_system(lego::testing::data_dir() / "mini3");
    auto t = TemporalStructure::hourly_identity(6);
    for (auto kind : {CaseKind::BC, CaseKind::LEGO}) {
        auto m = assemble_case(CaseSpec::for_kind(kind, s), s, t);
        const auto lp = emit_lp(m);
        CHECK(emit_lp(parse_lp(lp)) == lp);
        const auto mps = emit_mps(m);
        CHECK(emit_mps(parse_mps(mps)) == mps);
        CHECK(emit_lp(parse_mps(mps)) == lp);
    }
}

TEST_CASE("bad names and malformed files are format errors") {
    CHECK_NOTHROW(check_name("fp(1,2,b1,b2,c1)"));
    CHECK_THROWS_AS(check_name(""), FormatError);
    CHECK_THROWS_AS(check_name("a b"), FormatError);
    CHECK_THROWS_AS(check_name("1abc"), FormatError);
    CHECK_THROWS_AS(check_name(std::string(300, 'a')), FormatError);
    CHECK_THROWS_AS(parse_lp("Maximize\n obj: x\nEnd\n"), FormatError);
    CHECK_THROWS_AS(parse_mps("NAME x\nROWS\n N obj\n"), FormatError);
}
