#include <doctest.h>

#include <vector>

#include "lego/model.hpp"

using namespace lego;

TEST_CASE("canonical names join family and indices") {
    CHECK(make_name("p", 1, 3, "g1") == "p(1,3,g1)");
    CHECK(make_name("x", "wind") == "x(wind)");
    CHECK(make_name("obj") == "obj()");
    CHECK(name_family("fp(1,2,b1,b2,c1)") == "fp");
    CHECK(name_family("plain") == "plain");
}

TEST_CASE("linear expressions merge duplicate terms") {
    ModelInstance m;
    VarId a = m.add_variable("a()", VarKind::Continuous, 0, 1);
    VarId b = m.add_variable("b()", VarKind::Continuous, 0, 1);
    LinearExpr e;
    e.add(b, 2.0).add(a, 1.0).add(b, -2.0).add(a, 0.5);
    e.normalize();
    REQUIRE(e.terms().size() == 1);
    CHECK(e.terms()[0].var == a);
    CHECK(e.terms()[0].coef == doctest::Approx(1.5));
}

TEST_CASE("duplicate names are rejected") {
    ModelInstance m;
    m.add_variable("a()", VarKind::Continuous, 0, 1);
    CHECK_THROWS_AS(m.add_variable("a()", VarKind::Continuous, 0, 1), ModelError);
    CHECK_THROWS_AS(m.at("missing()"), ModelError);
}

TEST_CASE("violation covers bounds, integrality, linear and quadratic rows") {
    ModelInstance m;
    VarId x = m.add_variable("x()", VarKind::Integer, 0, 3);
    VarId y = m.add_variable("y()", VarKind::Continuous, 0, 10);
    m.add_row("r()", LinearExpr().add(x, 1).add(y, 1), Sense::LessEqual, 4);
    QuadRow q;
    q.name = "q()";
    q.quad = {{y, y, 1.0}};
    q.rhs = 9;
    m.add_quad_row(q);

    CHECK(m.max_violation(std::vector<double>{1, 3}) == doctest::Approx(0.0));
    CHECK(m.max_violation(std::vector<double>{1.5, 2}) == doctest::Approx(0.5));
    CHECK(m.max_violation(std::vector<double>{2, 3}) == doctest::Approx(1.0));
    CHECK(m.max_violation(std::vector<double>{0, 3.5}) == doctest::Approx(3.25));
    auto bad = m.violated_rows(std::vector<double>{2, 3}, 1e-9);
    REQUIRE(bad.size() == 1);
    CHECK(bad[0].first == "r()");
}

TEST_CASE("census counts rows and variables per family") {
    ModelInstance m;
    for (int k = 1; k <= 3; ++k) {
        VarId v = m.add_variable(make_name("p", 1, k), VarKind::Continuous, 0, 1);
        m.add_row(make_name("cap", 1, k), LinearExpr().add(v, 1), Sense::LessEqual, 1);
    }
    CHECK(m.variable_census().at("p") == 3);
    CHECK(m.row_census().at("cap") == 3);
    CHECK(m.num_integral() == 0);
}
