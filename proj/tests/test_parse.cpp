#include <cmath>

#include "doctest.h"
#include "trg/parse.hpp"

using namespace trg;

TEST_CASE("rayleigh from text") {
    ParsedSpec p = parse_equation("kernel y: sin (R, theta)\ny'' + y = eps*(y' - (1/3)*y'^3)\n");
    REQUIRE_FALSE(p.homotopy);
    const OdeSpec& s = p.ode;
    REQUIRE(s.comps.size() == 1);
    CHECK(s.comps[0].op == LinOp::from_rationals({1, 0, 1}));
    CHECK(s.comps[0].kernel.use_sin);
    REQUIRE(s.comps[0].pert.size() == 2);
    Expr eps = Expr::symbol("eps");
    for (const auto& t : s.comps[0].pert) {
        REQUIRE(t.vars.size() == 1);
        CHECK(t.vars[0].first.deriv == 1);
        CHECK(t.coeff == (t.vars[0].second == 1 ? eps : eps.scaled(Rational(-1, 3))));
    }
}

TEST_CASE("declarations, harmonics and relations") {
    ParsedSpec p = parse_equation(
        "freq w1=2, w2=1, w3=1\n"
        "relation w2 + w3 - w1 = 0\n"
        "x1'' + w1^2*x1 = eps*x2*x3\n"
        "x2'' + w2^2*x2 = eps*x1*x3; x3'' + w3^2*x3 = eps*x1*x2\n");
    REQUIRE(p.ode.comps.size() == 3);
    CHECK(p.ode.registry.relations().size() == 1);
    ParsedSpec m = parse_equation("param a1 = 0.5\ny'' + (1/4)*y = -eps*a1*y - 2*eps*cos(t)*y");
    REQUIRE(m.ode.comps[0].pert.size() == 1);
    Bindings b{{"eps", 0.1}, {"a1", 0.5}};
    CHECK(eval(m.ode.comps[0].pert[0].coeff, 0.3, b) == doctest::Approx(-0.1 * 0.5 - 0.2 * std::cos(0.3)));
    ParsedSpec f = parse_equation("freq w=1.2\nparam F=0.2\ny'' + w^2*y = F*cos(w*t) + eps*y^3");
    CHECK(eval(f.ode.comps[0].forcing0, 2.0, {{"w", 1.2}, {"F", 0.2}}) == doctest::Approx(0.2 * std::cos(2.4)));
}

TEST_CASE("homotopy statement") {
    ParsedSpec p = parse_equation("homotopy L: y' + y = 1 target: y' - 1 + y^2");
    REQUIRE(p.homotopy);
    CHECK(p.htr.op == LinOp::from_rationals({1, 1}));
    CHECK(p.htr.forcing == Expr(1));
    CHECK(p.htr.target.size() == 3);
    ParsedSpec d = parse_equation(
        "param alpha=1, beta=0.1, F=0.2\nfreq w\nkernel y: (A, theta)\n"
        "homotopy L: y'' + w^2*y target: y'' + alpha*y - beta*y^3 - F*cos(w*t)");
    CHECK(d.htr.target.size() == 4);
    CHECK_THROWS_AS(parse_equation("homotopy L: y' + y target: y'' + y"), ParseError);
}

TEST_CASE("parse errors carry position and expectations") {
    try {
        parse_equation("y'' + y = ");
        FAIL("no error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 1);
        CHECK(e.column() == 11);
        CHECK(e.expected().count("number"));
        CHECK(std::string(e.what()).find("end of input") != std::string::npos);
    }
    try {
        parse_equation("param a=1\n\ny'' + b*y = 0");
        FAIL("no error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 3);
        CHECK(e.column() == 7);
        CHECK(std::string(e.what()).find("undeclared symbol 'b'") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_equation("y'' + y^2 = eps*y"), ParseError);
    CHECK_THROWS_AS(parse_equation("y'' + y = eps*y^7"), ParseError);
    CHECK_THROWS_AS(parse_equation("y'' + y = eps*cos(t*t)*y"), ParseError);
    CHECK_THROWS_AS(parse_equation("y'' + y = eps*y $"), ParseError);
}

TEST_CASE("round trip") {
    const char* sources[] = {
        "kernel y: sin (R, theta)\ny'' + y = eps*(y' - (1/3)*y'^3)",
        "y' = eps*(1 - y^2)",
        "param a1=0.5\nkernel y: (R, theta)\ny'' + 0.25*y = -eps*a1*y - 2*eps*cos(t)*y",
        "freq w1=2, w2=1, w3=1\nrelation w2 + w3 - w1 = 0\nx1'' + w1^2*x1 = eps*x2*x3\n"
        "x2'' + w2^2*x2 = eps*x1*x3\nx3'' + w3^2*x3 = eps*x1*x2",
        "freq w=1.2\nparam F=0.2\ny'' + w^2*y = F*cos(w*t + 0.5) + eps*exp(-t/2)*y^3",
        "homotopy L: y' + y = 1 target: y' - 1 + y^2",
        "kernel y: const B C A\nhomotopy L: y''' + y'' target: y''' + y*y''",
    };
    for (const char* src : sources) {
        CAPTURE(src);
        ParsedSpec a = parse_equation(src);
        std::string text = render_spec(a);
        CAPTURE(text);
        ParsedSpec b = parse_equation(text);
        REQUIRE(a.homotopy == b.homotopy);
        if (a.homotopy) CHECK(same_spec(a.htr, b.htr));
        else CHECK(same_spec(a.ode, b.ode));
    }
}
