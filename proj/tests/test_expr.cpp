#include <cmath>
#include <random>

#include "doctest.h"
#include "trg/expr.hpp"
#include "trg/registry.hpp"

using namespace trg;

namespace {

PhaseForm ph(Rational rate, FactorList freq = {}, FactorList phases = {}) { return {{rate, freq}, phases, 0.0}; }

Expr random_expr(std::mt19937& g, int nterms) {
    std::uniform_int_distribution<int> small(-3, 3), pick(0, 2), kk(0, 2), naux(0, 3);
    std::vector<QuasiTerm> ts;
    for (int i = 0; i < nterms; ++i) {
        QuasiTerm q;
        q.mono.coeff = Rational(small(g) == 0 ? 1 : small(g), 1 + naux(g));
        if (pick(g) == 0) q.mono.factors = add_factors(q.mono.factors, {{"A", 1 + naux(g) % 2}});
        if (pick(g) == 1) q.mono.factors = add_factors(q.mono.factors, {{kEps, 1}});
        q.k = kk(g) == 2 ? 1 : 0;
        q.rho = Rational(pick(g) == 0 ? -1 : 0);
        int h = pick(g);
        q.harm = static_cast<Harmonic>(h);
        if (h != 0) q.phase = ph(Rational(1 + naux(g)), pick(g) == 0 ? FactorList{{"w", 1}} : FactorList{}, {{"theta", 1}});
        ts.push_back(q);
    }
    return Expr(ts);
}

Bindings random_bindings(std::mt19937& g) {
    std::uniform_real_distribution<double> u(0.3, 1.2);
    return {{"A", u(g)}, {kEps, 0.1}, {"w", u(g)}, {"theta", u(g)}, {kT0, u(g)}};
}

}  // namespace

TEST_CASE("rational arithmetic and parsing") {
    CHECK(Rational(6, -4) == Rational(-3, 2));
    CHECK((Rational(1, 3) + Rational(1, 6)) == Rational(1, 2));
    CHECK(Rational::parse_decimal("2.35") == Rational(47, 20));
    CHECK(Rational::parse_decimal("1e-3") == Rational(1, 1000));
    CHECK(Rational::from_double(0.125).value() == Rational(1, 8));
    CHECK_FALSE(Rational::from_double(std::sqrt(2.0), 1e-13, 1000).has_value());
    CHECK(binomial(5, 2) == Rational(10));
    CHECK_THROWS(Rational(1, 0));
}

TEST_CASE("product to sum and canonical phase sign") {
    PhaseForm a = ph(1, {}, {{"theta", 1}});
    Expr c = Expr::cosine(a);
    Expr s = Expr::sine(a);
    Expr cube = c.pow(3);
    // cos^3 = 3/4 cos + 1/4 cos 3
    Expr expect = Expr::cosine(a).scaled(Rational(3, 4)) + Expr::cosine(ph(3, {}, {{"theta", 3}})).scaled(Rational(1, 4));
    CHECK(cube == expect);
    // sin * cos of the same argument: (1/2) sin 2
    CHECK(s * c == Expr::sine(ph(2, {}, {{"theta", 2}})).scaled(Rational(1, 2)));
    // sin^2 + cos^2 = 1
    CHECK(s * s + c * c == Expr(1));
    // sin(-x) is stored with a positive leading multiple
    Expr neg = Expr::sine(negate(a));
    REQUIRE(neg.size() == 1);
    CHECK(neg.terms()[0].mono.coeff == Rational(-1));
    CHECK(neg.terms()[0].phase.freq.rate == Rational(1));
}

TEST_CASE("ring laws on random expressions") {
    std::mt19937 g(42);
    for (int it = 0; it < 60; ++it) {
        Expr a = random_expr(g, 3), b = random_expr(g, 3), c = random_expr(g, 2);
        Bindings bd = random_bindings(g);
        double t = 0.7;
        CHECK(a + b == b + a);
        CHECK(a * b == b * a);
        CHECK(eval((a * b) * c, t, bd) == doctest::Approx(eval(a * (b * c), t, bd)).epsilon(1e-11));
        CHECK(eval(a * (b + c), t, bd) == doctest::Approx(eval(a * b + a * c, t, bd)).epsilon(1e-11));
        CHECK(eval(a * b, t, bd) == doctest::Approx(eval(a, t, bd) * eval(b, t, bd)).epsilon(1e-11));
        CHECK((a - a).is_zero());
        Expr again(a.terms());
        CHECK(again == a);
    }
}

TEST_CASE("time derivative matches central differences") {
    std::mt19937 g(7);
    for (int it = 0; it < 40; ++it) {
        Expr a = random_expr(g, 4);
        Bindings bd = random_bindings(g);
        double t = 1.3, h = 1e-5;
        double fd = (eval(a, t + h, bd) - eval(a, t - h, bd)) / (2 * h);
        CHECK(eval(diff_t(a), t, bd) == doctest::Approx(fd).epsilon(1e-6));
    }
}

TEST_CASE("parameter derivative matches differences") {
    std::mt19937 g(9);
    for (int it = 0; it < 30; ++it) {
        Expr a = random_expr(g, 4);
        Bindings bd = random_bindings(g);
        for (const char* p : {"A", "theta"}) {
            Bindings lo = bd, hi = bd;
            lo[p] -= 1e-6;
            hi[p] += 1e-6;
            double fd = (eval(a, 0.9, hi) - eval(a, 0.9, lo)) / 2e-6;
            CHECK(eval(diff_param(a, p), 0.9, bd) == doctest::Approx(fd).epsilon(1e-5));
        }
    }
}

TEST_CASE("taylor coefficients reproduce derivatives at t0") {
    std::mt19937 g(11);
    for (int it = 0; it < 30; ++it) {
        Expr a = random_expr(g, 4);
        Bindings bd = random_bindings(g);
        double t0 = bd[kT0];
        Expr d = a;
        for (int n = 0; n <= 2; ++n) {
            double direct = eval(d, t0, bd) / factorial(n).to_double();
            CHECK(eval(taylor_coeff(a, n), t0, bd) == doctest::Approx(direct).epsilon(1e-10));
            CHECK(max_secular(taylor_coeff(a, n)) == 0);
            d = diff_t(d);
        }
    }
}

TEST_CASE("substitution, eps filtering and rendering") {
    Expr A = Expr::symbol("A"), eps = Expr::symbol(kEps);
    Expr e = A * A + eps * A * Expr::sigma(1) + eps * eps;
    CHECK(max_eps(e) == 2);
    CHECK(truncate_eps(e, 1) == A * A + eps * A * Expr::sigma(1));
    CHECK(eps_part(e, 1) == A * Expr::sigma(1));
    Expr s = substitute(e, "A", Expr(2));
    CHECK(s == Expr(4) + Expr::sigma(1).scaled(Rational(2)) * eps + eps * eps);
    Expr inv = substitute(Expr::symbol("A", -2), "A", Expr::symbol("R").scaled(Rational(3)));
    CHECK(inv == Expr::symbol("R", -2).scaled(Rational(1, 9)));
    Expr r = Expr::cosine(ph(3, {}, {{"theta", 3}})).scaled(Rational(1, 96)) * Expr::symbol("R", 3);
    CHECK(render(r) == "(1/96)*R^3*cos(3*t+3*theta)");
    CHECK(render(Expr::sine(ph(0, {{"w", 1}}, {{"theta", 1}})) * Expr::sigma(2).scaled(Rational(-1, 2))) ==
          "-(1/2)*(t-t0)^2*sin(w*t+theta)");
}

TEST_CASE("secular cap and registry domains") {
    CHECK_THROWS(Expr::sigma(4) * Expr::sigma(3));
    ParamRegistry r1, r2;
    r1.add("A", SymbolKind::Amplitude);
    r2.add("A", SymbolKind::Amplitude);
    CHECK_THROWS(r1.sym("A") * r2.sym("A"));
    CHECK_NOTHROW(r1.sym("A") * Expr(3));
    CHECK_THROWS(r1.add("A", SymbolKind::Phase));
}

TEST_CASE("relation span") {
    ParamRegistry r;
    for (const char* w : {"w1", "w2", "w3"}) r.add(w, SymbolKind::Frequency, 1.0);
    r.add_relation({Rational(0), {{"w1", -1}, {"w2", 1}, {"w3", 1}}});
    CHECK(r.in_relation_span({Rational(0), {{"w1", 2}, {"w2", -2}, {"w3", -2}}}));
    CHECK_FALSE(r.in_relation_span({Rational(0), {{"w1", 1}, {"w2", -1}}}));
}
