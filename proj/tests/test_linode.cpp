#include <random>

#include "doctest.h"
#include "trg/linode.hpp"

using namespace trg;

namespace {

PhaseForm ph(Rational rate, FactorList freq = {}, FactorList phases = {}) { return {{rate, freq}, phases, 0.0}; }

ParamMono mono(Rational c, FactorList f = {}) {
    ParamMono m;
    m.coeff = c;
    m.factors = std::move(f);
    return m;
}

void check_residual(const LinOp& op, const Expr& f, const ParamRegistry& reg) {
    ForcedSolution s = solve_forced(op, f, reg);
    Expr r = op.apply(s.particular) - f;
    Bindings b = reg.bindings();
    b[kT0] = 0.4;
    for (double t : {0.1, 0.9, 2.3}) CHECK(std::fabs(eval(r, t, b)) < 1e-10);
}

}  // namespace

TEST_CASE("numeric roots with multiplicity") {
    LinOp osc = LinOp::from_rationals({Rational(1, 4), 0, 1});
    REQUIRE(osc.roots().size() == 1);
    CHECK(osc.roots()[0].nu.rate == Rational(1, 2));
    LinOp d2 = LinOp::from_rationals({0, 0, 1});
    REQUIRE(d2.roots().size() == 1);
    CHECK(d2.roots()[0].multiplicity == 2);
    LinOp damped = LinOp::from_rationals({1, 2, 1});  // (D+1)^2
    REQUIRE(damped.roots().size() == 1);
    CHECK(damped.roots()[0].rho == Rational(-1));
    CHECK(damped.roots()[0].multiplicity == 2);
    LinOp blas = LinOp::from_rationals({0, 1, 1, 0});  // D^2 + D after trimming D^3 coefficient
    CHECK(blas.roots().size() == 2);
    CHECK_THROWS(LinOp::from_rationals({2, 0, 1}));  // sqrt(2) root needs a frequency symbol
}

TEST_CASE("symbolic oscillator roots") {
    LinOp op({mono(1, {{"w", 2}}), mono(0), mono(1)});
    REQUIRE(op.roots().size() == 1);
    CHECK(op.roots()[0].nu.syms == FactorList{{"w", 1}});
    CHECK(op.render("y") == "y'' + w^2*y");
}

TEST_CASE("resonant forcing picks up secular growth") {
    ParamRegistry reg;
    LinOp op = LinOp::from_rationals({1, 0, 1});
    Expr f = Expr::sine(ph(1, {}, {{"theta", 1}}));
    ForcedSolution s = solve_forced(op, f, reg);
    // y'' + y = sin(t+theta) -> -(1/2)(t-t0) cos(t+theta)
    CHECK(s.particular == Expr::sigma(1) * Expr::cosine(ph(1, {}, {{"theta", 1}})).scaled(Rational(-1, 2)));
    CHECK(s.resonances.size() == 1);
    // third harmonic divides exactly by 1-9
    Expr g = Expr::cosine(ph(3, {}, {{"theta", 3}}));
    CHECK(solve_forced(op, g, reg).particular == g.scaled(Rational(-1, 8)));
}

TEST_CASE("symbolic frequency division stays exact") {
    ParamRegistry reg;
    reg.add("w", SymbolKind::Frequency);
    LinOp op({mono(1, {{"w", 2}}), mono(0), mono(1)});
    Expr g = Expr::cosine(ph(0, {{"w", 3}}, {{"theta", 3}}));
    ForcedSolution s = solve_forced(op, g, reg);
    CHECK(s.particular == g * Expr::symbol("w", -2).scaled(Rational(-1, 8)));
}

TEST_CASE("relation-declared resonance") {
    ParamRegistry reg;
    for (const char* w : {"w1", "w2", "w3"}) reg.add(w, SymbolKind::Frequency);
    reg.add_relation({Rational(0), {{"w1", -1}, {"w2", 1}, {"w3", 1}}});
    LinOp op({mono(1, {{"w1", 2}}), mono(0), mono(1)});
    Expr g = Expr::cosine(ph(0, {{"w2", 1}, {"w3", 1}}, {{"theta2", 1}, {"theta3", 1}}));
    ForcedSolution s = solve_forced(op, g, reg);
    REQUIRE(s.resonances.size() == 1);
    CHECK_FALSE(s.resonances[0].numeric);
    // (t-t0) sin(...) / (2 w1)
    CHECK(s.particular == Expr::sigma(1) * Expr::sine(g.terms()[0].phase) * Expr::symbol("w1", -1).scaled(Rational(1, 2)));
    // the non-resonant difference tone needs bound values
    Expr h = Expr::cosine(ph(0, {{"w2", 1}, {"w3", -1}}, {{"theta2", 1}, {"theta3", -1}}));
    CHECK_THROWS(solve_forced(op, h, reg));
    reg.bind("w1", 2.3);
    reg.bind("w2", 1.0);
    reg.bind("w3", 0.7);
    reg.add("theta2", SymbolKind::Phase, 0.4);
    reg.add("theta3", SymbolKind::Phase, -0.2);
    check_residual(op, h, reg);
}

TEST_CASE("near-resonance warning") {
    ParamRegistry reg;
    reg.add("w", SymbolKind::Frequency, 1.0);
    reg.add("v", SymbolKind::Frequency, 1.0 + 5e-7);
    LinOp op({mono(1, {{"w", 2}}), mono(0), mono(1)});
    ForcedSolution s = solve_forced(op, Expr::cosine(ph(0, {{"v", 1}})), reg);
    CHECK(s.resonances.empty());
    CHECK(s.warnings.size() == 1);
}

TEST_CASE("particular residual vanishes on random forcings") {
    ParamRegistry reg;
    reg.add("A", SymbolKind::Amplitude, 0.8);
    reg.add("theta", SymbolKind::Phase, 0.3);
    std::mt19937 g(42);
    std::uniform_int_distribution<int> c(-3, 3), kk(0, 2), rr(0, 2);
    std::vector<LinOp> ops = {LinOp::from_rationals({1, 0, 1}), LinOp::from_rationals({Rational(1, 4), 0, 1}),
                              LinOp::from_rationals({0, 1, 1}), LinOp::from_rationals({0, 0, 1}),
                              LinOp::from_rationals({1, 1}), LinOp::from_rationals({0, 1})};
    for (const auto& op : ops) {
        for (int it = 0; it < 20; ++it) {
            QuasiTerm q;
            q.mono.coeff = Rational(c(g) == 0 ? 1 : c(g), 1 + kk(g));
            q.mono.factors = {{"A", 1 + kk(g)}};
            q.k = kk(g);
            int r = rr(g);
            q.rho = Rational(r == 0 ? 0 : -r);
            if (it % 2) {
                q.harm = it % 4 == 1 ? Harmonic::Cos : Harmonic::Sin;
                q.phase = ph(Rational(1 + kk(g), 2), {}, {{"theta", 1}});
            }
            check_residual(op, Expr({q}), reg);
        }
    }
}
