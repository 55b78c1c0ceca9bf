#include <cmath>

#include "doctest.h"
#include "trg/perturb.hpp"

using namespace trg;

namespace {

OdeSpec rayleigh_spec() {
    OdeSpec s;
    Component c;
    c.name = "y";
    c.op = LinOp::from_rationals({1, 0, 1});
    Expr eps = s.registry.eps();
    c.pert.push_back({eps, {{{0, 1}, 1}}});
    c.pert.push_back({eps.scaled(Rational(-1, 3)), {{{0, 1}, 3}}});
    c.kernel.use_sin = true;
    c.kernel.amplitudes = {"R"};
    c.kernel.phases = {"theta"};
    s.comps.push_back(c);
    return s;
}

PhaseForm ph(int n) { return {{Rational(n), {}}, {{"theta", n}}, 0.0}; }

}  // namespace

TEST_CASE("hierarchy right sides") {
    OdeSpec s = rayleigh_spec();
    Hierarchy h = build_hierarchy(s, 2);
    CHECK(h.render(s, 1, 0) == "y0' - (1/3)*y0'^3");
    CHECK(h.render(s, 2, 0) == "y1' - y0'^2*y1'");
}

TEST_CASE("rayleigh first-order solution") {
    OdeSpec s = rayleigh_spec();
    SeriesSolution sol = solve_hierarchy(s, 1);
    Expr R = Expr::symbol("R");
    Expr expect = (R.scaled(Rational(1, 2)) - R.pow(3).scaled(Rational(1, 8))) * Expr::sigma(1) * Expr::sine(ph(1)) +
                  R.pow(3).scaled(Rational(1, 96)) * Expr::cosine(ph(3));
    CHECK(sol.y[0][1] == expect);
    CHECK(sol.params == std::vector<std::string>{"R", "theta"});
    TaylorFrame f = reassemble(sol, 1);
    Bindings b{{"R", 0.7}, {"theta", 0.2}, {kEps, 0.1}, {kT0, 1.1}};
    // generalized identity dY0/dt0 (parameters frozen) - Y1 + S1 = 0
    Expr id = diff_t(f.Y[0][0]) - f.Y[0][1] + f.S1[0];
    CHECK(std::fabs(eval(id, 1.1, b)) < 1e-13);
    CHECK_FALSE(f.S1[0].is_zero());
}

TEST_CASE("secular-free case satisfies the strict identity") {
    OdeSpec s;
    Component c;
    c.op = LinOp::from_rationals({1, 0, 1});
    c.pert.push_back({s.registry.eps(), {{{0, 0}, 2}}});  // y^2: no resonance
    s.comps.push_back(c);
    SeriesSolution sol = solve_hierarchy(s, 1);
    TaylorFrame f = reassemble(sol, 1);
    CHECK(f.S1[0].is_zero());
    Bindings b{{"A", 0.7}, {"theta", 0.2}, {kEps, 0.1}, {kT0, 0.4}};
    CHECK(std::fabs(eval(diff_t(f.Y[0][0]) - f.Y[0][1], 0.4, b)) < 1e-13);
}

TEST_CASE("zero nonlinearity leaves pure kernel") {
    OdeSpec s;
    Component c;
    c.op = LinOp::from_rationals({1, 0, 1});
    s.comps.push_back(c);
    SeriesSolution sol = solve_hierarchy(s, 2);
    CHECK(sol.y[0][1].is_zero());
    CHECK(sol.y[0][2].is_zero());
}

TEST_CASE("polynomial kernel names and order-0 forcing") {
    OdeSpec s;
    Component c;
    c.op = LinOp::from_rationals({0, 1});
    c.forcing0 = Expr(1);
    c.pert.push_back({s.registry.eps().scaled(Rational(-1)), {{{0, 0}, 2}}});
    s.comps.push_back(c);
    SeriesSolution sol = solve_hierarchy(s, 1);
    Expr A = Expr::symbol("A");
    CHECK(sol.y[0][0] == A + Expr::sigma(1));
    CHECK(sol.y[0][1] == -(A * A * Expr::sigma(1) + A * Expr::sigma(2) + Expr::sigma(3).scaled(Rational(1, 3))));
}

TEST_CASE("unperturbed nonlinearity is rejected") {
    OdeSpec s;
    Component c;
    c.op = LinOp::from_rationals({1, 0, 1});
    c.pert.push_back({Expr(1), {{{0, 0}, 3}}});
    s.comps.push_back(c);
    CHECK_THROWS(build_hierarchy(s, 1));
}
