#include <cmath>

#include "doctest.h"
#include "trg/htr.hpp"

using namespace trg;

namespace {

HomotopySpec tanh_homotopy() {
    // y' - 1 + y^2 = 0 with L = D + 1 and f_L = 1
    HomotopySpec h;
    h.target = {{Expr(1), {{{0, 1}, 1}}}, {Expr(-1), {}}, {Expr(1), {{{0, 0}, 2}}}};
    h.op = LinOp::from_rationals({1, 1});
    h.forcing = Expr(1);
    h.kernel.constants = {"A"};
    return h;
}

HomotopySpec blasius_homotopy() {
    // y''' + y y'' = 0 with L = D^3 + D^2
    HomotopySpec h;
    h.target = {{Expr(1), {{{0, 3}, 1}}}, {Expr(1), {{{0, 0}, 1}, {{0, 2}, 1}}}};
    h.op = LinOp::from_rationals({0, 0, 1, 1});
    h.kernel.constants = {"B", "C", "A"};
    return h;
}

RenormalizedSolution run(const OdeSpec& spec, int M = 1) {
    SeriesSolution series = solve_hierarchy(spec, 1);
    TaylorFrame frame = reassemble(series, M);
    Residual res = residual(frame, series.registry);
    FlowSystem fs = project(res, series, Policy{});
    return assemble(frame, solve_flow(fs), {"y"});
}

}  // namespace

TEST_CASE("homotopy right side") {
    OdeSpec s = build_homotopy(tanh_homotopy());
    REQUIRE(s.comps.size() == 1);
    const Component& c = s.comps[0];
    Expr eps = Expr::symbol("eps");
    // eps*(y' + y - 1) - eps*(y' - 1 + y^2) = eps*y - eps*y^2
    REQUIRE(c.pert.size() == 2);
    for (const auto& t : c.pert) {
        REQUIRE(t.vars.size() == 1);
        CHECK(t.vars[0].first.deriv == 0);
        if (t.vars[0].second == 1) CHECK(t.coeff == eps);
        if (t.vars[0].second == 2) CHECK(t.coeff == -eps);
    }
    OdeSpec b = build_homotopy(blasius_homotopy());
    CHECK(b.comps[0].pert.size() == 2);
    HomotopySpec bad = blasius_homotopy();
    bad.op = LinOp::from_rationals({1, 1});
    CHECK_THROWS(build_homotopy(bad));
}

TEST_CASE("homotopy endpoints") {
    // at eps = 1 the embedding is the target; at eps = 0 it is L(y) = f_L
    for (const HomotopySpec& h : {tanh_homotopy(), blasius_homotopy()}) {
        OdeSpec s = build_homotopy(h);
        const Component& c = s.comps[0];
        std::vector<double> vals{0.3, -0.7, 1.1, 0.4};
        for (double e : {0.0, 1.0}) {
            Bindings b{{"eps", e}};
            double lhs = 0;
            for (int j = 0; j <= c.op.order(); ++j) lhs += eval(Expr::from_mono(c.op.coeffs()[j]), 0.0, b) * vals[j];
            double pert = 0;
            for (const auto& t : c.pert) {
                double v = eval(t.coeff, 0.0, b);
                for (const auto& [var, p] : t.vars) v *= std::pow(vals[var.deriv], p);
                pert += v;
            }
            double gap = lhs - eval(c.forcing0, 0.0, b) - pert;
            if (e == 1.0) CHECK(std::fabs(gap - eval_target(h, 0.0, vals, b)) < 1e-12);
            else CHECK(std::fabs(pert) < 1e-12);
        }
    }
}

TEST_CASE("tanh homotopy flow and finalize") {
    OdeSpec s = build_homotopy(tanh_homotopy());
    RenormalizedSolution rs = run(s);
    const FlowEquation* A = rs.flow.system.find("A");
    REQUIRE(A);
    CHECK(A->render() == "A' = -A*eps");
    RenormalizedSolution fin = finalize(rs);
    SolutionEvaluator ev(fin, {{"A0", 0.4}});
    for (double t : {0.0, 0.5, 2.0}) {
        double x = std::exp(-2 * t);
        CHECK(ev.value(0, t) == doctest::Approx(1 + 0.4 * x + 0.16 * x * x).epsilon(1e-12));
    }
}
