#include <cmath>
#include <random>

#include "doctest.h"
#include "trg/renorm.hpp"
#include "trg/varcoef.hpp"

using namespace trg;

namespace {

OdeSpec rayleigh_spec() {
    OdeSpec s;
    Component c;
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

OdeSpec mathieu_spec() {
    OdeSpec s;
    s.registry.add("a1", SymbolKind::Constant);
    Component c;
    c.op = LinOp::from_rationals({Rational(1, 4), 0, 1});
    Expr eps = s.registry.eps();
    c.pert.push_back({-(eps * s.registry.sym("a1")), {{{0, 0}, 1}}});
    c.pert.push_back({eps.scaled(Rational(-2)) * Expr::cosine({{Rational(1), {}}, {}, 0.0}), {{{0, 0}, 1}}});
    c.kernel.amplitudes = {"R"};
    c.kernel.phases = {"theta"};
    s.comps.push_back(c);
    return s;
}

struct Pipeline {
    SeriesSolution series;
    TaylorFrame frame;
    Residual res;
    FlowSystem flow;
};

Pipeline run(const OdeSpec& spec, const Policy& pol, int M = 1, const SeriesOptions& opts = {}) {
    Pipeline p;
    p.series = solve_hierarchy(spec, 1, opts);
    p.frame = reassemble(p.series, M);
    p.res = residual(p.frame, p.series.registry);
    p.flow = project(p.res, p.series, pol);
    return p;
}

// projections plus dropped terms rebuild the (pinned) residual
double ledger_gap(const Pipeline& p, const Bindings& b, double t0) {
    Expr R = p.res.first[0];
    for (const auto& [n, v] : p.flow.pins) {
        R = pin_phase(R, n, v);
        R = substitute(R, ParamRegistry::derivative_name(n), Expr());
    }
    Expr back;
    for (const auto& pe : p.flow.projections) back += pe.coefficient * pe.basis_expr;
    for (const auto& d : p.flow.ledger) back += d.term;
    return std::fabs(eval(R - back, t0, b));
}

}  // namespace

TEST_CASE("rayleigh flow and bernoulli closed form") {
    Pipeline p = run(rayleigh_spec(), Policy{});
    REQUIRE(p.flow.unresolved.empty());
    const FlowEquation* R = p.flow.find("R");
    const FlowEquation* th = p.flow.find("theta");
    REQUIRE(R);
    REQUIRE(th);
    Expr eps = Expr::symbol("eps"), A = Expr::symbol("R");
    CHECK(R->numer() == eps * (A.scaled(Rational(1, 2)) - A.pow(3).scaled(Rational(1, 8))));
    CHECK(th->numer().is_zero());
    CHECK(R->render() == "R' = (1/2)*R*eps - (1/8)*R^3*eps");

    FlowSolution sol = solve_flow(p.flow);
    CHECK(sol.find("R")->kind == FlowKind::Bernoulli);
    CHECK(sol.find("theta")->kind == FlowKind::Constant);
    const double e = 0.1, R0 = 0.5;
    FlowEvaluator ev(sol, {{"eps", e}, {"R0", R0}, {"theta0", 0.3}});
    for (double t : {0.0, 1.0, 7.5, 30.0}) {
        double logistic = std::sqrt(4.0 / (1 + (4 / (R0 * R0) - 1) * std::exp(-e * t)));
        CHECK(ev.value("R", t) == doctest::Approx(logistic).epsilon(1e-13));
        CHECK(ev.value("theta", t) == doctest::Approx(0.3));
    }
}

TEST_CASE("projection ledger is complete") {
    std::mt19937 rng(42);
    std::uniform_real_distribution<double> U(-1, 1);
    Policy whole;
    whole.name = "whole";
    whole.projection = Projection::WholeResidual;
    for (const auto& pol : {Policy{}, whole}) {
        Pipeline p = run(rayleigh_spec(), pol);
        for (int k = 0; k < 10; ++k) {
            Bindings b{{"R", U(rng)}, {"theta", U(rng)}, {"R'", U(rng)}, {"theta'", U(rng)}, {"eps", 0.2}};
            CHECK(ledger_gap(p, b, 3 * U(rng)) < 1e-12);
        }
    }
    Pipeline p = run(rayleigh_spec(), Policy{});
    // the third harmonic survives only multiplied by eps*R' or eps*theta'
    bool dropped = false;
    for (const auto& d : p.flow.ledger)
        if (d.reason == "eps-order derivative term") dropped = true;
    CHECK(dropped);
}

TEST_CASE("mathieu grouping gives the pole-aware separable flow") {
    Policy pol;
    pol.name = "paper-grouping";
    pol.projection = Projection::WholeResidual;
    pol.keep_eps_deriv = true;
    pol.pins["theta"] = 0.0;
    // printed series: homogeneous -(1/2)R cos(t/2 + theta) admixed at order 1
    SeriesOptions opts;
    opts.admixture[{0, 1}] = Expr::symbol("R").scaled(Rational(-1, 2)) *
                             Expr::cosine({{Rational(1, 2), {}}, {{"theta", 1}}, 0.0});
    Pipeline p = run(mathieu_spec(), pol, 1, opts);
    REQUIRE(p.flow.unresolved.empty());
    const FlowEquation* R = p.flow.find("R");
    REQUIRE(R);
    CHECK_FALSE(is_t_free(R->denom));
    FlowSolution sol = solve_flow(p.flow);
    REQUIRE(sol.find("R")->kind == FlowKind::Separable);
    const double e = 0.1, a1 = 0.5, R0 = 1.3;
    FlowEvaluator ev(sol, {{"eps", e}, {"a1", a1}, {"R0", R0}}, 20.0);
    for (double t : {0.5, 2.0, 3.0, 3.3, 6.0, 9.0, 10.0, 14.0, 19.0}) {
        double c = std::cos(t / 2);
        double closed = R0 * std::pow(std::fabs(c) / std::sqrt(1 - 2 * e + 2 * e * c * c), 2 * e * (1 + a1) / (1 - 2 * e));
        CHECK(std::fabs(ev.value("R", t) - closed) < 1e-8);
    }
    // the flow equation and the closed form agree pointwise
    Bindings b{{"eps", e}, {"a1", a1}};
    for (double t : {0.7, 4.0}) {
        b["R"] = ev.value("R", t);
        double h = 1e-5;
        double fd = (ev.value("R", t + h) - ev.value("R", t - h)) / (2 * h);
        CHECK(R->eval(t, b) == doctest::Approx(fd).epsilon(1e-7));
    }
}

TEST_CASE("repeated real root flow") {
    // y'' = eps*y with kernel B + A (t - t0)
    OdeSpec s;
    Component c;
    c.op = LinOp::from_rationals({0, 0, 1});
    c.pert.push_back({s.registry.eps(), {{{0, 0}, 1}}});
    s.comps.push_back(c);
    // one renormalization equation: B' = A is pure kinematics
    Pipeline p = run(s, Policy{});
    REQUIRE(p.flow.unresolved.empty());
    CHECK(p.flow.find("B")->render() == "B' = A");
    CHECK(p.flow.find("A")->held_constant);
    FlowSolution sol = solve_flow(p.flow);
    CHECK(sol.find("B")->kind == FlowKind::Linear);
    Diagnosis d = diagnose(s, p.series, p.flow, &sol);
    CHECK(d.verdict == Verdict::TrivialFlow);
    // two equations restate the jet form B' = A, A' = eps*B
    Pipeline p2 = run(s, Policy{}, 2);
    REQUIRE(p2.flow.unresolved.empty());
    CHECK(p2.flow.find("A")->render() == "A' = B*eps");
    FlowSolution sol2 = solve_flow(p2.flow);
    Diagnosis d2 = diagnose(s, p2.series, p2.flow, &sol2);
    CHECK(d2.verdict == Verdict::Cyclic);
    CHECK(d2.numeric_check < 1e-12);
}

TEST_CASE("trivial flow without perturbation coupling") {
    OdeSpec s;
    Component c;
    c.op = LinOp::from_rationals({0, 0, 1});
    s.comps.push_back(c);
    Pipeline p = run(s, Policy{});
    FlowSolution sol = solve_flow(p.flow);
    Diagnosis d = diagnose(s, p.series, p.flow, &sol);
    // y'' = 0 restates itself exactly
    CHECK(d.verdict == Verdict::Cyclic);
}

TEST_CASE("series quotient and monomial division") {
    Expr eps = Expr::symbol("eps"), x = Expr::symbol("x");
    auto q = series_quotient(x, Expr(1) + eps, 2);
    REQUIRE(q);
    CHECK(*q == x - x * eps + x * eps * eps);
    CHECK(divide_monomial(x * x + x, x.scaled(Rational(2))) == x.scaled(Rational(1, 2)) + Expr(Rational(1, 2)));
    CHECK_THROWS(divide_monomial(x, x + eps));
}

TEST_CASE("real roots and primitive polynomials") {
    auto r = real_roots({-1, 3, 1});  // A^2 + 3A - 1
    REQUIRE(r.size() == 2);
    CHECK(r[1] == doctest::Approx((-3 + std::sqrt(13.0)) / 2));
    auto c = real_roots({-6, 11, -6, 1});
    REQUIRE(c.size() == 3);
    CHECK(c[0] == doctest::Approx(1));
    CHECK(c[2] == doctest::Approx(3));
    CHECK(real_roots({1, 0, 1}).empty());
    Expr A = Expr::symbol("A"), b = Expr::symbol("beta");
    Expr e = (A.scaled(Rational(3, 4)) * b * A * A + A.scaled(Rational(1, 2))) * A;
    CHECK(primitive_polynomial(-e, "A") == A * A * b.scaled(Rational(3)) + Expr(2));
}

TEST_CASE("fit constants from a slope condition") {
    // Rayleigh with a slope condition y'(0) = 0.5
    Pipeline p = run(rayleigh_spec(), Policy{});
    FlowSolution sol = solve_flow(p.flow);
    RenormalizedSolution rs = assemble(p.frame, sol, {"y"});
    Bindings known{{"eps", 0.1}, {"theta0", 0.0}};
    std::vector<Condition> conds{{Condition::Kind::Value, 0, 1, 0.0, 0.5, {}}};
    FitResult fr = fit_constants(rs, conds, known);
    REQUIRE(fr.ok);
    Bindings all = known;
    all["R0"] = fr.values.at("R0");
    SolutionEvaluator ev(rs, all);
    CHECK(ev.derivative(0, 0.0) == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("first-order variable-coefficient route") {
    // Lighthill in t = 1/x: y' = (2t+1)/t^2 y - eps t y y'
    Fn t = Fn::var();
    FirstOrderSpec s;
    s.p = (Fn::constant(2) * t + Fn::constant(1)) / t.pow(2);
    s.f = Fn::constant(0);
    s.q = t;
    FirstOrderRun run = renormalize_first_order(s, Policy{});
    for (double x : {0.5, 1.0, 3.0})
        CHECK(run.kernel.phi.eval(x, {}) == doctest::Approx(x * x * std::exp(-1 / x)).epsilon(1e-14));
    const FlowDescriptor* d = run.solution.find("A");
    REQUIRE(d);
    CHECK(d->kind == FlowKind::Separable);
    CHECK(d->n == 2);
    const double e = 0.05, c0 = 1.2;
    FlowEvaluator ev(run.solution, {{"eps", e}, {"c0", c0}}, 6.0);
    auto w = [](double r) { return r * (2 * r + 1) * std::exp(-1 / r); };
    for (double x : {0.5, 2.0, 5.0}) {
        double closed = 1 / (e * oracle::quad(w, 0, x) + c0);
        CHECK(ev.value("A", x) == doctest::Approx(closed).epsilon(1e-10));
    }
    // a forcing term survives unless the policy drops it
    s.f = -(Fn::constant(2) + t) / t.pow(3);
    s.p = Fn::constant(1);
    s.q = t.pow(2);
    FirstOrderRun full = renormalize_first_order(s, Policy{});
    CHECK(full.flow.eqs[0].parts.size() == 3);
    CHECK(full.solution.find("A")->kind == FlowKind::Numeric);
    Policy drop;
    drop.name = "paper-grouping";
    drop.drop_inhomogeneous = true;
    FirstOrderRun grouped = renormalize_first_order(s, drop);
    CHECK(grouped.flow.eqs[0].parts.size() == 1);
    CHECK(grouped.flow.ledger.size() == 2);
    CHECK(grouped.solution.find("A")->kind == FlowKind::Separable);
}
