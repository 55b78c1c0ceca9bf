#include <cmath>
#include <random>

#include "catalog_detail.hpp"
#include "catalog_golden.hpp"

namespace trg::detail {

namespace {

constexpr const char* kRayleigh = "kernel y: sin (R, theta)\ny'' + y = eps*(y' - (1/3)*y'^3)\n";
constexpr const char* kMathieu = "param a1=0\nkernel y: (R, theta)\ny'' + (1/4)*y = -eps*a1*y - 2*eps*cos(t)*y\n";
constexpr const char* kLinear2 = "kernel y: sin (R, theta)\ny'' + y = eps*y'\n";
constexpr const char* kRiccati = "y' = eps*(1 - y^2)\n";
constexpr const char* kCubic = "kernel y: const A B\ny'' = eps*(y^2 - y^3)\n";
constexpr const char* kTanhLimit = "kernel y: const C\ny' = 1 - eps*y^2\n";

std::string three_wave_text(double w1, double w2, double w3, const std::string& relation) {
    std::string s = "freq w1=" + fmt(w1) + ", w2=" + fmt(w2) + ", w3=" + fmt(w3) + "\n";
    if (!relation.empty()) s += "relation " + relation + "\n";
    s += "unknown x, z\n"
         "kernel x: (A1, theta1)\nkernel y: (A2, theta2)\nkernel z: (A3, theta3)\n"
         "x'' + w1^2*x = -eps*y*z\ny'' + w2^2*y = -eps*x*z\nz'' + w3^2*z = -eps*x*y\n";
    return s;
}

// derived thresholds only apply at the eps they were measured for
void add_pinned(EntryReport& rep, bool at_pin, const std::string& name, double value, double threshold,
                const std::string& detail) {
    if (at_pin)
        rep.add(name, value <= threshold, value, threshold, detail);
    else
        rep.inform(name, value <= threshold, value, threshold, detail + "; threshold pinned at the default eps");
}

double flow_value(const FlowSolution& sol, const Bindings& b, const std::string& p, double t, double horizon) {
    FlowEvaluator ev(sol, b, horizon);
    return ev.value(p, t);
}

bool notes_contain(const EntryReport& rep, const std::string& s) {
    for (const auto& n : rep.notes)
        if (n.find(s) != std::string::npos) return true;
    return false;
}

EntryReport run_rayleigh(const RunOptions& o) {
    EntryReport rep;
    const double eps = o.eps.value_or(0.05);
    ParsedSpec ps = parse_equation(kRayleigh);
    TrRun r = run_tr(ps.ode, tr_config(o, 1, 1, choose_policy(o, "fundamental", Policy{})));
    record(rep, r);
    const ParamRegistry& reg = r.flow.registry;
    Expr e = reg.eps(), R = reg.sym("R");

    const FlowEquation* fR = r.flow.find("R");
    const FlowEquation* fth = r.flow.find("theta");
    Expr want = (e * R).scaled(Rational(1, 2)) - (e * R.pow(3)).scaled(Rational(1, 8));
    bool exact = fR && fR->denom == Expr(1) && fR->numer() == want && fth && fth->numer().is_zero();
    rep.add("flow R' = eps*R/2 - eps*R^3/8, theta' = 0 (exact)", exact, exact ? 0 : 1, 0,
            fR ? fR->render() : "no R equation");

    std::mt19937 rng(o.seed);
    auto samples = random_bindings(rng, {{"R", 0.1, 3.0}, {"theta", -3.0, 3.0}, {"eps", 0.0, 0.3}, {"t", 0.0, 20.0}}, 50);
    double gap = sampled_gap(
        [&](const Bindings& b) { return eval(r.result.Y0[0], b.at("t"), b); },
        [&](const Bindings& b) {
            double p = b.at("t") + b.at("theta"), Rv = b.at("R");
            return Rv * std::sin(p) + b.at("eps") * Rv * Rv * Rv / 96 * std::cos(3 * p);
        },
        samples);
    rep.add("solution structure R*sin(t+theta) + eps*R^3/96*cos(3t+3theta)", gap <= 1e-10, gap, 1e-10,
            "numeric at 50 random bindings");

    const FlowDescriptor* dR = r.sol.find("R");
    rep.add("R flow solved in closed form (Bernoulli)", dR && dR->kind == FlowKind::Bernoulli, 0, 0,
            dR ? flow_kind_name(dR->kind) : "missing");

    // closed form tends to the fixed point 2
    double worst_limit = 0, worst_num = 0, worst_logistic = 0;
    for (double R0 : {0.1, 0.5, 1.0, 2.0, 3.0, 3.9}) {
        Bindings b{{"eps", eps}, {"R0", R0}, {"theta0", 0.0}};
        FlowEvaluator ev(r.sol, b, 100.0 / eps);
        worst_limit = std::max(worst_limit, std::fabs(ev.value("R", 60.0 / eps) - 2.0));
        for (double t : oracle::linspace(0, 5 / eps, 11)) {
            double logistic = 2 / std::sqrt(1 + (4 / (R0 * R0) - 1) * std::exp(-eps * t));
            worst_logistic = std::max(worst_logistic, std::fabs(ev.value("R", t) - logistic));
        }
        // numeric integration of the flow equation itself
        auto rhs = [&](double t, const oracle::State& y, oracle::State& dy) {
            Bindings bb{{"eps", eps}, {"R", y[0]}};
            dy[0] = fR->eval(t, bb);
        };
        oracle::IntegrateOptions io;
        io.rtol = 1e-12;
        io.atol = 1e-14;
        auto sol = oracle::integrate(rhs, 0.0, {R0}, 10 / eps, io);
        for (double t : oracle::linspace(0, 10 / eps, 21))
            worst_num = std::max(worst_num, std::fabs(sol.at(t, 0) - ev.value("R", t)));
    }
    rep.add("closed form R(t) -> 2 for R(0) in (0, 4)", worst_limit <= 1e-9, worst_limit, 1e-9, "at eps*t = 60");
    Bindings fp{{"eps", eps}, {"R", 2.0}};
    double fixed = fR ? std::fabs(fR->eval(0, fp)) : 1;
    rep.add("R = 2 is a fixed point of the flow", fixed <= 1e-14, fixed, 1e-14);
    rep.add("numeric flow integration agrees with the closed form", worst_num <= 1e-6, worst_num, 1e-6);
    rep.inform("closed form equals the logistic R^2 = 4/(1 + (4/R0^2 - 1) e^{-eps t})", worst_logistic <= 1e-10,
               worst_logistic, 1e-10, "the printed amplitude formula drops R0^2");

    // uniform validity on [0, 2/eps] from R0 = 0.5, theta0 = 0
    const double T = o.horizon.value_or(2 / eps), R0 = 0.5;
    Bindings b{{"eps", eps}, {"R0", R0}, {"theta0", 0.0}};
    SolutionEvaluator ev(r.result, b, T + 1);
    auto ref = reference_from(ps.ode, {{"eps", eps}}, asymptotic_state(ps.ode, ev, 0.0), T, o);
    auto ts = oracle::linspace(0, T, 4001);
    rep.errors = oracle::compare([&](double t) { return ev.value(0, t); }, [&](double t) { return ref.at(t, 0); }, ts);
    rep.add("sup |y_TR - y_ref| on [0, 2/eps] <= 5 eps", rep.errors->sup_abs <= 5 * eps, rep.errors->sup_abs, 5 * eps,
            "R0 = 0.5, theta0 = 0");
    Bindings nb{{"eps", eps}, {"R", R0}, {"theta", 0.0}};
    double naive_w = 0, tr_w = 0;
    for (double t : oracle::linspace(T - 2 * M_PI, T, 801)) {
        naive_w = std::max(naive_w, std::fabs(naive_series(r.series, 0, t, nb) - ref.at(t, 0)));
        tr_w = std::max(tr_w, std::fabs(ev.value(0, t) - ref.at(t, 0)));
    }
    double ratio = naive_w / std::max(tr_w, 1e-300);
    rep.add("naive order-1 error exceeds the renormalized error by 5x at t = 2/eps", ratio >= 5, ratio, 5,
            "sup errors over the last period: naive " + fmt(naive_w) + ", renormalized " + fmt(tr_w));
    return rep;
}

Policy mathieu_paper_policy() {
    Policy pol;
    pol.name = "paper-grouping";
    pol.projection = Projection::WholeResidual;
    pol.keep_eps_deriv = true;
    pol.pins["theta"] = 0.0;
    return pol;
}

EntryReport run_mathieu(const RunOptions& o) {
    EntryReport rep;
    const double eps = o.eps.value_or(0.05);
    ParsedSpec ps = parse_equation(kMathieu);
    TrConfig cfg = tr_config(o, 1, 1, choose_policy(o, "paper-grouping", mathieu_paper_policy()));
    // the printed series carries the homogeneous piece -(1/2) R cos(t/2 + theta) at order 1
    cfg.series.admixture[{0, 1}] =
        Expr::symbol("R").scaled(Rational(-1, 2)) * Expr::cosine({{Rational(1, 2), {}}, {{"theta", 1}}, 0.0});
    TrRun r = run_tr(ps.ode, cfg);
    record(rep, r);

    std::mt19937 rng(o.seed);
    auto samples = random_bindings(
        rng, {{"R", 0.2, 2.0}, {"theta", -3.0, 3.0}, {"eps", 0.0, 0.2}, {"a1", -0.5, 1.0}, {"t", 0.0, 20.0}, {"t0", 0.0, 20.0}},
        50);
    double series_gap = sampled_gap(
        [&](const Bindings& b) {
            return eval(r.series.y[0][0], b.at("t"), b) + b.at("eps") * eval(r.series.y[0][1], b.at("t"), b);
        },
        [&](const Bindings& b) {
            double t = b.at("t"), th = b.at("theta"), s = t - b.at("t0"), R = b.at("R");
            return R * std::cos(t / 2 + th) +
                   b.at("eps") * R *
                       (-0.5 * std::cos(t / 2 + th) + 0.5 * std::cos(3 * t / 2 + th) - b.at("a1") * std::sin(t / 2 + th) * s -
                        std::sin(t / 2 - th) * s);
        },
        samples);
    rep.add("perturbation series matches the printed order-1 solution", series_gap <= 1e-8, series_gap, 1e-8,
            "numeric at 50 random bindings");

    bool pinned = r.flow.pins.count("theta") && r.flow.pins.at("theta") == 0.0 && !r.flow.find("theta");
    rep.add("separation choice theta = 0", pinned, pinned ? 0 : 1, 0);

    const FlowEquation* fR = r.flow.find("R");
    auto samples2 = random_bindings(rng, {{"R", 0.2, 2.0}, {"eps", 0.0, 0.2}, {"a1", -0.5, 1.0}, {"t", 0.0, 20.0}}, 50);
    double eq_gap = fR ? sampled_gap([&](const Bindings& b) { return fR->eval(b.at("t"), b); },
                                     [&](const Bindings& b) {
                                         double t = b.at("t"), e = b.at("eps");
                                         double lhs = std::cos(t / 2) + e / 2 * std::cos(3 * t / 2) - e / 2 * std::cos(t / 2);
                                         return -(b.at("a1") + 1) * e * b.at("R") * std::sin(t / 2) / lhs;
                                     },
                                     samples2)
                       : 1.0;
    rep.add("amplitude equation {cos(t/2) + (eps/2)cos(3t/2) - (eps/2)cos(t/2)} R' = -(a1+1) eps R sin(t/2)",
            eq_gap <= 1e-8, eq_gap, 1e-8, fR ? fR->render() : "no R equation");

    // the printed closed form R(t) against the pipeline's R(t)
    auto samples3 = random_bindings(rng, {{"R0", 0.2, 2.0}, {"eps", 0.01, 0.2}, {"a1", -0.5, 1.0}, {"t", 0.0, 3.0}}, 30);
    auto engine_R = [&](const Bindings& b) {
        return flow_value(r.sol, bindings_with(r.flow.registry, b), "R", b.at("t"), 20.0);
    };
    double closed_gap = sampled_gap(engine_R,
                                    [&](const Bindings& b) {
                                        double t = b.at("t"), e = b.at("eps"), c = std::cos(t / 2), k = 2 * e / (1 - 2 * e);
                                        return b.at("R0") * std::pow(c / (1 + k * c), k * (1 + b.at("a1")));
                                    },
                                    samples3);
    rep.add("R(t) matches the printed closed form", closed_gap <= 1e-8, closed_gap, 1e-8,
            "the printed form does not solve the printed amplitude equation (R(0) != R0)");
    double exact_gap = sampled_gap(engine_R,
                                   [&](const Bindings& b) {
                                       double t = b.at("t"), e = b.at("eps"), c = std::cos(t / 2);
                                       return b.at("R0") * std::pow(std::fabs(c) / std::sqrt(1 - 2 * e + 2 * e * c * c),
                                                                    2 * e * (1 + b.at("a1")) / (1 - 2 * e));
                                   },
                                   samples3);
    rep.inform("R(t) matches the exact integral of the amplitude equation", exact_gap <= 1e-8, exact_gap, 1e-8,
               "R0 (|c|/sqrt(1 - 2 eps + 2 eps c^2))^(2 eps (1+a1)/(1-2 eps)), c = cos(t/2)");

    // oracle on [0, 20], a1 = 0, R0 = 1 with matched initial data
    const double T = o.horizon.value_or(20.0);
    Bindings b = bindings_with(r.flow.registry, {{"eps", eps}, {"R0", 1.0}, {"theta0", 0.0}});
    SolutionEvaluator ev(r.result, b, T + 1);
    auto ref = reference_from(ps.ode, b, asymptotic_state(ps.ode, ev, 0.0), T, o);
    rep.errors = oracle::compare([&](double t) { return ev.value(0, t); }, [&](double t) { return ref.at(t, 0); },
                                 oracle::linspace(0, T, 4001));
    double thr = golden::mathieu_sup * golden::margin;
    add_pinned(rep, !o.eps && !o.horizon, "sup |y_TR - y_ref| on [0, 20], eps = 0.05, a1 = 0", rep.errors->sup_abs, thr,
               "a1 = 0 sits inside the first instability tongue");
    return rep;
}

EntryReport run_linear2(const RunOptions& o) {
    EntryReport rep;
    const double eps = o.eps.value_or(0.1);
    ParsedSpec ps = parse_equation(kLinear2);
    TrRun r = run_tr(ps.ode, tr_config(o, 2, 1, choose_policy(o, "fundamental", Policy{})));
    record(rep, r);
    const ParamRegistry& reg = r.flow.registry;
    Expr e = reg.eps();
    const FlowEquation* fR = r.flow.find("R");
    const FlowEquation* fth = r.flow.find("theta");
    bool amp = fR && fR->denom == Expr(1) && fR->numer() == (e * reg.sym("R")).scaled(Rational(1, 2));
    rep.add("flow R' = eps*R/2 (exact)", amp, amp ? 0 : 1, 0, fR ? fR->render() : "missing");
    bool ph = fth && fth->denom == Expr(1) && fth->numer() == e.pow(2).scaled(Rational(-1, 8));
    rep.add("flow theta' = -eps^2/8 (second order only)", ph, ph ? 0 : 1, 0, fth ? fth->render() : "missing");

    Bindings b = {{"eps", eps}, {"R0", 1.0}, {"theta0", 0.0}};
    FlowEvaluator fe(r.sol, b, 50);
    double w_tr = 1 + (fe.value("theta", 1.0) - fe.value("theta", 0.0));
    double w_exact = std::sqrt(1 - eps * eps / 4);
    double dw = std::fabs(w_tr - w_exact);
    rep.add("frequency 1 + theta' matches sqrt(1 - eps^2/4) to O(eps^4)", dw <= std::pow(eps, 4), dw, std::pow(eps, 4));
    double growth = 0;
    for (double t : oracle::linspace(0, 20, 11)) growth = std::max(growth, rel_err(fe.value("R", t), std::exp(eps * t / 2)));
    rep.add("amplitude grows like exp(eps t/2)", growth <= 1e-12, growth, 1e-12);

    const double T = o.horizon.value_or(2 / eps);
    SolutionEvaluator ev(r.result, b, T + 1);
    auto ref = reference_from(ps.ode, b, asymptotic_state(ps.ode, ev, 0.0), T, o);
    rep.errors = oracle::compare([&](double t) { return ev.value(0, t); }, [&](double t) { return ref.at(t, 0); },
                                 oracle::linspace(0, T, 4001));
    add_pinned(rep, !o.eps && !o.horizon && !o.order_k, "sup |y_TR - y_ref| on [0, 2/eps], eps = 0.1", rep.errors->sup_abs,
               golden::lin_example2_sup * golden::margin, "R0 = 1, theta0 = 0");

    // printed variants, kept for reference
    double measured = measured_frequency(ref, 0, 0, T);
    double printed1 = 2 + eps / 2 - 3 * eps * eps / 8;
    double printed2 = std::sqrt(1 - eps - eps * eps);
    rep.inform("printed one-equation frequency 2 + eps/2 - 3eps^2/8", rel_err(printed1, measured) <= 1e-3,
               rel_err(printed1, measured), 1e-3, "measured " + fmt(measured));
    rep.inform("printed two-equation frequency sqrt(1 - eps - eps^2)", rel_err(printed2, measured) <= 1e-3,
               rel_err(printed2, measured), 1e-3, "measured " + fmt(measured));
    return rep;
}

struct ThreeWave {
    const char* id;
    double w1, w2, w3;
    const char* relation;
    int s2, s3;  // constraint theta1 + s2 theta2 + s3 theta3 = 0
};

EntryReport run_three_wave(const ThreeWave& tw, const RunOptions& o) {
    EntryReport rep;
    const bool resonant = tw.relation[0] != '\0';
    const double eps = o.eps.value_or(resonant ? 0.01 : 0.05);
    ParsedSpec ps = parse_equation(three_wave_text(tw.w1, tw.w2, tw.w3, tw.relation));
    Policy paper;
    paper.name = "paper-grouping";
    if (resonant) paper.constraints.push_back({{"theta1", 1}, {"theta2", tw.s2}, {"theta3", tw.s3}});
    TrRun r = run_tr(ps.ode, tr_config(o, 1, 1, choose_policy(o, "paper-grouping", paper)));
    record(rep, r);
    const ParamRegistry& reg = r.flow.registry;
    Bindings base = bindings_with(reg, {{"eps", eps}});
    for (const char* n : {"A1_0", "A2_0", "A3_0"}) base[n] = 1.0;
    for (const char* n : {"theta1_0", "theta2_0", "theta3_0"}) base[n] = 0.0;

    if (!resonant) {
        int sec = 0;
        for (const auto& c : r.series.y) sec = std::max(sec, max_secular(c[1]));
        rep.add("no secular terms at order 1", sec == 0, sec, 0);
        bool still = true;
        for (const auto& fe : r.flow.eqs) still = still && fe.numer().is_zero();
        rep.add("all amplitudes and phases constant", still, still ? 0 : 1, 0);
        std::mt19937 rng(o.seed);
        auto samples = random_bindings(rng,
                                       {{"A1", 0.2, 2.0}, {"A2", 0.2, 2.0}, {"A3", 0.2, 2.0}, {"theta1", -3.0, 3.0},
                                        {"theta2", -3.0, 3.0}, {"theta3", -3.0, 3.0}, {"eps", 0.0, 0.2}, {"t", 0.0, 20.0}},
                                       30, reg.bindings());
        double w[3] = {tw.w1, tw.w2, tw.w3};
        double worst = 0;
        for (int c = 0; c < 3; ++c) {
            int a = (c + 1) % 3, bb = (c + 2) % 3;
            if (a > bb) std::swap(a, bb);
            std::string Ai = "A" + std::to_string(c + 1), Aa = "A" + std::to_string(a + 1), Ab = "A" + std::to_string(bb + 1);
            std::string ti = "theta" + std::to_string(c + 1), ta = "theta" + std::to_string(a + 1),
                        tb = "theta" + std::to_string(bb + 1);
            worst = std::max(worst, sampled_gap([&](const Bindings& s) { return eval(r.result.Y0[c], s.at("t"), s); },
                                                [&](const Bindings& s) {
                                                    double t = s.at("t");
                                                    double sp = w[a] + w[bb], sm = w[a] - w[bb];
                                                    return s.at(Ai) * std::cos(w[c] * t + s.at(ti)) -
                                                           s.at("eps") * s.at(Aa) * s.at(Ab) / 2 *
                                                               (std::cos(sp * t + s.at(ta) + s.at(tb)) / (w[c] * w[c] - sp * sp) +
                                                                std::cos(sm * t + s.at(ta) - s.at(tb)) / (w[c] * w[c] - sm * sm));
                                                },
                                                samples));
        }
        rep.add("asymptotic solution matches the printed nonresonant formulas", worst <= 1e-10, worst, 1e-10,
                "numeric at 30 random bindings");
        const double T = o.horizon.value_or(20.0);
        SolutionEvaluator ev(r.result, base, T + 1);
        auto ref = reference_from(ps.ode, base, asymptotic_state(ps.ode, ev, 0.0), T, o);
        double sup = 0;
        for (int c = 0; c < 3; ++c) {
            auto er = oracle::compare([&](double t) { return ev.value(c, t); },
                                      [&](double t) { return ref.at(t, state_offset(ps.ode, c)); }, oracle::linspace(0, T, 4001));
            if (c == 0) rep.errors = er;
            sup = std::max(sup, er.sup_abs);
        }
        add_pinned(rep, !o.eps && !o.horizon, "sup error of x, y, z on [0, 20], eps = 0.05", sup,
                   golden::three_wave_nonres_sup * golden::margin, "unit amplitudes, zero phases");
        return rep;
    }

    // resonant: theta_i' = eps A_j A_k / (4 A_i w_i), A_i' = 0
    bool flows = true;
    std::string detail;
    for (int c = 1; c <= 3; ++c) {
        std::string i = std::to_string(c), j = std::to_string(c % 3 + 1), k = std::to_string((c + 1) % 3 + 1);
        const FlowEquation* fa = r.flow.find("A" + i);
        const FlowEquation* ft = r.flow.find("theta" + i);
        Expr want = (reg.eps() * reg.sym("A" + i, -1) * reg.sym("A" + j) * reg.sym("A" + k) * reg.sym("w" + i, -1))
                        .scaled(Rational(1, 4));
        bool ok = fa && fa->numer().is_zero() && ft && ft->denom == Expr(1) && ft->numer() == want;
        flows = flows && ok;
        if (ft) detail += ft->render() + "; ";
    }
    rep.add("phase flows theta_i' = eps A_j A_k/(4 A_i w_i), amplitudes constant (exact)", flows, flows ? 0 : 1, 0, detail);

    FlowEvaluator fe(r.sol, base, 10);
    double predicted = tw.w1 + fe.value("theta1", 1.0) - fe.value("theta1", 0.0);
    double closed = tw.w1 + eps / (4 * tw.w1);
    rep.add("predicted x-frequency w1 + eps/(4 w1) at unit amplitudes", std::fabs(predicted - closed) <= 1e-12,
            std::fabs(predicted - closed), 1e-12, "predicted " + fmt(predicted));

    // x = y = z = 1 at rest, as in the independent script
    const double T = o.horizon.value_or(400.0);
    SolutionEvaluator ev(r.result, base, T + 1);
    auto ref = reference_from(ps.ode, base, {1.0, 0.0, 1.0, 0.0, 1.0, 0.0}, T, o);
    double measured = measured_frequency(ref, 0, 0, T);
    double target = tw.w1 == 2.0 ? 2 + eps / 8 : predicted;
    std::string what = tw.w1 == 2.0 ? "2 + eps/8" : "the predicted x-frequency";
    rep.add("measured x-frequency equals " + what + " within 1e-3", rel_err(measured, target) <= 1e-3,
            rel_err(measured, target), 1e-3, "measured " + fmt(measured) + ", predicted " + fmt(target));
    double gold = tw.w1 == 2.0 ? golden::three_wave_sum_freq : golden::three_wave_diff_freq;
    if (!o.eps && !o.horizon)
        rep.inform("measured frequency agrees with the independent script", rel_err(measured, gold) <= 1e-5,
                   rel_err(measured, gold), 1e-5, "script value " + fmt(gold));
    rep.errors = oracle::compare([&](double t) { return ev.value(0, t); }, [&](double t) { return ref.at(t, 0); },
                                 oracle::linspace(0, std::min(T, 100.0), 2001));
    // the printed phase relation is not an invariant of the flow
    double drift = (fe.value("theta1", 1.0) - fe.value("theta1", 0.0)) +
                   tw.s2 * (fe.value("theta2", 1.0) - fe.value("theta2", 0.0)) +
                   tw.s3 * (fe.value("theta3", 1.0) - fe.value("theta3", 0.0));
    rep.inform("printed phase relation preserved by the flow", std::fabs(drift) <= 1e-12, std::fabs(drift), 1e-12,
               "rate of theta1 + s2 theta2 + s3 theta3");
    return rep;
}

EntryReport run_riccati(const RunOptions& o) {
    EntryReport rep;
    const double eps = o.eps.value_or(0.5);
    ParsedSpec ps = parse_equation(kRiccati);
    TrRun r = run_tr(ps.ode, tr_config(o, 1, 1, choose_policy(o, "fundamental", Policy{})));
    record(rep, r);
    rep.add("diagnosis Cyclic", r.diagnosis.verdict == Verdict::Cyclic, 0, 0, verdict_name(r.diagnosis.verdict));
    rep.add("flow restates the equation at random states", r.diagnosis.numeric_check <= 1e-12, r.diagnosis.numeric_check,
            1e-12);
    const double T = o.horizon.value_or(20.0);
    Bindings b{{"eps", eps}, {"A0", 0.0}};
    SolutionEvaluator ev(r.result, b, T + 1);
    auto ref = reference_from(ps.ode, b, {0.0}, T, o);
    rep.errors = oracle::compare([&](double t) { return ev.value(0, t); }, [&](double t) { return ref.at(t, 0); },
                                 oracle::linspace(0, T, 2001));
    rep.add("renormalized output reproduces the exact solution (no improvement possible)", rep.errors->sup_abs <= 1e-6,
            rep.errors->sup_abs, 1e-6, "y(0) = 0");
    return rep;
}

EntryReport run_cubic_fail(const RunOptions& o) {
    EntryReport rep;
    const double eps = o.eps.value_or(0.1);
    ParsedSpec ps = parse_equation(kCubic);
    TrRun r = run_tr(ps.ode, tr_config(o, 1, 1, choose_policy(o, "fundamental", Policy{})));
    record(rep, r);
    rep.add("diagnosis TrivialFlow", r.diagnosis.verdict == Verdict::TrivialFlow, 0, 0, verdict_name(r.diagnosis.verdict));
    // y(0) = 0.5, y'(0) = 0.1: the oracle stays bounded, the TR output is a straight line
    const double T = o.horizon.value_or(200.0);
    Bindings b{{"eps", eps}, {"A", 0.1}, {"B0", 0.5}};
    SolutionEvaluator ev(r.result, b, T + 1);
    auto ref = reference_from(ps.ode, b, {0.5, 0.1}, T, o);
    double bound = 0;
    for (double t : oracle::linspace(0, T, 4001)) bound = std::max(bound, std::fabs(ref.at(t, 0)));
    double tr_end = std::fabs(ev.value(0, T));
    rep.add("oracle stays bounded while the TR output grows linearly", bound <= 2 && tr_end >= 10, tr_end, 10,
            "max |y_ref| = " + fmt(bound) + ", |y_TR(T)| = " + fmt(tr_end));
    rep.errors = oracle::compare([&](double t) { return ev.value(0, t); }, [&](double t) { return ref.at(t, 0); },
                                 oracle::linspace(0, T, 2001));
    return rep;
}

EntryReport run_tanh_limit(const RunOptions& o) {
    EntryReport rep;
    const double eps = o.eps.value_or(1.0);
    ParsedSpec ps = parse_equation(kTanhLimit);
    // printed route: y0 = t - t0, y1 = -(t - t0)^3/3 + C
    Policy pol;
    pol.name = "paper-grouping";
    pol.keep_eps_deriv = true;
    TrConfig cfg = tr_config(o, 1, 1, choose_policy(o, "paper-grouping", pol));
    cfg.expected_limit = 1.0;
    cfg.series.printed = std::vector<std::vector<Expr>>{{Expr::sigma(1), Expr::sigma(3).scaled(Rational(-1, 3)) + Expr::symbol("C")}};
    TrRun r = run_tr(ps.ode, cfg);
    record(rep, r);
    bool limit_note = notes_contain(rep, "cannot converge to the exact limits (±1)");
    rep.add("diagnosis notes the exact limits +-1 are out of reach", limit_note, 0, 0, rep.diagnosis);
    rep.add("diagnosis notes unbounded linear growth", notes_contain(rep, "grows linearly without bound"), 0, 0);
    const FlowEquation* fC = r.flow.find("C");
    rep.inform("flow C' = 1/eps", fC && fC->render() == "C' = eps^(-1)", 0, 0, fC ? fC->render() : "missing");

    // oracle at eps = 1: y(+-20) -> +-1
    oracle::Rhs f = ode_rhs(ps.ode, {{"eps", eps}});
    auto fwd = oracle::integrate(f, 0.0, {0.0}, 20.0, integrate_options(o));
    auto back = oracle::integrate([&](double s, const oracle::State& y, oracle::State& dy) {
        f(-s, y, dy);
        dy[0] = -dy[0];
    }, 0.0, {0.0}, 20.0, integrate_options(o));
    double gap = std::fabs(fwd.at(20.0, 0) - 1.0), gap_back = std::fabs(back.at(20.0, 0) + 1.0);
    rep.add("oracle |y(20) - 1| <= 1e-3", gap <= 1e-3, gap, 1e-3, "eps = " + fmt(eps));
    rep.add("oracle |y(-20) + 1| <= 1e-3", gap_back <= 1e-3, gap_back, 1e-3);
    SolutionEvaluator ev(r.result, {{"eps", eps}, {"C0", 0.0}}, 21);
    double tr20 = ev.value(0, 20.0);
    rep.inform("TR output is unbounded (y_TR(20))", std::fabs(tr20) > 2, tr20, 2);
    rep.errors = oracle::compare([&](double t) { return ev.value(0, t); }, [&](double t) { return fwd.at(t, 0); },
                                 oracle::linspace(0, 20, 401));

    // the engine's own kernel route restates the equation
    TrConfig cfg2 = tr_config(o, 1, 1, Policy{});
    ParsedSpec plain = parse_equation("y' = 1 - eps*y^2\n");
    TrRun r2 = run_tr(plain.ode, cfg2);
    rep.inform("own-kernel route (y0 = A + t - t0) is Cyclic", r2.diagnosis.verdict == Verdict::Cyclic, 0, 0,
               std::string(verdict_name(r2.diagnosis.verdict)) + ", " + r2.flow.render());
    return rep;
}

}  // namespace

void tr_entries(std::vector<CatalogEntry>& out) {
    out.push_back({"rayleigh", "Rayleigh oscillator", "TR method, Rayleigh example", kRayleigh, "TR", "fundamental",
                   {"flow R' = eps R/2 - eps R^3/8, theta' = 0", "third harmonic eps R^3/96",
                    "R -> 2 for R(0) in (0, 4)", "uniform validity on [0, 2/eps] vs oracle"},
                   {"printed amplitude closed form drops R0^2 (typo); the logistic form is checked"},
                   run_rayleigh});
    out.push_back({"mathieu", "Mathieu equation near the first tongue", "TR method, Example 1 (Mathieu)", kMathieu, "TR",
                   "paper-grouping",
                   {"printed order-1 series", "theta = 0", "separated amplitude equation", "printed R(t)",
                    "oracle error on [0, 20] below pinned threshold"},
                   {"printed R(t) does not satisfy the printed amplitude equation",
                    "series uses the printed homogeneous admixture -(1/2) R cos(t/2 + theta)"},
                   run_mathieu});
    out.push_back({"lin_example2", "y'' + y = eps y'", "TR method, Example 2 (linear damping)", kLinear2, "TR", "fundamental",
                   {"R' = eps R/2", "theta' = -eps^2/8", "frequency sqrt(1 - eps^2/4), growth exp(eps t/2)"},
                   {"printed variant: theta' = 1 + eps/2 - 3 eps^2/8 and frequency 2 + eps/2 - 3 eps^2/8",
                    "printed two-equation variant: frequency sqrt(1 - eps - eps^2)"},
                   run_linear2});
    static const ThreeWave nonres{"three_wave_nonres", 2.3, 1.0, 0.7, "", 0, 0};
    static const ThreeWave sum{"three_wave_sum", 2.0, 1.0, 1.0, "w2 + w3 - w1 = 0", -1, -1};
    static const ThreeWave diff{"three_wave_diff", 1.0, 2.0, 1.0, "w2 - w3 - w1 = 0", -1, 1};
    for (const ThreeWave* tw : {&nonres, &sum, &diff}) {
        std::string what = tw == &nonres ? "case (i), nonresonant" : tw == &sum ? "case (ii), w2 + w3 = w1" : "case (iii), w2 - w3 = w1";
        std::vector<std::string> exp = tw == &nonres
                                           ? std::vector<std::string>{"no secular terms", "printed nonresonant formulas", "oracle error"}
                                           : std::vector<std::string>{"theta1' = eps A2 A3/(4 A1 w1) and cyclic",
                                                                      "measured x-frequency"};
        std::vector<std::string> notes;
        if (tw != &nonres) notes.push_back("the printed phase relation is imposed in the projection but is not preserved by the flow");
        const ThreeWave* p = tw;
        out.push_back({tw->id, "three-wave interaction, " + what, "vector field application, three-wave equation",
                       three_wave_text(tw->w1, tw->w2, tw->w3, tw->relation), "TR", "paper-grouping", exp, notes,
                       [p](const RunOptions& o) { return run_three_wave(*p, o); }});
    }
    out.push_back({"rg_fail_riccati", "y' = eps (1 - y^2)", "limitations, Example 1", kRiccati, "TR", "fundamental",
                   {"Cyclic verdict"}, {}, run_riccati});
    out.push_back({"rg_fail_cubic", "y'' = eps (y^2 - y^3)", "limitations, Example 2", kCubic, "TR", "fundamental",
                   {"TrivialFlow verdict"}, {"the order-1 secular power reaches (t - t0)^5"}, run_cubic_fail});
    out.push_back({"rg_fail_y_eq_1_minus_eps_y2", "y' = 1 - eps y^2", "limitations, Example 3", kTanhLimit, "TR",
                   "paper-grouping",
                   {"notes: cannot reach the limits +-1", "oracle |y(20) - 1| <= 1e-3"},
                   {"printed series y0 = t - t0, y1 = -(t - t0)^3/3 + C is used; the limits +-1 hold at eps = 1",
                    "the engine's own kernel y0 = A + (t - t0) gives a Cyclic flow instead"},
                   run_tanh_limit});
}

}  // namespace trg::detail
