#include "trg/pipeline.hpp"

#include <cmath>

namespace trg {

TrRun run_tr(const OdeSpec& spec, const TrConfig& cfg, const std::function<void(SeriesSolution&)>& edit) {
    TrRun r;
    r.spec = spec;
    r.series = solve_hierarchy(spec, cfg.K, cfg.series);
    if (cfg.observe > 0) r.series = observe_derivative(r.series, cfg.observe);
    if (edit) edit(r.series);
    r.frame = reassemble(r.series, cfg.M);
    r.res = residual(r.frame, r.series.registry);
    r.flow = project(r.res, r.series, cfg.policy);
    r.sol = solve_flow(r.flow);
    std::vector<std::string> names;
    for (const auto& c : spec.comps) names.push_back(cfg.observe > 0 ? c.name + std::string(cfg.observe, '\'') : c.name);
    r.result = assemble(r.frame, r.sol, names);
    r.diagnosis = diagnose(spec, r.series, r.flow, &r.sol, cfg.expected_limit, cfg.seed);
    return r;
}

std::size_t state_offset(const OdeSpec& spec, int comp) {
    std::size_t off = 0;
    for (int c = 0; c < comp; ++c) off += spec.comps[c].op.order();
    return off;
}

std::size_t state_size(const OdeSpec& spec) { return state_offset(spec, static_cast<int>(spec.comps.size())); }

oracle::Rhs ode_rhs(const OdeSpec& spec, const Bindings& b) {
    std::vector<std::vector<double>> coeffs;
    for (const auto& c : spec.comps) {
        std::vector<double> a;
        for (const auto& m : c.op.coeffs()) a.push_back(eval(Expr::from_mono(m), 0.0, b));
        coeffs.push_back(a);
    }
    return [spec, b, coeffs](double t, const oracle::State& y, oracle::State& dy) {
        std::vector<std::vector<double>> vals(spec.comps.size());
        std::size_t off = 0;
        for (std::size_t c = 0; c < spec.comps.size(); ++c) {
            int n = spec.comps[c].op.order();
            vals[c].assign(y.begin() + off, y.begin() + off + n);
            vals[c].push_back(0.0);
            off += n;
        }
        off = 0;
        for (std::size_t c = 0; c < spec.comps.size(); ++c) {
            int n = spec.comps[c].op.order();
            // right side first with y^(n) = 0; derivative coupling in the
            // perturbation (y' y'' terms) is resolved by a fixed point
            double high = 0.0;
            for (int it = 0; it < 60; ++it) {
                vals[c][n] = high;
                double r = eval_rhs(spec, static_cast<int>(c), t, vals, b);
                for (int j = 0; j < n; ++j) r -= coeffs[c][j] * vals[c][j];
                double next = r / coeffs[c][n];
                if (std::fabs(next - high) <= 1e-15 * (1 + std::fabs(next))) {
                    high = next;
                    break;
                }
                high = next;
            }
            vals[c][n] = high;
            for (int j = 0; j + 1 < n; ++j) dy[off + j] = vals[c][j + 1];
            dy[off + n - 1] = high;
            off += n;
        }
    };
}

double naive_series(const SeriesSolution& s, int comp, double t, const Bindings& b) {
    Bindings bb = b;
    bb[kT0] = 0.0;
    double e = b.count(kEps) ? b.at(kEps) : 0.0;
    double v = 0, ek = 1;
    for (const auto& y : s.y[comp]) {
        v += ek * eval(y, t, bb);
        ek *= e;
    }
    return v;
}

oracle::State asymptotic_state(const OdeSpec& spec, const SolutionEvaluator& ev, double t) {
    oracle::State s;
    const double h = 1e-4;
    for (std::size_t c = 0; c < spec.comps.size(); ++c) {
        int n = spec.comps[c].op.order();
        int ci = static_cast<int>(c);
        for (int j = 0; j < n; ++j) {
            if (j == 0) s.push_back(ev.value(ci, t));
            else if (j == 1) s.push_back(ev.derivative(ci, t));
            else if (j == 2) s.push_back((ev.derivative(ci, t + h) - ev.derivative(ci, t - h)) / (2 * h));
            else s.push_back((ev.derivative(ci, t + h) - 2 * ev.derivative(ci, t) + ev.derivative(ci, t - h)) / (h * h));
        }
    }
    return s;
}

}  // namespace trg
