#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>
#include <stdexcept>

#include "trg/renorm.hpp"

namespace trg {

const char* flow_kind_name(FlowKind k) {
    switch (k) {
        case FlowKind::Constant: return "constant";
        case FlowKind::Linear: return "linear";
        case FlowKind::Exponential: return "exponential";
        case FlowKind::Bernoulli: return "bernoulli";
        case FlowKind::Separable: return "separable";
        case FlowKind::Quadrature: return "quadrature";
        case FlowKind::Numeric: return "numeric";
    }
    return "?";
}

const FlowDescriptor* FlowSolution::find(const std::string& p) const {
    for (const auto& d : desc)
        if (d.param == p) return &d;
    return nullptr;
}

namespace {

std::string initial_name(const std::string& p) {
    return std::isdigit(static_cast<unsigned char>(p.back())) ? p + "_0" : p + "0";
}

std::set<std::string> eq_symbols(const FlowEquation& e) {
    std::set<std::string> s = symbols(e.denom);
    for (const auto& part : e.parts) {
        for (const auto& n : symbols(part.numer)) s.insert(n);
        for (const auto& n : part.weight.symbols()) s.insert(n);
    }
    return s;
}

bool depends_on_t(const Expr& e) { return !is_t_free(e); }

// Splits e by the power of p; nullopt if p appears inside a harmonic.
std::optional<std::map<int, Expr>> powers_of(const Expr& e, const std::string& p) {
    std::map<int, Expr> out;
    for (const auto& q : e.terms()) {
        if (exponent_of(q.phase.phases, p) != 0 || exponent_of(q.phase.freq.syms, p) != 0) return std::nullopt;
        int n = exponent_of(q.mono.factors, p);
        QuasiTerm r = q;
        r.mono.factors = without(q.mono.factors, p);
        out[n] += Expr(std::vector<QuasiTerm>{r}, e.domain());
    }
    return out;
}

std::string paren(const std::string& s) { return "(" + s + ")"; }

// Classifies p' = (sum parts)/denom with every other parameter frozen.
std::optional<FlowDescriptor> classify(const FlowEquation& e, const std::string& init, std::string& sep_name) {
    FlowDescriptor d;
    d.param = e.param;
    d.initial = init;
    const std::string& p = e.param;
    if (contains(e.denom, p)) return std::nullopt;
    bool all_zero = std::all_of(e.parts.begin(), e.parts.end(), [](const FlowTerm& t) { return t.numer.is_zero(); });
    if (e.held_constant || all_zero) {
        d.kind = FlowKind::Constant;
        d.text = p + "(t) = " + init;
        return d;
    }
    bool t_dep = depends_on_t(e.denom);
    std::set<int> exps;
    std::vector<std::map<int, Expr>> split;
    for (const auto& part : e.parts) {
        if (part.weight.depends_on_t()) t_dep = true;
        auto pw = powers_of(part.numer, p);
        if (!pw) return std::nullopt;
        for (const auto& [n, c] : *pw) {
            exps.insert(n);
            if (depends_on_t(c)) t_dep = true;
        }
        split.push_back(*pw);
    }
    if (t_dep) {
        if (exps.size() != 1) return std::nullopt;
        int n = *exps.begin();
        d.n = n;
        d.kind = n == 0 ? FlowKind::Quadrature : FlowKind::Separable;
        for (std::size_t i = 0; i < e.parts.size(); ++i) {
            auto it = split[i].find(n);
            if (it != split[i].end()) d.g_parts.push_back({it->second, e.parts[i].weight});
        }
        d.g_den = e.denom;
        std::string g;
        for (const auto& gp : d.g_parts) {
            std::string s = render(gp.numer, "s");
            if (!gp.weight.is_const(1)) s = paren(s) + "*" + gp.weight.render("s");
            g = g.empty() ? s : g + " + " + s;
        }
        if (!(d.g_den == Expr(1))) g = paren(g) + "/" + paren(render(d.g_den, "s"));
        std::string G = "int(0, t, " + g + ")";
        if (n == 0) {
            d.text = p + "(t) = " + init + " + " + G;
        } else if (n == 1) {
            d.text = p + "(t) = " + init + "*exp(" + G + ")";
        } else {
            d.initial = sep_name;
            sep_name = "c0_" + p;
            d.text = p + "(t)^(" + std::to_string(1 - n) + ") = " + d.initial + " + (" + std::to_string(1 - n) + ")*" + G;
        }
        return d;
    }
    // autonomous with constant coefficients
    Expr N;
    for (const auto& part : e.parts) N += part.numer;
    auto pw = powers_of(N, p);
    if (!pw) return std::nullopt;
    exps.clear();
    for (const auto& [n, c] : *pw)
        if (!c.is_zero()) exps.insert(n);
    d.rate_den = e.denom;
    std::string den = d.rate_den == Expr(1) ? "" : "/" + paren(render(d.rate_den));
    auto coef = [&](int n) { return pw->count(n) ? pw->at(n) : Expr(); };
    if (exps.empty()) {
        d.kind = FlowKind::Constant;
        d.text = p + "(t) = " + init;
    } else if (exps == std::set<int>{0}) {
        d.kind = FlowKind::Linear;
        d.rate = coef(0);
        d.text = p + "(t) = " + init + " + " + paren(render(d.rate)) + den + "*t";
    } else if (exps == std::set<int>{1}) {
        d.kind = FlowKind::Exponential;
        d.rate = coef(1);
        d.text = p + "(t) = " + init + "*exp(" + paren(render(d.rate)) + den + "*t)";
    } else if (exps.size() == 2 && exps.count(1)) {
        int n = *exps.begin() == 1 ? *exps.rbegin() : *exps.begin();
        d.kind = FlowKind::Bernoulli;
        d.n = n;
        d.rate = coef(1);
        d.b = coef(n);
        std::string a = paren(render(d.rate)) + den, b = paren(render(d.b)) + den, m = std::to_string(1 - n);
        d.text = p + "(t)^(" + m + ") = (" + init + "^(" + m + ") + " + b + "/" + a + ")*exp(" + m + "*" + a + "*t) - " +
                 b + "/" + a;
    } else {
        return std::nullopt;
    }
    return d;
}

}  // namespace

FlowSolution solve_flow(const FlowSystem& fs) {
    FlowSolution sol;
    sol.system = fs;
    ParamRegistry& reg = sol.system.registry;
    std::set<std::string> flowing;
    for (const auto& e : fs.eqs)
        if (!e.held_constant) flowing.insert(e.param);
    std::map<std::string, FlowDescriptor> done;
    std::map<std::string, std::string> frozen;  // constant parameter -> its symbol
    std::string sep_name = "c0";
    for (const auto& e : fs.eqs) {
        if (!e.held_constant) continue;
        FlowDescriptor d;
        d.param = d.initial = e.param;
        d.kind = FlowKind::Constant;
        d.text = e.param + "(t) = " + e.param + " (" + e.note + ")";
        done[e.param] = d;
    }
    bool progress = true;
    while (progress) {
        progress = false;
        for (const auto& e : fs.eqs) {
            if (done.count(e.param)) continue;
            auto syms = eq_symbols(e);
            bool ready = std::all_of(syms.begin(), syms.end(), [&](const std::string& s) {
                return s == e.param || !flowing.count(s) || frozen.count(s);
            });
            if (!ready) continue;
            FlowEquation f = e;
            for (const auto& [p, init] : frozen) {
                f.denom = rename(f.denom, p, init);
                for (auto& part : f.parts) part.numer = rename(part.numer, p, init);
            }
            std::string init = initial_name(e.param);
            auto d = classify(f, init, sep_name);
            if (!d) continue;
            done[e.param] = *d;
            if (d->kind == FlowKind::Constant) frozen[e.param] = d->initial;
            progress = true;
        }
    }
    for (const auto& e : fs.eqs) {
        auto it = done.find(e.param);
        if (it == done.end()) {
            FlowDescriptor d;
            d.param = e.param;
            d.initial = initial_name(e.param);
            d.kind = FlowKind::Numeric;
            d.text = e.param + "(t): numeric from " + d.initial + " at t = 0";
            sol.desc.push_back(d);
        } else {
            sol.desc.push_back(it->second);
        }
        const auto& d = sol.desc.back();
        if (!reg.has(d.initial)) reg.add(d.initial, SymbolKind::IntegrationConstant);
        sol.constants.push_back(d.initial);
    }
    return sol;
}

// Cumulative integral of g on [0, horizon] with simple poles removed
// analytically: g = smooth + sum r_j/(s - t_j).
struct FlowEvaluator::Quadrature {
    std::function<double(double)> g, smooth;
    std::vector<double> poles, residues, nodes, cum;
    double horizon = 0;

    // adaptive bisection would chase rounding noise into a removed pole
    double piece(double a, double b) const {
        for (double tj : poles)
            if (std::fabs(a - tj) < 1e-12 || std::fabs(b - tj) < 1e-12) return oracle::quad_fixed(smooth, a, b);
        return oracle::quad(smooth, a, b, 1e-13);
    }

    double value(double t) const {
        if (t < 0 || t > horizon * (1 + 1e-12)) throw std::out_of_range("flow quadrature outside [0, horizon]");
        auto it = std::upper_bound(nodes.begin(), nodes.end(), t);
        std::size_t i = static_cast<std::size_t>(std::max<std::ptrdiff_t>(0, it - nodes.begin() - 1));
        double s = cum[i] + (t > nodes[i] ? piece(nodes[i], t) : 0.0);
        for (std::size_t j = 0; j < poles.size(); ++j) s += residues[j] * std::log(std::fabs((t - poles[j]) / poles[j]));
        return s;
    }
};

FlowEvaluator::FlowEvaluator(const FlowSolution& sol, Bindings b, double horizon)
    : sol_(&sol), base_(std::move(b)), horizon_(horizon) {
    for (const auto& c : sol.constants)
        if (!base_.count(c)) throw std::invalid_argument("flow constant '" + c + "' is not bound");
    for (const auto& d : sol.desc) {
        if (d.kind == FlowKind::Numeric) numeric_.push_back(d.param);
        if (d.kind != FlowKind::Separable && d.kind != FlowKind::Quadrature) continue;
        auto q = std::make_shared<Quadrature>();
        q->horizon = horizon;
        auto bp = std::make_shared<const Bindings>(base_);
        auto parts = d.g_parts;
        Expr den = d.g_den;
        auto num = [parts, bp](double s) {
            double v = 0;
            for (const auto& p : parts) v += eval(p.numer, s, *bp) * p.weight.eval(s, *bp);
            return v;
        };
        q->g = [num, den, bp](double s) { return num(s) / eval(den, s, *bp); };
        if (depends_on_t(den)) {
            Expr dden = diff_t(den);
            auto D = [den, bp](double s) { return eval(den, s, *bp); };
            if (std::fabs(D(0.0)) < 1e-14) throw std::domain_error("flow denominator vanishes at t = 0");
            const double h = 0.0125;
            double prev = D(0.0);
            for (double s = h; s <= horizon + 1e-12; s += h) {
                double cur = D(s);
                if (prev * cur < 0) {
                    double tj = oracle::brent(D, s - h, s);
                    q->poles.push_back(tj);
                    q->residues.push_back(num(tj) / eval(dden, tj, *bp));
                }
                prev = cur;
            }
        }
        auto g = q->g;
        auto poles = q->poles, res = q->residues;
        q->smooth = [g, poles, res](double s) {
            double v = g(s);
            for (std::size_t j = 0; j < poles.size(); ++j) v -= res[j] / (s - poles[j]);
            return v;
        };
        std::set<double> nodes;
        for (double s = 0; s < horizon; s += 0.05) nodes.insert(s);
        nodes.insert(horizon);
        for (double tj : q->poles) nodes.insert(tj);
        q->nodes.assign(nodes.begin(), nodes.end());
        q->cum.assign(q->nodes.size(), 0.0);
        for (std::size_t i = 1; i < q->nodes.size(); ++i)
            q->cum[i] = q->cum[i - 1] + q->piece(q->nodes[i - 1], q->nodes[i]);
        quad_[d.param] = q;
    }
    if (!numeric_.empty()) integrate_numeric(horizon);
}

double FlowEvaluator::closed_value(const FlowDescriptor& d, double t) const {
    const double p0 = base_.at(d.initial);
    auto ev = [&](const Expr& e) { return eval(e, 0.0, base_); };
    switch (d.kind) {
        case FlowKind::Constant: return p0;
        case FlowKind::Linear: return p0 + ev(d.rate) / ev(d.rate_den) * t;
        case FlowKind::Exponential: return p0 * std::exp(ev(d.rate) / ev(d.rate_den) * t);
        case FlowKind::Bernoulli: {
            double a = ev(d.rate) / ev(d.rate_den), b = ev(d.b) / ev(d.rate_den);
            double m = 1 - d.n;
            double w = (std::pow(p0, m) + b / a) * std::exp(m * a * t) - b / a;
            return std::pow(w, 1.0 / m);
        }
        case FlowKind::Quadrature: return p0 + quad_.at(d.param)->value(t);
        case FlowKind::Separable: {
            double G = quad_.at(d.param)->value(t);
            if (d.n == 1) return p0 * std::exp(G);
            double m = 1 - d.n;
            double w = p0 + m * G;
            if (d.n == 2) return 1.0 / w;
            return std::pow(w, 1.0 / m);
        }
        case FlowKind::Numeric: break;
    }
    throw std::logic_error("numeric flow has no closed form");
}

void FlowEvaluator::integrate_numeric(double horizon) {
    std::vector<const FlowEquation*> eqs;
    oracle::State y0;
    for (const auto& p : numeric_) {
        eqs.push_back(sol_->system.find(p));
        y0.push_back(base_.at(sol_->find(p)->initial));
    }
    auto rhs = [this, eqs](double t, const oracle::State& y, oracle::State& dy) {
        Bindings b = base_;
        for (const auto& d : sol_->desc)
            if (d.kind != FlowKind::Numeric) b[d.param] = closed_value(d, t);
        for (std::size_t i = 0; i < numeric_.size(); ++i) b[numeric_[i]] = y[i];
        for (std::size_t i = 0; i < eqs.size(); ++i) dy[i] = eqs[i]->eval(t, b);
    };
    traj_ = std::make_shared<oracle::DenseSolution>(oracle::integrate(rhs, 0.0, y0, horizon));
}

double FlowEvaluator::value(const std::string& p, double t) const {
    const FlowDescriptor* d = sol_->find(p);
    if (!d) throw std::invalid_argument("no flow for '" + p + "'");
    if (d->kind != FlowKind::Numeric) return closed_value(*d, t);
    auto it = std::find(numeric_.begin(), numeric_.end(), p);
    return traj_->at(t, static_cast<std::size_t>(it - numeric_.begin()));
}

Bindings FlowEvaluator::at(double t) const {
    Bindings b = base_;
    for (const auto& d : sol_->desc) b[d.param] = value(d.param, t);
    return b;
}

}  // namespace trg
