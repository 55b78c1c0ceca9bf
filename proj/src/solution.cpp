#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

#include "trg/renorm.hpp"

namespace trg {

const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::Productive: return "productive";
        case Verdict::Cyclic: return "cyclic";
        case Verdict::TrivialFlow: return "trivial-flow";
        case Verdict::Unseparable: return "unseparable";
    }
    return "?";
}

RenormalizedSolution assemble(const TaylorFrame& f, const FlowSolution& sol, const std::vector<std::string>& names) {
    RenormalizedSolution r;
    r.comps = names;
    r.flow = sol;
    r.registry = sol.system.registry;
    r.K = f.K;
    for (const auto& Y : f.Y) {
        r.Y0.push_back(Y[0]);
        r.envelope.push_back(Fn::constant(1));
    }
    r.free_constants = sol.constants;
    for (const auto& d : sol.desc)
        if (d.kind == FlowKind::Numeric) r.notes.push_back(d.param + " has no closed-form flow; integrated numerically");
    return r;
}

std::string RenormalizedSolution::render(int comp) const {
    std::string s = comps[comp] + "(t) = ";
    std::string body = trg::render(Y0[comp], "t");
    if (!envelope[comp].is_const(1)) body = envelope[comp].render("t") + "*(" + body + ")";
    s += body;
    for (const auto& d : flow.desc)
        if (contains(Y0[comp], d.param)) s += "\n  " + d.text;
    return s;
}

namespace {

Bindings with_pins(const RenormalizedSolution& s, Bindings b) {
    for (const auto& [n, v] : s.flow.system.pins) b[n] = v;
    return b;
}

}  // namespace

SolutionEvaluator::SolutionEvaluator(const RenormalizedSolution& s, const Bindings& b, double horizon)
    : s_(&s), flow_(s.flow, with_pins(s, b), horizon) {
    for (std::size_t c = 0; c < s.Y0.size(); ++c) {
        dY0_.push_back(diff_t(s.Y0[c]));
        std::vector<std::pair<std::string, Expr>> part;
        for (const auto& d : s.flow.desc) {
            Expr p = diff_param(s.Y0[c], d.param);
            if (!p.is_zero()) part.emplace_back(d.param, p);
        }
        partials_.push_back(part);
        denv_.push_back(s.envelope[c].diff());
    }
}

double SolutionEvaluator::value(int c, double t) const {
    Bindings b = flow_.at(t);
    return s_->envelope[c].eval(t, b) * eval(s_->Y0[c], t, b);
}

double SolutionEvaluator::derivative(int c, double t) const {
    Bindings b = flow_.at(t);
    double d = eval(dY0_[c], t, b);
    for (const auto& [p, e] : partials_[c]) {
        const FlowEquation* fe = s_->flow.system.find(p);
        if (!fe || fe->held_constant) continue;
        d += eval(e, t, b) * fe->eval(t, b);
    }
    double env = s_->envelope[c].eval(t, b);
    return env * d + denv_[c].eval(t, b) * eval(s_->Y0[c], t, b);
}

namespace {

// Right side of the operator in jet form: the ODE restated for the
// kernel constants of a single pure-derivative component.
std::optional<std::vector<Expr>> jet_flow(const OdeSpec& spec, const SeriesSolution& s, int K) {
    if (spec.comps.size() != 1) return std::nullopt;
    const Component& c = spec.comps[0];
    int n = c.op.order();
    const auto& co = c.op.coeffs();
    for (int j = 0; j < n; ++j)
        if (!co[j].is_zero()) return std::nullopt;
    const KernelMode* m = nullptr;
    for (const auto& km : s.modes)
        if (km.kind == ModeKind::Real && km.rho.is_zero()) m = &km;
    if (!m || static_cast<int>(m->constants.size()) != n) return std::nullopt;
    // y^(j)(t0) = j! C_j
    std::vector<Expr> jet;
    for (int j = 0; j < n; ++j) jet.push_back(s.registry.sym(m->constants[j]).scaled(factorial(j)));
    Expr f = c.forcing0;
    for (const auto& pt : c.pert) {
        Expr t = pt.coeff;
        for (const auto& [v, p] : pt.vars) {
            if (v.comp != 0 || v.deriv >= n) return std::nullopt;
            t = t * jet[v.deriv].pow(p);
        }
        f += t;
    }
    Expr lead = Expr::from_mono(co[n]);
    std::vector<Expr> out;
    for (int j = 0; j + 1 < n; ++j) out.push_back(s.registry.sym(m->constants[j + 1]).scaled(Rational(j + 1)));
    out.push_back(truncate_eps(divide_monomial(f, lead), K).scaled(Rational(1) / factorial(n - 1)));
    return out;
}

}  // namespace

Diagnosis diagnose(const OdeSpec& spec, const SeriesSolution& s, const FlowSystem& fs, const FlowSolution* sol,
                   std::optional<double> expected_limit, unsigned seed) {
    Diagnosis d;
    if (!fs.unresolved.empty()) {
        d.verdict = Verdict::Unseparable;
        for (const auto& u : fs.unresolved) d.detail += (d.detail.empty() ? "" : "; ") + u;
        return d;
    }
    if (auto jet = jet_flow(spec, s, fs.K)) {
        const KernelMode* m = nullptr;
        for (const auto& km : s.modes)
            if (km.kind == ModeKind::Real) m = &km;
        bool structural = true;
        for (std::size_t j = 0; j < jet->size(); ++j) {
            const FlowEquation* fe = fs.find(m->constants[j]);
            Expr got = fe && !fe->held_constant && fe->quasi_trig() && fe->denom == Expr(1) ? fe->numer() : Expr();
            if (!(got == (*jet)[j])) structural = false;
        }
        std::mt19937 rng(seed);
        std::uniform_real_distribution<double> U(-1.5, 1.5), E(0.01, 0.5);
        double worst = 0;
        for (int trial = 0; trial < 20; ++trial) {
            Bindings b = fs.registry.bindings();
            b[kEps] = E(rng);
            for (const auto& cst : m->constants) b[cst] = U(rng);
            double t0 = U(rng);
            for (std::size_t j = 0; j < jet->size(); ++j) {
                const FlowEquation* fe = fs.find(m->constants[j]);
                double got = fe ? fe->eval(t0, b) : 0.0;
                worst = std::max(worst, std::fabs(got - eval((*jet)[j], t0, b)));
            }
        }
        d.numeric_check = worst;
        if (structural || worst < 1e-12) {
            d.verdict = Verdict::Cyclic;
            d.detail = "the flow restates the original equation for the kernel constants";
            if (structural != (worst < 1e-12)) d.notes.push_back("structural and numeric cyclic checks disagree");
        }
    }
    if (d.verdict != Verdict::Cyclic) {
        bool trivial = true;
        for (const auto& e : fs.eqs) {
            if (e.held_constant) continue;
            for (const auto& p : e.parts)
                if (!p.weight.is_const(1) && !p.numer.is_zero()) trivial = false;
            if (!(e.numer() - e.kinematic).is_zero()) trivial = false;
        }
        if (trivial) {
            d.verdict = Verdict::TrivialFlow;
            d.detail = "every flow equation reduces to free kinematic motion";
        } else {
            d.verdict = Verdict::Productive;
        }
    }
    bool unbounded = false;
    if (sol) {
        for (const auto& fd : sol->desc) {
            // a phase drifting linearly is a frequency shift
            bool phase = sol->system.registry.has(fd.param) && sol->system.registry.kind(fd.param) == SymbolKind::Phase;
            if (fd.kind == FlowKind::Linear && !fd.rate.is_zero() && !phase) {
                unbounded = true;
                d.notes.push_back(fd.param + " grows linearly without bound");
            }
        }
    }
    if (expected_limit) {
        std::ostringstream os;
        os << *expected_limit;
        if (unbounded || d.verdict == Verdict::TrivialFlow)
            d.notes.push_back("cannot converge to the exact limits (\u00b1" + os.str() + ")");
    }
    return d;
}

Expr at_time_zero(const Expr& e) {
    Expr out;
    for (const auto& q : e.terms()) {
        if (q.k != 0) throw std::invalid_argument("secular term has no value at t = 0 without t0");
        QuasiTerm r = q;
        r.rho = Rational(0);
        r.harm = Harmonic::One;
        r.phase = {};
        Expr base(std::vector<QuasiTerm>{r}, e.domain());
        if (q.harm == Harmonic::One) {
            out += base;
            continue;
        }
        PhaseForm p = q.phase;
        p.freq = {};
        out += base * (q.harm == Harmonic::Cos ? Expr::cosine(p) : Expr::sine(p));
    }
    return out;
}

Expr primitive_polynomial(const Expr& e, const std::string& unknown) {
    if (e.is_zero()) return e;
    std::int64_t den = 1, num = 0;
    for (const auto& q : e.terms()) {
        if (!q.mono.exact()) throw std::invalid_argument("primitive_polynomial needs exact coefficients");
        den = std::lcm(den, q.mono.coeff.den());
        num = std::gcd(num, q.mono.coeff.num());
    }
    // common monomial content, negative powers included
    std::set<std::string> names;
    for (const auto& q : e.terms())
        for (const auto& [n, p] : q.mono.factors) names.insert(n);
    std::map<std::string, int> common;
    for (const auto& n : names) {
        int lo = std::numeric_limits<int>::max();
        for (const auto& q : e.terms()) lo = std::min(lo, exponent_of(q.mono.factors, n));
        if (lo != 0) common[n] = lo;
    }
    ParamMono scale;
    scale.coeff = Rational(den, 1) / Rational(num, 1);
    for (const auto& [n, p] : common) scale.factors.push_back({n, -p});
    Expr r = e * Expr::from_mono(scale);
    // leading coefficient positive: first term of the highest power of unknown
    int best = -1;
    Rational lead(1);
    for (const auto& q : r.terms()) {
        int p = exponent_of(q.mono.factors, unknown);
        if (p > best) {
            best = p;
            lead = q.mono.coeff;
        }
    }
    if (lead < Rational(0)) r = -r;
    return r;
}

std::vector<double> real_roots(const std::vector<double>& c0) {
    std::vector<double> c = c0;
    while (!c.empty() && c.back() == 0.0) c.pop_back();
    std::vector<double> r;
    int deg = static_cast<int>(c.size()) - 1;
    if (deg <= 0) return r;
    if (deg > 3) throw std::invalid_argument("real_roots supports degree <= 3");
    if (deg == 1) {
        r.push_back(-c[0] / c[1]);
    } else if (deg == 2) {
        double a = c[2], b = c[1], cc = c[0];
        double disc = b * b - 4 * a * cc;
        if (disc < 0) return r;
        double q = -0.5 * (b + std::copysign(std::sqrt(disc), b));
        if (q != 0) r.push_back(cc / q);
        r.push_back(q / a);
        if (q == 0) r.push_back(0.0);
    } else {
        double a = c[2] / c[3], b = c[1] / c[3], cc = c[0] / c[3];
        double Q = (a * a - 3 * b) / 9, R = (2 * a * a * a - 9 * a * b + 27 * cc) / 54;
        if (R * R < Q * Q * Q) {
            double th = std::acos(R / std::sqrt(Q * Q * Q));
            for (int k = 0; k < 3; ++k) r.push_back(-2 * std::sqrt(Q) * std::cos((th + 2 * M_PI * k) / 3) - a / 3);
        } else {
            double A = -std::copysign(std::cbrt(std::fabs(R) + std::sqrt(R * R - Q * Q * Q)), R);
            double B = A == 0 ? 0 : Q / A;
            r.push_back(A + B - a / 3);
        }
        for (double& x : r) {
            for (int it = 0; it < 4; ++it) {
                double f = ((c[3] * x + c[2]) * x + c[1]) * x + c[0];
                double df = (3 * c[3] * x + 2 * c[2]) * x + c[1];
                if (df == 0) break;
                x -= f / df;
            }
        }
    }
    std::sort(r.begin(), r.end());
    return r;
}

namespace {

// Symbol that stands for p(0) under the flow.
Expr initial_value_expr(const FlowDescriptor& d) {
    if (d.kind == FlowKind::Separable && d.n != 1) {
        if (d.n == 2) return Expr::symbol(d.initial, -1);
        throw std::invalid_argument("p(0) of a separable power flow with n != 2 is not polynomial");
    }
    return Expr::symbol(d.initial);
}

Expr derivative_n(Expr e, int n) {
    for (int i = 0; i < n; ++i) e = diff_t(e);
    return e;
}

bool polynomial_in(const Expr& e, const std::vector<std::string>& unknowns, int& degree, int& nvars) {
    std::set<std::string> seen;
    degree = 0;
    for (const auto& q : e.terms()) {
        if (q.harm != Harmonic::One || q.k != 0 || !q.rho.is_zero()) return false;
        int deg = 0;
        for (const auto& [n, p] : q.mono.factors) {
            if (std::find(unknowns.begin(), unknowns.end(), n) == unknowns.end()) return false;
            if (p < 0) return false;
            deg += p;
            seen.insert(n);
        }
        degree = std::max(degree, deg);
    }
    nvars = static_cast<int>(seen.size());
    return true;
}

double pick(const std::vector<double>& roots, const std::string& select) {
    std::vector<double> r = roots;
    if (select == "positive") std::erase_if(r, [](double x) { return x <= 0; });
    if (select == "negative") std::erase_if(r, [](double x) { return x >= 0; });
    if (r.empty()) throw std::domain_error("no admissible real root");
    if (select == "largest") return r.back();
    if (select == "positive") return r.front();
    if (select == "negative") return r.back();
    // smallest magnitude
    return *std::min_element(r.begin(), r.end(), [](double a, double b) { return std::fabs(a) < std::fabs(b); });
}

Expr bind_numbers(Expr e, const Bindings& b) {
    for (const auto& [n, v] : b)
        if (contains(e, n)) e = substitute(e, n, Expr::number(v));
    return e;
}

// Gaussian elimination on conditions linear in the unknowns.
bool solve_linear(const std::vector<Expr>& eqs, const std::vector<std::string>& u, Bindings& out) {
    std::size_t n = u.size();
    if (eqs.size() < n) return false;
    std::vector<std::vector<double>> A(eqs.size(), std::vector<double>(n + 1, 0.0));
    for (std::size_t i = 0; i < eqs.size(); ++i)
        for (const auto& q : eqs[i].terms()) {
            double v = q.mono.numeric();
            if (q.mono.factors.empty()) {
                A[i][n] -= v;
                continue;
            }
            auto j = std::find(u.begin(), u.end(), q.mono.factors[0].first) - u.begin();
            A[i][j] += v;
        }
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t i = col; i < A.size(); ++i)
            if (std::fabs(A[i][col]) > std::fabs(A[piv][col])) piv = i;
        if (std::fabs(A[piv][col]) < 1e-14) return false;
        std::swap(A[piv], A[col]);
        for (std::size_t i = 0; i < A.size(); ++i) {
            if (i == col) continue;
            double f = A[i][col] / A[col][col];
            for (std::size_t k = col; k <= n; ++k) A[i][k] -= f * A[col][k];
        }
    }
    for (std::size_t j = 0; j < n; ++j) out[u[j]] = A[j][n] / A[j][j];
    return true;
}

}  // namespace

FitResult fit_constants(const RenormalizedSolution& s, const std::vector<Condition>& conds, const Bindings& known,
                        const FitOptions& opt) {
    FitResult res;
    std::vector<std::string> unknowns = opt.unknowns;
    if (unknowns.empty())
        for (const auto& c : s.free_constants)
            if (!known.count(c)) unknowns.push_back(c);
    Bindings all = known;
    for (const auto& [n, v] : s.flow.system.pins) all[n] = v;

    // symbolic form of each condition when available
    std::vector<std::optional<Expr>> sym(conds.size());
    std::map<std::string, Expr> at0, frozen;
    for (const auto& d : s.flow.desc) {
        try {
            at0[d.param] = initial_value_expr(d);
        } catch (const std::invalid_argument&) {
        }
        if (d.kind == FlowKind::Constant) frozen[d.param] = Expr::symbol(d.initial);
    }
    for (std::size_t i = 0; i < conds.size(); ++i) {
        const Condition& c = conds[i];
        try {
            if (c.kind == Condition::Kind::Algebraic) {
                sym[i] = c.algebraic;
            } else if (c.kind == Condition::Kind::Value && c.t == 0.0 && s.envelope[c.comp].is_const(1)) {
                Expr e = at_time_zero(derivative_n(s.Y0[c.comp], c.deriv));
                std::set<std::string> flowed;
                for (const auto& d : s.flow.desc)
                    if (contains(e, d.param) && d.initial != d.param) flowed.insert(d.param);
                bool ok = true;
                for (const auto& p : flowed) {
                    if (!at0.count(p)) ok = false;
                }
                // derivative conditions involve p'(0) unless p is a constant
                if (c.deriv > 0)
                    for (const auto& d : s.flow.desc)
                        if (contains(s.Y0[c.comp], d.param) && d.kind != FlowKind::Constant) ok = false;
                if (ok) {
                    for (const auto& p : flowed) e = substitute(e, p, at0[p]);
                    sym[i] = e - Expr::number(c.target);
                }
            } else if (c.kind == Condition::Kind::Terminal && s.envelope[c.comp].is_const(1)) {
                Expr e = derivative_n(s.Y0[c.comp], c.deriv);
                Expr lim;
                bool ok = true;
                for (const auto& q : e.terms()) {
                    Expr term(std::vector<QuasiTerm>{q}, e.domain());
                    bool flows = false;
                    for (const auto& d : s.flow.desc)
                        if (contains(term, d.param) && !frozen.count(d.param)) flows = true;
                    if (q.rho < Rational(0) && !flows) continue;  // decays
                    if (q.harm != Harmonic::One || q.k != 0 || !q.rho.is_zero() || flows) {
                        ok = false;
                        break;
                    }
                    lim += term;
                }
                if (ok) {
                    for (const auto& [p, v] : frozen)
                        if (contains(lim, p)) lim = rename(lim, p, v.terms()[0].mono.factors[0].first);
                    sym[i] = lim - Expr::number(c.target);
                    res.log.push_back("terminal limit: " + render(lim) + " = " + std::to_string(c.target));
                }
            }
        } catch (const std::exception& ex) {
            res.log.push_back(std::string("symbolic condition skipped: ") + ex.what());
        }
    }

    auto numeric_residual = [&](const Bindings& b, std::size_t i) {
        const Condition& c = conds[i];
        if (c.kind == Condition::Kind::Algebraic) return eval(c.algebraic, 0.0, b);
        SolutionEvaluator ev(s, b, opt.horizon);
        double t = c.kind == Condition::Kind::Terminal ? opt.terminal_t : c.t;
        double v = c.deriv == 0 ? ev.value(c.comp, t) : ev.derivative(c.comp, t);
        if (c.deriv > 1) throw std::invalid_argument("numeric conditions support deriv <= 1");
        return v - c.target;
    };

    bool all_symbolic = std::all_of(sym.begin(), sym.end(), [](const auto& e) { return e.has_value(); });
    Bindings solved;
    try {
        if (all_symbolic) {
            std::vector<Expr> eqs;
            for (const auto& e : sym) eqs.push_back(bind_numbers(*e, all));
            std::vector<std::string> left = unknowns;
            bool progress = true;
            while (progress && !left.empty()) {
                progress = false;
                for (auto& e : eqs) e = bind_numbers(e, solved);
                std::erase_if(eqs, [](const Expr& e) { return e.is_zero() || is_constant(e); });
                for (const auto& e : eqs) {
                    int deg = 0, nv = 0;
                    if (!polynomial_in(e, left, deg, nv) || nv != 1 || deg > 3) continue;
                    std::string u;
                    for (const auto& q : e.terms())
                        if (!q.mono.factors.empty()) u = q.mono.factors[0].first;
                    std::vector<double> c(deg + 1, 0.0);
                    for (const auto& q : e.terms()) c[exponent_of(q.mono.factors, u)] += q.mono.numeric();
                    auto roots = real_roots(c);
                    for (double r : roots) res.candidates.push_back(r);
                    if (roots.empty()) {
                        res.ok = false;
                        res.failure = "condition " + render(e) + " = 0 has no real root for " + u;
                        return res;
                    }
                    solved[u] = deg == 1 ? roots[0] : pick(roots, opt.select);
                    res.log.push_back(u + " = " + std::to_string(solved[u]) + " from " + render(e) + " = 0");
                    std::erase(left, u);
                    progress = true;
                    break;
                }
            }
            if (!left.empty()) {
                bool linear = true;
                for (const auto& e : eqs) {
                    int deg = 0, nv = 0;
                    if (!polynomial_in(e, left, deg, nv) || deg > 1) linear = false;
                }
                if (linear && solve_linear(eqs, left, solved)) {
                    res.log.push_back("linear system solved for the remaining constants");
                    left.clear();
                }
            }
            if (left.empty()) {
                res.values = solved;
                goto verify;
            }
            res.log.push_back("falling back to Newton");
        }
        {
            // damped Newton on numeric residuals
            Bindings b = all;
            for (const auto& u : unknowns) b[u] = opt.guess.count(u) ? opt.guess.at(u) : (solved.count(u) ? solved[u] : 0.5);
            std::size_t n = unknowns.size(), m = conds.size();
            if (m < n) throw std::invalid_argument("fewer conditions than unknown constants");
            for (int it = 0; it < 60; ++it) {
                std::vector<double> F(m);
                for (std::size_t i = 0; i < m; ++i) F[i] = numeric_residual(b, i);
                double nrm = 0;
                for (double f : F) nrm = std::max(nrm, std::fabs(f));
                if (nrm < 1e-12) break;
                std::vector<std::vector<double>> J(m, std::vector<double>(n));
                for (std::size_t j = 0; j < n; ++j) {
                    Bindings bp = b;
                    double h = 1e-7 * std::max(1.0, std::fabs(b[unknowns[j]]));
                    bp[unknowns[j]] += h;
                    for (std::size_t i = 0; i < m; ++i) J[i][j] = (numeric_residual(bp, i) - F[i]) / h;
                }
                // normal equations (square systems are the common case)
                std::vector<std::vector<double>> A(n, std::vector<double>(n + 1, 0.0));
                for (std::size_t r = 0; r < n; ++r) {
                    for (std::size_t c2 = 0; c2 < n; ++c2)
                        for (std::size_t i = 0; i < m; ++i) A[r][c2] += J[i][r] * J[i][c2];
                    for (std::size_t i = 0; i < m; ++i) A[r][n] -= J[i][r] * F[i];
                }
                for (std::size_t col = 0; col < n; ++col) {
                    std::size_t piv = col;
                    for (std::size_t r = col; r < n; ++r)
                        if (std::fabs(A[r][col]) > std::fabs(A[piv][col])) piv = r;
                    if (std::fabs(A[piv][col]) < 1e-300) throw std::domain_error("singular Jacobian in constant fit");
                    std::swap(A[piv], A[col]);
                    for (std::size_t r = 0; r < n; ++r) {
                        if (r == col) continue;
                        double f = A[r][col] / A[col][col];
                        for (std::size_t k = col; k <= n; ++k) A[r][k] -= f * A[col][k];
                    }
                }
                double lam = 1.0;
                Bindings trial;
                for (int ls = 0; ls < 30; ++ls, lam *= 0.5) {
                    trial = b;
                    for (std::size_t j = 0; j < n; ++j) trial[unknowns[j]] += lam * A[j][n] / A[j][j];
                    double tn = 0;
                    bool finite = true;
                    for (std::size_t i = 0; i < m; ++i) {
                        double f = numeric_residual(trial, i);
                        if (!std::isfinite(f)) finite = false;
                        tn = std::max(tn, std::fabs(f));
                    }
                    if (finite && tn < nrm) break;
                }
                b = trial;
            }
            for (const auto& u : unknowns) res.values[u] = b[u];
            res.log.push_back("Newton on numeric residuals");
        }
    } catch (const std::exception& ex) {
        res.ok = false;
        res.failure = ex.what();
        return res;
    }
verify:
    {
        Bindings b = all;
        for (const auto& [k, v] : res.values) b[k] = v;
        for (std::size_t i = 0; i < conds.size(); ++i) {
            try {
                double r = numeric_residual(b, i);
                if (conds[i].kind == Condition::Kind::Terminal) {
                    std::ostringstream os;
                    os << "decay check at t = " << opt.terminal_t << ": residual " << r;
                    res.log.push_back(os.str());
                } else if (std::fabs(r) > 1e-8) {
                    res.ok = false;
                    res.failure = "condition " + std::to_string(i) + " not met (residual " + std::to_string(r) + ")";
                }
            } catch (const std::exception& ex) {
                res.log.push_back(std::string("numeric check skipped: ") + ex.what());
            }
        }
    }
    return res;
}

}  // namespace trg
