#include "trg/renorm.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <stdexcept>

namespace trg {

Expr total_derivative(const Expr& e, const std::vector<std::string>& params, ParamRegistry& reg) {
    Expr d = diff_t(e);
    for (const auto& p : params) {
        Expr dp = diff_param(e, p);
        if (dp.is_zero()) continue;
        d += dp * reg.sym(reg.derivative(p));
    }
    return d;
}

Residual residual(const TaylorFrame& f, const ParamRegistry& reg) {
    Residual r;
    r.registry = reg;
    r.params = f.params;
    for (const auto& p : f.params) r.registry.derivative(p);
    for (const auto& Y : f.Y) {
        r.Y0.push_back(Y[0]);
        r.first.push_back(truncate_eps(total_derivative(Y[0], f.params, r.registry) - Y[1], f.K));
        if (f.M >= 2) r.second.push_back(truncate_eps(total_derivative(Y[1], f.params, r.registry) - Y[2].scaled(Rational(2)), f.K));
    }
    return r;
}

Expr divide_monomial(const Expr& e, const Expr& mono) {
    if (!is_monomial(mono)) throw std::invalid_argument("divisor is not a monomial: " + render(mono));
    return e * Expr::from_mono(inverse(mono.terms()[0].mono));
}

std::optional<Expr> series_quotient(const Expr& numer, const Expr& denom, int K) {
    Expr d0 = eps_part(denom, 0);
    if (!is_monomial(d0)) return std::nullopt;
    Expr inv0 = Expr::from_mono(inverse(d0.terms()[0].mono));
    Expr u = truncate_eps((denom - d0) * inv0, K);
    Expr sum(1), pw(1);
    for (int j = 1; j <= K; ++j) {
        pw = truncate_eps(pw * (-u), K);
        sum += pw;
    }
    return truncate_eps(numer * inv0 * sum, K);
}

Expr FlowEquation::numer() const {
    Expr s;
    for (const auto& p : parts)
        if (p.weight.is_const(1)) s += p.numer;
    return s;
}

bool FlowEquation::quasi_trig() const {
    return std::all_of(parts.begin(), parts.end(), [](const FlowTerm& t) { return t.weight.is_const(1); });
}

double FlowEquation::eval(double t0, const Bindings& b) const {
    if (held_constant) return 0.0;
    double s = 0;
    for (const auto& p : parts) s += trg::eval(p.numer, t0, b) * p.weight.eval(t0, b);
    return s / trg::eval(denom, t0, b);
}

std::string FlowEquation::render() const {
    std::string lhs = param + "'";
    if (held_constant) return lhs + " = 0";
    std::string s;
    for (const auto& p : parts) {
        std::string n = trg::render(p.numer, "t0");
        if (!p.weight.is_const(1)) n = (p.numer.size() > 1 ? "(" + n + ")" : n) + "*" + p.weight.render("t0");
        s = s.empty() ? n : s + " + " + n;
    }
    if (s.empty()) s = "0";
    if (!(denom == Expr(1))) s = "(" + s + ")/(" + trg::render(denom, "t0") + ")";
    return lhs + " = " + s;
}

const FlowEquation* FlowSystem::find(const std::string& p) const {
    for (const auto& e : eqs)
        if (e.param == p) return &e;
    return nullptr;
}

std::string FlowSystem::render() const {
    std::string s;
    for (const auto& e : eqs) s += e.render() + "\n";
    return s;
}

namespace {

struct LinEq {
    std::string basis;
    std::map<std::string, Expr> coef;  // derivative symbol -> coefficient
    Expr rest;
};

Expr det(const std::vector<std::vector<Expr>>& m) {
    std::size_t n = m.size();
    if (n == 1) return m[0][0];
    if (n == 2) return m[0][0] * m[1][1] - m[0][1] * m[1][0];
    Expr d;
    for (std::size_t j = 0; j < n; ++j) {
        if (m[0][j].is_zero()) continue;
        std::vector<std::vector<Expr>> minor;
        for (std::size_t i = 1; i < n; ++i) {
            std::vector<Expr> row;
            for (std::size_t k = 0; k < n; ++k)
                if (k != j) row.push_back(m[i][k]);
            minor.push_back(row);
        }
        Expr t = m[0][j] * det(minor);
        d += (j % 2 == 0) ? t : -t;
    }
    return d;
}

bool phases_constrained(const FactorList& phases, const std::vector<FactorList>& constraints) {
    if (phases.empty()) return true;
    std::vector<FreqCombo> basis;
    for (const auto& c : constraints) basis.push_back({Rational(0), c});
    return in_span({Rational(0), phases}, basis);
}

// t-free harmonic factor with constraint-satisfied phases replaced by the shift
Expr harmonic_factor(Harmonic h, PhaseForm p, const std::vector<FactorList>& constraints) {
    if (phases_constrained(p.phases, constraints)) p.phases.clear();
    if (h == Harmonic::Cos) return Expr::cosine(p);
    if (h == Harmonic::Sin) return Expr::sine(p);
    return Expr(1);
}

std::set<std::string> derivative_symbols(const Expr& e, const ParamRegistry& reg) {
    std::set<std::string> out;
    for (const auto& n : symbols(e))
        if (reg.has(n) && reg.kind(n) == SymbolKind::Derivative) out.insert(n);
    return out;
}

}  // namespace

FlowSystem project(const Residual& r, const SeriesSolution& s, const Policy& policy) {
    FlowSystem fs;
    fs.registry = r.registry;
    fs.K = s.K;
    fs.policy = policy.name;
    fs.pins = policy.pins;
    fs.constraints = policy.constraints;
    const ParamRegistry& reg = fs.registry;
    std::set<std::string> pinned;
    for (const auto& [n, v] : policy.pins) pinned.insert(n);

    // parameters absent from the leading order are held constant
    std::set<std::string> spectators;
    for (const auto& p : r.params) {
        bool in_leading = false;
        for (const auto& y : s.y)
            if (!y.empty() && contains(eps_part(y[0], 0), p)) in_leading = true;
        if (!in_leading && !pinned.count(p)) spectators.insert(ParamRegistry::derivative_name(p));
    }
    // a leading order free of every parameter (a printed particular solution)
    // leaves nothing to hold them against
    std::size_t free_params = 0;
    for (const auto& p : r.params) free_params += pinned.count(p) ? 0 : 1;
    if (spectators.size() == free_params) spectators.clear();

    std::set<std::string> solved;
    for (std::size_t c = 0; c < r.first.size(); ++c) {
        std::vector<LinEq> eqs;
        auto split = [&](const std::string& basis, const Expr& E) {
            LinEq le;
            le.basis = basis;
            Expr rest = E;
            for (const auto& d : derivative_symbols(E, reg)) {
                Expr a = diff_param(E, d);
                if (!a.is_zero()) le.coef[d] = a;
                rest = substitute(rest, d, Expr());
            }
            le.rest = rest;
            eqs.push_back(le);
        };
        // first residual, then the second one when the frame has M = 2
        for (std::size_t level = 0; level < (r.second.empty() ? 1u : 2u); ++level) {
            const std::string tag = level == 0 ? "" : "second: ";
            Expr R = level == 0 ? r.first[c] : r.second[c];
            for (const auto& [n, v] : policy.pins) {
                if (!reg.has(n)) throw std::invalid_argument("pin on unknown symbol '" + n + "'");
                R = reg.kind(n) == SymbolKind::Phase ? pin_phase(R, n, v) : substitute(R, n, Expr::number(v));
                std::string dn = ParamRegistry::derivative_name(n);
                if (reg.has(dn)) R = substitute(R, dn, Expr());
            }
            // eps^j * derivative terms with j >= K count as higher order
            std::vector<QuasiTerm> kept;
            for (const auto& q : R.terms()) {
                Expr single(std::vector<QuasiTerm>{q}, R.domain());
                auto ds = derivative_symbols(single, reg);
                if (std::any_of(ds.begin(), ds.end(), [&](const std::string& d) { return spectators.count(d) > 0; })) {
                    fs.ledger.push_back({static_cast<int>(c), "spectator derivative", single});
                    continue;
                }
                bool has_d = !ds.empty();
                if (has_d && eps_power(q) >= s.K && !policy.keep_eps_deriv) {
                    fs.ledger.push_back({static_cast<int>(c), "eps-order derivative term", Expr(std::vector<QuasiTerm>{q}, R.domain())});
                    continue;
                }
                kept.push_back(q);
            }
            R = Expr(kept, R.domain());

            if (policy.projection == Projection::WholeResidual) {
                fs.projections.push_back({static_cast<int>(c), tag + "1", Expr(1), R});
                split(tag + "whole residual", R);
            } else {
                // basis index: 2*mode (cos) / 2*mode+1 (sin), real modes use 2*mode
                std::map<int, Expr> coeff;
                std::map<int, Expr> basis_expr;
                std::map<int, std::string> basis_name;
                std::vector<const KernelMode*> modes;
                for (const auto& m : s.modes)
                    if (m.comp == static_cast<int>(c)) modes.push_back(&m);
                for (const auto& q : R.terms()) {
                    bool placed = false;
                    for (std::size_t mi = 0; mi < modes.size() && !placed; ++mi) {
                        const KernelMode& m = *modes[mi];
                        if (q.rho != m.rho) continue;
                        QuasiTerm bare = q;
                        bare.harm = Harmonic::One;
                        bare.phase = {};
                        bare.rho = Rational(0);
                        Expr M(std::vector<QuasiTerm>{bare}, R.domain());
                        Expr ex = m.rho.is_zero() ? Expr(1) : Expr::exponential(m.rho);
                        if (m.kind == ModeKind::Real) {
                            if (q.harm != Harmonic::One && !q.phase.t_free()) continue;
                            int key = 2 * static_cast<int>(mi);
                            coeff[key] += M * harmonic_factor(q.harm, q.phase, policy.constraints);
                            basis_expr[key] = ex;
                            basis_name[key] = render(ex, "t0");
                            placed = true;
                            continue;
                        }
                        if (q.harm == Harmonic::One || q.phase.t_free()) continue;
                        int sgn = 0;
                        FreqCombo dp = q.phase.freq - m.nu, dm = q.phase.freq + m.nu;
                        if (dp.is_zero() || reg.in_relation_span(dp))
                            sgn = 1;
                        else if (dm.is_zero() || reg.in_relation_span(dm))
                            sgn = -1;
                        if (sgn == 0) continue;
                        // q = M h(sgn*phi + delta), phi = nu t + theta (or its pinned value)
                        PhaseForm delta, phi{m.nu, {{m.phase, 1}}, 0.0};
                        delta.phases = add_factors(q.phase.phases, {{m.phase, 1}}, -sgn);
                        delta.shift = q.phase.shift;
                        if (auto pin = policy.pins.find(m.phase); pin != policy.pins.end()) {
                            phi = {m.nu, {}, pin->second};
                            delta.phases = q.phase.phases;
                            delta.shift = q.phase.shift - sgn * pin->second;
                        }
                        Expr cd = harmonic_factor(Harmonic::Cos, delta, policy.constraints);
                        Expr sd = harmonic_factor(Harmonic::Sin, delta, policy.constraints);
                        int kc = 2 * static_cast<int>(mi), ks = kc + 1;
                        if (q.harm == Harmonic::Cos) {
                            coeff[kc] += M * cd;
                            coeff[ks] -= (M * sd).scaled(Rational(sgn));
                        } else {
                            coeff[ks] += (M * cd).scaled(Rational(sgn));
                            coeff[kc] += M * sd;
                        }
                        basis_expr[kc] = ex * Expr::cosine(phi);
                        basis_expr[ks] = ex * Expr::sine(phi);
                        basis_name[kc] = render(basis_expr[kc], "t0");
                        basis_name[ks] = render(basis_expr[ks], "t0");
                        placed = true;
                    }
                    if (!placed) fs.ledger.push_back({static_cast<int>(c), "non-fundamental harmonic", Expr(std::vector<QuasiTerm>{q}, R.domain())});
                }
                for (const auto& [k, E] : coeff) {
                    fs.projections.push_back({static_cast<int>(c), tag + basis_name[k], basis_expr[k], E});
                    if (!E.is_zero()) split(tag + basis_name[k], E);
                }
            }
        }

        // block solve: connected components of equations sharing unknowns
        std::vector<bool> done(eqs.size(), false);
        for (std::size_t i = 0; i < eqs.size(); ++i) {
            if (done[i]) continue;
            if (eqs[i].coef.empty()) {
                done[i] = true;
                if (eqs[i].rest.is_zero()) continue;
                // with pinned parameters the leftover projections are closure conditions
                fs.algebraic.push_back(eqs[i].rest);
                if (policy.pins.empty())
                    fs.unresolved.push_back("no parameter derivative on basis " + eqs[i].basis + ": " + render(eqs[i].rest, "t0") + " = 0");
                continue;
            }
            std::vector<std::size_t> block{i};
            std::set<std::string> unk;
            for (const auto& [d, a] : eqs[i].coef) unk.insert(d);
            done[i] = true;
            bool grew = true;
            while (grew) {
                grew = false;
                for (std::size_t j = 0; j < eqs.size(); ++j) {
                    if (done[j] || eqs[j].coef.empty()) continue;
                    bool share = std::any_of(eqs[j].coef.begin(), eqs[j].coef.end(),
                                             [&](const auto& kv) { return unk.count(kv.first) > 0; });
                    if (!share) continue;
                    block.push_back(j);
                    for (const auto& [d, a] : eqs[j].coef) unk.insert(d);
                    done[j] = true;
                    grew = true;
                }
            }
            std::vector<std::string> u(unk.begin(), unk.end());
            if (block.size() != u.size()) {
                std::string names;
                for (const auto& x : u) names += x + " ";
                fs.unresolved.push_back(std::to_string(block.size()) + " equations for " + std::to_string(u.size()) +
                                        " unknowns (" + names + ")");
                continue;
            }
            std::size_t n = u.size();
            std::vector<std::vector<Expr>> A(n, std::vector<Expr>(n));
            std::vector<Expr> rhs(n);
            for (std::size_t bi = 0; bi < n; ++bi) {
                const LinEq& le = eqs[block[bi]];
                for (std::size_t uj = 0; uj < n; ++uj) {
                    auto it = le.coef.find(u[uj]);
                    if (it != le.coef.end()) A[bi][uj] = it->second;
                }
                rhs[bi] = -le.rest;
            }
            Expr D = det(A);
            if (D.is_zero()) {
                fs.unresolved.push_back("singular projection for " + u.front());
                continue;
            }
            for (std::size_t uj = 0; uj < n; ++uj) {
                auto Aj = A;
                for (std::size_t bi = 0; bi < n; ++bi) Aj[bi][uj] = rhs[bi];
                Expr num = n == 1 ? rhs[0] : det(Aj);
                FlowEquation fe;
                fe.param = reg.info(u[uj]).base;
                if (num.is_zero()) {
                    fe.parts.push_back({Expr()});
                } else if (is_monomial(D)) {
                    fe.parts.push_back({truncate_eps(divide_monomial(num, D), s.K)});
                } else if (policy.series_divide) {
                    if (auto q = series_quotient(num, D, s.K)) {
                        fe.parts.push_back({*q});
                        fe.note = "eps-expanded quotient";
                    } else {
                        fe.parts.push_back({num});
                        fe.denom = D;
                    }
                } else {
                    fe.parts.push_back({num});
                    fe.denom = D;
                }
                fs.eqs.push_back(fe);
                solved.insert(fe.param);
            }
        }
    }
    // order equations like the parameters; unsolved parameters are held
    std::vector<FlowEquation> ordered;
    for (const auto& p : r.params) {
        if (pinned.count(p)) continue;
        auto it = std::find_if(fs.eqs.begin(), fs.eqs.end(), [&](const FlowEquation& e) { return e.param == p; });
        if (it != fs.eqs.end()) {
            ordered.push_back(*it);
            continue;
        }
        FlowEquation fe;
        fe.param = p;
        fe.held_constant = true;
        bool in_leading = false;
        for (const auto& y : r.Y0)
            if (contains(eps_part(y, 0), p)) in_leading = true;
        fe.note = in_leading ? "no renormalization equation at this jet order; held constant"
                             : "spectator (absent from the leading order); held constant";
        ordered.push_back(fe);
    }
    for (auto& fe : ordered) {
        if (fe.held_constant) continue;
        for (const auto& m : s.modes) {
            if (m.kind != ModeKind::Real || m.constants.size() < 2 || m.constants[0] != fe.param) continue;
            fe.kinematic = reg.sym(m.constants[1]);
        }
    }
    fs.eqs = ordered;
    return fs;
}

}  // namespace trg
