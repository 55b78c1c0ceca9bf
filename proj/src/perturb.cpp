#include "trg/perturb.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

namespace trg {

int OdeSpec::index_of(const std::string& comp) const {
    for (std::size_t i = 0; i < comps.size(); ++i)
        if (comps[i].name == comp) return static_cast<int>(i);
    return -1;
}

void OdeSpec::validate() const {
    if (comps.empty()) throw std::invalid_argument("equation has no unknowns");
    for (const auto& c : comps) {
        if (c.op.order() < 1) throw std::invalid_argument("component '" + c.name + "' has no linear operator");
        if (max_eps(c.forcing0) > 0) throw std::invalid_argument("order-0 forcing must be eps-free");
        for (const auto& t : c.pert) {
            for (const auto& q : t.coeff.terms())
                if (eps_power(q) < 1)
                    throw std::invalid_argument("term without eps in the perturbation of '" + c.name +
                                                "': the unperturbed problem must be linear");
            for (const auto& [v, p] : t.vars) {
                if (v.comp < 0 || v.comp >= static_cast<int>(comps.size()))
                    throw std::invalid_argument("perturbation refers to an unknown component");
                if (p < 1) throw std::invalid_argument("nonpositive power of an unknown");
            }
        }
    }
}

namespace {

// all ways to write n as an ordered sum of p nonnegative parts
void compositions(int n, int p, std::vector<int>& cur, const std::function<void(const std::vector<int>&)>& f) {
    if (p == 0) {
        if (n == 0) f(cur);
        return;
    }
    for (int i = 0; i <= n; ++i) {
        cur.push_back(i);
        compositions(n - i, p - 1, cur, f);
        cur.pop_back();
    }
}

std::string var_name(const OdeSpec& spec, const HierVar& v) {
    return spec.comps[v.comp].name + std::to_string(v.order) + std::string(v.deriv, '\'');
}

}  // namespace

Hierarchy build_hierarchy(const OdeSpec& spec, int K) {
    spec.validate();
    if (K < 1 || K > 3) throw std::invalid_argument("perturbation order K must be 1, 2 or 3");
    Hierarchy h;
    h.K = K;
    int nc = static_cast<int>(spec.comps.size());
    h.rhs.assign(K + 1, std::vector<std::vector<HierTerm>>(nc));
    for (int c = 0; c < nc; ++c) {
        const Component& comp = spec.comps[c];
        if (!comp.forcing0.is_zero()) h.rhs[0][c].push_back({comp.forcing0, {}});
        for (const auto& pt : comp.pert) {
            std::vector<VarRef> flat;
            for (const auto& [v, p] : pt.vars)
                for (int i = 0; i < p; ++i) flat.push_back(v);
            for (int e = 1; e <= max_eps(pt.coeff); ++e) {
                Expr ce = eps_part(pt.coeff, e);
                if (ce.is_zero()) continue;
                for (int k = e; k <= K; ++k) {
                    std::vector<int> cur;
                    compositions(k - e, static_cast<int>(flat.size()), cur, [&](const std::vector<int>& orders) {
                        std::map<HierVar, int> m;
                        for (std::size_t i = 0; i < flat.size(); ++i) m[{flat[i].comp, orders[i], flat[i].deriv}]++;
                        HierTerm t{ce, {}};
                        for (const auto& [v, p] : m) t.vars.emplace_back(v, p);
                        // merge with an identical variable pattern
                        for (auto& o : h.rhs[k][c]) {
                            if (o.vars == t.vars) {
                                o.coeff += t.coeff;
                                return;
                            }
                        }
                        h.rhs[k][c].push_back(std::move(t));
                    });
                }
            }
        }
    }
    for (auto& order : h.rhs)
        for (auto& comp : order)
            comp.erase(std::remove_if(comp.begin(), comp.end(), [](const HierTerm& t) { return t.coeff.is_zero(); }),
                       comp.end());
    return h;
}

std::string Hierarchy::render(const OdeSpec& spec, int order, int comp) const {
    std::string s;
    for (const auto& t : rhs.at(order).at(comp)) {
        std::string body;
        for (const auto& [v, p] : t.vars) {
            if (!body.empty()) body += "*";
            body += var_name(spec, v);
            if (p > 1) body += "^" + std::to_string(p);
        }
        std::string c = trg::render(t.coeff);
        bool neg = false;
        if (t.coeff.size() == 1 && c[0] == '-') {
            neg = true;
            c = c.substr(1);
        } else if (t.coeff.size() > 1) {
            c = "(" + c + ")";
        }
        std::string term = body.empty() ? c : (c == "1" ? body : c + "*" + body);
        if (s.empty())
            s = neg ? "-" + term : term;
        else
            s += (neg ? " - " : " + ") + term;
    }
    return s.empty() ? "0" : s;
}

namespace {

std::string letter_name(int i) {
    static const char* letters[] = {"A", "B", "C", "D", "E", "F", "G", "H"};
    return i < 8 ? letters[i] : "K" + std::to_string(i);
}

std::vector<KernelMode> make_kernel(const OdeSpec& spec, int c, ParamRegistry& reg, int& letter) {
    const Component& comp = spec.comps[c];
    const KernelStyle& st = comp.kernel;
    std::vector<Root> osc, real;
    for (const auto& r : comp.op.roots()) (r.nu.is_zero() ? real : osc).push_back(r);
    std::stable_sort(real.begin(), real.end(), [](const Root& a, const Root& b) {
        if (a.multiplicity != b.multiplicity) return a.multiplicity < b.multiplicity;
        return a.rho < b.rho;
    });
    bool multi = spec.comps.size() > 1;
    std::string suffix = multi ? std::to_string(c + 1) : "";
    std::vector<KernelMode> modes;
    std::size_t ai = 0, ci = 0;
    for (const auto& r : osc) {
        if (r.multiplicity > 1) throw std::invalid_argument("repeated oscillatory roots are not supported");
        KernelMode m;
        m.comp = c;
        m.rho = r.rho;
        m.nu = r.nu;
        m.kind = ModeKind::Oscillatory;
        m.use_sin = st.use_sin;
        m.amplitude = ai < st.amplitudes.size() ? st.amplitudes[ai] : (osc.size() > 1 ? letter_name(letter++) : "A" + suffix);
        m.phase = ai < st.phases.size() ? st.phases[ai] : "theta" + (osc.size() > 1 ? std::to_string(ai + 1) : suffix);
        ++ai;
        reg.add(m.amplitude, SymbolKind::Amplitude);
        reg.add(m.phase, SymbolKind::Phase);
        modes.push_back(m);
    }
    for (const auto& r : real) {
        KernelMode m;
        m.comp = c;
        m.rho = r.rho;
        m.kind = ModeKind::Real;
        m.constants.resize(r.multiplicity);
        for (int j = r.multiplicity - 1; j >= 0; --j) {
            std::string name = ci < st.constants.size() ? st.constants[ci] : letter_name(letter++) + suffix;
            ++ci;
            m.constants[j] = name;
            reg.add(name, SymbolKind::Amplitude);
        }
        modes.push_back(m);
    }
    for (const auto& m : modes) {
        if (m.kind == ModeKind::Oscillatory) {
            reg.info(m.amplitude).t0_dependent = true;
            reg.info(m.phase).t0_dependent = true;
        } else {
            for (const auto& n : m.constants) reg.info(n).t0_dependent = true;
        }
    }
    return modes;
}

Expr mode_expr(const KernelMode& m, const ParamRegistry& reg) {
    Expr e;
    if (m.kind == ModeKind::Oscillatory) {
        PhaseForm p{m.nu, {{m.phase, 1}}, 0.0};
        e = reg.sym(m.amplitude) * (m.use_sin ? Expr::sine(p) : Expr::cosine(p));
    } else {
        for (std::size_t j = 0; j < m.constants.size(); ++j) e += reg.sym(m.constants[j]) * Expr::sigma(static_cast<int>(j));
    }
    if (!m.rho.is_zero()) e *= Expr::exponential(m.rho);
    return e;
}

Expr evaluate_term(const HierTerm& t, const std::vector<std::vector<Expr>>& y,
                   std::map<HierVar, Expr>& cache) {
    Expr acc = t.coeff;
    for (const auto& [v, p] : t.vars) {
        auto it = cache.find(v);
        if (it == cache.end()) {
            Expr d = y.at(v.comp).at(v.order);
            for (int i = 0; i < v.deriv; ++i) d = diff_t(d);
            it = cache.emplace(v, d).first;
        }
        acc *= it->second.pow(p);
    }
    return acc;
}

}  // namespace

SeriesSolution solve_hierarchy(const OdeSpec& spec, int K, const SeriesOptions& opts) {
    Hierarchy h = build_hierarchy(spec, K);
    SeriesSolution s;
    s.registry = spec.registry;
    s.K = K;
    int nc = static_cast<int>(spec.comps.size());
    s.y.assign(nc, std::vector<Expr>(K + 1));
    int letter = 0;
    for (int c = 0; c < nc; ++c) {
        auto modes = make_kernel(spec, c, s.registry, letter);
        s.modes.insert(s.modes.end(), modes.begin(), modes.end());
    }
    for (const auto& m : s.modes) {
        if (m.kind == ModeKind::Oscillatory) {
            s.params.push_back(m.amplitude);
            s.params.push_back(m.phase);
        } else {
            for (auto it = m.constants.rbegin(); it != m.constants.rend(); ++it) s.params.push_back(*it);
        }
    }
    if (opts.printed) {
        const auto& pr = *opts.printed;
        if (static_cast<int>(pr.size()) != nc) throw std::invalid_argument("printed series has the wrong component count");
        for (int c = 0; c < nc; ++c) {
            for (int k = 0; k <= K && k < static_cast<int>(pr[c].size()); ++k) {
                for (const auto& n : symbols(pr[c][k]))
                    if (!s.registry.has(n)) throw std::invalid_argument("printed series uses undeclared symbol '" + n + "'");
                s.y[c][k] = pr[c][k];
                s.y[c][k].with_domain(s.registry.domain());
            }
        }
        s.printed = true;
        return s;
    }
    auto add_admixture = [&](int c, int k) {
        auto it = opts.admixture.find({c, k});
        if (it == opts.admixture.end()) return;
        for (const auto& n : symbols(it->second))
            if (!s.registry.has(n)) throw std::invalid_argument("admixture uses undeclared symbol '" + n + "'");
        s.y[c][k] += Expr(it->second.terms(), s.registry.domain());
    };
    for (int c = 0; c < nc; ++c) {
        Expr y0;
        for (const auto& m : s.modes)
            if (m.comp == c) y0 += mode_expr(m, s.registry);
        ForcedSolution f = solve_forced(spec.comps[c].op, spec.comps[c].forcing0, s.registry);
        y0 += f.particular;
        s.resonances.insert(s.resonances.end(), f.resonances.begin(), f.resonances.end());
        s.warnings.insert(s.warnings.end(), f.warnings.begin(), f.warnings.end());
        s.y[c][0] = y0;
        add_admixture(c, 0);
    }
    for (int k = 1; k <= K; ++k) {
        std::map<HierVar, Expr> cache;
        for (int c = 0; c < nc; ++c) {
            Expr rhs;
            for (const auto& t : h.rhs[k][c]) rhs += evaluate_term(t, s.y, cache);
            ForcedSolution f = solve_forced(spec.comps[c].op, rhs, s.registry);
            s.resonances.insert(s.resonances.end(), f.resonances.begin(), f.resonances.end());
            s.warnings.insert(s.warnings.end(), f.warnings.begin(), f.warnings.end());
            s.y[c][k] = f.particular;
            s.y[c][k].with_domain(s.registry.domain());
        }
        for (int c = 0; c < nc; ++c) add_admixture(c, k);
    }
    return s;
}

SeriesSolution observe_derivative(const SeriesSolution& s, int d) {
    SeriesSolution o = s;
    for (auto& comp : o.y)
        for (auto& yk : comp)
            for (int i = 0; i < d; ++i) yk = diff_t(yk);
    for (auto& m : o.modes) {
        if (m.kind != ModeKind::Real || !m.rho.is_zero()) continue;
        for (int i = 0; i < d && !m.constants.empty(); ++i) m.constants.erase(m.constants.begin());
    }
    return o;
}

TaylorFrame reassemble(const SeriesSolution& s, int M) {
    if (M < 1 || M > 2) throw std::invalid_argument("renormalization order M must be 1 or 2");
    TaylorFrame f;
    f.K = s.K;
    f.M = M;
    f.params = s.params;
    Expr eps = s.registry.eps();
    for (const auto& comp : s.y) {
        std::vector<Expr> Y(M + 1);
        Expr S1;
        Expr epk(1);
        for (std::size_t k = 0; k < comp.size(); ++k) {
            for (int n = 0; n <= M; ++n) Y[n] += epk * taylor_coeff(comp[k], n);
            std::vector<QuasiTerm> sec;
            for (auto q : comp[k].terms()) {
                if (q.k != 1) continue;
                q.k = 0;
                sec.push_back(q);
            }
            S1 += epk * Expr(sec);
            epk *= eps;
        }
        for (auto& y : Y) y = truncate_eps(y, s.K);
        f.Y.push_back(Y);
        f.S1.push_back(truncate_eps(S1, s.K));
    }
    return f;
}

double eval_rhs(const OdeSpec& spec, int c, double t, const std::vector<std::vector<double>>& vals, const Bindings& b) {
    const Component& comp = spec.comps.at(c);
    double r = eval(comp.forcing0, t, b);
    for (const auto& pt : comp.pert) {
        double v = eval(pt.coeff, t, b);
        for (const auto& [var, p] : pt.vars) {
            double x = vals.at(var.comp).at(var.deriv);
            double xp = 1;
            for (int i = 0; i < p; ++i) xp *= x;
            v *= xp;
        }
        r += v;
    }
    return r;
}

double eval_lhs(const OdeSpec& spec, int c, const std::vector<std::vector<double>>& vals, const Bindings& b) {
    const Component& comp = spec.comps.at(c);
    double s = 0;
    for (int j = 0; j <= comp.op.order(); ++j) s += eval(Expr::from_mono(comp.op.coeffs()[j]), 0.0, b) * vals.at(c).at(j);
    return s;
}

}  // namespace trg
