#include "trg/linode.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>

namespace trg {

CPoly operator+(const CPoly& a, const CPoly& b) { return {a.re + b.re, a.im + b.im}; }

CPoly operator*(const CPoly& a, const CPoly& b) { return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re}; }

CPoly scaled(const CPoly& a, const Rational& r) { return {a.re.scaled(r), a.im.scaled(r)}; }

LinOp::LinOp(std::vector<ParamMono> coeffs) : coeffs_(std::move(coeffs)) {
    while (!coeffs_.empty() && coeffs_.back().is_zero()) coeffs_.pop_back();
    if (coeffs_.size() < 2) throw std::invalid_argument("linear operator must have order >= 1");
    if (order() > 4) throw std::invalid_argument("linear operator order above 4 is not supported");
    find_roots();
}

LinOp LinOp::from_rationals(const std::vector<Rational>& a) {
    std::vector<ParamMono> m;
    for (const auto& r : a) {
        ParamMono p;
        p.coeff = r;
        m.push_back(p);
    }
    return LinOp(m);
}

bool operator==(const LinOp& a, const LinOp& b) {
    if (a.coeffs_.size() != b.coeffs_.size()) return false;
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
        if (!(Expr::from_mono(a.coeffs_[i]) == Expr::from_mono(b.coeffs_[i]))) return false;
    return true;
}

Expr LinOp::apply(const Expr& y) const {
    Expr out;
    Expr d = y;
    for (std::size_t j = 0; j < coeffs_.size(); ++j) {
        if (!coeffs_[j].is_zero()) out += Expr::from_mono(coeffs_[j]) * d;
        if (j + 1 < coeffs_.size()) d = diff_t(d);
    }
    return out;
}

CPoly LinOp::char_derivative(const CPoly& s, int j) const {
    CPoly acc{Expr(), Expr()};
    CPoly pw{Expr(1), Expr()};
    for (int i = j; i <= order(); ++i) {
        if (!coeffs_[i].is_zero()) {
            Expr a = Expr::from_mono(coeffs_[i]).scaled(binomial(i, j));
            acc = acc + CPoly{a * pw.re, a * pw.im};
        }
        pw = pw * s;
    }
    return acc;
}

namespace {

bool has_symbols(const ParamMono& m) { return !m.factors.empty() || !m.exact(); }

using cd = std::complex<double>;

// exact complex rational evaluation of d^j P / j! at rho + i nu
std::pair<Rational, Rational> eval_exact(const std::vector<Rational>& a, int j, Rational re, Rational im) {
    Rational sr(0), si(0), pr(1), pi(0);
    for (int i = j; i < static_cast<int>(a.size()); ++i) {
        Rational b = a[i] * binomial(i, j);
        sr += b * pr;
        si += b * pi;
        Rational nr = pr * re - pi * im, ni = pr * im + pi * re;
        pr = nr;
        pi = ni;
    }
    return {sr, si};
}

std::vector<cd> durand_kerner(const std::vector<double>& a) {
    int n = static_cast<int>(a.size()) - 1;
    std::vector<cd> z(n);
    cd seed(0.4, 0.9);
    for (int i = 0; i < n; ++i) z[i] = std::pow(seed, i);
    auto p = [&](cd x) {
        cd v = a[n];
        for (int i = n - 1; i >= 0; --i) v = v * x + a[i];
        return v / a[n];
    };
    for (int it = 0; it < 2000; ++it) {
        double change = 0;
        for (int i = 0; i < n; ++i) {
            cd den = 1;
            for (int k = 0; k < n; ++k)
                if (k != i) den *= z[i] - z[k];
            if (std::abs(den) < 1e-300) den = 1e-300;
            cd dz = p(z[i]) / den;
            z[i] -= dz;
            change = std::max(change, std::abs(dz));
        }
        if (change < 1e-15) break;
    }
    return z;
}

}  // namespace

void LinOp::find_roots() {
    roots_.clear();
    bool symbolic = std::any_of(coeffs_.begin(), coeffs_.end(), has_symbols);
    if (symbolic) {
        // only a2 D^2 + a0 with a0/a2 = r^2 w^2 for one frequency symbol
        if (order() != 2 || !coeffs_[1].is_zero() || has_symbols(coeffs_[2]))
            throw std::invalid_argument("symbolic operator must have the form a*D^2 + c*w^2");
        const ParamMono& a0 = coeffs_[0];
        if (!a0.exact() || a0.factors.size() != 1 || a0.factors[0].second != 2)
            throw std::invalid_argument("symbolic operator must have the form a*D^2 + c*w^2");
        Rational q = a0.coeff / coeffs_[2].coeff;
        double rq = std::sqrt(q.to_double());
        auto r = Rational::from_double(rq, 1e-14, 1);
        if (q.sign() <= 0 || !r || *r * *r != q)
            throw std::invalid_argument("frequency factor must be a positive integer square");
        roots_.push_back({Rational(0), {Rational(0), {{a0.factors[0].first, static_cast<int>(r->num())}}}, 1});
        return;
    }
    std::vector<Rational> a;
    for (const auto& c : coeffs_) a.push_back(c.coeff);
    int zeros = 0;
    while (zeros < static_cast<int>(a.size()) && a[zeros].is_zero()) ++zeros;
    if (zeros > 0) roots_.push_back({Rational(0), {}, zeros});
    std::vector<double> rest;
    for (std::size_t i = zeros; i < a.size(); ++i) rest.push_back(a[i].to_double());
    if (rest.size() < 2) return;
    std::vector<cd> z = durand_kerner(rest);
    std::vector<bool> used(z.size(), false);
    std::vector<Rational> ex(a.begin(), a.end());
    for (std::size_t i = 0; i < z.size(); ++i) {
        if (used[i]) continue;
        if (z[i].imag() < -1e-7) continue;  // conjugate handled with its partner
        cd mean = z[i];
        auto re = Rational::from_double(mean.real(), 1e-6, 10000);
        auto im = Rational::from_double(std::fabs(mean.imag()) < 1e-7 ? 0.0 : mean.imag(), 1e-6, 10000);
        if (!re || !im)
            throw std::invalid_argument("operator has an irrational characteristic root; declare a frequency symbol");
        auto [pr, pi] = eval_exact(ex, 0, *re, *im);
        if (!pr.is_zero() || !pi.is_zero())
            throw std::invalid_argument("operator has an irrational characteristic root; declare a frequency symbol");
        int m = 1;
        while (true) {
            auto [dr, di] = eval_exact(ex, m, *re, *im);
            if (!dr.is_zero() || !di.is_zero()) break;
            ++m;
        }
        // mark the m copies (and conjugates) as used
        int need = m * (im->is_zero() ? 1 : 2);
        for (std::size_t k = 0; k < z.size() && need > 0; ++k) {
            if (used[k]) continue;
            double d1 = std::abs(z[k] - cd(re->to_double(), im->to_double()));
            double d2 = std::abs(z[k] - cd(re->to_double(), -im->to_double()));
            if (std::min(d1, d2) < 1e-4) {
                used[k] = true;
                --need;
            }
        }
        bool dup = false;
        for (const auto& r : roots_)
            if (r.rho == *re && r.nu.rate == *im) dup = true;
        if (!dup) roots_.push_back({*re, {*im, {}}, m});
    }
}

std::string LinOp::render(const std::string& var) const {
    std::string s;
    for (int j = order(); j >= 0; --j) {
        const ParamMono& c = coeffs_[j];
        if (c.is_zero()) continue;
        std::string v = var + std::string(j, '\'');
        std::string term = trg::render(Expr::from_mono(c));
        bool neg = !term.empty() && term[0] == '-';
        if (neg) term = term.substr(1);
        std::string body = term == "1" ? v : (term.find(' ') != std::string::npos ? "(" + term + ")" : term) + "*" + v;
        if (s.empty())
            s = neg ? "-" + body : body;
        else
            s += (neg ? " - " : " + ") + body;
    }
    return s;
}

RootMatch match_root(const LinOp& op, const Rational& rho, const FreqCombo& nu, const ParamRegistry& reg) {
    RootMatch best;
    Bindings b = reg.bindings();
    for (std::size_t i = 0; i < op.roots().size(); ++i) {
        const Root& r = op.roots()[i];
        if (r.rho != rho) continue;
        if (r.nu.is_zero() != nu.is_zero()) {
            // a zero combo may still vanish through relations; handled below numerically
        }
        for (int sign : {1, -1}) {
            FreqCombo diff = nu - sign * r.nu;
            if (diff.is_zero() || reg.in_relation_span(diff)) {
                best.root = static_cast<int>(i);
                best.sign = sign;
                best.numeric = false;
                return best;
            }
        }
        // numeric decision
        double nv, rv;
        try {
            nv = value(nu, b);
            rv = value(r.nu, b);
        } catch (const std::out_of_range&) {
            continue;
        }
        for (int sign : {1, -1}) {
            double d = std::fabs(nv - sign * rv);
            double scale = std::max(1.0, std::fabs(rv));
            if (d <= 1e-9 * scale) {
                best.root = static_cast<int>(i);
                best.sign = sign;
                best.numeric = true;
                best.distance = d;
                return best;
            }
            if (d <= 1e-6 * scale) {
                best.near = true;
                best.distance = d;
            }
        }
    }
    return best;
}

namespace {

bool numeric_poly(const Expr& e) {
    for (const auto& q : e.terms())
        if (q.k != 0 || !q.rho.is_zero() || q.harm != Harmonic::One) return false;
    return true;
}

}  // namespace

CPoly invert(const CPoly& d, const ParamRegistry& reg) {
    auto inv_real = [&](const Expr& a) -> Expr {
        if (is_monomial(a)) return Expr::from_mono(inverse(a.terms()[0].mono)).with_domain(a.domain());
        if (!numeric_poly(a)) throw std::invalid_argument("cannot invert a non-polynomial coefficient");
        double v;
        try {
            v = eval(a, 0.0, reg.bindings());
        } catch (const std::out_of_range& e) {
            throw std::invalid_argument(std::string("unresolvable division by ") + render(a) + " (" + e.what() + ")");
        }
        if (v == 0.0) throw std::domain_error("division by a coefficient that evaluates to zero: " + render(a));
        return Expr::number(1.0 / v);
    };
    if (d.re.is_zero() && d.im.is_zero()) throw std::domain_error("division by zero");
    if (d.im.is_zero()) return {inv_real(d.re), Expr()};
    if (d.re.is_zero()) return {Expr(), -inv_real(d.im)};
    Expr m = inv_real(d.re * d.re + d.im * d.im);
    return {d.re * m, -(d.im * m)};
}

ForcedSolution solve_forced(const LinOp& op, const Expr& forcing, const ParamRegistry& reg) {
    ForcedSolution out;
    int n = op.order();
    for (const auto& q : forcing.terms()) {
        bool osc = q.harm != Harmonic::One && !q.phase.freq.is_zero();
        FreqCombo nu = osc ? q.phase.freq : FreqCombo{};
        RootMatch rm = match_root(op, q.rho, nu, reg);
        int m = 0;
        FreqCombo nu_eval = nu;
        if (rm.root >= 0) {
            m = op.roots()[rm.root].multiplicity;
            nu_eval = rm.sign * op.roots()[rm.root].nu;
            QuasiTerm shown = q;
            out.resonances.push_back({render(Expr({shown})), m, rm.numeric});
        } else if (rm.near) {
            out.warnings.push_back("near resonance (distance " + std::to_string(rm.distance) + ") for term " +
                                   render(Expr({q})));
        }
        Expr nu_poly(nu_eval.rate);
        for (const auto& [s, k] : nu_eval.syms) nu_poly += Expr::symbol(s).scaled(Rational(k));
        CPoly s{Expr(q.rho), nu_poly};
        std::vector<CPoly> d(n + 1);
        for (int j = 0; j <= n; ++j) d[j] = op.char_derivative(s, j);
        if (m > n) throw std::logic_error("resonance multiplicity exceeds operator order");
        CPoly dm_inv = invert(d[m], reg);
        int k = q.k;
        if (k + m > kSecularCap)
            throw std::overflow_error("secular power " + std::to_string(k + m) + " exceeds cap " +
                                      std::to_string(kSecularCap));
        // amplitude of e^{i phi}: cos -> 1, sin -> -i
        CPoly amp = q.harm == Harmonic::Sin && osc ? CPoly{Expr(), Expr(-1)} : CPoly{Expr(1), Expr()};
        std::vector<CPoly> c(k + m + 1, CPoly{Expr(), Expr()});
        for (int nn = k; nn >= 0; --nn) {
            // sum_{j>=m} d_j c_{nn+j} (nn+j)!/nn! = f_nn
            CPoly rhs = nn == k ? amp : CPoly{Expr(), Expr()};
            for (int j = m + 1; j <= n && nn + j <= k + m; ++j) {
                Rational f = factorial(nn + j) / factorial(nn);
                CPoly t = scaled(d[j] * c[nn + j], f);
                rhs = rhs + CPoly{-t.re, -t.im};
            }
            Rational f = factorial(nn) / factorial(nn + m);
            c[nn + m] = scaled(rhs * dm_inv, f);
        }
        QuasiTerm base = q;
        base.mono = ParamMono{};
        Expr mono = Expr::from_mono(q.mono);
        for (int i = m; i <= k + m; ++i) {
            if (c[i].re.is_zero() && c[i].im.is_zero()) continue;
            QuasiTerm b = base;
            b.k = i;
            if (osc) {
                QuasiTerm bc = b, bs = b;
                bc.harm = Harmonic::Cos;
                bs.harm = Harmonic::Sin;
                out.particular += mono * c[i].re * Expr({bc});
                out.particular -= mono * c[i].im * Expr({bs});
            } else {
                if (!c[i].im.is_zero()) throw std::logic_error("imaginary part in a real particular solution");
                out.particular += mono * c[i].re * Expr({b});
            }
        }
    }
    out.particular.with_domain(forcing.domain());
    return out;
}

}  // namespace trg
