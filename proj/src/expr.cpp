#include "trg/expr.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace trg {

FactorList add_factors(const FactorList& a, const FactorList& b, int sign) {
    FactorList out;
    out.reserve(a.size() + b.size());
    std::size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
        if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
            out.push_back(a[i++]);
        } else if (i == a.size() || b[j].first < a[i].first) {
            out.emplace_back(b[j].first, sign * b[j].second);
            ++j;
        } else {
            int e = a[i].second + sign * b[j].second;
            if (e != 0) out.emplace_back(a[i].first, e);
            ++i;
            ++j;
        }
    }
    return out;
}

FactorList scale_factors(const FactorList& a, int k) {
    if (k == 0) return {};
    FactorList out = a;
    for (auto& f : out) f.second *= k;
    return out;
}

int exponent_of(const FactorList& f, std::string_view name) {
    for (const auto& [n, e] : f)
        if (n == name) return e;
    return 0;
}

FactorList without(const FactorList& f, std::string_view name) {
    FactorList out;
    for (const auto& x : f)
        if (x.first != name) out.push_back(x);
    return out;
}

ParamMono operator*(const ParamMono& a, const ParamMono& b) {
    ParamMono m;
    m.coeff = a.coeff * b.coeff;
    m.scale = a.scale * b.scale;
    m.factors = add_factors(a.factors, b.factors);
    return m;
}

ParamMono inverse(const ParamMono& m) {
    if (m.is_zero()) throw std::domain_error("inverse of zero monomial");
    ParamMono r;
    r.coeff = Rational(1) / m.coeff;
    r.scale = 1.0 / m.scale;
    r.factors = scale_factors(m.factors, -1);
    return r;
}

FreqCombo operator+(const FreqCombo& a, const FreqCombo& b) {
    return {a.rate + b.rate, add_factors(a.syms, b.syms)};
}

FreqCombo operator-(const FreqCombo& a, const FreqCombo& b) {
    return {a.rate - b.rate, add_factors(a.syms, b.syms, -1)};
}

FreqCombo operator*(int k, const FreqCombo& a) { return {a.rate * Rational(k), scale_factors(a.syms, k)}; }

namespace {

double lookup(const Bindings& b, const std::string& name) {
    auto it = b.find(name);
    if (it == b.end()) throw std::out_of_range("unbound symbol '" + name + "'");
    return it->second;
}

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

}  // namespace

double value(const FreqCombo& f, const Bindings& b) {
    double v = f.rate.to_double();
    for (const auto& [n, m] : f.syms) v += m * lookup(b, n);
    return v;
}

std::string render(const FreqCombo& f) {
    std::string s;
    auto push = [&](int sign, const std::string& body) {
        if (s.empty())
            s = sign < 0 ? "-" + body : body;
        else
            s += (sign < 0 ? "-" : "+") + body;
    };
    if (!f.rate.is_zero()) push(f.rate.sign(), abs(f.rate).str());
    for (const auto& [n, m] : f.syms) {
        int am = m < 0 ? -m : m;
        push(m < 0 ? -1 : 1, am == 1 ? n : std::to_string(am) + "*" + n);
    }
    return s.empty() ? "0" : s;
}

PhaseForm operator+(const PhaseForm& a, const PhaseForm& b) {
    return {a.freq + b.freq, add_factors(a.phases, b.phases), a.shift + b.shift};
}

PhaseForm operator-(const PhaseForm& a, const PhaseForm& b) {
    return {a.freq - b.freq, add_factors(a.phases, b.phases, -1), a.shift - b.shift};
}

PhaseForm negate(const PhaseForm& a) { return {-1 * a.freq, scale_factors(a.phases, -1), -a.shift}; }

int canonical_sign(PhaseForm& p) {
    int s = 0;
    if (!p.freq.rate.is_zero())
        s = p.freq.rate.sign();
    else if (!p.freq.syms.empty())
        s = p.freq.syms.front().second > 0 ? 1 : -1;
    else if (!p.phases.empty())
        s = p.phases.front().second > 0 ? 1 : -1;
    else if (p.shift != 0.0)
        s = p.shift > 0 ? 1 : -1;
    if (s < 0) {
        p = negate(p);
        return -1;
    }
    return 1;
}

double value(const PhaseForm& p, double t, const Bindings& b) {
    double v = value(p.freq, b) * t + p.shift;
    for (const auto& [n, m] : p.phases) v += m * lookup(b, n);
    return v;
}

namespace {

int cmp_rational(const Rational& a, const Rational& b) {
    auto c = a <=> b;
    return c < 0 ? -1 : (c > 0 ? 1 : 0);
}

int cmp_factors(const FactorList& a, const FactorList& b) {
    auto c = a <=> b;
    return c < 0 ? -1 : (c > 0 ? 1 : 0);
}

int cmp_phase(const PhaseForm& a, const PhaseForm& b) {
    if (int c = cmp_rational(a.freq.rate, b.freq.rate)) return c;
    if (int c = cmp_factors(a.freq.syms, b.freq.syms)) return c;
    if (int c = cmp_factors(a.phases, b.phases)) return c;
    if (a.shift != b.shift) return a.shift < b.shift ? -1 : 1;
    return 0;
}

bool close_rel(double a, double b, double tol) {
    return std::fabs(a - b) <= tol * std::max({std::fabs(a), std::fabs(b), 1e-300});
}

}  // namespace

int compare_key(const QuasiTerm& a, const QuasiTerm& b) {
    if (a.k != b.k) return a.k < b.k ? -1 : 1;
    if (int c = cmp_rational(a.rho, b.rho)) return c;
    if (a.harm != b.harm) return static_cast<int>(a.harm) < static_cast<int>(b.harm) ? -1 : 1;
    if (int c = cmp_phase(a.phase, b.phase)) return c;
    return cmp_factors(a.mono.factors, b.mono.factors);
}

Expr::Expr(Rational c) {
    if (!c.is_zero()) {
        QuasiTerm q;
        q.mono.coeff = c;
        terms_.push_back(q);
    }
}

Expr::Expr(std::vector<QuasiTerm> terms, std::uint64_t domain) : terms_(std::move(terms)), domain_(domain) {
    canonicalize();
}

Expr Expr::number(double v) {
    if (auto r = Rational::from_double(v, 0.0, 1000000000); r) return Expr(*r);
    QuasiTerm q;
    q.mono.scale = v;
    return Expr({q});
}

Expr Expr::symbol(const std::string& name, int power) {
    QuasiTerm q;
    if (power != 0) q.mono.factors = {{name, power}};
    return Expr({q});
}

Expr Expr::sigma(int k) {
    QuasiTerm q;
    q.k = k;
    return Expr({q});
}

Expr Expr::exponential(Rational rho) {
    QuasiTerm q;
    q.rho = rho;
    return Expr({q});
}

Expr Expr::cosine(PhaseForm p) {
    QuasiTerm q;
    q.harm = Harmonic::Cos;
    q.phase = std::move(p);
    return Expr({q});
}

Expr Expr::sine(PhaseForm p) {
    QuasiTerm q;
    q.harm = Harmonic::Sin;
    q.phase = std::move(p);
    return Expr({q});
}

Expr Expr::from_mono(ParamMono m) {
    QuasiTerm q;
    q.mono = std::move(m);
    return Expr({q});
}

void Expr::canonicalize() {
    std::vector<QuasiTerm> work;
    work.reserve(terms_.size());
    for (auto& q : terms_) {
        if (q.mono.is_zero()) continue;
        if (q.k > kSecularCap)
            throw std::overflow_error("secular power " + std::to_string(q.k) + " exceeds cap " +
                                      std::to_string(kSecularCap));
        if (q.harm == Harmonic::One) {
            q.phase = {};
        } else {
            if (canonical_sign(q.phase) < 0 && q.harm == Harmonic::Sin) q.mono.coeff = -q.mono.coeff;
            if (q.phase.freq.is_zero() && q.phase.phases.empty()) {
                double c = q.harm == Harmonic::Cos ? std::cos(q.phase.shift) : std::sin(q.phase.shift);
                if (q.phase.shift == 0.0 && q.harm == Harmonic::Sin) continue;
                if (q.phase.shift != 0.0) q.mono.scale *= c;
                q.harm = Harmonic::One;
                q.phase = {};
                if (q.mono.is_zero()) continue;
            }
        }
        work.push_back(std::move(q));
    }
    std::sort(work.begin(), work.end(), [](const QuasiTerm& a, const QuasiTerm& b) { return compare_key(a, b) < 0; });
    terms_.clear();
    for (auto& q : work) {
        if (!terms_.empty() && compare_key(terms_.back(), q) == 0) {
            ParamMono& m = terms_.back().mono;
            if (m.scale == q.mono.scale) {
                m.coeff += q.mono.coeff;
            } else {
                double a = m.numeric(), b = q.mono.numeric();
                double v = a + b;
                m.coeff = Rational(1);
                m.scale = std::fabs(v) <= 1e-14 * (std::fabs(a) + std::fabs(b)) ? 0.0 : v;
            }
            if (m.is_zero()) terms_.pop_back();
        } else {
            terms_.push_back(std::move(q));
        }
    }
}

namespace {

std::uint64_t join_domain(std::uint64_t a, std::uint64_t b) {
    if (a != 0 && b != 0 && a != b) throw std::invalid_argument("expressions belong to different parameter registries");
    return a != 0 ? a : b;
}

void product_terms(const QuasiTerm& a, const QuasiTerm& b, std::vector<QuasiTerm>& out) {
    QuasiTerm base;
    base.mono = a.mono * b.mono;
    base.k = a.k + b.k;
    if (base.k > kSecularCap)
        throw std::overflow_error("secular power " + std::to_string(base.k) + " exceeds cap " +
                                  std::to_string(kSecularCap));
    base.rho = a.rho + b.rho;
    if (a.harm == Harmonic::One || b.harm == Harmonic::One) {
        const QuasiTerm& h = a.harm == Harmonic::One ? b : a;
        base.harm = h.harm;
        base.phase = h.phase;
        out.push_back(std::move(base));
        return;
    }
    base.mono.coeff *= Rational(1, 2);
    QuasiTerm d = base, s = base;
    d.phase = a.phase - b.phase;
    s.phase = a.phase + b.phase;
    bool ac = a.harm == Harmonic::Cos, bc = b.harm == Harmonic::Cos;
    if (ac && bc) {
        d.harm = s.harm = Harmonic::Cos;
    } else if (!ac && !bc) {
        d.harm = s.harm = Harmonic::Cos;
        s.mono.coeff = -s.mono.coeff;
    } else {
        d.harm = s.harm = Harmonic::Sin;
        if (ac) d.mono.coeff = -d.mono.coeff;  // cos a sin b = (sin(a+b) - sin(a-b))/2
    }
    out.push_back(std::move(d));
    out.push_back(std::move(s));
}

}  // namespace

Expr Expr::operator-() const {
    Expr r = *this;
    for (auto& q : r.terms_) q.mono.coeff = -q.mono.coeff;
    return r;
}

Expr& Expr::operator+=(const Expr& o) {
    domain_ = join_domain(domain_, o.domain_);
    terms_.insert(terms_.end(), o.terms_.begin(), o.terms_.end());
    canonicalize();
    return *this;
}

Expr& Expr::operator-=(const Expr& o) { return *this += -o; }

Expr operator*(const Expr& a, const Expr& b) {
    std::vector<QuasiTerm> out;
    out.reserve(a.terms_.size() * b.terms_.size() * 2);
    for (const auto& x : a.terms_)
        for (const auto& y : b.terms_) product_terms(x, y, out);
    return Expr(std::move(out), join_domain(a.domain_, b.domain_));
}

Expr& Expr::operator*=(const Expr& o) { return *this = *this * o; }

Expr Expr::scaled(const Rational& r) const {
    if (r.is_zero()) return Expr().with_domain(domain_);
    Expr e = *this;
    for (auto& q : e.terms_) q.mono.coeff *= r;
    return e;
}

Expr Expr::scaled(double s) const {
    if (auto r = Rational::from_double(s, 0.0, 1000000000); r) return scaled(*r);
    Expr e = *this;
    for (auto& q : e.terms_) q.mono.scale *= s;
    e.canonicalize();
    return e;
}

Expr Expr::pow(int n) const {
    if (n < 0) throw std::invalid_argument("negative power of an expression");
    Expr r = Expr(Rational(1)).with_domain(domain_);
    for (int i = 0; i < n; ++i) r *= *this;
    return r;
}

bool operator==(const Expr& a, const Expr& b) {
    if (a.terms_.size() != b.terms_.size()) return false;
    for (std::size_t i = 0; i < a.terms_.size(); ++i) {
        const auto& x = a.terms_[i];
        const auto& y = b.terms_[i];
        if (compare_key(x, y) != 0) return false;
        if (x.mono.scale == y.mono.scale) {
            if (x.mono.coeff != y.mono.coeff) return false;
        } else if (!close_rel(x.mono.numeric(), y.mono.numeric(), 1e-12)) {
            return false;
        }
    }
    return true;
}

namespace {

// d/dt of one term, appended to out
void diff_term(const QuasiTerm& q, std::vector<QuasiTerm>& out) {
    if (q.k > 0) {
        QuasiTerm a = q;
        a.mono.coeff *= Rational(q.k);
        a.k = q.k - 1;
        out.push_back(std::move(a));
    }
    if (!q.rho.is_zero()) {
        QuasiTerm a = q;
        a.mono.coeff *= q.rho;
        out.push_back(std::move(a));
    }
    if (q.harm != Harmonic::One) {
        QuasiTerm base = q;
        Rational sgn(1);
        if (q.harm == Harmonic::Cos) {
            base.harm = Harmonic::Sin;
            sgn = Rational(-1);
        } else {
            base.harm = Harmonic::Cos;
        }
        if (!q.phase.freq.rate.is_zero()) {
            QuasiTerm a = base;
            a.mono.coeff *= sgn * q.phase.freq.rate;
            out.push_back(std::move(a));
        }
        for (const auto& [n, m] : q.phase.freq.syms) {
            QuasiTerm a = base;
            a.mono.coeff *= sgn * Rational(m);
            a.mono.factors = add_factors(a.mono.factors, {{n, 1}});
            out.push_back(std::move(a));
        }
    }
}

}  // namespace

Expr diff_t(const Expr& e) {
    std::vector<QuasiTerm> out;
    for (const auto& q : e.terms()) diff_term(q, out);
    return Expr(std::move(out), e.domain());
}

Expr diff_param(const Expr& e, const std::string& name) {
    std::vector<QuasiTerm> out;
    for (const auto& q : e.terms()) {
        if (exponent_of(q.phase.freq.syms, name) != 0)
            throw std::invalid_argument("cannot differentiate by frequency symbol '" + name + "'");
        int p = exponent_of(q.mono.factors, name);
        if (p != 0) {
            QuasiTerm a = q;
            a.mono.coeff *= Rational(p);
            a.mono.factors = add_factors(a.mono.factors, {{name, -1}});
            out.push_back(std::move(a));
        }
        int n = exponent_of(q.phase.phases, name);
        if (n != 0) {
            QuasiTerm a = q;
            if (q.harm == Harmonic::Cos) {
                a.harm = Harmonic::Sin;
                a.mono.coeff *= Rational(-n);
            } else {
                a.harm = Harmonic::Cos;
                a.mono.coeff *= Rational(n);
            }
            out.push_back(std::move(a));
        }
    }
    return Expr(std::move(out), e.domain());
}

Expr taylor_coeff(const Expr& e, int n) {
    std::vector<QuasiTerm> out;
    for (const auto& q : e.terms()) {
        if (q.k > n) continue;
        QuasiTerm f = q;
        f.k = 0;
        std::vector<QuasiTerm> cur{f};
        for (int d = 0; d < n - q.k; ++d) {
            std::vector<QuasiTerm> next;
            for (const auto& x : cur) diff_term(x, next);
            cur = Expr(std::move(next)).terms();
        }
        Rational s = Rational(1) / factorial(n - q.k);
        for (auto& x : cur) {
            x.mono.coeff *= s;
            out.push_back(std::move(x));
        }
    }
    return Expr(std::move(out), e.domain());
}

int eps_power(const QuasiTerm& q) { return exponent_of(q.mono.factors, kEps); }

Expr eps_part(const Expr& e, int j) {
    std::vector<QuasiTerm> out;
    for (const auto& q : e.terms()) {
        if (eps_power(q) != j) continue;
        QuasiTerm a = q;
        a.mono.factors = without(a.mono.factors, kEps);
        out.push_back(std::move(a));
    }
    return Expr(std::move(out), e.domain());
}

Expr truncate_eps(const Expr& e, int K) {
    std::vector<QuasiTerm> out;
    for (const auto& q : e.terms())
        if (eps_power(q) <= K) out.push_back(q);
    return Expr(std::move(out), e.domain());
}

int max_eps(const Expr& e) {
    int m = 0;
    for (const auto& q : e.terms()) m = std::max(m, eps_power(q));
    return m;
}

int max_secular(const Expr& e) {
    int m = 0;
    for (const auto& q : e.terms()) m = std::max(m, q.k);
    return m;
}

Expr substitute(const Expr& e, const std::string& name, const Expr& value) {
    std::vector<QuasiTerm> keep;
    Expr acc;
    Expr inv;
    bool have_inv = false;
    for (const auto& q : e.terms()) {
        int p = exponent_of(q.mono.factors, name);
        if (p == 0) {
            keep.push_back(q);
            continue;
        }
        QuasiTerm rest = q;
        rest.mono.factors = without(q.mono.factors, name);
        Expr r({rest}, e.domain());
        if (p > 0) {
            acc += r * value.pow(p);
        } else {
            if (!have_inv) {
                if (value.size() != 1 || value.terms()[0].k != 0 || !value.terms()[0].rho.is_zero() ||
                    value.terms()[0].harm != Harmonic::One)
                    throw std::invalid_argument("negative power substitution needs a monomial value for '" + name + "'");
                inv = Expr::from_mono(inverse(value.terms()[0].mono));
                have_inv = true;
            }
            acc += r * inv.pow(-p);
        }
    }
    Expr out(std::move(keep), e.domain());
    out += acc;
    return out;
}

Expr substitute_all(const Expr& e, const std::map<std::string, Expr>& values) {
    Expr r = e;
    for (const auto& [n, v] : values) r = substitute(r, n, v);
    return r;
}

Expr pin_phase(const Expr& e, const std::string& name, double v) {
    std::vector<QuasiTerm> out;
    for (auto q : e.terms()) {
        int n = exponent_of(q.phase.phases, name);
        if (n != 0) {
            q.phase.phases = without(q.phase.phases, name);
            q.phase.shift += n * v;
        }
        out.push_back(std::move(q));
    }
    return Expr(std::move(out), e.domain());
}

namespace {

FactorList rename_list(const FactorList& f, const std::string& from, const std::string& to) {
    int e = exponent_of(f, from);
    if (e == 0) return f;
    return add_factors(without(f, from), {{to, e}});
}

}  // namespace

Expr rename(const Expr& e, const std::string& from, const std::string& to) {
    std::vector<QuasiTerm> out;
    for (auto q : e.terms()) {
        q.mono.factors = rename_list(q.mono.factors, from, to);
        q.phase.phases = rename_list(q.phase.phases, from, to);
        q.phase.freq.syms = rename_list(q.phase.freq.syms, from, to);
        out.push_back(std::move(q));
    }
    return Expr(std::move(out), e.domain());
}

std::set<std::string> symbols(const Expr& e) {
    std::set<std::string> s;
    for (const auto& q : e.terms()) {
        for (const auto& f : q.mono.factors) s.insert(f.first);
        for (const auto& f : q.phase.phases) s.insert(f.first);
        for (const auto& f : q.phase.freq.syms) s.insert(f.first);
    }
    return s;
}

bool contains(const Expr& e, const std::string& name) { return symbols(e).count(name) > 0; }

bool is_monomial(const Expr& e) {
    return e.size() == 1 && e.terms()[0].k == 0 && e.terms()[0].rho.is_zero() && e.terms()[0].harm == Harmonic::One;
}

bool is_t_free(const Expr& e) {
    for (const auto& q : e.terms())
        if (q.k != 0 || !q.rho.is_zero() || !q.phase.freq.is_zero()) return false;
    return true;
}

bool is_constant(const Expr& e) {
    for (const auto& q : e.terms())
        if (q.k != 0 || !q.rho.is_zero() || q.harm != Harmonic::One || !q.mono.factors.empty()) return false;
    return true;
}

double eval_term(const QuasiTerm& q, double t, const Bindings& b) {
    double v = q.mono.numeric();
    for (const auto& [n, p] : q.mono.factors) v *= std::pow(lookup(b, n), p);
    if (q.k > 0) v *= std::pow(t - lookup(b, kT0), q.k);
    if (!q.rho.is_zero()) v *= std::exp(q.rho.to_double() * t);
    if (q.harm == Harmonic::Cos) v *= std::cos(value(q.phase, t, b));
    if (q.harm == Harmonic::Sin) v *= std::sin(value(q.phase, t, b));
    return v;
}

double eval(const Expr& e, double t, const Bindings& b) {
    double s = 0.0;
    for (const auto& q : e.terms()) s += eval_term(q, t, b);
    return s;
}

std::string render_coeff(const ParamMono& m) {
    if (m.exact()) return m.coeff.is_integer() ? m.coeff.str() : "(" + m.coeff.str() + ")";
    return fmt_double(m.numeric());
}

namespace {

std::string render_phase(const PhaseForm& p, std::string_view var) {
    std::string s;
    if (!p.freq.is_zero()) {
        std::string f = render(p.freq);
        bool simple = (p.freq.rate.is_zero() && p.freq.syms.size() == 1) ||
                      (p.freq.syms.empty() && p.freq.rate.is_integer());
        if (f == "1")
            s = std::string(var);
        else if (f == "-1")
            s = "-" + std::string(var);
        else if (simple)
            s = f + "*" + std::string(var);
        else if (p.freq.syms.empty())
            s = "(" + f + ")*" + std::string(var);
        else
            s = "(" + f + ")*" + std::string(var);
    }
    for (const auto& [n, m] : p.phases) {
        int am = m < 0 ? -m : m;
        std::string body = am == 1 ? n : std::to_string(am) + "*" + n;
        if (s.empty())
            s = m < 0 ? "-" + body : body;
        else
            s += (m < 0 ? "-" : "+") + body;
    }
    if (p.shift != 0.0) {
        std::string body = fmt_double(std::fabs(p.shift));
        if (s.empty())
            s = p.shift < 0 ? "-" + body : body;
        else
            s += (p.shift < 0 ? "-" : "+") + body;
    }
    return s;
}

std::string render_body(const QuasiTerm& q, std::string_view var) {
    std::vector<std::string> parts;
    for (const auto& [n, p] : q.mono.factors) {
        if (p == 1)
            parts.push_back(n);
        else if (p > 0)
            parts.push_back(n + "^" + std::to_string(p));
        else
            parts.push_back(n + "^(" + std::to_string(p) + ")");
    }
    if (q.k == 1) parts.push_back("(" + std::string(var) + "-t0)");
    if (q.k > 1) parts.push_back("(" + std::string(var) + "-t0)^" + std::to_string(q.k));
    if (!q.rho.is_zero()) {
        std::string r = q.rho == Rational(1)    ? std::string(var)
                        : q.rho == Rational(-1) ? "-" + std::string(var)
                        : q.rho.is_integer()    ? q.rho.str() + "*" + std::string(var)
                                                : "(" + q.rho.str() + ")*" + std::string(var);
        parts.push_back("exp(" + r + ")");
    }
    if (q.harm == Harmonic::Cos) parts.push_back("cos(" + render_phase(q.phase, var) + ")");
    if (q.harm == Harmonic::Sin) parts.push_back("sin(" + render_phase(q.phase, var) + ")");
    std::string s;
    for (std::size_t i = 0; i < parts.size(); ++i) s += (i ? "*" : "") + parts[i];
    return s;
}

}  // namespace

std::string render(const Expr& e, std::string_view var) {
    if (e.is_zero()) return "0";
    // terms in reverse of the internal order read better: powers of eps and
    // secular growth last
    std::vector<const QuasiTerm*> order;
    for (const auto& q : e.terms()) order.push_back(&q);
    std::stable_sort(order.begin(), order.end(), [](const QuasiTerm* a, const QuasiTerm* b) {
        int ea = eps_power(*a), eb = eps_power(*b);
        if (ea != eb) return ea < eb;
        return false;
    });
    std::string s;
    for (const QuasiTerm* q : order) {
        double v = q->mono.numeric();
        bool neg = v < 0;
        ParamMono m = q->mono;
        if (neg) m.coeff = -m.coeff;
        std::string body = render_body(*q, var);
        std::string c = render_coeff(m);
        std::string term = body.empty() ? c : (c == "1" ? body : c + "*" + body);
        if (s.empty())
            s = neg ? "-" + term : term;
        else
            s += (neg ? " - " : " + ") + term;
    }
    return s;
}

}  // namespace trg
