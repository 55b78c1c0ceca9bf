#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "trg/rational.hpp"

namespace trg {

inline constexpr const char* kEps = "eps";
inline constexpr const char* kT0 = "t0";
inline constexpr int kSecularCap = 6;

using Bindings = std::map<std::string, double>;

// Sorted (name, integer) list with no zero entries. Used both for
// monomial exponents and for integer multiples inside phase forms.
using FactorList = std::vector<std::pair<std::string, int>>;

FactorList add_factors(const FactorList& a, const FactorList& b, int sign = 1);
FactorList scale_factors(const FactorList& a, int k);
int exponent_of(const FactorList& f, std::string_view name);
FactorList without(const FactorList& f, std::string_view name);

struct ParamMono {
    Rational coeff{1};
    double scale = 1.0;
    FactorList factors;

    double numeric() const { return coeff.to_double() * scale; }
    bool is_zero() const { return coeff.is_zero() || scale == 0.0; }
    bool exact() const { return scale == 1.0; }
};

ParamMono operator*(const ParamMono& a, const ParamMono& b);
ParamMono inverse(const ParamMono& m);

// rate + sum of integer multiples of frequency symbols
struct FreqCombo {
    Rational rate;
    FactorList syms;

    bool is_zero() const { return rate.is_zero() && syms.empty(); }
    friend bool operator==(const FreqCombo&, const FreqCombo&) = default;
};

FreqCombo operator+(const FreqCombo& a, const FreqCombo& b);
FreqCombo operator-(const FreqCombo& a, const FreqCombo& b);
FreqCombo operator*(int k, const FreqCombo& a);
double value(const FreqCombo& f, const Bindings& b);
std::string render(const FreqCombo& f);

// Argument of a harmonic: freq*t + sum n_j*phase_j + shift.
struct PhaseForm {
    FreqCombo freq;
    FactorList phases;
    double shift = 0.0;

    bool t_free() const { return freq.is_zero(); }
    bool is_zero() const { return freq.is_zero() && phases.empty() && shift == 0.0; }
    friend bool operator==(const PhaseForm&, const PhaseForm&) = default;
};

PhaseForm operator+(const PhaseForm& a, const PhaseForm& b);
PhaseForm operator-(const PhaseForm& a, const PhaseForm& b);
PhaseForm negate(const PhaseForm& a);
// Flips the sign so the first nonzero entry is positive; returns -1 if flipped.
int canonical_sign(PhaseForm& p);
double value(const PhaseForm& p, double t, const Bindings& b);

enum class Harmonic { One, Cos, Sin };

struct QuasiTerm {
    ParamMono mono;
    int k = 0;        // power of (t - t0)
    Rational rho;     // exp(rho*t)
    Harmonic harm = Harmonic::One;
    PhaseForm phase;  // empty for Harmonic::One
};

// Ordering of everything but the numeric coefficient; equal keys merge.
int compare_key(const QuasiTerm& a, const QuasiTerm& b);

// Canonical finite sum of quasi-trigonometric terms.
class Expr {
public:
    Expr() = default;
    Expr(Rational c);
    Expr(std::int64_t c) : Expr(Rational(c)) {}
    explicit Expr(std::vector<QuasiTerm> terms, std::uint64_t domain = 0);

    static Expr number(double v);
    static Expr symbol(const std::string& name, int power = 1);
    static Expr sigma(int k);
    static Expr exponential(Rational rho);
    static Expr cosine(PhaseForm p);
    static Expr sine(PhaseForm p);
    static Expr from_mono(ParamMono m);

    const std::vector<QuasiTerm>& terms() const { return terms_; }
    std::size_t size() const { return terms_.size(); }
    bool is_zero() const { return terms_.empty(); }
    std::uint64_t domain() const { return domain_; }
    Expr& with_domain(std::uint64_t d) { domain_ = d; return *this; }

    Expr operator-() const;
    Expr& operator+=(const Expr& o);
    Expr& operator-=(const Expr& o);
    Expr& operator*=(const Expr& o);
    friend Expr operator+(Expr a, const Expr& b) { return a += b; }
    friend Expr operator-(Expr a, const Expr& b) { return a -= b; }
    friend Expr operator*(const Expr& a, const Expr& b);

    Expr scaled(const Rational& r) const;
    Expr scaled(double s) const;
    Expr pow(int n) const;

    // structural equality after canonicalization; numeric scales compared
    // to relative 1e-12
    friend bool operator==(const Expr& a, const Expr& b);

private:
    void canonicalize();
    std::vector<QuasiTerm> terms_;
    std::uint64_t domain_ = 0;
};

Expr diff_t(const Expr& e);
// Partial derivative by an amplitude/constant symbol or a phase symbol.
Expr diff_param(const Expr& e, const std::string& name);
// n-th Taylor coefficient about t0: (1/n!) d^n e/dt^n at t = t0. The result
// is secular-free and its variable stands for t0.
Expr taylor_coeff(const Expr& e, int n);

int eps_power(const QuasiTerm& q);
Expr eps_part(const Expr& e, int j);  // coefficient of eps^j, eps removed
Expr truncate_eps(const Expr& e, int K);
int max_eps(const Expr& e);
int max_secular(const Expr& e);

// Monomial factor substitution name -> value (negative powers need a
// single-term value).
Expr substitute(const Expr& e, const std::string& name, const Expr& value);
Expr substitute_all(const Expr& e, const std::map<std::string, Expr>& values);
// Replace a phase symbol by a numeric value.
Expr pin_phase(const Expr& e, const std::string& name, double v);
// Rename a symbol (factor, phase or frequency).
Expr rename(const Expr& e, const std::string& from, const std::string& to);

std::set<std::string> symbols(const Expr& e);
bool contains(const Expr& e, const std::string& name);
bool is_monomial(const Expr& e);       // one t-free, One-harmonic term
bool is_t_free(const Expr& e);         // no (t-t0), exp or t-harmonics
bool is_constant(const Expr& e);       // a pure number

double eval(const Expr& e, double t, const Bindings& b);
double eval_term(const QuasiTerm& q, double t, const Bindings& b);

std::string render(const Expr& e, std::string_view var = "t");
std::string render_coeff(const ParamMono& m);

}  // namespace trg
