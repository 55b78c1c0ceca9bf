#pragma once

#include <string>
#include <vector>

#include "trg/expr.hpp"
#include "trg/registry.hpp"

namespace trg {

// Characteristic root rho + i*nu. nu != 0 stands for the conjugate pair.
struct Root {
    Rational rho;
    FreqCombo nu;
    int multiplicity = 1;
};

// Complex value with polynomial (t-free Expr) parts.
struct CPoly {
    Expr re, im;
};

CPoly operator+(const CPoly& a, const CPoly& b);
CPoly operator*(const CPoly& a, const CPoly& b);
CPoly scaled(const CPoly& a, const Rational& r);

// Constant-coefficient operator sum_j a_j D^j, a_j monomials in symbols.
class LinOp {
public:
    LinOp() = default;
    explicit LinOp(std::vector<ParamMono> coeffs);
    static LinOp from_rationals(const std::vector<Rational>& a);

    int order() const { return static_cast<int>(coeffs_.size()) - 1; }
    const std::vector<ParamMono>& coeffs() const { return coeffs_; }
    const std::vector<Root>& roots() const { return roots_; }

    Expr apply(const Expr& y) const;
    // P^(j)(s) / j!
    CPoly char_derivative(const CPoly& s, int j) const;
    std::string render(const std::string& var) const;

    friend bool operator==(const LinOp& a, const LinOp& b);

private:
    void find_roots();
    std::vector<ParamMono> coeffs_;
    std::vector<Root> roots_;
};

struct RootMatch {
    int root = -1;     // index into roots(), -1 if no resonance
    int sign = 1;      // forcing nu = sign * root nu
    bool numeric = false;
    bool near = false; // within the warning band but not resonant
    double distance = 0.0;
};

RootMatch match_root(const LinOp& op, const Rational& rho, const FreqCombo& nu, const ParamRegistry& reg);

struct Resonance {
    std::string term;
    int multiplicity = 0;
    bool numeric = false;
};

struct ForcedSolution {
    Expr particular;
    std::vector<Resonance> resonances;
    std::vector<std::string> warnings;
};

// Particular solution of op[y] = forcing without homogeneous components,
// anchored at t0: resonant terms pick up (t-t0)^m factors.
ForcedSolution solve_forced(const LinOp& op, const Expr& forcing, const ParamRegistry& reg);

// 1/d for a complex polynomial value; exact if the modulus is a monomial,
// numeric through the bound symbols otherwise.
CPoly invert(const CPoly& d, const ParamRegistry& reg);

}  // namespace trg
