#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "trg/expr.hpp"
#include "trg/fn.hpp"
#include "trg/oracle.hpp"
#include "trg/perturb.hpp"
#include "trg/registry.hpp"

namespace trg {

enum class Projection { Fundamental, WholeResidual };

struct Policy {
    std::string name = "fundamental";
    Projection projection = Projection::Fundamental;
    // keep eps^j * A' terms with j >= K instead of treating them as higher order
    bool keep_eps_deriv = false;
    // expand rational right sides in eps up to order K when possible
    bool series_divide = false;
    // first-order variable-coefficient route: drop the forcing contributions
    bool drop_inhomogeneous = false;
    std::map<std::string, double> pins;    // parameter held at a value, e.g. theta = 0
    std::vector<FactorList> constraints;   // sum m_j theta_j = 0 among phases
};

struct Residual {
    ParamRegistry registry;  // includes the derivative symbols
    std::vector<std::string> params;
    std::vector<Expr> Y0;
    std::vector<Expr> first;   // dY0/dt0 - Y1
    std::vector<Expr> second;  // dY1/dt0 - 2 Y2 when M = 2
};

// Chain rule through every t0-dependent parameter.
Expr total_derivative(const Expr& e, const std::vector<std::string>& params, ParamRegistry& reg);
Residual residual(const TaylorFrame& f, const ParamRegistry& reg);

struct DroppedTerm {
    int comp = 0;
    std::string reason;
    Expr term;
};

struct ProjectedEquation {
    int comp = 0;
    std::string basis;
    Expr basis_expr;
    Expr coefficient;  // sum over the basis gives back the kept residual
};

struct FlowTerm {
    Expr numer;
    Fn weight = Fn::constant(1);
};

// p' = (sum numer_i * weight_i) / denom
struct FlowEquation {
    std::string param;
    std::vector<FlowTerm> parts;
    Expr denom{1};
    Expr kinematic;  // free motion of a repeated real root, subtracted for TrivialFlow
    bool held_constant = false;
    std::string note;

    Expr numer() const;  // sum of parts with constant weight
    bool quasi_trig() const;
    double eval(double t0, const Bindings& b) const;
    std::string render() const;
};

struct FlowSystem {
    ParamRegistry registry;
    int K = 1;
    std::string policy;
    std::vector<FlowEquation> eqs;
    std::vector<ProjectedEquation> projections;
    std::vector<DroppedTerm> ledger;
    std::map<std::string, double> pins;
    std::vector<FactorList> constraints;
    std::vector<std::string> unresolved;
    std::vector<Expr> algebraic;  // = 0, projections left without a derivative

    const FlowEquation* find(const std::string& p) const;
    std::string render() const;
};

FlowSystem project(const Residual& r, const SeriesSolution& s, const Policy& policy);

// Exact quotient of each term by a monomial divisor.
Expr divide_monomial(const Expr& e, const Expr& mono);
// numer/denom expanded in eps to order K; needs a monomial eps^0 part of denom.
std::optional<Expr> series_quotient(const Expr& numer, const Expr& denom, int K);

enum class FlowKind { Constant, Linear, Exponential, Bernoulli, Separable, Quadrature, Numeric };
const char* flow_kind_name(FlowKind k);

struct FlowDescriptor {
    std::string param;
    std::string initial;  // symbol of p(0), or of p(0)^(1-n) for separable n != 1
    FlowKind kind = FlowKind::Constant;
    Expr rate, rate_den{1};  // Linear, Exponential, Bernoulli a
    Expr b;                  // Bernoulli p^n coefficient
    int n = 0;
    // Separable / Quadrature: p' = p^n * g(t), g = (sum g_parts) / g_den
    std::vector<FlowTerm> g_parts;
    Expr g_den{1};
    std::string text;
};

struct FlowSolution {
    FlowSystem system;
    std::vector<FlowDescriptor> desc;
    std::vector<std::string> constants;
    const FlowDescriptor* find(const std::string& p) const;
};

FlowSolution solve_flow(const FlowSystem& fs);

// Numeric values of all flow parameters with every constant bound.
class FlowEvaluator {
public:
    FlowEvaluator(const FlowSolution& sol, Bindings b, double horizon = 50.0);
    Bindings at(double t) const;
    double value(const std::string& p, double t) const;
    const Bindings& base() const { return base_; }

private:
    struct Quadrature;
    double closed_value(const FlowDescriptor& d, double t) const;
    void integrate_numeric(double horizon);
    const FlowSolution* sol_;
    Bindings base_;
    std::map<std::string, std::shared_ptr<Quadrature>> quad_;
    std::vector<std::string> numeric_;
    std::shared_ptr<oracle::DenseSolution> traj_;
    double horizon_;
};

struct RenormalizedSolution {
    std::vector<std::string> comps;
    std::vector<Expr> Y0;      // variable stands for t0 = t
    std::vector<Fn> envelope;  // multiplies Y0 (variable-coefficient route)
    FlowSolution flow;
    ParamRegistry registry;
    int K = 1;
    std::vector<std::string> free_constants;
    std::vector<std::string> notes;

    std::string render(int comp) const;
};

RenormalizedSolution assemble(const TaylorFrame& f, const FlowSolution& sol, const std::vector<std::string>& names);

class SolutionEvaluator {
public:
    SolutionEvaluator(const RenormalizedSolution& s, const Bindings& b, double horizon = 50.0);
    double value(int comp, double t) const;
    double derivative(int comp, double t) const;

private:
    const RenormalizedSolution* s_;
    FlowEvaluator flow_;
    std::vector<Expr> dY0_;
    std::vector<std::vector<std::pair<std::string, Expr>>> partials_;
    std::vector<Fn> denv_;
};

enum class Verdict { Productive, Cyclic, TrivialFlow, Unseparable };
const char* verdict_name(Verdict v);

struct Diagnosis {
    Verdict verdict = Verdict::Productive;
    std::string detail;
    std::vector<std::string> notes;
    double numeric_check = 0.0;  // max mismatch of the structural verdict at random states
};

Diagnosis diagnose(const OdeSpec& spec, const SeriesSolution& s, const FlowSystem& fs, const FlowSolution* sol,
                   std::optional<double> expected_limit = std::nullopt, unsigned seed = 42);

struct Condition {
    enum class Kind { Value, Terminal, Algebraic } kind = Kind::Value;
    int comp = 0;
    int deriv = 0;
    double t = 0.0;
    double target = 0.0;
    Expr algebraic;  // = 0, in the free constants
};

struct FitOptions {
    std::vector<std::string> unknowns;  // default: every free constant not bound
    std::string select = "smallest";    // smallest | largest | positive | negative
    std::map<std::string, double> guess;
    double terminal_t = 40.0;
    double horizon = 50.0;
};

struct FitResult {
    bool ok = true;
    Bindings values;
    std::vector<std::string> log;
    std::vector<double> candidates;  // real roots seen for polynomial conditions
    std::string failure;
};

FitResult fit_constants(const RenormalizedSolution& s, const std::vector<Condition>& conds, const Bindings& known,
                        const FitOptions& opt = {});

// Clears denominators and common monomial content; leading coefficient in
// `unknown` positive. Used to state algebraic closure conditions.
Expr primitive_polynomial(const Expr& e, const std::string& unknown);
// e with t := 0 (exp and harmonics of t evaluated at zero)
Expr at_time_zero(const Expr& e);

// Real roots of sum c_k x^k (degree <= 3).
std::vector<double> real_roots(const std::vector<double>& c);

}  // namespace trg
