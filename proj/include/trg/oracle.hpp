#pragma once

#include <array>
#include <functional>
#include <limits>
#include <string>
#include <vector>

namespace trg::oracle {

using State = std::vector<double>;
using Rhs = std::function<void(double t, const State& y, State& dy)>;

struct IntegrateOptions {
    double rtol = 1e-10;
    double atol = 1e-12;
    double h0 = 0.0;
    double hmax = std::numeric_limits<double>::infinity();
    std::size_t max_steps = 5000000;
};

// Dormand-Prince 5(4) trajectory with 4th-order continuous extension.
class DenseSolution {
public:
    double t_begin() const { return t_.front(); }
    double t_end() const { return t_.back(); }
    std::size_t steps() const { return t_.size() - 1; }
    std::size_t dim() const { return dim_; }
    State at(double t) const;
    double at(double t, std::size_t i) const;
    const std::vector<double>& times() const { return t_; }
    const State& state(std::size_t step) const { return y_[step]; }

private:
    friend DenseSolution integrate(const Rhs&, double, State, double, const IntegrateOptions&);
    std::size_t dim_ = 0;
    std::vector<double> t_;
    std::vector<State> y_;
    std::vector<std::array<State, 5>> cont_;
};

DenseSolution integrate(const Rhs& f, double t0, State y0, double t1, const IntegrateOptions& opt = {});

struct Reference {
    DenseSolution sol;
    double error_estimate = 0.0;  // tolerance-halving difference on the step grid
};

// Integrates at rtol and at rtol/32 and reports the difference.
Reference integrate_reference(const Rhs& f, double t0, State y0, double t1, const IntegrateOptions& opt = {});

// Adaptive Gauss-Kronrod (7,15) with bisection.
double quad(const std::function<double(double)>& f, double a, double b, double tol = 1e-12, int max_depth = 50);

// Non-adaptive Gauss-Kronrod 15 on `pieces` equal subintervals; for smooth
// integrands whose evaluation is noisy near an endpoint.
double quad_fixed(const std::function<double(double)>& f, double a, double b, int pieces = 4);

// Scalar root by bracketing and Brent's method.
double brent(const std::function<double(double)>& f, double a, double b, double tol = 1e-14);

struct ShootResult {
    double parameter = 0.0;
    double residual = 0.0;
    bool plateau = false;  // target quantity flat near t_max
    DenseSolution sol;
};

// Finds p with g(sol(p)) = 0 where sol(p) integrates from make_state(p).
ShootResult shoot(const Rhs& f, const std::function<State(double)>& make_state,
                  const std::function<double(const DenseSolution&)>& target, double p_lo, double p_hi, double t0,
                  double t_max, const IntegrateOptions& opt = {});

// Average spacing of upward crossings of `level` by component i on [a, b];
// crossings located by Brent on the dense output.
double measure_period(const DenseSolution& sol, std::size_t i, double a, double b, double level);
// mean of (max + min)/2 of component i on [a, b]
double mid_level(const DenseSolution& sol, std::size_t i, double a, double b);
// half of (max - min)
double amplitude(const DenseSolution& sol, std::size_t i, double a, double b);

struct ErrorReport {
    std::vector<double> t, asym, ref, err;
    double sup_abs = 0.0, sup_rel = 0.0, rms = 0.0;
    double t_at_sup = 0.0;
    std::string csv() const;
};

ErrorReport compare(const std::function<double(double)>& asym, const std::function<double(double)>& ref,
                    const std::vector<double>& ts);

std::vector<double> linspace(double a, double b, std::size_t n);

// Galerkin reduction of u_tt + (-1)^s d^{2s}u/dx^{2s} + c u = eps u^3 with
// sine modes sin(n x) on (0, pi) (s = 1, wave) or (0, 2pi) (s = 2, beam).
struct ModalSystem {
    int N = 0;
    bool beam = false;
    double param = 0.0;               // mu (wave) or alpha (beam)
    std::vector<double> omega;        // linear frequencies
    // coeff[n][a][b][c] multiplies v_a v_b v_c (a <= b <= c) in mode n
    std::vector<std::vector<std::vector<std::vector<double>>>> coeff;
    std::vector<std::vector<std::vector<std::vector<std::pair<long, long>>>>> exact;  // num/den
    double quadrature_mismatch = 0.0;  // max |exact - numeric| over all coefficients
};

ModalSystem galerkin_reduce(bool beam, int N, double param);

}  // namespace trg::oracle
