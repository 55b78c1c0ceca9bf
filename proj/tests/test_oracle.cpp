#include <cmath>

#include "doctest.h"
#include "trg/oracle.hpp"

using namespace trg::oracle;

TEST_CASE("dormand-prince on harmonic oscillator") {
    Rhs f = [](double, const State& y, State& d) {
        d[0] = y[1];
        d[1] = -y[0];
    };
    Reference r = integrate_reference(f, 0.0, {0.0, 1.0}, 50.0);
    CHECK(std::fabs(r.sol.at(50.0, 0) - std::sin(50.0)) < 1e-8);
    CHECK(std::fabs(r.sol.at(12.345, 0) - std::sin(12.345)) < 1e-8);
    CHECK(r.error_estimate < 1e-7);
    // backward integration
    DenseSolution b = integrate(f, 3.0, {std::sin(3.0), std::cos(3.0)}, -2.0);
    CHECK(std::fabs(b.at(-1.5, 0) - std::sin(-1.5)) < 1e-8);
}

TEST_CASE("dense output between steps") {
    Rhs f = [](double, const State& y, State& d) { d[0] = -y[0]; };
    IntegrateOptions o;
    o.rtol = 1e-6;
    DenseSolution s = integrate(f, 0.0, {1.0}, 5.0, o);
    for (double t = 0; t <= 5; t += 0.137) CHECK(std::fabs(s.at(t, 0) - std::exp(-t)) < 1e-5);
}

TEST_CASE("adaptive quadrature and brent") {
    CHECK(std::fabs(quad([](double x) { return std::exp(-x * x); }, -6, 6) - std::sqrt(M_PI)) < 1e-12);
    CHECK(std::fabs(quad([](double x) { return std::sqrt(x); }, 0, 1) - 2.0 / 3) < 1e-10);
    CHECK(std::fabs(brent([](double x) { return x * x - 2; }, 0, 2) - std::sqrt(2.0)) < 1e-13);
}

TEST_CASE("period measurement") {
    Rhs f = [](double, const State& y, State& d) {
        d[0] = y[1];
        d[1] = -4 * y[0];
    };
    DenseSolution s = integrate(f, 0.0, {1.0, 0.0}, 40.0);
    CHECK(std::fabs(measure_period(s, 0, 0.0, 40.0, 0.0) - M_PI) < 1e-8);
    CHECK(std::fabs(amplitude(s, 0, 0, 40) - 1.0) < 1e-6);
}

TEST_CASE("galerkin coefficients: exact trig projection vs quadrature") {
    ModalSystem one = galerkin_reduce(false, 1, 0.0);
    CHECK(one.coeff[0][0][0][0] == doctest::Approx(0.75));
    ModalSystem two = galerkin_reduce(false, 2, 1.0);
    CHECK(two.coeff[0][0][1][1] == doctest::Approx(1.5));
    CHECK(two.quadrature_mismatch < 1e-10);
    CHECK(two.omega[1] == doctest::Approx(std::sqrt(5.0)));
    ModalSystem beam = galerkin_reduce(true, 3, 0.5);
    CHECK(beam.quadrature_mismatch < 1e-10);
    CHECK(beam.omega[0] == doctest::Approx(std::sqrt(0.5)));
}

TEST_CASE("shooting with plateau check") {
    // y'' = -y' ; y(0) = 0, y'(0) = p ; y(inf) = p -> target y(tmax) - 1
    Rhs f = [](double, const State& y, State& d) {
        d[0] = y[1];
        d[1] = -y[1];
    };
    ShootResult r = shoot(f, [](double p) { return State{0.0, p}; },
                          [](const DenseSolution& s) { return s.at(s.t_end(), 0) - 1.0; }, 0.1, 3.0, 0.0, 30.0);
    CHECK(r.parameter == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(r.plateau);
}
