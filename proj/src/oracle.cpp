#include "trg/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <stdexcept>

namespace trg::oracle {

namespace {

constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784, a76 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200, e6 = 22.0 / 525,
                 e7 = -1.0 / 40;
constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

}  // namespace

State DenseSolution::at(double t) const {
    State out(dim_);
    double lo = std::min(t_.front(), t_.back()), hi = std::max(t_.front(), t_.back());
    if (t < lo - 1e-12 * (1 + std::fabs(lo)) || t > hi + 1e-12 * (1 + std::fabs(hi)))
        throw std::out_of_range("dense output outside the integrated interval");
    bool fwd = t_.back() >= t_.front();
    std::size_t i;
    if (fwd) {
        auto it = std::upper_bound(t_.begin(), t_.end(), t);
        i = it == t_.begin() ? 0 : static_cast<std::size_t>(it - t_.begin()) - 1;
    } else {
        auto it = std::upper_bound(t_.begin(), t_.end(), t, [](double a, double b) { return a > b; });
        i = it == t_.begin() ? 0 : static_cast<std::size_t>(it - t_.begin()) - 1;
    }
    if (i >= cont_.size()) i = cont_.size() - 1;
    double h = t_[i + 1] - t_[i];
    double th = h == 0 ? 0 : (t - t_[i]) / h;
    double th1 = 1 - th;
    const auto& r = cont_[i];
    for (std::size_t k = 0; k < dim_; ++k)
        out[k] = r[0][k] + th * (r[1][k] + th1 * (r[2][k] + th * (r[3][k] + th1 * r[4][k])));
    return out;
}

double DenseSolution::at(double t, std::size_t i) const { return at(t)[i]; }

DenseSolution integrate(const Rhs& f, double t0, State y, double t1, const IntegrateOptions& opt) {
    DenseSolution s;
    const std::size_t n = y.size();
    s.dim_ = n;
    s.t_.push_back(t0);
    s.y_.push_back(y);
    if (t1 == t0) {
        s.t_.push_back(t0);
        s.y_.push_back(y);
        s.cont_.push_back({y, State(n, 0.0), State(n, 0.0), State(n, 0.0), State(n, 0.0)});
        return s;
    }
    double dir = t1 > t0 ? 1.0 : -1.0;
    State k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), tmp(n), ynew(n);
    f(t0, y, k1);
    double t = t0;
    double h = opt.h0;
    if (h <= 0) {
        double yn = 0, fn = 0;
        for (std::size_t i = 0; i < n; ++i) {
            double sc = opt.atol + opt.rtol * std::fabs(y[i]);
            yn = std::max(yn, std::fabs(y[i]) / sc);
            fn = std::max(fn, std::fabs(k1[i]) / sc);
        }
        h = (yn < 1e-5 || fn < 1e-5) ? 1e-6 : 0.01 * yn / fn;
        h = std::min(h, std::fabs(t1 - t0));
    }
    double err_old = 1e-4;
    std::size_t steps = 0;
    while (dir * (t1 - t) > 0) {
        if (++steps > opt.max_steps) throw std::runtime_error("integrator exceeded the step budget");
        h = std::min(h, opt.hmax);
        bool last = false;
        if (h >= std::fabs(t1 - t)) {
            h = std::fabs(t1 - t);
            last = true;
        }
        double hs = dir * h;
        for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + hs * a21 * k1[i];
        f(t + c2 * hs, tmp, k2);
        for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + hs * (a31 * k1[i] + a32 * k2[i]);
        f(t + c3 * hs, tmp, k3);
        for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + hs * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        f(t + c4 * hs, tmp, k4);
        for (std::size_t i = 0; i < n; ++i)
            tmp[i] = y[i] + hs * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
        f(t + c5 * hs, tmp, k5);
        for (std::size_t i = 0; i < n; ++i)
            tmp[i] = y[i] + hs * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
        f(t + hs, tmp, k6);
        for (std::size_t i = 0; i < n; ++i)
            ynew[i] = y[i] + hs * (a71 * k1[i] + a73 * k3[i] + a74 * k4[i] + a75 * k5[i] + a76 * k6[i]);
        f(t + hs, ynew, k7);
        double err = 0;
        bool finite = true;
        for (std::size_t i = 0; i < n; ++i) {
            double e = hs * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
            double sc = opt.atol + opt.rtol * std::max(std::fabs(y[i]), std::fabs(ynew[i]));
            err += (e / sc) * (e / sc);
            if (!std::isfinite(ynew[i])) finite = false;
        }
        err = std::sqrt(err / static_cast<double>(n));
        if (!finite) err = 1e10;
        if (err <= 1.0) {
            std::array<State, 5> r;
            r[0] = y;
            r[1].resize(n);
            r[2].resize(n);
            r[3].resize(n);
            r[4].resize(n);
            for (std::size_t i = 0; i < n; ++i) {
                double yd = ynew[i] - y[i];
                double bspl = hs * k1[i] - yd;
                r[1][i] = yd;
                r[2][i] = bspl;
                r[3][i] = yd - hs * k7[i] - bspl;
                r[4][i] = hs * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] + d7 * k7[i]);
            }
            s.cont_.push_back(std::move(r));
            t = last ? t1 : t + hs;
            y = ynew;
            k1 = k7;
            s.t_.push_back(t);
            s.y_.push_back(y);
            // PI step control
            double fac = 0.9 * std::pow(std::max(err, 1e-10), -0.7 / 5) * std::pow(err_old, 0.4 / 5);
            fac = std::clamp(fac, 0.2, 10.0);
            err_old = std::max(err, 1e-4);
            h *= fac;
        } else {
            h *= std::max(0.2, 0.9 * std::pow(err, -0.2));
            if (h < 1e-14 * std::max(1.0, std::fabs(t))) throw std::runtime_error("integrator step size underflow");
        }
    }
    return s;
}

Reference integrate_reference(const Rhs& f, double t0, State y0, double t1, const IntegrateOptions& opt) {
    Reference r;
    r.sol = integrate(f, t0, y0, t1, opt);
    IntegrateOptions fine = opt;
    fine.rtol /= 32;
    fine.atol /= 32;
    DenseSolution s2 = integrate(f, t0, y0, t1, fine);
    double e = 0;
    const auto& ts = r.sol.times();
    std::size_t stride = std::max<std::size_t>(1, ts.size() / 2000);
    for (std::size_t i = 0; i < ts.size(); i += stride) {
        State a = r.sol.at(ts[i]), b = s2.at(ts[i]);
        for (std::size_t k = 0; k < a.size(); ++k) e = std::max(e, std::fabs(a[k] - b[k]));
    }
    r.error_estimate = e;
    r.sol = std::move(s2);
    return r;
}

namespace {

const double xgk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                       0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                       0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                       0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
const double wgk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                       0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                       0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                       0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
const double wg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                      0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

void gk15(const std::function<double(double)>& f, double a, double b, double& val, double& err) {
    double c = 0.5 * (a + b), hw = 0.5 * (b - a);
    double fc = f(c);
    double rk = fc * wgk[7], rg = fc * wg[3];
    for (int j = 0; j < 7; ++j) {
        double x = hw * xgk[j];
        double s = f(c - x) + f(c + x);
        rk += wgk[j] * s;
        if (j % 2 == 1) rg += wg[j / 2] * s;
    }
    val = rk * hw;
    err = std::fabs((rk - rg) * hw);
}

double quad_rec(const std::function<double(double)>& f, double a, double b, double tol, int depth, double whole,
                double err) {
    // stop at rounding level; otherwise a noisy integrand bisects forever
    if (err <= tol || depth <= 0 || err <= 1e-16 * std::max(1.0, std::fabs(whole)) ||
        b - a <= 1e-13 * std::max(1.0, std::fabs(a)))
        return whole;
    double m = 0.5 * (a + b);
    double v1, e1_, v2, e2_;
    gk15(f, a, m, v1, e1_);
    gk15(f, m, b, v2, e2_);
    return quad_rec(f, a, m, 0.5 * tol, depth - 1, v1, e1_) + quad_rec(f, m, b, 0.5 * tol, depth - 1, v2, e2_);
}

}  // namespace

double quad(const std::function<double(double)>& f, double a, double b, double tol, int max_depth) {
    if (a == b) return 0.0;
    double v, e;
    gk15(f, a, b, v, e);
    double abs_tol = std::max(tol * std::fabs(v), tol);
    return quad_rec(f, a, b, std::min(abs_tol, tol), max_depth, v, e);
}

double quad_fixed(const std::function<double(double)>& f, double a, double b, int pieces) {
    double sum = 0, h = (b - a) / pieces;
    for (int i = 0; i < pieces; ++i) {
        double v, e;
        gk15(f, a + i * h, a + (i + 1) * h, v, e);
        sum += v;
    }
    return sum;
}

double brent(const std::function<double(double)>& f, double a, double b, double tol) {
    double fa = f(a), fb = f(b);
    if (fa == 0) return a;
    if (fb == 0) return b;
    if ((fa > 0) == (fb > 0)) throw std::invalid_argument("root not bracketed");
    double c = a, fc = fa, d = b - a, e = d;
    for (int it = 0; it < 200; ++it) {
        if ((fb > 0) == (fc > 0)) {
            c = a;
            fc = fa;
            d = e = b - a;
        }
        if (std::fabs(fc) < std::fabs(fb)) {
            a = b; b = c; c = a;
            fa = fb; fb = fc; fc = fa;
        }
        double tol1 = 2 * 1e-16 * std::fabs(b) + 0.5 * tol;
        double xm = 0.5 * (c - b);
        if (std::fabs(xm) <= tol1 || fb == 0) return b;
        if (std::fabs(e) >= tol1 && std::fabs(fa) > std::fabs(fb)) {
            double s = fb / fa, p, q;
            if (a == c) {
                p = 2 * xm * s;
                q = 1 - s;
            } else {
                double qq = fa / fc, r = fb / fc;
                p = s * (2 * xm * qq * (qq - r) - (b - a) * (r - 1));
                q = (qq - 1) * (r - 1) * (s - 1);
            }
            if (p > 0) q = -q;
            p = std::fabs(p);
            if (2 * p < std::min(3 * xm * q - std::fabs(tol1 * q), std::fabs(e * q))) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += std::fabs(d) > tol1 ? d : (xm > 0 ? tol1 : -tol1);
        fb = f(b);
    }
    return b;
}

ShootResult shoot(const Rhs& f, const std::function<State(double)>& make_state,
                  const std::function<double(const DenseSolution&)>& target, double p_lo, double p_hi, double t0,
                  double t_max, const IntegrateOptions& opt) {
    auto g = [&](double p) { return target(integrate(f, t0, make_state(p), t_max, opt)); };
    ShootResult r;
    r.parameter = brent(g, p_lo, p_hi, 1e-13);
    r.sol = integrate(f, t0, make_state(r.parameter), t_max, opt);
    r.residual = target(r.sol);
    // plateau: the same shot to 0.8 t_max gives the same target
    double alt = target(integrate(f, t0, make_state(r.parameter), t0 + 0.8 * (t_max - t0), opt));
    r.plateau = std::fabs(alt - r.residual) < 1e-6;
    return r;
}

double mid_level(const DenseSolution& sol, std::size_t i, double a, double b) {
    double lo = 1e300, hi = -1e300;
    for (double t : linspace(a, b, 20001)) {
        double v = sol.at(t, i);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    return 0.5 * (lo + hi);
}

double amplitude(const DenseSolution& sol, std::size_t i, double a, double b) {
    double lo = 1e300, hi = -1e300;
    for (double t : linspace(a, b, 20001)) {
        double v = sol.at(t, i);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    return 0.5 * (hi - lo);
}

double measure_period(const DenseSolution& sol, std::size_t i, double a, double b, double level) {
    std::vector<double> cross;
    std::size_t n = 40001;
    auto ts = linspace(a, b, n);
    double prev = sol.at(ts[0], i) - level;
    for (std::size_t k = 1; k < n; ++k) {
        double cur = sol.at(ts[k], i) - level;
        if (prev < 0 && cur >= 0) {
            cross.push_back(brent([&](double t) { return sol.at(t, i) - level; }, ts[k - 1], ts[k], 1e-13));
        }
        prev = cur;
    }
    if (cross.size() < 2) throw std::runtime_error("fewer than two level crossings in the window");
    return (cross.back() - cross.front()) / static_cast<double>(cross.size() - 1);
}

std::string ErrorReport::csv() const {
    std::string s = "t,y_asym,y_ref,abs_err\n";
    char buf[160];
    for (std::size_t i = 0; i < t.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.10g,%.15g,%.15g,%.6e\n", t[i], asym[i], ref[i], err[i]);
        s += buf;
    }
    return s;
}

ErrorReport compare(const std::function<double(double)>& asym, const std::function<double(double)>& ref,
                    const std::vector<double>& ts) {
    ErrorReport r;
    double ss = 0;
    for (double t : ts) {
        double a = asym(t), b = ref(t), e = std::fabs(a - b);
        r.t.push_back(t);
        r.asym.push_back(a);
        r.ref.push_back(b);
        r.err.push_back(e);
        if (e > r.sup_abs) {
            r.sup_abs = e;
            r.t_at_sup = t;
        }
        if (b != 0) r.sup_rel = std::max(r.sup_rel, e / std::fabs(b));
        ss += e * e;
    }
    if (!ts.empty()) r.rms = std::sqrt(ss / static_cast<double>(ts.size()));
    return r;
}

std::vector<double> linspace(double a, double b, std::size_t n) {
    std::vector<double> v(n);
    if (n == 1) {
        v[0] = a;
        return v;
    }
    for (std::size_t i = 0; i < n; ++i) v[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
    return v;
}

namespace {

long gcdl(long a, long b) { return b == 0 ? (a < 0 ? -a : a) : gcdl(b, a % b); }

// 8 * integral over one period of sin(n x) sin(a x) sin(b x) sin(c x), divided by L
long sine4_times8(int n, int a, int b, int c) {
    // sin a sin b = (cos(a-b) - cos(a+b))/2, same for n, c; then cos p cos q
    long s = 0;
    int ab[2] = {a - b, a + b};
    int nc[2] = {n - c, n + c};
    int sab[2] = {1, -1};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            int sign = sab[i] * sab[j];
            // cos p cos q = (cos(p-q) + cos(p+q))/2 ; integral of cos(kx) is L if k = 0
            int p = ab[i], q = nc[j];
            s += sign * ((p - q == 0) + (p + q == 0));
        }
    return s;  // integral = L * s / 8
}

}  // namespace

ModalSystem galerkin_reduce(bool beam, int N, double param) {
    if (N < 1 || N > 4) throw std::invalid_argument("mode count must be between 1 and 4");
    ModalSystem m;
    m.N = N;
    m.beam = beam;
    m.param = param;
    double L = beam ? 2 * M_PI : M_PI;
    for (int n = 1; n <= N; ++n) {
        double w2 = beam ? std::pow(n, 4) - param : n * n + param;
        if (w2 <= 0) throw std::invalid_argument("nonpositive squared modal frequency");
        m.omega.push_back(std::sqrt(w2));
    }
    m.coeff.assign(N, std::vector<std::vector<std::vector<double>>>(
                          N, std::vector<std::vector<double>>(N, std::vector<double>(N, 0.0))));
    m.exact.assign(N, std::vector<std::vector<std::vector<std::pair<long, long>>>>(
                          N, std::vector<std::vector<std::pair<long, long>>>(
                                 N, std::vector<std::pair<long, long>>(N, {0, 1}))));
    for (int n = 1; n <= N; ++n)
        for (int a = 1; a <= N; ++a)
            for (int b = a; b <= N; ++b)
                for (int c = b; c <= N; ++c) {
                    // multiplicity of (a,b,c) in the expansion of (sum v_i s_i)^3
                    long perms = (a == b && b == c) ? 1 : ((a == b || b == c) ? 3 : 6);
                    // (2/L) * integral = (2/L) * L * s/8 = s/4
                    long num = perms * sine4_times8(n, a, b, c), den = 4;
                    long g = gcdl(num, den);
                    if (g != 0) {
                        num /= g;
                        den /= g;
                    }
                    m.exact[n - 1][a - 1][b - 1][c - 1] = {num, den};
                    m.coeff[n - 1][a - 1][b - 1][c - 1] = static_cast<double>(num) / static_cast<double>(den);
                    double numeric = (2.0 / L) * static_cast<double>(perms) *
                                     quad([&](double x) { return std::sin(n * x) * std::sin(a * x) * std::sin(b * x) * std::sin(c * x); },
                                          0.0, L, 1e-13);
                    m.quadrature_mismatch = std::max(m.quadrature_mismatch, std::fabs(numeric - m.coeff[n - 1][a - 1][b - 1][c - 1]));
                }
    return m;
}

}  // namespace trg::oracle
