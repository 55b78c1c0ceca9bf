#include "trg/rational.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace trg {

namespace {

__int128 gcd128(__int128 a, __int128 b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
        __int128 r = a % b;
        a = b;
        b = r;
    }
    return a;
}

}  // namespace

Rational Rational::from_wide(__int128 n, __int128 d) {
    if (d == 0) throw std::domain_error("rational division by zero");
    if (d < 0) {
        n = -n;
        d = -d;
    }
    __int128 g = gcd128(n, d);
    if (g > 1) {
        n /= g;
        d /= g;
    }
    constexpr __int128 lim = std::numeric_limits<std::int64_t>::max();
    if (n > lim || n < -lim || d > lim) throw std::overflow_error("rational overflow");
    Rational r;
    r.num_ = static_cast<std::int64_t>(n);
    r.den_ = static_cast<std::int64_t>(d);
    return r;
}

Rational::Rational(std::int64_t n, std::int64_t d) { *this = from_wide(n, d); }

Rational Rational::operator-() const { return from_wide(-static_cast<__int128>(num_), den_); }

Rational& Rational::operator+=(const Rational& o) {
    *this = from_wide(static_cast<__int128>(num_) * o.den_ + static_cast<__int128>(o.num_) * den_,
                      static_cast<__int128>(den_) * o.den_);
    return *this;
}

Rational& Rational::operator-=(const Rational& o) { return *this += -o; }

Rational& Rational::operator*=(const Rational& o) {
    *this = from_wide(static_cast<__int128>(num_) * o.num_, static_cast<__int128>(den_) * o.den_);
    return *this;
}

Rational& Rational::operator/=(const Rational& o) {
    if (o.num_ == 0) throw std::domain_error("rational division by zero");
    *this = from_wide(static_cast<__int128>(num_) * o.den_, static_cast<__int128>(den_) * o.num_);
    return *this;
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    __int128 l = static_cast<__int128>(a.num_) * b.den_;
    __int128 r = static_cast<__int128>(b.num_) * a.den_;
    if (l < r) return std::strong_ordering::less;
    if (l > r) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
}

Rational Rational::pow(int e) const {
    Rational base = e < 0 ? Rational(1) / *this : *this;
    int n = e < 0 ? -e : e;
    Rational out(1);
    for (int i = 0; i < n; ++i) out *= base;
    return out;
}

std::string Rational::str() const {
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
}

Rational Rational::parse_decimal(std::string_view s) {
    if (s.empty()) throw std::invalid_argument("empty number");
    bool neg = false;
    std::size_t i = 0;
    if (s[i] == '+' || s[i] == '-') {
        neg = s[i] == '-';
        ++i;
    }
    __int128 mant = 0;
    int scale = 0;
    bool seen_digit = false, dot = false;
    for (; i < s.size(); ++i) {
        char c = s[i];
        if (c >= '0' && c <= '9') {
            mant = mant * 10 + (c - '0');
            if (mant > static_cast<__int128>(1) << 100) throw std::overflow_error("number too long");
            if (dot) --scale;
            seen_digit = true;
        } else if (c == '.' && !dot) {
            dot = true;
        } else {
            break;
        }
    }
    if (!seen_digit) throw std::invalid_argument("malformed number: " + std::string(s));
    if (i < s.size()) {
        if (s[i] != 'e' && s[i] != 'E') throw std::invalid_argument("malformed number: " + std::string(s));
        ++i;
        bool eneg = false;
        if (i < s.size() && (s[i] == '+' || s[i] == '-')) {
            eneg = s[i] == '-';
            ++i;
        }
        int ex = 0;
        bool any = false;
        for (; i < s.size() && s[i] >= '0' && s[i] <= '9'; ++i) {
            ex = ex * 10 + (s[i] - '0');
            any = true;
            if (ex > 30) throw std::overflow_error("exponent too large");
        }
        if (!any || i != s.size()) throw std::invalid_argument("malformed number: " + std::string(s));
        scale += eneg ? -ex : ex;
    }
    __int128 num = neg ? -mant : mant;
    __int128 den = 1;
    for (; scale > 0; --scale) num *= 10;
    for (; scale < 0; ++scale) den *= 10;
    return from_wide(num, den);
}

std::optional<Rational> Rational::from_double(double x, double tol, std::int64_t max_den) {
    if (!std::isfinite(x)) return std::nullopt;
    double ax = std::fabs(x);
    if (ax > 1e15) return std::nullopt;
    // convergents h/k of the continued fraction of |x|
    __int128 h0 = 0, h1 = 1, k0 = 1, k1 = 0;
    double r = ax;
    for (int it = 0; it < 64; ++it) {
        double a = std::floor(r);
        __int128 ai = static_cast<__int128>(a);
        __int128 h2 = ai * h1 + h0, k2 = ai * k1 + k0;
        if (k2 > max_den) break;
        h0 = h1; h1 = h2; k0 = k1; k1 = k2;
        double approx = static_cast<double>(h1) / static_cast<double>(k1);
        if (std::fabs(approx - ax) <= tol * std::max(1.0, ax)) {
            Rational q = from_wide(h1, k1);
            return x < 0 ? -q : q;
        }
        double frac = r - a;
        if (frac < 1e-300) break;
        r = 1.0 / frac;
    }
    return std::nullopt;
}

Rational abs(const Rational& r) { return r.sign() < 0 ? -r : r; }

Rational factorial(int n) {
    Rational f(1);
    for (int i = 2; i <= n; ++i) f *= Rational(i);
    return f;
}

Rational binomial(int n, int k) {
    if (k < 0 || k > n) return Rational(0);
    Rational b(1);
    for (int i = 1; i <= k; ++i) b = b * Rational(n - k + i) / Rational(i);
    return b;
}

}  // namespace trg
