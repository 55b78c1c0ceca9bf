#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace trg {

// Exact rational with 64-bit parts. Arithmetic goes through 128-bit
// intermediates and throws std::overflow_error if the reduced result
// does not fit.
class Rational {
public:
    Rational() = default;
    Rational(std::int64_t n) : num_(n) {}
    Rational(std::int64_t n, std::int64_t d);

    std::int64_t num() const { return num_; }
    std::int64_t den() const { return den_; }

    bool is_zero() const { return num_ == 0; }
    bool is_integer() const { return den_ == 1; }
    int sign() const { return (num_ > 0) - (num_ < 0); }
    double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

    Rational operator-() const;
    Rational& operator+=(const Rational& o);
    Rational& operator-=(const Rational& o);
    Rational& operator*=(const Rational& o);
    Rational& operator/=(const Rational& o);

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

    friend bool operator==(const Rational& a, const Rational& b) = default;
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

    Rational pow(int e) const;

    // "3/4", "-2"
    std::string str() const;

    // Exact value of a decimal literal such as "2.35" or "1e-3".
    static Rational parse_decimal(std::string_view s);
    // Continued-fraction recovery; nullopt if no fraction with
    // denominator <= max_den is within tol of x.
    static std::optional<Rational> from_double(double x, double tol = 1e-12,
                                               std::int64_t max_den = 1000000);

private:
    static Rational from_wide(__int128 n, __int128 d);
    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
};

Rational abs(const Rational& r);
Rational factorial(int n);
Rational binomial(int n, int k);

}  // namespace trg
