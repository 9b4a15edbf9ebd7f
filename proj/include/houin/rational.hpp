#pragma once

#include <cstdint>
#include <string>

namespace houin {

// Exact signed rational kept in reduced form (den > 0, gcd(|num|, den) == 1).
// Every utility, threshold, and ratio in the engine runs through this type,
// so inclusive threshold comparisons are deterministic. Intermediate products
// use 128-bit arithmetic; a result that does not fit back into int64 throws
// std::overflow_error instead of wrapping.
class Rational {
public:
    constexpr Rational() : num_(0), den_(1) {}
    constexpr Rational(std::int64_t n) : num_(n), den_(1) {}
    Rational(std::int64_t n, std::int64_t d);

    std::int64_t num() const { return num_; }
    std::int64_t den() const { return den_; }

    bool is_zero() const { return num_ == 0; }
    bool is_negative() const { return num_ < 0; }
    bool is_positive() const { return num_ > 0; }
    bool is_integer() const { return den_ == 1; }

    Rational operator-() const;

    Rational& operator+=(const Rational& o);
    Rational& operator-=(const Rational& o);
    Rational& operator*=(const Rational& o);
    Rational& operator/=(const Rational& o);  // throws on division by zero

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
    friend bool operator<(const Rational& a, const Rational& b);
    friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
    friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
    friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

    // "7" when integral, "7/2" otherwise.
    std::string str() const;
    // Always "num/den", e.g. "7/1", "-3/10".
    std::string fraction_str() const;

    double approx() const { return static_cast<double>(num_) / static_cast<double>(den_); }

private:
    std::int64_t num_;
    std::int64_t den_;
};

// Parses "12", "-3", "2.5", "-0.75", or "3/10" into an exact rational.
// Throws std::invalid_argument on anything else.
Rational parse_rational(const std::string& token);

// Parses a threshold ratio: all forms accepted by parse_rational plus a
// trailing '%' ("30%" -> 3/10). Range validation is left to the caller.
Rational parse_ratio(const std::string& token);

}  // namespace houin
