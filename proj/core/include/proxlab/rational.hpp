#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace proxlab {

/// Exact rational arithmetic on int64 numerator/denominator. Used for torus
/// coordinates, rational rotation angles and exact lift arithmetic, so these
/// orbits can be iterated without floating-point drift.
struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;  // always > 0, gcd(num, den) == 1

    Rational() = default;
    Rational(std::int64_t n, std::int64_t d);
    static Rational integer(std::int64_t n) { return Rational(n, 1); }

    double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }
    bool is_integer() const { return den == 1; }

    Rational operator+(const Rational& o) const;
    Rational operator-(const Rational& o) const;
    Rational operator*(const Rational& o) const;
    Rational operator-() const { return Rational(-num, den); }
    Rational operator*(std::int64_t k) const;

    bool operator==(const Rational& o) const { return num == o.num && den == o.den; }
    bool operator!=(const Rational& o) const { return !(*this == o); }
    bool operator<(const Rational& o) const;
    bool operator<=(const Rational& o) const { return *this < o || *this == o; }

    Rational abs() const { return Rational(num < 0 ? -num : num, den); }

    /// Fractional part in [0, 1): this - floor(this).
    Rational mod1() const;

    std::string str() const;

    /// Parses "p/q" or a plain integer string.
    static std::optional<Rational> parse(const std::string& s);
};

inline Rational min(const Rational& a, const Rational& b) { return a < b ? a : b; }
inline Rational max(const Rational& a, const Rational& b) { return a < b ? b : a; }

/// Circle distance between rational coordinates in [0,1): min(|a-b|, 1-|a-b|), exact.
Rational circle_dist_rational(const Rational& a, const Rational& b);

}  // namespace proxlab
