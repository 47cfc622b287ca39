#include "proxlab/rational.hpp"

#include <numeric>

namespace proxlab {

namespace {

std::int64_t checked(__int128 v) {
    if (v > INT64_MAX || v < INT64_MIN)
        throw std::overflow_error("rational arithmetic overflow");
    return static_cast<std::int64_t>(v);
}

}  // namespace

Rational::Rational(std::int64_t n, std::int64_t d) {
    if (d == 0) throw std::invalid_argument("rational with zero denominator");
    if (d < 0) { n = -n; d = -d; }
    const std::int64_t g = std::gcd(n < 0 ? -n : n, d);
    num = g ? n / g : n;
    den = g ? d / g : d;
}

Rational Rational::operator+(const Rational& o) const {
    const __int128 n = static_cast<__int128>(num) * o.den + static_cast<__int128>(o.num) * den;
    const __int128 d = static_cast<__int128>(den) * o.den;
    const std::int64_t g = std::gcd(checked(n < 0 ? -n : n), checked(d));
    return Rational(checked(g ? n / g : n), checked(g ? d / g : d));
}

Rational Rational::operator-(const Rational& o) const { return *this + (-o); }

Rational Rational::operator*(const Rational& o) const {
    const __int128 n = static_cast<__int128>(num) * o.num;
    const __int128 d = static_cast<__int128>(den) * o.den;
    const std::int64_t g = std::gcd(checked(n < 0 ? -n : n), checked(d));
    return Rational(checked(g ? n / g : n), checked(g ? d / g : d));
}

Rational Rational::operator*(std::int64_t k) const { return *this * Rational::integer(k); }

bool Rational::operator<(const Rational& o) const {
    return static_cast<__int128>(num) * o.den < static_cast<__int128>(o.num) * den;
}

Rational Rational::mod1() const {
    std::int64_t r = num % den;
    if (r < 0) r += den;
    return Rational(r, den);
}

std::string Rational::str() const {
    if (den == 1) return std::to_string(num);
    return std::to_string(num) + "/" + std::to_string(den);
}

std::optional<Rational> Rational::parse(const std::string& s) {
    try {
        const auto slash = s.find('/');
        std::size_t used = 0;
        if (slash == std::string::npos) {
            const std::int64_t n = std::stoll(s, &used);
            if (used != s.size()) return std::nullopt;
            return Rational::integer(n);
        }
        const std::int64_t n = std::stoll(s.substr(0, slash), &used);
        if (used != slash) return std::nullopt;
        const std::string dpart = s.substr(slash + 1);
        const std::int64_t d = std::stoll(dpart, &used);
        if (used != dpart.size() || d == 0) return std::nullopt;
        return Rational(n, d);
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

Rational circle_dist_rational(const Rational& a, const Rational& b) {
    const Rational diff = (a - b).mod1();          // in [0,1)
    const Rational other = (b - a).mod1();         // 1 - diff (or 0)
    return min(diff, other);
}

}  // namespace proxlab
