// Exact arithmetic for squared wavenumbers on Neumann mode lattices.
//
// Domain edges are rational multiples of pi, optionally times sqrt(3)
// (every rectangular domain in the figure set is of that form), so the
// squared frequency of the mode pair (p, q),
//     k^2 = (p pi / L_x)^2 + (q pi / L_y)^2,
// is an exact rational number. Grouping degenerate modes by k^2 must not
// depend on floating-point ties, hence this tiny rational/surd layer.
#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace bruss {

struct Rational {
    // normalized: den > 0, gcd(|num|, den) == 1
    std::int64_t num = 0;
    std::int64_t den = 1;

    Rational() = default;
    Rational(std::int64_t n) : num(n), den(1) {}
    Rational(std::int64_t n, std::int64_t d) : num(n), den(d) { normalize(); }

    void normalize() {
        if (den == 0) throw std::invalid_argument("Rational: zero denominator");
        if (den < 0) { num = -num; den = -den; }
        const std::int64_t g = std::gcd(num < 0 ? -num : num, den);
        if (g > 1) { num /= g; den /= g; }
    }

    Rational operator+(const Rational& o) const { return {num * o.den + o.num * den, den * o.den}; }
    Rational operator-(const Rational& o) const { return {num * o.den - o.num * den, den * o.den}; }
    Rational operator*(const Rational& o) const { return {num * o.num, den * o.den}; }
    Rational operator/(const Rational& o) const {
        if (o.num == 0) throw std::domain_error("Rational: division by zero");
        return {num * o.den, den * o.num};
    }

    bool operator==(const Rational& o) const { return num == o.num && den == o.den; }
    bool operator!=(const Rational& o) const { return !(*this == o); }
    bool operator<(const Rational& o) const { return num * o.den < o.num * den; }

    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
    std::string str() const {
        return den == 1 ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den);
    }
};

// value = r * sqrt(3)^e with e in {0, 1}; normalized so e = 0 when r = 0.
// Closed under multiplication (sqrt(3)*sqrt(3) = 3) and under addition of
// like terms, which is all the mode bookkeeping needs.
struct Surd {
    Rational r;
    int e = 0;

    Surd() = default;
    Surd(Rational r_, int e_ = 0) : r(r_), e(e_) {
        if (e != 0 && e != 1) throw std::invalid_argument("Surd: exponent must be 0 or 1");
        if (r.num == 0) e = 0;
    }

    bool is_zero() const { return r.num == 0; }
    double value() const { return r.value() * (e ? 1.7320508075688772935 : 1.0); }
    Rational squared() const { return r * r * Rational(e ? 3 : 1); }

    Surd operator*(const Surd& o) const {
        Rational rr = r * o.r;
        int ee = e + o.e;
        if (ee == 2) { rr = rr * Rational(3); ee = 0; }
        return {rr, ee};
    }
    Surd operator*(const Rational& s) const { return {r * s, e}; }
    Surd operator/(const Surd& o) const {
        if (o.is_zero()) throw std::domain_error("Surd: division by zero");
        if (o.e == 0) return {r / o.r, e};
        // 1/sqrt(3) = sqrt(3)/3
        Rational rr = r / (o.r * Rational(3));
        int ee = e + 1;
        if (ee == 2) { rr = rr * Rational(3); ee = 0; }
        return {rr, ee};
    }

    Surd operator+(const Surd& o) const {
        if (is_zero()) return o;
        if (o.is_zero()) return *this;
        if (e != o.e) throw std::domain_error("Surd: cannot add sqrt(3)-incommensurable terms");
        return {r + o.r, e};
    }
    Surd operator-(const Surd& o) const { return *this + Surd(o.r * Rational(-1), o.e); }

    bool operator==(const Surd& o) const { return r == o.r && e == o.e; }
    bool operator!=(const Surd& o) const { return !(*this == o); }
};

// Parses a length given as a rational multiple of pi, with an optional
// sqrt(3) factor: "2", "3/2", "sqrt(3)", "2*sqrt(3)", "2*sqrt(3)/3".
// The returned Surd is the coefficient of pi.
Surd parse_pi_multiple(const std::string& text);

}  // namespace bruss
