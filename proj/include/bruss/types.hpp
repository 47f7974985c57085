// Small dense 2-vector / 2x2-matrix helpers used throughout the
// linear-stability and weakly-nonlinear machinery. The model has exactly
// two species, so all the linear algebra in this project is 2x2.
#pragma once

#include <array>
#include <cmath>
#include <stdexcept>

namespace bruss {

struct Vec2 {
    double x = 0.0, y = 0.0;

    Vec2() = default;
    Vec2(double x_, double y_) : x(x_), y(y_) {}

    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    Vec2& operator+=(const Vec2& o) { x += o.x; y += o.y; return *this; }
    double norm() const { return std::hypot(x, y); }
};

inline Vec2 operator*(double s, const Vec2& v) { return v * s; }
inline double dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }

struct Mat2 {
    // row-major: [[a, b], [c, d]]
    double a = 0.0, b = 0.0, c = 0.0, d = 0.0;

    Mat2() = default;
    Mat2(double a_, double b_, double c_, double d_) : a(a_), b(b_), c(c_), d(d_) {}

    static Mat2 diag(double p, double q) { return {p, 0.0, 0.0, q}; }
    static Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }

    double det() const { return a * d - b * c; }
    double trace() const { return a + d; }
    Mat2 transpose() const { return {a, c, b, d}; }

    Vec2 operator*(const Vec2& v) const { return {a * v.x + b * v.y, c * v.x + d * v.y}; }
    Mat2 operator*(double s) const { return {a * s, b * s, c * s, d * s}; }
    Mat2 operator+(const Mat2& o) const { return {a + o.a, b + o.b, c + o.c, d + o.d}; }
    Mat2 operator-(const Mat2& o) const { return {a - o.a, b - o.b, c - o.c, d - o.d}; }
};

// Solve M x = rhs by Cramer's rule. Throws if M is singular to working
// precision relative to its own scale.
inline Vec2 solve2(const Mat2& M, const Vec2& rhs) {
    const double det = M.det();
    const double scale = std::abs(M.a * M.d) + std::abs(M.b * M.c) + 1e-300;
    if (std::abs(det) < 1e-13 * scale)
        throw std::domain_error("solve2: singular 2x2 system");
    return {(rhs.x * M.d - M.b * rhs.y) / det, (M.a * rhs.y - rhs.x * M.c) / det};
}

// Least-squares solution of M x = rhs for a (near-)singular M, with the
// component along `gauge` removed, i.e. the returned x satisfies
// dot(x, gauge) = 0. Used for the pseudo-inverse solves on the critical
// wavenumber, where rhs is orthogonal to the adjoint kernel.
Vec2 solve2_pinv(const Mat2& M, const Vec2& rhs, const Vec2& gauge);

}  // namespace bruss
