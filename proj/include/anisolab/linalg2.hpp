#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace aniso {

using Vec2 = std::array<double, 2>;
using IVec2 = std::array<std::int64_t, 2>;

// Row-major 2x2 matrices. Hand-rolled rather than Eigen: these sit in the
// innermost loops (cocycles, orbit Newton steps) and the integer variant
// must stay exact.
struct Mat2 {
    double a11 = 0, a12 = 0, a21 = 0, a22 = 0;

    double det() const { return a11 * a22 - a12 * a21; }
    double trace() const { return a11 + a22; }

    Vec2 apply(const Vec2& v) const {
        return {a11 * v[0] + a12 * v[1], a21 * v[0] + a22 * v[1]};
    }
    Mat2 operator*(const Mat2& o) const {
        return {a11 * o.a11 + a12 * o.a21, a11 * o.a12 + a12 * o.a22,
                a21 * o.a11 + a22 * o.a21, a21 * o.a12 + a22 * o.a22};
    }
    Mat2 transpose() const { return {a11, a21, a12, a22}; }
    Mat2 inverse() const {
        const double d = det();
        return {a22 / d, -a12 / d, -a21 / d, a11 / d};
    }
};

struct IMat2 {
    std::int64_t a11 = 0, a12 = 0, a21 = 0, a22 = 0;

    std::int64_t det() const { return a11 * a22 - a12 * a21; }
    std::int64_t trace() const { return a11 + a22; }

    IVec2 apply(const IVec2& v) const {
        return {a11 * v[0] + a12 * v[1], a21 * v[0] + a22 * v[1]};
    }
    IMat2 operator*(const IMat2& o) const {
        return {a11 * o.a11 + a12 * o.a21, a11 * o.a12 + a12 * o.a22,
                a21 * o.a11 + a22 * o.a21, a21 * o.a12 + a22 * o.a22};
    }
    IMat2 operator-(const IMat2& o) const {
        return {a11 - o.a11, a12 - o.a12, a21 - o.a21, a22 - o.a22};
    }
    static IMat2 identity() { return {1, 0, 0, 1}; }
    IMat2 pow(int n) const {
        IMat2 r = identity();
        for (int i = 0; i < n; ++i) r = r * *this;
        return r;
    }
    // Inverse of a unimodular matrix stays integral.
    IMat2 unimodular_inverse() const {
        const std::int64_t d = det();  // +1 or -1
        return {a22 / d, -a12 / d, -a21 / d, a11 / d};
    }
    Mat2 to_double() const {
        return {double(a11), double(a12), double(a21), double(a22)};
    }
};

inline Vec2 operator+(const Vec2& a, const Vec2& b) { return {a[0] + b[0], a[1] + b[1]}; }
inline Vec2 operator-(const Vec2& a, const Vec2& b) { return {a[0] - b[0], a[1] - b[1]}; }
inline Vec2 operator*(double c, const Vec2& v) { return {c * v[0], c * v[1]}; }
inline double dot(const Vec2& a, const Vec2& b) { return a[0] * b[0] + a[1] * b[1]; }
inline double norm2(const Vec2& v) { return std::sqrt(dot(v, v)); }
inline double norm_inf(const Vec2& v) { return std::max(std::abs(v[0]), std::abs(v[1])); }

// Wrap into [0,1).
inline double fract(double x) {
    double f = x - std::floor(x);
    if (f >= 1.0) f = 0.0;  // guards x = -1e-17 rounding to 1.0
    return f;
}
inline Vec2 wrap_torus(const Vec2& x) { return {fract(x[0]), fract(x[1])}; }

// Distance on the torus (per-coordinate minimal lift).
inline double torus_dist(const Vec2& a, const Vec2& b) {
    auto d1 = std::abs(a[0] - b[0]);
    auto d2 = std::abs(a[1] - b[1]);
    d1 = std::min(d1, 1.0 - d1);
    d2 = std::min(d2, 1.0 - d2);
    return std::sqrt(d1 * d1 + d2 * d2);
}

}  // namespace aniso
