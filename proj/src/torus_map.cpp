#include "anisolab/torus_map.hpp"

#include <cmath>

#include "anisolab/errors.hpp"

namespace aniso {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
}

TorusMap::TorusMap(IMat2 A, double eps, std::vector<TrigTerm> terms, double smoothness_r)
    : A_(A), eps_(eps), terms_(std::move(terms)), smoothness_r_(smoothness_r) {
    const auto d = A_.det();
    if (d != 1 && d != -1) throw ConfigError("linear part must be unimodular (det = +-1)");
    // Hyperbolicity: no eigenvalue on the unit circle. For det = 1 this is
    // |trace| > 2; for det = -1 the eigenvalues are real with product -1,
    // so hyperbolicity fails only at trace = 0.
    if (d == 1 && std::llabs(A_.trace()) <= 2)
        throw ConfigError("linear part is not hyperbolic (|trace| <= 2 with det = 1)");
    if (d == -1 && A_.trace() == 0)
        throw ConfigError("linear part is not hyperbolic (trace = 0 with det = -1)");
    Ainv_ = A_.unimodular_inverse();
    if (smoothness_r_ <= 1.0) throw ConfigError("smoothness exponent r must exceed 1");

    // The lift is a diffeomorphism if ||A^{-1}|| * eps * sup||Dh|| < 1.
    // sup||Dh|| is bounded by the sum of 2 pi |f| |coeff| over terms.
    if (eps_ != 0.0 && !terms_.empty()) {
        double dh_bound = 0.0;
        for (const auto& t : terms_) {
            const double fnorm = std::hypot(double(t.freq[0]), double(t.freq[1]));
            const double cnorm = std::hypot(norm2(t.cos_coeff), norm2(t.sin_coeff));
            dh_bound += kTwoPi * fnorm * cnorm;
        }
        const Mat2 ai = Ainv_.to_double();
        const double ainv_norm =
            std::sqrt(ai.a11 * ai.a11 + ai.a12 * ai.a12 + ai.a21 * ai.a21 + ai.a22 * ai.a22);
        if (std::abs(eps_) * dh_bound * ainv_norm >= 1.0)
            throw ConfigError("perturbation too strong: map may fail to be invertible");
    }
}

TorusMap TorusMap::cat_map(double eps) {
    IMat2 cat{2, 1, 1, 1};
    TrigTerm t;
    t.freq = {0, 1};
    t.sin_coeff = {1.0, 0.0};
    return TorusMap(cat, eps, {t});
}

Vec2 TorusMap::perturbation(const Vec2& x) const {
    Vec2 h{0.0, 0.0};
    for (const auto& t : terms_) {
        const double phase = kTwoPi * (double(t.freq[0]) * x[0] + double(t.freq[1]) * x[1]);
        const double c = std::cos(phase), s = std::sin(phase);
        h[0] += t.cos_coeff[0] * c + t.sin_coeff[0] * s;
        h[1] += t.cos_coeff[1] * c + t.sin_coeff[1] * s;
    }
    return h;
}

Mat2 TorusMap::perturbation_jacobian(const Vec2& x) const {
    Mat2 dh{};
    for (const auto& t : terms_) {
        const double phase = kTwoPi * (double(t.freq[0]) * x[0] + double(t.freq[1]) * x[1]);
        const double c = std::cos(phase), s = std::sin(phase);
        // d/dx_j of (a cos + b sin) = (-a sin + b cos) * 2 pi f_j
        const double g0 = (-t.cos_coeff[0] * s + t.sin_coeff[0] * c) * kTwoPi;
        const double g1 = (-t.cos_coeff[1] * s + t.sin_coeff[1] * c) * kTwoPi;
        dh.a11 += g0 * double(t.freq[0]);
        dh.a12 += g0 * double(t.freq[1]);
        dh.a21 += g1 * double(t.freq[0]);
        dh.a22 += g1 * double(t.freq[1]);
    }
    return dh;
}

Vec2 TorusMap::lift(const Vec2& x) const {
    const Mat2 a = A_.to_double();
    Vec2 y = a.apply(x);
    if (eps_ != 0.0) {
        const Vec2 h = perturbation(x);
        y[0] += eps_ * h[0];
        y[1] += eps_ * h[1];
    }
    return y;
}

Mat2 TorusMap::jacobian(const Vec2& x) const {
    Mat2 j = A_.to_double();
    if (eps_ != 0.0) {
        const Mat2 dh = perturbation_jacobian(x);
        j.a11 += eps_ * dh.a11;
        j.a12 += eps_ * dh.a12;
        j.a21 += eps_ * dh.a21;
        j.a22 += eps_ * dh.a22;
    }
    return j;
}

Vec2 TorusMap::inverse_lift(const Vec2& y) const {
    Vec2 x = Ainv_.to_double().apply(y);
    if (is_linear()) return x;
    // Newton on F(x) = lift(x) - y. The lift differs from A by a bounded
    // perturbation, so the seed A^{-1} y is already within O(eps).
    for (int it = 0; it < 60; ++it) {
        const Vec2 f = lift(x) - y;
        if (norm_inf(f) < 1e-14) return x;
        const Mat2 j = jacobian(x);
        const Vec2 step = j.inverse().apply(f);
        x = x - step;
    }
    const Vec2 f = lift(x) - y;
    if (norm_inf(f) < 1e-11) return x;
    throw NumericError("inverse_point: Newton did not converge");
}

std::array<double, 2> TorusMap::lyapunov_exponents(const Vec2& x0, long iterations,
                                                   long burn_in) const {
    if (iterations <= 0) throw ConfigError("lyapunov_exponents: iterations must be positive");
    Vec2 x = wrap_torus(x0);
    for (long i = 0; i < burn_in; ++i) x = evaluate(x);
    // QR cocycle with an orthonormal frame carried along the orbit.
    Vec2 q1{1.0, 0.0}, q2{0.0, 1.0};
    double sum1 = 0.0, sum2 = 0.0;
    for (long i = 0; i < iterations; ++i) {
        const Mat2 j = jacobian(x);
        Vec2 w1 = j.apply(q1);
        Vec2 w2 = j.apply(q2);
        const double r11 = norm2(w1);
        q1 = (1.0 / r11) * w1;
        const double r12 = dot(q1, w2);
        w2 = w2 - r12 * q1;
        const double r22 = norm2(w2);
        q2 = (1.0 / r22) * w2;
        sum1 += std::log(r11);
        sum2 += std::log(r22);
        x = evaluate(x);
    }
    const double c1 = sum1 / double(iterations);
    const double c2 = sum2 / double(iterations);
    return {std::max(c1, c2), std::min(c1, c2)};
}

double TorusMap::average_log_det(const Vec2& x0, long iterations, long burn_in) const {
    Vec2 x = wrap_torus(x0);
    for (long i = 0; i < burn_in; ++i) x = evaluate(x);
    double sum = 0.0;
    for (long i = 0; i < iterations; ++i) {
        sum += std::log(std::abs(det_jacobian(x)));
        x = evaluate(x);
    }
    return sum / double(iterations);
}

std::array<double, 2> TorusMap::linear_multipliers() const {
    const double tr = double(A_.trace());
    const double de = double(A_.det());
    const double disc = std::sqrt(tr * tr - 4.0 * de);
    const double l1 = (tr + disc) / 2.0;
    const double l2 = (tr - disc) / 2.0;
    if (std::abs(l1) >= std::abs(l2)) return {l1, l2};
    return {l2, l1};
}

std::array<Vec2, 2> TorusMap::linear_eigenvectors() const {
    const auto mult = linear_multipliers();
    std::array<Vec2, 2> out;
    for (int i = 0; i < 2; ++i) {
        const double lam = mult[i];
        // (A - lam) v = 0; pick the better-conditioned row.
        const Mat2 a = A_.to_double();
        Vec2 v1{-a.a12, a.a11 - lam};
        Vec2 v2{a.a22 - lam, -a.a21};
        Vec2 v = (norm2(v1) >= norm2(v2)) ? v1 : v2;
        const double n = norm2(v);
        out[i] = {v[0] / n, v[1] / n};
    }
    return out;
}

}  // namespace aniso
