#pragma once

#include <array>
#include <complex>
#include <string>
#include <vector>

#include "anisolab/linalg2.hpp"

namespace aniso {

// One trigonometric term of the perturbation:
//   contributes cos_coeff * cos(2 pi f.x) + sin_coeff * sin(2 pi f.x).
struct TrigTerm {
    IVec2 freq;
    Vec2 cos_coeff{0.0, 0.0};
    Vec2 sin_coeff{0.0, 0.0};
};

// Hyperbolic torus diffeomorphism T(x) = A x + eps h(x) mod 1, with A an
// integer unimodular hyperbolic matrix and h a finite trigonometric series.
// The lift fixes the representative A x + eps h(x) on R^2.
class TorusMap {
public:
    TorusMap(IMat2 A, double eps, std::vector<TrigTerm> terms, double smoothness_r = 6.0);

    // Arnold cat map with the standard single-term perturbation
    // h(x) = (sin 2 pi x2, 0).
    static TorusMap cat_map(double eps = 0.0);

    Vec2 evaluate(const Vec2& x) const { return wrap_torus(lift(x)); }
    Vec2 lift(const Vec2& x) const;
    Mat2 jacobian(const Vec2& x) const;
    double det_jacobian(const Vec2& x) const { return jacobian(x).det(); }

    // Inverse through Newton on the lift, seeded at A^{-1} y. For eps = 0
    // this is exact. Throws NumericError if Newton fails to contract.
    Vec2 inverse_point(const Vec2& y) const { return wrap_torus(inverse_lift(y)); }
    Vec2 inverse_lift(const Vec2& y) const;

    // Lyapunov exponents along the orbit of x0, via the QR cocycle.
    // Returns {chi_max, chi_min}. For eps = 0 the Jacobian is constant and
    // the result is exact after a single step.
    std::array<double, 2> lyapunov_exponents(const Vec2& x0, long iterations,
                                             long burn_in = 0) const;

    // Orbit average of log |det DT| along the same orbit, for the
    // exponent-sum consistency check.
    double average_log_det(const Vec2& x0, long iterations, long burn_in = 0) const;

    const IMat2& linear_part() const { return A_; }
    const IMat2& linear_inverse() const { return Ainv_; }
    double eps() const { return eps_; }
    const std::vector<TrigTerm>& terms() const { return terms_; }
    double smoothness_r() const { return smoothness_r_; }
    bool is_linear() const { return eps_ == 0.0 || terms_.empty(); }

    // Eigenvalues of A sorted by modulus: {lambda_u, lambda_s}.
    std::array<double, 2> linear_multipliers() const;
    // Unit eigenvectors of A for {lambda_u, lambda_s}.
    std::array<Vec2, 2> linear_eigenvectors() const;

    // Returns a copy with a different perturbation strength (used by the
    // orbit continuation).
    TorusMap with_eps(double eps) const { return TorusMap(A_, eps, terms_, smoothness_r_); }

private:
    Vec2 perturbation(const Vec2& x) const;        // h(x)
    Mat2 perturbation_jacobian(const Vec2& x) const;  // Dh(x)

    IMat2 A_;
    IMat2 Ainv_;
    double eps_;
    std::vector<TrigTerm> terms_;
    double smoothness_r_;
};

}  // namespace aniso
