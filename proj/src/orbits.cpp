#include "anisolab/orbits.hpp"

#include <algorithm>
#include <cmath>

#include "anisolab/errors.hpp"

namespace aniso {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;

// Lift of T^n applied without wrapping; valid because the perturbation is
// 1-periodic, so the n-fold lift composition is a lift of T^n.
Vec2 lift_n(const TorusMap& map, Vec2 x, int n) {
    for (int i = 0; i < n; ++i) x = map.lift(x);
    return x;
}

// Jacobian of T^n along the (wrapped) orbit, accumulated in long double to
// control cancellation in det(id - DT^{-n}) at larger n.
struct LongMat2 {
    long double a11, a12, a21, a22;
};

LongMat2 jacobian_n(const TorusMap& map, Vec2 x, int n) {
    LongMat2 j{1.0L, 0.0L, 0.0L, 1.0L};
    for (int i = 0; i < n; ++i) {
        const Mat2 d = map.jacobian(x);
        const LongMat2 step{(long double)d.a11, (long double)d.a12, (long double)d.a21,
                            (long double)d.a22};
        j = LongMat2{step.a11 * j.a11 + step.a12 * j.a21, step.a11 * j.a12 + step.a12 * j.a22,
                     step.a21 * j.a11 + step.a22 * j.a21, step.a21 * j.a12 + step.a22 * j.a22};
        x = map.evaluate(x);
    }
    return j;
}

// |det(id - DT_x^{-n})| in the cancellation-free 2x2 form
// (det J - tr J + 1) / det J with J = DT^n.
double det_term_from(const LongMat2& j) {
    const long double det = j.a11 * j.a22 - j.a12 * j.a21;
    const long double tr = j.a11 + j.a22;
    return double(std::abs((det - tr + 1.0L) / det));
}

Vec2 newton_periodic(const TorusMap& map, Vec2 x, const IVec2& k, int n,
                     const OrbitOptions& opts, double* residual_out) {
    double res = 1.0;
    for (int it = 0; it < opts.newton_max_iter; ++it) {
        const Vec2 fx = lift_n(map, x, n);
        const Vec2 f{fx[0] - x[0] - double(k[0]), fx[1] - x[1] - double(k[1])};
        res = norm_inf(f);
        if (res < opts.newton_tol) break;
        const LongMat2 jl = jacobian_n(map, x, n);
        const Mat2 j{double(jl.a11) - 1.0, double(jl.a12), double(jl.a21), double(jl.a22) - 1.0};
        const Vec2 step = j.inverse().apply(f);
        x = x - step;
    }
    if (residual_out) *residual_out = res;
    return x;
}

}  // namespace

Weight Weight::reciprocal_jacobian() {
    Weight w;
    w.kind_ = Kind::ReciprocalJacobian;
    return w;
}

Weight Weight::constant(std::complex<double> value) {
    Weight w;
    w.kind_ = Kind::Constant;
    w.constant_ = value;
    return w;
}

Weight Weight::trig_series(std::vector<WeightTerm> terms) {
    Weight w;
    w.kind_ = Kind::TrigSeries;
    w.terms_ = std::move(terms);
    return w;
}

std::complex<double> Weight::evaluate(const TorusMap& map, const Vec2& x) const {
    switch (kind_) {
        case Kind::ReciprocalJacobian:
            return 1.0 / std::abs(map.det_jacobian(x));
        case Kind::Constant:
            return constant_;
        case Kind::TrigSeries: {
            std::complex<double> v{0.0, 0.0};
            for (const auto& t : terms_) {
                const double phase = kTwoPi * (double(t.freq[0]) * x[0] + double(t.freq[1]) * x[1]);
                v += t.coeff * std::complex<double>(std::cos(phase), std::sin(phase));
            }
            return v;
        }
    }
    return {1.0, 0.0};
}

bool Weight::is_real() const {
    if (kind_ == Kind::ReciprocalJacobian) return true;
    if (kind_ == Kind::Constant) return constant_.imag() == 0.0;
    // A trig series is real iff terms pair up conjugately; test by symmetry
    // of the coefficient list.
    for (const auto& t : terms_) {
        bool matched = false;
        for (const auto& u : terms_) {
            if (u.freq[0] == -t.freq[0] && u.freq[1] == -t.freq[1] &&
                std::abs(u.coeff - std::conj(t.coeff)) < 1e-15)
                matched = true;
        }
        if (!matched) return false;
    }
    return true;
}

double Weight::sup_abs(const TorusMap& map, int grid) const {
    double m = 0.0;
    for (int i = 0; i < grid; ++i)
        for (int j = 0; j < grid; ++j) {
            const Vec2 x{double(i) / grid, double(j) / grid};
            m = std::max(m, std::abs(evaluate(map, x)));
        }
    return m;
}

std::int64_t linear_periodic_count(const IMat2& A, int n) {
    const IMat2 B = A.pow(n) - IMat2::identity();
    return std::llabs(B.det());
}

PeriodicOrbitTable enumerate_periodic_points(const TorusMap& map, const Weight& weight, int n,
                                             const OrbitOptions& opts) {
    if (n < 1) throw ConfigError("period must be >= 1");
    if (n > 12) throw ConfigError("period capped at 12 (exact integer enumeration range)");
    const IMat2 B = map.linear_part().pow(n) - IMat2::identity();
    const std::int64_t D = B.det();
    if (D == 0) throw NumericError("degenerate period: det(A^n - id) = 0");

    PeriodicOrbitTable table;
    table.n = n;
    table.expected_count = std::llabs(D);

    // Solutions of the linear map: x = B^{-1} m with x in [0,1)^2, i.e.
    // integer m in the half-open parallelogram B [0,1)^2. Scan m1 over the
    // bounding range; for each m1 bracket m2 in double and verify the two
    // half-open conditions exactly in integers:
    //   u1 = b22 m1 - b12 m2,  u2 = -b21 m1 + b11 m2,  x_i = u_i / D
    const auto in_range = [&](std::int64_t u) {
        return D > 0 ? (u >= 0 && u < D) : (u > D && u <= 0);
    };
    const std::int64_t m1_lo =
        std::min<std::int64_t>(0, B.a11) + std::min<std::int64_t>(0, B.a12);
    const std::int64_t m1_hi =
        std::max<std::int64_t>(0, B.a11) + std::max<std::int64_t>(0, B.a12);
    const std::int64_t m2_lo =
        std::min<std::int64_t>(0, B.a21) + std::min<std::int64_t>(0, B.a22);
    const std::int64_t m2_hi =
        std::max<std::int64_t>(0, B.a21) + std::max<std::int64_t>(0, B.a22);

    std::vector<Vec2> linear_points;
    linear_points.reserve(size_t(table.expected_count));
    for (std::int64_t m1 = m1_lo; m1 <= m1_hi; ++m1) {
        // Bracket m2 from both conditions in floating point, then widen.
        double lo = double(m2_lo), hi = double(m2_hi);
        if (B.a12 != 0) {
            // u1 in [0,D) resp. (D,0]  =>  m2 = (b22 m1 - u1)/b12
            const double e1 = (double(B.a22) * double(m1) - 0.0) / double(B.a12);
            const double e2 = (double(B.a22) * double(m1) - double(D)) / double(B.a12);
            lo = std::max(lo, std::min(e1, e2) - 2.0);
            hi = std::min(hi, std::max(e1, e2) + 2.0);
        }
        if (B.a11 != 0) {
            // u2 in [0,D) resp. (D,0]  =>  m2 = (u2 + b21 m1)/b11
            const double e1 = (0.0 + double(B.a21) * double(m1)) / double(B.a11);
            const double e2 = (double(D) + double(B.a21) * double(m1)) / double(B.a11);
            lo = std::max(lo, std::min(e1, e2) - 2.0);
            hi = std::min(hi, std::max(e1, e2) + 2.0);
        }
        const std::int64_t c_lo = (std::int64_t)std::floor(lo);
        const std::int64_t c_hi = (std::int64_t)std::ceil(hi);
        for (std::int64_t m2 = c_lo; m2 <= c_hi; ++m2) {
            const std::int64_t u1 = B.a22 * m1 - B.a12 * m2;
            const std::int64_t u2 = -B.a21 * m1 + B.a11 * m2;
            if (!in_range(u1) || !in_range(u2)) continue;
            linear_points.push_back({double(u1) / double(D), double(u2) / double(D)});
        }
    }
    if ((std::int64_t)linear_points.size() != table.expected_count)
        throw NumericError("periodic point enumeration miscounted the linear lattice");

    // Continue each point from the linear map to the target eps, keeping
    // the integer lift offset fixed along the path.
    const double target_eps = map.eps();
    const bool linear = map.is_linear();
    table.points.reserve(linear_points.size());
    for (const auto& x0 : linear_points) {
        Vec2 x = x0;
        if (!linear) {
            const Vec2 img = lift_n(map.with_eps(0.0), x0, n);
            const IVec2 k{(std::int64_t)std::llround(img[0] - x0[0]),
                          (std::int64_t)std::llround(img[1] - x0[1])};
            const int stages = std::max(1, (int)std::ceil(std::abs(target_eps) /
                                                          opts.continuation_step));
            for (int s = 1; s <= stages; ++s) {
                const double e = target_eps * double(s) / double(stages);
                double res = 0.0;
                x = newton_periodic(map.with_eps(e), x, k, n, opts, &res);
                if (res > 1e-10)
                    throw NumericError("periodic point continuation lost convergence");
            }
        }
        x = wrap_torus(x);

        PeriodicPoint p;
        p.x = x;
        std::complex<double> wp{1.0, 0.0};
        Vec2 y = x;
        for (int i = 0; i < n; ++i) {
            wp *= weight.evaluate(map, y);
            y = map.evaluate(y);
        }
        p.weight_product = wp;
        p.det_term = det_term_from(jacobian_n(map, x, n));
        table.points.push_back(p);
    }

    std::sort(table.points.begin(), table.points.end(),
              [](const PeriodicPoint& a, const PeriodicPoint& b) {
                  if (a.x[0] != b.x[0]) return a.x[0] < b.x[0];
                  return a.x[1] < b.x[1];
              });

    // Continuation must keep points distinct: compare lexicographic
    // neighbours within a narrow x1 window.
    for (size_t i = 0; i + 1 < table.points.size(); ++i) {
        for (size_t j = i + 1; j < table.points.size(); ++j) {
            if (table.points[j].x[0] - table.points[i].x[0] > 1e-9) break;
            if (torus_dist(table.points[i].x, table.points[j].x) < 1e-9)
                throw NumericError("periodic point continuation produced a collision");
        }
    }
    return table;
}

Vec2 refine_orbit(const TorusMap& map, const Vec2& x0, int n, const OrbitOptions& opts,
                  double* residual) {
    const Vec2 img = lift_n(map, x0, n);
    const IVec2 k{(std::int64_t)std::llround(img[0] - x0[0]),
                  (std::int64_t)std::llround(img[1] - x0[1])};
    return newton_periodic(map, x0, k, n, opts, residual);
}

}  // namespace aniso
