#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "anisolab/torus_map.hpp"

namespace aniso {

// Weight function g attached to a transfer operator. Three kinds:
//   reciprocal_jacobian : g = 1 / |det DT|
//   constant            : g = value
//   trig_series         : g(x) = sum of coeff * e^{2 pi i f.x}
struct WeightTerm {
    IVec2 freq;
    std::complex<double> coeff;
};

class Weight {
public:
    static Weight reciprocal_jacobian();
    static Weight constant(std::complex<double> value);
    static Weight trig_series(std::vector<WeightTerm> terms);

    std::complex<double> evaluate(const TorusMap& map, const Vec2& x) const;
    bool is_reciprocal_jacobian() const { return kind_ == Kind::ReciprocalJacobian; }
    bool is_real() const;
    // Bounds needed by the norm estimates: sup |g| over a sampling grid.
    double sup_abs(const TorusMap& map, int grid = 64) const;

    enum class Kind { ReciprocalJacobian, Constant, TrigSeries };
    Kind kind() const { return kind_; }
    std::complex<double> constant_value() const { return constant_; }
    const std::vector<WeightTerm>& terms() const { return terms_; }

private:
    Kind kind_ = Kind::ReciprocalJacobian;
    std::complex<double> constant_{1.0, 0.0};
    std::vector<WeightTerm> terms_;
};

struct PeriodicPoint {
    Vec2 x;                               // representative in [0,1)^2
    std::complex<double> weight_product;  // prod_{k<n} g(T^k x)
    double det_term;                      // |det(id - DT_x^{-n})|
};

struct PeriodicOrbitTable {
    int n = 0;
    std::vector<PeriodicPoint> points;  // sorted lexicographically by (x1, x2)
    std::int64_t expected_count = 0;    // |det(A^n - id)|
};

struct OrbitOptions {
    double continuation_step = 0.005;  // eps increment per continuation stage
    double newton_tol = 1e-13;         // residual (sup norm) target on the lift
    int newton_max_iter = 80;
};

// All solutions of T^n x = x. For eps = 0 the lattice gives them exactly;
// for eps != 0 each point is continued from the linear map by stepwise
// Newton in eps. Point count is checked against |det(A^n - id)|.
PeriodicOrbitTable enumerate_periodic_points(const TorusMap& map, const Weight& weight, int n,
                                             const OrbitOptions& opts = {});

// Newton-polish a period-n point on the lift; returns the refined point
// and the final residual in *residual if given.
Vec2 refine_orbit(const TorusMap& map, const Vec2& x0, int n, const OrbitOptions& opts = {},
                  double* residual = nullptr);

// Exact period-n point count of the linear part, |det(A^n - id)|.
std::int64_t linear_periodic_count(const IMat2& A, int n);

}  // namespace aniso
