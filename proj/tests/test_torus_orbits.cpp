#include <doctest.h>

#include <cmath>
#include <cstdint>

#include "anisolab/orbits.hpp"
#include "anisolab/torus_map.hpp"

using namespace aniso;

namespace {
constexpr double kGolden2 = 2.618033988749894848;  // (3 + sqrt 5) / 2
}

TEST_CASE("cat map evaluates the affine-plus-trig formula") {
    const TorusMap map = TorusMap::cat_map(0.01);
    const Vec2 y = map.evaluate(Vec2{0.0, 0.25});
    // A x = (0.25, 0.25); eps * (sin(2 pi 0.25), 0) = (0.01, 0).
    CHECK(y[0] == doctest::Approx(0.26).epsilon(1e-12));
    CHECK(y[1] == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("cat map jacobian matches the analytic derivative") {
    const TorusMap map = TorusMap::cat_map(0.01);
    const Mat2 j = map.jacobian(Vec2{0.0, 0.25});
    // dh = [[0, 2 pi cos(pi/2)], [0, 0]] = 0 at x2 = 1/4.
    CHECK(j.a11 == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(j.a12 == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(j.a21 == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(j.a22 == doctest::Approx(1.0).epsilon(1e-12));

    const Mat2 j2 = map.jacobian(Vec2{0.0, 0.0});
    CHECK(j2.a12 == doctest::Approx(1.0 + 0.01 * 2.0 * M_PI).epsilon(1e-12));
}

TEST_CASE("linear multipliers of the cat matrix") {
    const TorusMap map = TorusMap::cat_map(0.0);
    const auto mult = map.linear_multipliers();
    CHECK(mult[0] == doctest::Approx(kGolden2).epsilon(1e-14));
    CHECK(mult[0] * mult[1] == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("lyapunov exponents of the unperturbed cat map") {
    const TorusMap map = TorusMap::cat_map(0.0);
    const auto exps = map.lyapunov_exponents(Vec2{0.1234, 0.56789}, 2000, 50);
    CHECK(std::abs(exps[0] - 0.9624236501192069) < 1e-9);
    CHECK(std::abs(exps[0] + exps[1]) < 1e-9);
    const double avg = map.average_log_det(Vec2{0.1234, 0.56789}, 2000, 50);
    CHECK(std::abs(exps[0] + exps[1] - avg) < 1e-9);
}

TEST_CASE("lyapunov exponents persist under a small perturbation") {
    const TorusMap map = TorusMap::cat_map(0.02);
    const auto exps = map.lyapunov_exponents(Vec2{0.1234, 0.56789}, 8000, 200);
    CHECK(exps[0] > 0.90);
    CHECK(exps[0] < 1.02);
    const double avg = map.average_log_det(Vec2{0.1234, 0.56789}, 8000, 200);
    CHECK(std::abs(exps[0] + exps[1] - avg) < 1e-8);
}

TEST_CASE("inverse point undoes the map") {
    const TorusMap map = TorusMap::cat_map(0.02);
    const Vec2 xs[] = {{0.1, 0.2}, {0.7, 0.05}, {0.33, 0.91}, {0.5, 0.5}};
    for (const Vec2& x : xs) {
        const Vec2 y = map.evaluate(x);
        const Vec2 back = map.inverse_point(y);
        CHECK(torus_dist(back, x) < 1e-11);
    }
}

TEST_CASE("periodic point counts follow det(A^n - I)") {
    const TorusMap map = TorusMap::cat_map(0.0);
    const Weight g = Weight::reciprocal_jacobian();
    const std::int64_t expected[] = {1, 5, 16, 45, 121, 320};
    for (int n = 1; n <= 6; ++n) {
        const PeriodicOrbitTable table = enumerate_periodic_points(map, g, n);
        CHECK(table.expected_count == expected[n - 1]);
        CHECK(std::int64_t(table.points.size()) == expected[n - 1]);
        for (const PeriodicPoint& p : table.points) {
            // Verify T^n x = x on the torus.
            Vec2 y = p.x;
            for (int i = 0; i < n; ++i) y = map.evaluate(y);
            CHECK(torus_dist(y, p.x) < 1e-9);
            // Unit-determinant map: reciprocal-jacobian weight product is 1.
            CHECK(std::abs(p.weight_product - cplx{1.0, 0.0}) < 1e-12);
            CHECK(p.det_term > 0.0);
        }
    }
}

TEST_CASE("perturbed periodic points survive continuation") {
    const TorusMap map = TorusMap::cat_map(0.02);
    const Weight g = Weight::reciprocal_jacobian();
    for (int n = 1; n <= 4; ++n) {
        const PeriodicOrbitTable table = enumerate_periodic_points(map, g, n);
        CHECK(std::int64_t(table.points.size()) == table.expected_count);
        for (const PeriodicPoint& p : table.points) {
            Vec2 y = p.x;
            for (int i = 0; i < n; ++i) y = map.evaluate(y);
            CHECK(torus_dist(y, p.x) < 1e-9);
        }
    }
}
