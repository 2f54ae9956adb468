#include <doctest.h>

#include <cmath>
#include <limits>

#include "anisolab/aniso_norms.hpp"
#include "anisolab/cone_system.hpp"
#include "anisolab/filter_bank.hpp"
#include "anisolab/leaf.hpp"
#include "anisolab/rng.hpp"

using namespace aniso;

namespace {
const double kInf = std::numeric_limits<double>::infinity();

ConeSystem upright() {
    return ConeSystem(ConeSpec{M_PI / 2, M_PI / 8}, ConeSpec{0.0, M_PI / 8});
}

std::vector<AdmissibleLeaf> horizontal_leaves() {
    return {AdmissibleLeaf(0.0, 0.5, 0.15, 0.0), AdmissibleLeaf(0.3, 0.5, 0.45, 0.0),
            AdmissibleLeaf(0.6, 0.5, 0.75, 0.0)};
}

AnisoParams params_ts(double t, double s, double p) {
    AnisoParams a;
    a.t = t;
    a.s = s;
    a.p = p;
    a.q = kInf;
    a.r = 6.0;
    a.delta = 0.1;
    return a;
}
}  // namespace

TEST_CASE("parameter window validation") {
    CHECK_NOTHROW(validate_aniso_params(params_ts(0.5, -1.0, 2.0)));
    CHECK_NOTHROW(validate_aniso_params(params_ts(1.0, -2.0, 1.0)));
    // s must stay below -t.
    CHECK_THROWS(validate_aniso_params(params_ts(0.5, -0.2, 2.0)));
    // s must stay above t - (r - 1).
    CHECK_THROWS(validate_aniso_params(params_ts(0.5, -5.5, 2.0)));
}

TEST_CASE("anisotropic norm of a horizontal single mode") {
    const ChiProfile chi;
    const auto leaves = horizontal_leaves();
    const AnisoParams prm = params_ts(0.5, -1.0, 1.0);
    const NormReport rep = u_norm_mode(IVec2{16, 0}, cplx{1.0, 0.0}, leaves, prm, chi);
    // |k| = 16 = 2^4 sits in a single sharp block; the chart trace is the
    // windowed unit exponential, so the value is 2^{4(t+s)} * ||window||_1
    // up to the block-overlap factor.
    CHECK(rep.argmax_level == 4);
    const double center = std::pow(2.0, 4.0 * (prm.t + prm.s)) * 0.45;
    CHECK(rep.value > 0.5 * center);
    CHECK(rep.value < 2.0 * center);
}

TEST_CASE("norm is homogeneous in the amplitude") {
    const ChiProfile chi;
    const auto leaves = horizontal_leaves();
    const AnisoParams prm = params_ts(0.5, -1.0, 2.0);
    const NormReport one = u_norm_mode(IVec2{12, 3}, cplx{1.0, 0.0}, leaves, prm, chi);
    const NormReport two = u_norm_mode(IVec2{12, 3}, cplx{0.0, 2.0}, leaves, prm, chi);
    CHECK(two.value == doctest::Approx(2.0 * one.value).epsilon(1e-12));
}

TEST_CASE("grid and mode evaluations agree on a pure mode") {
    const ChiProfile chi;
    const auto leaves = horizontal_leaves();
    const AnisoParams prm = params_ts(0.5, -1.0, 2.0);
    const int n = 64;
    FourierField f(n);
    f.at(9, -2) = cplx{1.0, 0.0};
    const FilterBank bank(n, chi);
    const NormReport grid = u_norm(f, bank, leaves, prm, chi);
    const NormReport mode = u_norm_mode(IVec2{9, -2}, cplx{1.0, 0.0}, leaves, prm, chi);
    CHECK(grid.value == doctest::Approx(mode.value).epsilon(1e-6));
}

TEST_CASE("norm is monotone in the parameters") {
    const ChiProfile chi;
    const auto leaves = horizontal_leaves();
    const NormReport base = u_norm_mode(IVec2{16, 0}, cplx{1.0, 0.0}, leaves,
                                        params_ts(0.5, -1.0, 2.0), chi);
    const NormReport more_neg_s = u_norm_mode(IVec2{16, 0}, cplx{1.0, 0.0}, leaves,
                                              params_ts(0.5, -1.5, 2.0), chi);
    const NormReport bigger_t = u_norm_mode(IVec2{16, 0}, cplx{1.0, 0.0}, leaves,
                                            params_ts(0.8, -1.0, 2.0), chi);
    CHECK(more_neg_s.value <= base.value + 1e-12);
    CHECK(bigger_t.value >= base.value - 1e-12);
}

TEST_CASE("norm satisfies the triangle inequality on random fields") {
    const ChiProfile chi;
    const auto leaves = horizontal_leaves();
    const AnisoParams prm = params_ts(0.5, -1.0, 2.0);
    const int n = 64;
    Rng rng(31);
    const FilterBank bank(n, chi);
    for (int trial = 0; trial < 3; ++trial) {
        const FourierField a = FourierField::random_band_limited(n, 10, rng);
        const FourierField b = FourierField::random_band_limited(n, 10, rng);
        FourierField sum = a;
        sum += b;
        const double na = u_norm(a, bank, leaves, prm, chi).value;
        const double nb = u_norm(b, bank, leaves, prm, chi).value;
        const double ns = u_norm(sum, bank, leaves, prm, chi).value;
        CHECK(ns <= na + nb + 1e-10 * (na + nb));
    }
}

TEST_CASE("dagger norm with zero exponents brackets the L2 norm") {
    const ConeSystem cones = upright();
    Rng rng(13);
    const FourierField f = FourierField::random_band_limited(64, 10, rng);
    const double w = w_dagger_norm(f, cones, 0.0, 0.0, 2.0);
    const double l2 = f.l2_norm();
    CHECK(w >= l2 - 1e-10);
    CHECK(w <= 2.0 * l2 + 1e-10);
}

TEST_CASE("dagger norm acts diagonally on pure cone modes") {
    const ConeSystem cones = upright();
    const int n = 128;
    FourierField up(n);
    up.at(0, 32) = cplx{1.0, 0.0};  // deep inside the plus cone
    const double wp = w_dagger_norm(up, cones, 1.0, -1.0, 2.0);
    CHECK(wp == doctest::Approx(std::sqrt(1.0 + 1024.0)).epsilon(1e-10));

    FourierField flat(n);
    flat.at(32, 0) = cplx{1.0, 0.0};  // deep inside the minus cone
    const double wm = w_dagger_norm(flat, cones, 1.0, -1.0, 2.0);
    CHECK(wm == doctest::Approx(std::pow(1.0 + 1024.0, -0.5)).epsilon(1e-10));
}

TEST_CASE("two-factor multiplier norm with zero exponents is the Lp norm") {
    Rng rng(21);
    const FourierField f = FourierField::random_band_limited(64, 10, rng);
    CHECK(triebel_norm(f, 0.0, 0.0, 2.0) == doctest::Approx(f.l2_norm()).epsilon(1e-12));
}

TEST_CASE("two-factor multiplier norm acts diagonally on axis modes") {
    const int n = 128;
    FourierField h(n);
    h.at(16, 0) = cplx{1.0, 0.0};  // stable-axis mode: both factors see k
    const double vh = triebel_norm(h, 1.0, -2.0, 2.0);
    CHECK(vh == doctest::Approx(std::sqrt(257.0) / 257.0).epsilon(1e-10));

    FourierField v(n);
    v.at(0, 16) = cplx{1.0, 0.0};  // unstable-axis mode: stable factor is 1
    const double vv = triebel_norm(v, 1.0, -2.0, 2.0);
    CHECK(vv == doctest::Approx(std::sqrt(257.0)).epsilon(1e-10));
}

TEST_CASE("smoothness-proxy comparison stays bounded above the norm") {
    const ChiProfile chi;
    const auto leaves = horizontal_leaves();
    const AnisoParams prm = params_ts(0.5, -1.0, 2.0);
    const int n = 128;
    const FilterBank bank(n, chi);
    double prev_ratio = kInf;
    bool nonincreasing_tail = true;
    for (const int k : {4, 8, 16, 32}) {
        FourierField f(n);
        f.at(k, 0) = cplx{1.0, 0.0};
        const double un = u_norm(f, bank, leaves, prm, chi).value;
        const double hp = holder_proxy_norm(f, bank, 0.75);
        const double ratio = un / hp;
        CHECK(std::isfinite(ratio));
        if (ratio > prev_ratio * 1.05) nonincreasing_tail = false;
        prev_ratio = ratio;
    }
    CHECK(nonincreasing_tail);
}
