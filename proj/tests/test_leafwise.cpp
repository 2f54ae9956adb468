#include <doctest.h>

#include <cmath>

#include "anisolab/besov1d.hpp"
#include "anisolab/cone_system.hpp"
#include "anisolab/leaf.hpp"
#include "anisolab/leaf_restriction.hpp"
#include "anisolab/rng.hpp"
#include "naive_besov.hpp"

using namespace aniso;

namespace {
ConeSystem upright() {
    return ConeSystem(ConeSpec{M_PI / 2, M_PI / 8}, ConeSpec{0.0, M_PI / 8});
}
}  // namespace

TEST_CASE("leafwise norm matches the direct-sum reference on horizontal leaves") {
    const ChiProfile chi;
    Rng rng(42);
    const int m = 128;
    for (int probe = 0; probe < 8; ++probe) {
        const FourierField f = FourierField::random_band_limited(32, 6, rng);
        const AdmissibleLeaf leaf(rng.uniform(0.0, 1.0), 0.5, rng.uniform(0.0, 1.0), 0.0);
        const BesovParams bp{-0.5 - rng.uniform(0.0, 0.5), 2.0,
                             std::numeric_limits<double>::infinity()};
        const double fast = leafwise_besov_norm(f, leaf, bp, m, chi);
        const naive::Trace tr = naive::sample_leaf(f, leaf, m, chi);
        const double slow = naive::besov_reference(tr, bp.s, bp.p, bp.q, chi);
        CHECK(std::abs(fast - slow) <= 1e-10 * std::max(1.0, slow));
    }
}

TEST_CASE("finite q and p branches agree with the reference") {
    const ChiProfile chi;
    Rng rng(7);
    const int m = 64;
    const FourierField f = FourierField::random_band_limited(32, 6, rng);
    const AdmissibleLeaf leaf(0.2, 0.5, 0.3, 0.0);
    for (const double p : {1.0, 2.0, 4.0}) {
        for (const double q : {1.0, 2.0, std::numeric_limits<double>::infinity()}) {
            const BesovParams bp{-0.75, p, q};
            const double fast = leafwise_besov_norm(f, leaf, bp, m, chi);
            const naive::Trace tr = naive::sample_leaf(f, leaf, m, chi);
            const double slow = naive::besov_reference(tr, bp.s, bp.p, bp.q, chi);
            CHECK(std::abs(fast - slow) <= 1e-10 * std::max(1.0, slow));
        }
    }
}

TEST_CASE("single-mode restriction equals the windowed exponential") {
    const ChiProfile chi;
    const AdmissibleLeaf leaf(0.1, 0.5, 0.4, 0.0);
    const IVec2 k{5, -3};
    const cplx amp{0.7, 0.2};
    const LeafRestriction r = restrict_mode_to_leaf(k, amp, leaf, 64, chi);
    FourierField f(32);
    f.at(5, -3) = amp;
    const LeafRestriction rf = restrict_to_leaf(f, leaf, 64, chi);
    REQUIRE(r.trace.size() == rf.trace.size());
    for (std::size_t i = 0; i < r.trace.size(); ++i) {
        CHECK(std::abs(r.trace[i] - rf.trace[i]) < 1e-12);
        CHECK(r.mu[i] == doctest::Approx(rf.mu[i]).epsilon(1e-13));
    }
}

TEST_CASE("translation covariance within discretization slack") {
    const ChiProfile chi;
    Rng rng(99);
    const FourierField f = FourierField::random_band_limited(64, 8, rng);
    const BesovParams bp{-0.6, 2.0, std::numeric_limits<double>::infinity()};
    const int m = 128;
    const AdmissibleLeaf leaf(0.15, 0.5, 0.35, 0.0);
    const Vec2 v{0.21, 0.37};
    // Norm of the shifted field on the leaf == norm of the field on the
    // back-shifted leaf (exact identity up to chart discretization).
    const double a = leafwise_besov_norm(f.translated(v), leaf, bp, m, chi);
    const double b = leafwise_besov_norm(f, leaf.translated({-v[0], -v[1]}), bp, m, chi);
    CHECK(std::abs(a - b) <= 0.1 * std::max(a, b));
}

TEST_CASE("smooth-envelope product bound holds with slack") {
    const ChiProfile chi;
    Rng rng(5);
    const int n = 64;
    const BesovParams bp{-0.5, 2.0, std::numeric_limits<double>::infinity()};
    const AdmissibleLeaf leaf(0.0, 0.5, 0.45, 0.0);
    const int m = 256;
    for (int probe = 0; probe < 4; ++probe) {
        const FourierField f = FourierField::random_band_limited(n, 8, rng);
        // Envelope g(x) = 1 + 0.3 cos(2 pi x1): 0.7 <= g <= 1.3, slowly varying.
        std::vector<double> g(std::size_t(n) * n);
        for (int i1 = 0; i1 < n; ++i1)
            for (int i2 = 0; i2 < n; ++i2)
                g[std::size_t(i1) * n + i2] =
                    1.0 + 0.3 * std::cos(2.0 * M_PI * double(i1) / n);
        const FourierField fg = f.spatial_product(g);
        const double nf = leafwise_besov_norm(f, leaf, bp, m, chi);
        const double nfg = leafwise_besov_norm(fg, leaf, bp, m, chi);
        CHECK(nfg <= 1.1 * 1.3 * nf);
        CHECK(nfg >= 0.9 * 0.7 * nf);
    }
}

TEST_CASE("leaf admissibility against upright cones") {
    const ConeSystem cones = upright();
    const AdmissibleLeaf flat(0.0, 0.5, 0.3, 0.0);
    const LeafValidation ok = validate_leaf(flat, cones, 10.0, 6.0);
    CHECK(ok.admissible);
    CHECK(ok.worst_chord_margin > 0.0);

    // Slope 1 leaf: chord normals at 45 degrees, outside the pi/8 plus cone.
    const AdmissibleLeaf steep(0.0, 0.5, 0.3, 1.0);
    const LeafValidation bad = validate_leaf(steep, cones, 10.0, 6.0);
    CHECK_FALSE(bad.admissible);
}

TEST_CASE("sampled leaf families are admissible and deterministic") {
    const ConeSystem cones = upright();
    LeafFamilyOptions opts;
    opts.count = 6;
    opts.slope_jitter = 0.05;
    opts.wiggle_amplitude = 0.01;
    opts.wiggle_terms = 2;
    opts.length = 0.5;
    opts.seed = 17;
    const auto fam1 = sample_leaf_family(cones, opts, 6.0);
    const auto fam2 = sample_leaf_family(cones, opts, 6.0);
    REQUIRE(fam1.size() == 6);
    REQUIRE(fam2.size() == 6);
    for (std::size_t i = 0; i < fam1.size(); ++i) {
        CHECK(validate_leaf(fam1[i], cones, opts.cone_constant, 6.0).admissible);
        CHECK(fam1[i].offset() == doctest::Approx(fam2[i].offset()).epsilon(1e-15));
        CHECK(fam1[i].slope() == doctest::Approx(fam2[i].slope()).epsilon(1e-15));
    }
}
