#include <doctest.h>

#include <cmath>

#include "anisolab/cone_stats.hpp"
#include "anisolab/rng.hpp"
#include "anisolab/splitting.hpp"

using namespace aniso;

namespace {
const double kGolden2 = 2.618033988749894848;  // larger multiplier of the cat matrix

ConeSystem eigen_aligned(const TorusMap& map) {
    const auto vecs = map.linear_eigenvectors();
    const double a_u = std::atan2(vecs[0][1], vecs[0][0]);
    const double a_s = std::atan2(vecs[1][1], vecs[1][0]);
    return ConeSystem(ConeSpec{a_u, 25.0 * M_PI / 180.0}, ConeSpec{a_s, 60.0 * M_PI / 180.0});
}

std::vector<AdmissibleLeaf> stable_leaves(const TorusMap& map) {
    const auto vecs = map.linear_eigenvectors();
    const double slope = vecs[1][1] / vecs[1][0];
    return {AdmissibleLeaf(0.0, 0.5, 0.15, slope), AdmissibleLeaf(0.4, 0.5, 0.65, slope)};
}

ConeHyperbolicityStats unit_stats() {
    ConeHyperbolicityStats st;
    st.norm_plus = 1.0;
    st.norm_minus = 1.0;
    st.norm_minusminus = 1.0;
    st.det_restricted_target = 1.0;
    st.det_restricted_source = 1.0;
    st.cone_invariant = true;
    return st;
}
}  // namespace

TEST_CASE("hook relation covers exactly three sector pairs") {
    const ConeHyperbolicityStats st = unit_stats();
    const int m0 = 2;
    // (-,+) never hooks, whatever the levels.
    for (int l = 0; l <= 8; ++l) {
        for (int n = 0; n <= 8; ++n) {
            CHECK_FALSE(hook_relation(l, -1, n, +1, st, m0));
        }
    }
    // (+,+): 2^n <= |F|_+ 2^{l+4}.
    CHECK(hook_relation(0, +1, 4, +1, st, m0));
    CHECK_FALSE(hook_relation(0, +1, 5, +1, st, m0));
    // (-,-): low levels below 2^{m0} are exempt, high levels capped.
    CHECK_FALSE(hook_relation(3, -1, 1, -1, st, m0));
    CHECK(hook_relation(3, -1, 2, -1, st, m0));
    CHECK(hook_relation(3, -1, 7, -1, st, m0));
    CHECK_FALSE(hook_relation(3, -1, 8, -1, st, m0));
    // (+,-) shares the (-,-) window.
    CHECK(hook_relation(3, +1, 2, -1, st, m0));
    CHECK_FALSE(hook_relation(3, +1, 8, -1, st, m0));

    // A stronger expansion bound hooks more pairs.
    ConeHyperbolicityStats strong = st;
    strong.norm_minusminus = 4.0;
    CHECK(hook_relation(3, -1, 9, -1, strong, m0));

    // A tighter contraction bound hooks fewer (+,+) pairs.
    ConeHyperbolicityStats tight = st;
    tight.norm_plus = 0.25;
    CHECK(hook_relation(0, +1, 2, +1, tight, m0));
    CHECK_FALSE(hook_relation(0, +1, 3, +1, tight, m0));
}

TEST_CASE("leafwise hook follows the expansion factor") {
    ConeHyperbolicityStats st = unit_stats();
    st.norm_minus = 2.0;
    CHECK(hook_relation_1d(4, 1, st));
    CHECK_FALSE(hook_relation_1d(8, 4, st));
}

TEST_CASE("structural constant calibration") {
    CHECK(structural_constant(0.0) == doctest::Approx(1.0));
    CHECK(structural_constant(-2.0) == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("identity cocycle gives the unit bound and no refined variant") {
    LYBoundInputs in;
    in.stats = unit_stats();
    in.t = 1.0;
    in.s = -2.0;
    in.p = 1.0;
    const LYBound b = ly_theoretical_bound(in);
    CHECK(b.nu_b == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_FALSE(b.refined_available);
    CHECK_FALSE(b.withheld_reason.empty());
}

TEST_CASE("hyperbolic cocycle admits the refined bound below the plain one") {
    const TorusMap map = TorusMap::cat_map(0.0);
    const ConeSystem cones = eigen_aligned(map);
    const Mat2 dftr = map.linear_inverse().to_double().transpose();
    LYBoundInputs in;
    in.stats = linear_asymptotic_stats(dftr, cones, cones);
    in.t = 1.0;
    in.s = -2.0;
    in.p = 1.0;
    const LYBound b = ly_theoretical_bound(in);
    CHECK(b.refined_available);
    CHECK(b.nu_b_refined > 0.0);
    CHECK(b.nu_b_refined < b.nu_b);
    CHECK(b.nu_b < 1.0);
}

TEST_CASE("bound rejects invalid integrability") {
    LYBoundInputs in;
    in.stats = unit_stats();
    in.p = 0.5;
    CHECK_THROWS(ly_theoretical_bound(in));
}

TEST_CASE("leaf cocycle constants of the exact linear map") {
    const TorusMap map = TorusMap::cat_map(0.0);
    const auto leaves = stable_leaves(map);
    const Weight w = Weight::reciprocal_jacobian();

    const LeafCocycleConstants id = leaf_cocycle_constants(map, 0, w, leaves[0]);
    CHECK(id.df_leaf_inv_cr == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(id.f_sup == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(id.f_comp_cr == doctest::Approx(1.0).epsilon(1e-12));

    // One backward step expands the stable leaf by the big multiplier.
    const LeafCocycleConstants one = leaf_cocycle_constants(map, 1, w, leaves[0]);
    CHECK(one.df_leaf_inv_cr == doctest::Approx(1.0 / kGolden2).epsilon(1e-9));
    CHECK(one.det_leaf_inv_cr == doctest::Approx(one.df_leaf_inv_cr).epsilon(1e-12));
    CHECK(one.f_sup == doctest::Approx(1.0).epsilon(1e-10));

    const LeafCocycleConstants two = leaf_cocycle_constants(map, 2, w, leaves[0]);
    CHECK(two.df_leaf_inv_cr == doctest::Approx(1.0 / (kGolden2 * kGolden2)).epsilon(1e-9));

    CHECK_THROWS(leaf_cocycle_constants(map, -1, w, leaves[0]));
}

TEST_CASE("bounded and compact parts reassemble the operator") {
    const TorusMap map = TorusMap::cat_map(0.0);
    const ConeSystem cones = eigen_aligned(map);
    const TransferOperator op(map, Weight::reciprocal_jacobian(), 64);
    const OperatorAction action = [&](const FourierField& f) { return op.apply(f); };

    Rng rng(5);
    FourierField phi = FourierField::random_band_limited(64, 4, rng);
    const ChiProfile chi;
    const FilterBank bank(64, chi);
    const Mat2 dftr = map.linear_inverse().to_double().transpose();
    const ConeHyperbolicityStats stats = linear_asymptotic_stats(dftr, cones, cones);

    const SplitResult split = split_bounded_compact(action, phi, bank, cones, cones, stats, 2);
    const FourierField direct = op.apply(phi);

    FourierField sum = split.bounded;
    sum += split.compact;
    FourierField defect = sum;
    defect -= direct;
    CHECK(defect.l2_norm() < 1e-10 * std::max(1.0, direct.l2_norm()));

    const int levels = bank.n_max() + 1;
    CHECK(split.total_pairs == 4 * levels * levels);
    CHECK(split.hooked_pairs > 0);
    CHECK(split.hooked_pairs < split.total_pairs);
}

TEST_CASE("measured growth of stable-direction probes decays at the predicted rate") {
    const TorusMap map = TorusMap::cat_map(0.0);
    const auto leaves = stable_leaves(map);
    const ChiProfile chi;
    LYGrowthOptions opt;
    opt.params.t = 1.0;
    opt.params.s = -2.0;
    opt.params.p = 1.0;
    opt.m_max = 5;
    opt.probe_modes = {IVec2{13, -21}, IVec2{8, -13}};
    const LYGrowthReport rep =
        ly_measured_growth(map, Weight::reciprocal_jacobian(), opt, leaves, chi);
    CHECK(rep.used_mode_path);
    REQUIRE(rep.fits.size() == 2);
    REQUIRE(rep.growth.size() == std::size_t(2 * (opt.m_max + 1)));
    for (const ProbeGrowthRow& row : rep.growth) {
        CHECK(row.norm > 0.0);
        CHECK(std::isfinite(row.norm));
    }
    // The modes ride the expanding frequency direction; with t + s = -1 the
    // norm contracts at roughly the reciprocal of the big multiplier.
    CHECK(rep.max_fitted_rate < 1.25 / kGolden2);
    CHECK(rep.max_fitted_rate > 0.2);
}

TEST_CASE("growth options are validated") {
    const TorusMap map = TorusMap::cat_map(0.0);
    const auto leaves = stable_leaves(map);
    const ChiProfile chi;
    LYGrowthOptions opt;
    opt.probe_modes = {};
    CHECK_THROWS(ly_measured_growth(map, Weight::reciprocal_jacobian(), opt, leaves, chi));
}

TEST_CASE("compact tail report carries the corrected exponent") {
    const TorusMap map = TorusMap::cat_map(0.0);
    const ConeSystem cones = eigen_aligned(map);
    const TransferOperator op(map, Weight::reciprocal_jacobian(), 64);
    const OperatorAction action = [&](const FourierField& f) { return op.apply(f); };
    const ChiProfile chi;
    const FilterBank bank(64, chi);
    const Mat2 dftr = map.linear_inverse().to_double().transpose();
    const ConeHyperbolicityStats stats = linear_asymptotic_stats(dftr, cones, cones);
    Rng rng(6);
    const FourierField probe = FourierField::random_band_limited(64, 4, rng);

    AnisoParams prm;
    prm.t = 0.5;
    prm.s = -1.0;
    prm.p = 2.0;
    prm.r = 6.0;
    prm.delta = 0.1;
    const TailDecayReport rep = compact_tail_decay(action, probe, bank, cones, cones, stats, 2,
                                                   prm, stable_leaves(map), chi);
    CHECK(rep.required_exponent == doctest::Approx(3.3).epsilon(1e-12));
    REQUIRE(rep.rows.size() >= 2);
    for (const TailDecayRow& row : rep.rows) {
        CHECK(row.tail_norm >= 0.0);
        CHECK(std::isfinite(row.tail_norm));
    }
}
