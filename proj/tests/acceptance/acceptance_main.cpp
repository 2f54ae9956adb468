// Acceptance gate: eight exactness and property suites over the whole
// pipeline, each printed as a single PASS/FAIL line with its measured
// numbers. The process exits nonzero if any suite fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "anisolab/aniso_norms.hpp"
#include "anisolab/besov1d.hpp"
#include "anisolab/cone_stats.hpp"
#include "anisolab/determinant.hpp"
#include "anisolab/eigensolver.hpp"
#include "anisolab/errors.hpp"
#include "anisolab/filter_bank.hpp"
#include "anisolab/leaf_restriction.hpp"
#include "anisolab/pathology.hpp"
#include "anisolab/rng.hpp"
#include "anisolab/scenario.hpp"
#include "anisolab/splitting.hpp"
#include "anisolab/transfer.hpp"

#include "../naive_besov.hpp"

using namespace aniso;

namespace {

const double kPi = 3.1415926535897932384626433832795;
const double kGolden2 = 2.618033988749894848;

int g_failures = 0;

void report(int index, const char* name, bool pass, const std::string& detail) {
    std::printf("[%s] criterion %d: %s — %s\n", pass ? "PASS" : "FAIL", index, name,
                detail.c_str());
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

double seconds_since(const std::chrono::steady_clock::time_point& t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

ConeSystem eigen_aligned(const TorusMap& map) {
    const auto vecs = map.linear_eigenvectors();
    const double a_u = std::atan2(vecs[0][1], vecs[0][0]);
    const double a_s = std::atan2(vecs[1][1], vecs[1][0]);
    return ConeSystem(ConeSpec{a_u, 25.0 * kPi / 180.0}, ConeSpec{a_s, 60.0 * kPi / 180.0});
}

std::vector<AdmissibleLeaf> stable_leaves(const TorusMap& map) {
    const auto vecs = map.linear_eigenvectors();
    const double slope = vecs[1][1] / vecs[1][0];
    return {AdmissibleLeaf(0.0, 0.5, 0.15, slope), AdmissibleLeaf(0.35, 0.5, 0.45, slope),
            AdmissibleLeaf(0.7, 0.5, 0.8, slope)};
}

std::vector<cplx> converged_values(const SpectrumResult& s) {
    std::vector<cplx> out;
    for (const EigenPair& p : s.eigenvalues) {
        if (p.converged) out.push_back(p.value);
    }
    return out;
}

// Least-squares slope of log y against log x over the last three entries.
double loglog_slope_top3(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    if (n < 3) return 0.0;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = n - 3; i < n; ++i) {
        const double lx = std::log(x[i]);
        const double ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    const double d = 3.0 * sxx - sx * sx;
    return (3.0 * sxy - sx * sy) / d;
}

// ---------------------------------------------------------------- 1 -----

void criterion1() {
    const auto t0 = std::chrono::steady_clock::now();
    const TorusMap map = TorusMap::cat_map(0.0);
    const DeterminantSeries d = determinant_series(map, Weight::reciprocal_jacobian(), 10);

    double worst_sum = 0.0;
    bool complete = d.sums.size() == 10;
    for (const OrbitSumRow& row : d.sums) {
        complete = complete && row.complete;
        worst_sum = std::max(worst_sum, std::abs(row.value - cplx{1.0, 0.0}));
    }

    double worst_coeff = std::abs(d.coeffs[0] - cplx{1.0, 0.0});
    worst_coeff = std::max(worst_coeff, std::abs(d.coeffs[1] + cplx{1.0, 0.0}));
    for (std::size_t j = 2; j < d.coeffs.size(); ++j) {
        worst_coeff = std::max(worst_coeff, std::abs(d.coeffs[j]));
    }

    const auto zeros = find_zeros(d, 1.5);
    int validated = 0;
    double zero_err = 1e9;
    for (const DeterminantZero& z : zeros) {
        if (!z.validated) continue;
        ++validated;
        zero_err = std::min(zero_err, std::abs(z.z - cplx{1.0, 0.0}));
    }

    const double elapsed = seconds_since(t0);
    const bool pass = complete && worst_sum <= 1e-12 && worst_coeff <= 1e-10 &&
                      validated == 1 && zero_err <= 1e-8 && elapsed < 10.0;
    report(1, "exact-map determinant", pass,
           "max|S_n-1|=" + fmt(worst_sum) + " max coeff dev=" + fmt(worst_coeff) +
               " validated zeros=" + std::to_string(validated) + " |z-1|=" + fmt(zero_err) +
               " time=" + fmt(elapsed) + "s (<10s)");
}

// ---------------------------------------------------------------- 2 -----

void criterion2() {
    const auto t0 = std::chrono::steady_clock::now();
    const TorusMap map = TorusMap::cat_map(0.02);
    const Weight weight = Weight::reciprocal_jacobian();

    const DeterminantSeries d = determinant_series(map, weight, 8);
    const auto zeros = find_zeros(d, 1.0 / 0.6);

    const TransferOperator op32(map, weight, 256);
    const int dim32 = TransferOperator::matrix_dim(32);
    const SpectrumResult s32 = spectrum(op32.assemble_matrix(32), dim32, 60);

    const TransferOperator op48(map, weight, 512);
    const int dim48 = TransferOperator::matrix_dim(48);
    const SpectrumResult s48 = spectrum(op48.assemble_matrix(48), dim48, 60);

    const auto stable = stable_eigenvalues(converged_values(s32), converged_values(s48), 1e-3);
    const SpectrumMatch match = match_zeros_spectrum(zeros, stable, 0.6, 1e-3);

    const double elapsed = seconds_since(t0);
    const bool pass = match.unmatched_zero_inverses.empty() &&
                      match.unmatched_eigenvalues.empty() && !match.matched.empty() &&
                      elapsed < 600.0;
    std::string detail = "matched=" + std::to_string(match.matched.size()) +
                         " unmatched zeros=" + std::to_string(match.unmatched_zero_inverses.size()) +
                         " unmatched eigs=" + std::to_string(match.unmatched_eigenvalues.size()) +
                         " stable pool=" + std::to_string(stable.size());
    if (!match.matched.empty()) {
        double worst = 0.0;
        for (const auto& m : match.matched) worst = std::max(worst, m.distance);
        detail += " worst dist=" + fmt(worst);
    }
    detail += " time=" + fmt(elapsed) + "s (<600s)";
    report(2, "zeros match truncated spectra", pass, detail);
}

// ---------------------------------------------------------------- 3 -----

void criterion3() {
    const TorusMap map = TorusMap::cat_map(0.0);
    const Weight weight = Weight::reciprocal_jacobian();

    const EssentialRadiusReport q = essential_radius_bound(map, weight, 1.0, -2.0, 8);
    const double closed = 1.0 / kGolden2;
    const double err_exact = std::abs(q.value - closed);
    const double err_ensemble = q.per_n.empty() ? 1e9 : std::abs(q.per_n.back() - q.value);

    LYGrowthOptions opt;
    opt.params.t = 1.0;
    opt.params.s = -2.0;
    opt.params.p = 1.0;
    opt.m_max = 6;
    opt.probe_modes = {IVec2{13, -21}, IVec2{21, -34}, IVec2{8, -13}};
    const ChiProfile chi;
    const LYGrowthReport growth = ly_measured_growth(map, weight, opt, stable_leaves(map), chi);

    const bool pass = q.exact_linear && err_exact <= 1e-9 && err_ensemble <= 1e-6 &&
                      growth.max_fitted_rate <= 1.25 * q.value;
    report(3, "essential-radius bound", pass,
           "Q=" + fmt(q.value) + " |Q-closed|=" + fmt(err_exact) +
               " |ensemble(n=8)-Q|=" + fmt(err_ensemble) +
               " max probe rate=" + fmt(growth.max_fitted_rate) +
               " cap=" + fmt(1.25 * q.value));
}

// ---------------------------------------------------------------- 4 -----

void criterion4() {
    const ChiProfile chi;
    const ConeSystem cones(ConeSpec{kPi / 2.0, kPi / 8.0}, ConeSpec{0.0, kPi / 8.0});
    const std::vector<int> sizes{64, 128, 256};

    double worst_partition = 0.0;
    for (const int N : sizes) {
        const FilterBank bank(N, chi);
        const int h = N / 2;
        for (int k1 = -h; k1 < h; ++k1) {
            for (int k2 = -h; k2 < h; ++k2) {
                double sum = 0.0;
                for (int n = 0; n <= bank.n_max(); ++n) sum += bank.psi(n).at(k1, k2);
                worst_partition = std::max(worst_partition, std::abs(sum - 1.0));
            }
        }
    }

    double worst_overlap = 0.0;
    {
        const FilterBank bank(256, chi);
        const int h = 128;
        for (int n = 0; n <= bank.n_max(); ++n) {
            for (int l = 0; l <= bank.n_max(); ++l) {
                if (std::abs(n - l) <= 5) continue;
                const Symbol& sharp = bank.psi(n);
                const Symbol& fat = bank.psi_fat(l);
                for (int k1 = -h; k1 < h; ++k1) {
                    for (int k2 = -h; k2 < h; ++k2) {
                        worst_overlap = std::max(
                            worst_overlap, std::abs(sharp.at(k1, k2) * fat.at(k1, k2)));
                    }
                }
            }
        }
    }

    // Kernel-size plateau of every symbol family across the resolutions.
    double worst_plateau = 0.0;
    {
        const FilterBank b64(64, chi);
        const int common = b64.n_max();
        std::vector<FilterBank> banks;
        for (const int N : sizes) banks.emplace_back(N, chi);

        const auto plateau = [&](const std::function<double(const FilterBank&)>& norm_of) {
            double lo = 1e300, hi = 0.0;
            for (const FilterBank& bank : banks) {
                const double v = norm_of(bank);
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
            worst_plateau = std::max(worst_plateau, hi / lo - 1.0);
        };

        for (int n = 0; n <= common; ++n) {
            plateau([&](const FilterBank& b) { return kernel_l1_norm(b.psi(n)); });
            plateau([&](const FilterBank& b) { return kernel_l1_norm(b.psi_fat(n)); });
            for (const int sigma : {+1, -1}) {
                plateau([&](const FilterBank& b) {
                    return kernel_l1_norm(cones.cone_dyadic_symbol(b, n, sigma, false));
                });
            }
        }
    }

    const bool pass =
        worst_partition < 1e-13 && worst_overlap < 1e-15 && worst_plateau <= 0.10;
    report(4, "filter-bank invariants", pass,
           "partition dev=" + fmt(worst_partition) + " distant overlap=" + fmt(worst_overlap) +
               " plateau spread=" + fmt(worst_plateau) + " (<=0.1)");
}

// ---------------------------------------------------------------- 5 -----

void criterion5() {
    const ChiProfile chi;
    const int n = 32;
    const int m = 128;
    const double s_cycle[3] = {-0.6, -0.75, -0.9};
    const double p_cycle[3] = {1.0, 2.0, std::numeric_limits<double>::infinity()};
    const double q_cycle[3] = {std::numeric_limits<double>::infinity(), 2.0, 1.0};

    Rng rng(404);
    double worst = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        const FourierField f = FourierField::random_band_limited(n, 6, rng);
        const double x0 = 0.017 * double(trial);
        const AdmissibleLeaf leaf(x0, 0.5, 0.1 + 0.013 * double(trial % 23), 0.0);
        BesovParams prm;
        prm.s = s_cycle[trial % 3];
        prm.p = p_cycle[(trial / 3) % 3];
        prm.q = q_cycle[(trial / 9) % 3];

        const LeafRestriction lr = restrict_to_leaf(f, leaf, m, chi);
        const double fast = besov_norm_1d(lr.trace, lr.length, lr.mu, prm, chi);
        const naive::Trace tr = naive::sample_leaf(f, leaf, m, chi);
        const double ref = naive::besov_reference(tr, prm.s, prm.p, prm.q, chi);
        worst = std::max(worst, std::abs(fast - ref) / std::max(1.0, std::abs(ref)));
    }

    // Translation covariance within the discretization slack.
    double worst_cov = 0.0;
    for (int trial = 0; trial < 10; ++trial) {
        const FourierField f = FourierField::random_band_limited(n, 6, rng);
        const Vec2 v{0.05 * double(trial + 1), 0.03 * double(trial + 1)};
        const AdmissibleLeaf leaf(0.1, 0.5, 0.3, 0.0);
        BesovParams prm;
        prm.s = -0.75;
        prm.p = 2.0;
        const LeafRestriction a = restrict_to_leaf(f.translated(v), leaf, m, chi);
        const LeafRestriction b = restrict_to_leaf(f, leaf.translated({-v[0], -v[1]}), m, chi);
        const double na = besov_norm_1d(a.trace, a.length, a.mu, prm, chi);
        const double nb = besov_norm_1d(b.trace, b.length, b.mu, prm, chi);
        worst_cov = std::max(worst_cov, std::abs(na / nb - 1.0));
    }

    // Multiplication bound (algebra property) within the same slack.
    double worst_young = 0.0;
    {
        std::vector<double> g(static_cast<std::size_t>(n) * n);
        for (int i1 = 0; i1 < n; ++i1) {
            for (int i2 = 0; i2 < n; ++i2) {
                g[static_cast<std::size_t>(i1) * n + i2] =
                    1.0 + 0.3 * std::cos(2.0 * kPi * double(i1) / double(n));
            }
        }
        for (int trial = 0; trial < 10; ++trial) {
            const FourierField f = FourierField::random_band_limited(n, 6, rng);
            const AdmissibleLeaf leaf(0.2, 0.5, 0.15 + 0.05 * trial, 0.0);
            BesovParams prm;
            prm.s = -0.75;
            prm.p = 2.0;
            const LeafRestriction a = restrict_to_leaf(f, leaf, m, chi);
            const LeafRestriction b = restrict_to_leaf(f.spatial_product(g), leaf, m, chi);
            const double nf = besov_norm_1d(a.trace, a.length, a.mu, prm, chi);
            const double nfg = besov_norm_1d(b.trace, b.length, b.mu, prm, chi);
            const double hi = 1.1 * 1.3 * nf;
            const double lo = 0.9 * 0.7 * nf;
            if (nfg > hi) worst_young = std::max(worst_young, nfg / hi - 1.0);
            if (nfg < lo) worst_young = std::max(worst_young, lo / nfg - 1.0);
        }
    }

    const bool pass = worst <= 1e-10 && worst_cov <= 0.10 && worst_young == 0.0;
    report(5, "leafwise norm oracle", pass,
           "max rel dev (50 probes)=" + fmt(worst) + " covariance dev=" + fmt(worst_cov) +
               " multiplication-bound excess=" + fmt(worst_young));
}

// ---------------------------------------------------------------- 6 -----

void criterion6() {
    const auto t0 = std::chrono::steady_clock::now();

    // Case 1 divergence flags at every resolution, with the flat control.
    bool case1 = true;
    std::string case1_detail;
    for (const int N : {128, 256, 512}) {
        BlowupOptions o;
        o.case_id = 1;
        o.resolution = N;
        o.t = 0.25;
        const BlowupReport rep = halfplane_blowup_experiment(o);
        const bool ok = rep.increasing && rep.slope_stable && rep.declared_divergent;
        case1 = case1 && ok;
        case1_detail += " N" + std::to_string(N) + ":slope=" + fmt(rep.loglog_slope);

        BlowupOptions c = o;
        c.t = 0.0;
        const BlowupReport ctrl = halfplane_blowup_experiment(c);
        case1 = case1 && ctrl.increments_decay;
        if (!ctrl.increments_decay) case1_detail += "(control fails)";
    }

    // Case 2: fitted slope against the profile's own integral law.
    BlowupOptions o2;
    o2.case_id = 2;
    o2.resolution = 512;
    o2.t = 0.25;
    const BlowupReport rep2 = halfplane_blowup_experiment(o2);
    // I_law(L) = integral_2^L x^{2t-1} / log^2 x dx, slope from the same
    // top-three cutoffs; constants cancel in the log-log slope.
    std::vector<double> law2;
    for (const double L : rep2.cutoffs) {
        const int steps = 20000;
        double acc = 0.0;
        const double a = 2.0;
        const double h = (L - a) / steps;
        for (int i = 0; i < steps; ++i) {
            const double x = a + (i + 0.5) * h;
            acc += std::pow(x, 2.0 * o2.t - 1.0) / (std::log(x) * std::log(x)) * h;
        }
        law2.push_back(acc);
    }
    const double slope2_law = loglog_slope_top3(rep2.cutoffs, law2);
    const double ratio2 = rep2.loglog_slope / slope2_law;
    const bool case2 =
        rep2.increasing && rep2.declared_divergent && ratio2 >= 0.5 && ratio2 <= 2.0;

    // Case 3: logarithmic law from the tilted-cone energy integral.
    BlowupOptions o3;
    o3.case_id = 3;
    o3.resolution = 512;
    o3.t = 0.25;
    const BlowupReport rep3 = halfplane_blowup_experiment(o3);
    std::vector<double> law3;
    for (const double L : rep3.cutoffs) law3.push_back(std::log(L));
    const double slope3_law = loglog_slope_top3(rep3.cutoffs, law3);
    const double ratio3 = rep3.loglog_slope / slope3_law;
    const bool case3 =
        rep3.increasing && rep3.declared_divergent && ratio3 >= 0.5 && ratio3 <= 2.0;

    const double elapsed = seconds_since(t0);
    const bool pass = case1 && case2 && case3 && elapsed < 300.0;
    report(6, "half-plane blow-up catalogue", pass,
           "case1[" + case1_detail + " ] case2 slope=" + fmt(rep2.loglog_slope) + " law=" +
               fmt(slope2_law) + " case3 slope=" + fmt(rep3.loglog_slope) + " law=" +
               fmt(slope3_law) + " time=" + fmt(elapsed) + "s (<300s)");
}

// ---------------------------------------------------------------- 7 -----

void criterion7() {
    const TorusMap map = TorusMap::cat_map(0.02);
    const ConeSystem cones = eigen_aligned(map);
    const ChiProfile chi;
    const int N = 256;
    const FilterBank bank(N, chi);
    const TransferOperator op(map, Weight::reciprocal_jacobian(), N);
    const int m0 = 2;
    const OperatorAction action = [&](const FourierField& f) {
        return op.apply(op.apply(f));
    };
    const ConeHyperbolicityStats stats = cone_stats(map, m0, cones, cones);

    Rng rng(2024);
    const FourierField probe = FourierField::random_band_limited(N, 4, rng);

    const SplitResult split =
        split_bounded_compact(action, probe, bank, cones, cones, stats, m0);
    const FourierField direct = action(probe);
    FourierField sum = split.bounded;
    sum += split.compact;
    FourierField defect = sum;
    defect -= direct;
    const double split_err = defect.l2_norm() / std::max(1.0, direct.l2_norm());

    AnisoParams prm;
    prm.t = 0.5;
    prm.s = -1.0;
    prm.p = 2.0;
    prm.r = 6.0;
    prm.delta = 0.1;
    const TailDecayReport tail = compact_tail_decay(action, probe, bank, cones, cones, stats,
                                                    m0, prm, stable_leaves(map), chi);

    const bool pass = stats.cone_invariant && split_err <= 1e-10 &&
                      std::abs(tail.required_exponent - 3.3) < 1e-12 &&
                      tail.fitted_exponent >= tail.required_exponent - 0.3;
    report(7, "splitting and compact tail", pass,
           "|Mb+Mc-M|/|M|=" + fmt(split_err) + " fitted tail exp=" + fmt(tail.fitted_exponent) +
               " required>=" + fmt(tail.required_exponent - 0.3) +
               (stats.cone_invariant ? "" : " (cones not invariant!)"));
}

// ---------------------------------------------------------------- 8 -----

void criterion8() {
    RunOptions opts;
    opts.deterministic = true;
    opts.seed = 7;
    opts.seed_overridden = true;

    const std::string spectrum_cfg =
        "[grid]\nresolution = 64\n[spectrum]\ncutoffs = [12]\nhow_many = 20\n";
    const std::string norm_cfg =
        "[norm]\nfield = \"random\"\nband = 6\n[grid]\nresolution = 64\n"
        "[params]\nt = 0.5\ns = -1.0\n";

    const auto identical = [&](const std::string& sub, const std::string& text) {
        const ParsedConfig cfg_a = parse_config_text(text);
        const RunReport a = run_scenario(sub, cfg_a, opts);
        const ParsedConfig cfg_b = parse_config_text(text);
        const RunReport b = run_scenario(sub, cfg_b, opts);
        bool same = a.json == b.json && a.files == b.files && a.plots == b.plots &&
                    a.config_hash == b.config_hash;
        return same;
    };

    bool spectrum_same = false;
    bool norm_same = false;
    std::string note;
    try {
        spectrum_same = identical("spectrum", spectrum_cfg);
        norm_same = identical("norm", norm_cfg);
    } catch (const std::exception& e) {
        note = std::string(" error: ") + e.what();
    }
    const bool pass = spectrum_same && norm_same;
    report(8, "bit-identical deterministic reruns", pass,
           std::string("spectrum=") + (spectrum_same ? "identical" : "differs") +
               " norm=" + (norm_same ? "identical" : "differs") + note);
}

}  // namespace

int main() {
    std::printf("acceptance gate: 8 criteria\n");
    const auto run = [](int idx, void (*fn)(), const char* name) {
        try {
            fn();
        } catch (const std::exception& e) {
            report(idx, name, false, std::string("exception: ") + e.what());
        }
    };
    run(1, criterion1, "exact-map determinant");
    run(2, criterion2, "zeros match truncated spectra");
    run(3, criterion3, "essential-radius bound");
    run(4, criterion4, "filter-bank invariants");
    run(5, criterion5, "leafwise norm oracle");
    run(6, criterion6, "half-plane blow-up catalogue");
    run(7, criterion7, "splitting and compact tail");
    run(8, criterion8, "bit-identical deterministic reruns");

    if (g_failures == 0) {
        std::printf("acceptance gate: all 8 criteria passed\n");
        return 0;
    }
    std::printf("acceptance gate: %d criteria FAILED\n", g_failures);
    return 1;
}
