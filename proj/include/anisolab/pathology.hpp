#pragma once

#include <cstdint>
#include <vector>

#include "anisolab/aniso_norms.hpp"
#include "anisolab/cone_system.hpp"
#include "anisolab/fourier_field.hpp"

namespace aniso {

// Half-plane multiplier stress test. A field with spectrum concentrated in
// one cone is multiplied (in space) by a band indicator; the weighted
// energy captured by the complementary cone is tracked across dyadic
// frequency cutoffs.
//
// Case catalogue:
//   1  band boundary direction inside the minus cone, profile q^{-a},
//      weight exponent t > 0  -> logarithmic divergence expected
//   2  band boundary direction inside the plus cone, profile 1/(q log q)
//      -> polynomial-over-log divergence expected
//   3  boundary direction avoiding both (tilted) cones, profile q^{-a}
//      -> logarithmic divergence expected
struct BlowupOptions {
    int case_id = 1;
    int resolution = 256;
    double t = 0.25;
    double profile_exponent = 1.25;  // cases 1 and 3
    double band_lo = 0.25;           // indicator band edges (torus coordinates)
    double band_hi = 0.75;
};

struct BlowupReport {
    int case_id = 1;
    int resolution = 0;
    double t = 0.0;
    double source_l2 = 0.0;              // l2 mass of the source field (finite by design)
    std::vector<double> cutoffs;          // dyadic cutoffs Lambda
    std::vector<double> energy;           // I(Lambda): weighted plus-cone energy below cutoff
    std::vector<double> increments;       // I(Lambda_j) - I(Lambda_{j-1})
    std::vector<double> pair_slopes;      // d log I / d log Lambda per adjacent cutoff pair
    double loglog_slope = 0.0;            // least-squares over the top three cutoffs
    bool increasing = false;              // I strictly increasing across cutoffs
    bool slope_stable = false;            // last two pair slopes within a factor of 2
    bool increments_decay = false;        // top three increments monotonically decreasing
    bool declared_divergent = false;      // preregistered rule: loglog_slope > 0.05
};

// Preregistered divergence threshold on the fitted log-log slope.
inline constexpr double kBlowupSlopeThreshold = 0.05;

BlowupReport halfplane_blowup_experiment(const BlowupOptions& opt);

// Indicator-multiplier probe: multiplies a seeded band-limited field by a
// band indicator and reports the anisotropic norm before and after across
// resolutions. Measurement only; no pass/fail verdict is attached.
struct IndicatorProbeOptions {
    AnisoParams params;                       // validated against the strict probe window
    std::vector<int> resolutions = {64, 128, 256};
    std::uint64_t seed = 2024;
    double band_lo = 0.25;
    double band_hi = 0.75;
    int orientation = 0;                      // 0: boundary lines x1 = const, 1: x2 = const
    int leaf_count = 4;
    int wiggle_terms = 1;
};

struct IndicatorProbePoint {
    int resolution = 0;
    double norm_before = 0.0;
    double norm_after = 0.0;
    double ratio = 0.0;
};

struct IndicatorProbeReport {
    std::vector<IndicatorProbePoint> points;
    bool ratio_monotone_increasing = false;  // bookkeeping only
};

IndicatorProbeReport indicator_multiplier_probe(const IndicatorProbeOptions& opt,
                                                const ConeSystem& cones, const ChiProfile& chi);

}  // namespace aniso
