#pragma once

#include "anisolab/cone_system.hpp"
#include "anisolab/torus_map.hpp"

namespace aniso {

// Extremal transpose-derivative stretch factors of a local diffeomorphism
// F between cone pairs (source C, target C'):
//   norm_plus       sup_x sup { |DF^tr xi|/|xi| : DF^tr xi outside C'_- }
//   norm_minus      inf_x inf { |DF^tr xi|/|xi| : xi outside C_+ }
//   norm_minusminus sup_x sup { |DF^tr xi|/|xi| : xi outside C_+ }
// and the restricted determinant
//   det_restricted_target  inf_x inf { |DF l| : unit l, l^perp inside C'_+ }
//   det_restricted_source  same with C_+ (used by the refined-bound gates).
// invariance_margin is the worst containment margin (radians) of images of
// directions outside C_+ inside C'_-; positive means the sampled cone
// hyperbolicity test passed.
struct ConeHyperbolicityStats {
    double norm_plus = 0.0;
    double norm_minus = 0.0;
    double norm_minusminus = 0.0;
    double det_restricted_target = 0.0;
    double det_restricted_source = 0.0;
    double invariance_margin = 0.0;
    bool cone_invariant = false;
    int space_samples = 0;
    int angle_samples = 0;
};

// Sampled stats for F = T^{-iterate} over a uniform space grid and a
// uniform direction grid.
ConeHyperbolicityStats cone_stats(const TorusMap& map, int iterate, const ConeSystem& source,
                                  const ConeSystem& target, int space_grid = 16,
                                  int angle_grid = 4096);

// Same extremization for a constant derivative: dftr is DF^tr and df is DF.
ConeHyperbolicityStats cone_stats_linear(const Mat2& dftr, const Mat2& df,
                                         const ConeSystem& source, const ConeSystem& target,
                                         int angle_grid = 8192);

// Asymptotic (per-step, m -> infinity) stats of a constant linear map:
// eigenvalue moduli replace sector extrema. Requires real hyperbolic
// spectrum with the contracting eigendirection inside C_+ and the
// expanding one inside C'_-; throws NumericError otherwise.
ConeHyperbolicityStats linear_asymptotic_stats(const Mat2& dftr, const ConeSystem& source,
                                               const ConeSystem& target);

}  // namespace aniso
