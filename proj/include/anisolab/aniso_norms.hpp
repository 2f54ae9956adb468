#pragma once

#include <limits>
#include <vector>

#include "anisolab/cone_system.hpp"
#include "anisolab/filter_bank.hpp"
#include "anisolab/fourier_field.hpp"
#include "anisolab/leaf.hpp"
#include "anisolab/leaf_restriction.hpp"

namespace aniso {

struct AnisoParams {
    double t = 0.5;
    double s = -1.0;
    double p = 2.0;
    double q = std::numeric_limits<double>::infinity();
    double r = 6.0;      // declared map smoothness driving the window check
    double delta = 0.1;  // tail-exponent slack parameter
};

// Admissibility window t - (r-1) < s < -t < 0. Throws ConfigError naming
// the violated window.
void validate_aniso_params(const AnisoParams& p);

// Stricter window used by the indicator probe:
// -1 + 1/p < s < -t < 0 < t < 1/p.
void validate_probe_params(const AnisoParams& p);

struct UNormEntry {
    int leaf = 0;
    int level = 0;          // 2-D dyadic block index
    double block_norm = 0;  // leafwise Besov norm of the filtered field
    double weighted = 0;    // 2^{level * t} * block_norm
};

struct NormReport {
    double value = 0.0;
    int argmax_leaf = -1;
    int argmax_level = -1;
    std::vector<UNormEntry> table;
};

// Anisotropic norm: sup over leaves and dyadic blocks of
// 2^{lt} ||block restricted to the leaf||_{B^s_{p,q}}.
// chart_m = 0 picks a per-leaf resolution automatically.
NormReport u_norm(const FourierField& field, const FilterBank& bank,
                  const std::vector<AdmissibleLeaf>& leaves, const AnisoParams& params,
                  const ChiProfile& chi, int chart_m = 0);

// Same norm for a single mode amp * e^{2 pi i k.x}, exact in the mode and
// free of any 2-D grid bound (dyadic block weights evaluated directly).
NormReport u_norm_mode(const IVec2& k, cplx amp, const std::vector<AdmissibleLeaf>& leaves,
                       const AnisoParams& params, const ChiProfile& chi);

// Cone-split Sobolev norm: ||W_{t,+} phi||_p + ||W_{v,-} phi||_p on the grid.
double w_dagger_norm(const FourierField& field, const ConeSystem& cones, double t, double v,
                     double p);

// Anisotropic two-index comparison norm with stable frequency coordinate
// k1: symbol (1+|k|^2)^{t/2} (1+k1^2)^{s/2}.
double triebel_norm(const FourierField& field, double t, double s, double p);

// Scale-weighted sup norm sup_n 2^{un} ||psi_n phi||_inf, the working
// proxy for the u-Hoelder norm.
double holder_proxy_norm(const FourierField& field, const FilterBank& bank, double u);

}  // namespace aniso
