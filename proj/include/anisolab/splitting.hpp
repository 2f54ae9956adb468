#pragma once

#include <functional>
#include <string>
#include <vector>

#include "anisolab/aniso_norms.hpp"
#include "anisolab/cone_stats.hpp"
#include "anisolab/transfer.hpp"

namespace aniso {

// Hook relation between cone-dyadic blocks (source level l, sector tau)
// and (target level n, sector sigma); sectors are +1 / -1. Exactly three
// hooking cases; (-,+) never hooks.
bool hook_relation(int l, int tau, int n, int sigma, const ConeHyperbolicityStats& stats, int m0);

// Leafwise 1-D hook: l_s hooks into n_s iff |F|_- 2^{l_s - 4} <= 2^{n_s}.
bool hook_relation_1d(int l_s, int n_s, const ConeHyperbolicityStats& stats);

using OperatorAction = std::function<FourierField(const FourierField&)>;

struct SplitResult {
    FourierField bounded;
    FourierField compact;
    int hooked_pairs = 0;
    int total_pairs = 0;
};

// Decompose the operator action on one field into the hook-bounded part
// M_b = sum_{n,sigma} psi_{target,n,sigma} sum_{(l,tau) hooked} M(psi_{source,l,tau} phi)
// and the complementary compact part. The block images are computed once
// and reused by both sums, so bounded + compact reproduces the
// block-partitioned action exactly.
SplitResult split_bounded_compact(const OperatorAction& op, const FourierField& phi,
                                  const FilterBank& bank, const ConeSystem& source,
                                  const ConeSystem& target, const ConeHyperbolicityStats& stats,
                                  int m0);

// ----- Theoretical Lasota-Yorke constants -----

// Structural constant calibrated once on the identity map with compatible
// cones (all stats equal 1, unit weight): forcing nu_b = 1 there gives
// C = 1 / (1 + |s|); frozen for all other maps.
double structural_constant(double s);

struct LYBoundInputs {
    ConeHyperbolicityStats stats;
    double f_sup = 1.0;            // sup |f|
    double f_comp_cr = 1.0;        // C^{r-1} norm of f after the inverse branch
    double df_leaf_inv_cr = 1.0;   // C^{r-1} norm of D(F restricted to the leaf)^{-1}
    double det_leaf_inv_cr = 1.0;  // C^{r-1} norm of |det D(F restricted to the leaf)^{-1}|
    double t = 1.0;
    double s = -2.0;
    double p = 1.0;
};

struct LYBound {
    double c_structural = 0.0;
    double c_f_gamma_s = 0.0;   // the leaf constant C(F, Gamma, s)
    double nu_b = 0.0;
    bool refined_available = false;
    double nu_b_refined = 0.0;
    std::string withheld_reason;
};

LYBound ly_theoretical_bound(const LYBoundInputs& in);

// Leaf cocycle data for F = T^{-m} along one leaf, with the weight cocycle
// f_m = prod_{j<m} g(T^{-j} x). C^{r-1} norms are proxied by sampled sup
// norms of the function and its first two chart derivatives (divided
// differences); exact for the constant cocycles of linear maps.
struct LeafCocycleConstants {
    double df_leaf_inv_cr = 0.0;
    double det_leaf_inv_cr = 0.0;
    double f_comp_cr = 0.0;
    double f_sup = 0.0;
};

LeafCocycleConstants leaf_cocycle_constants(const TorusMap& map, int iterate,
                                            const Weight& weight, const AdmissibleLeaf& leaf,
                                            int samples = 129);

// ----- Measured growth -----

struct ProbeGrowthRow {
    int probe = 0;
    int m = 0;
    double norm = 0.0;
    double step_ratio = 0.0;  // norm(m) / norm(m-1), 0 at m = 0
};

struct ProbeFit {
    int probe = 0;
    double fitted_rate = 0.0;    // exp of the least-squares slope of log norm vs m
    double endpoint_rate = 0.0;  // (norm(m_max)/norm(0))^{1/m_max}
};

struct LYGrowthReport {
    std::vector<ProbeGrowthRow> growth;
    std::vector<ProbeFit> fits;
    double max_fitted_rate = 0.0;
    double q_reference = 0.0;  // filled by the caller when available
    bool used_mode_path = false;
};

struct LYGrowthOptions {
    AnisoParams params;
    int m_max = 6;
    std::vector<IVec2> probe_modes;
    int resolution = 128;     // grid path resolution
    bool force_grid = false;  // disable the exact mode path
};

// Measures u_norm(L^m probe)/u_norm(probe). For linear maps with constant
// or reciprocal-Jacobian weights the probe modes are advanced exactly
// (mode permutation); otherwise the grid operator is iterated.
LYGrowthReport ly_measured_growth(const TorusMap& map, const Weight& weight,
                                  const LYGrowthOptions& opt,
                                  const std::vector<AdmissibleLeaf>& leaves,
                                  const ChiProfile& chi);

// ----- Compact-tail decay -----

struct TailDecayRow {
    int n0 = 0;
    double tail_norm = 0.0;
};

struct TailDecayReport {
    std::vector<TailDecayRow> rows;
    double fitted_exponent = 0.0;    // beta in tail ~ 2^{-beta n0}
    double required_exponent = 0.0;  // (r-1) - 2 delta - (t - s)
};

// u_norm((id - R_{n0}) M_c probe) across n0, fitted against the corrected
// tail exponent (r - 1) - 2 delta - (t - s) taken from params.
TailDecayReport compact_tail_decay(const OperatorAction& op, const FourierField& probe,
                                   const FilterBank& bank, const ConeSystem& source,
                                   const ConeSystem& target,
                                   const ConeHyperbolicityStats& stats, int m0,
                                   const AnisoParams& params,
                                   const std::vector<AdmissibleLeaf>& leaves,
                                   const ChiProfile& chi);

}  // namespace aniso
