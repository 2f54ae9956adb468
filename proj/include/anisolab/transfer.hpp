#pragma once

#include <complex>
#include <vector>

#include "anisolab/filter_bank.hpp"
#include "anisolab/fourier_field.hpp"
#include "anisolab/orbits.hpp"
#include "anisolab/torus_map.hpp"

namespace aniso {

// Weighted composition operator (L_g phi)(y) = g(T^{-1}y) phi(T^{-1}y) on
// the N x N collocation grid. The inverse-image points and weight values
// are precomputed once; each application evaluates the band-limited input
// at the scattered points by Kaiser-Bessel-gridded nonuniform Fourier
// interpolation (exact deconvolution of the sampled kernel), then
// transforms back on the regular grid.
class TransferOperator {
public:
    TransferOperator(const TorusMap& map, const Weight& weight, int resolution);

    int resolution() const { return n_; }

    FourierField apply(const FourierField& field) const;

    // Fraction of output l2 energy with |k|_inf > N/4 on the latest apply;
    // the aliasing diagnostic of the collocation discretization.
    double last_high_band_fraction() const { return last_high_band_; }
    // Threshold above which apply() throws NumericError.
    double aliasing_threshold = 0.2;

    // Galerkin matrix over the mode box {|k1|,|k2| <= cutoff}, columns
    // ordered by (k1 + cutoff) * (2 cutoff + 1) + (k2 + cutoff). Assembled
    // by multiplying e_k columns through the operator via a frequency
    // sweep (equivalent to apply on each basis mode).
    std::vector<cplx> assemble_matrix(int cutoff) const;

    static int matrix_dim(int cutoff) { return (2 * cutoff + 1) * (2 * cutoff + 1); }

private:
    int n_ = 0;
    const TorusMap map_;
    std::vector<double> wre_, wim_;   // weight at T^{-1}(grid), split
    std::vector<double> px_, py_;     // inverse-image coordinates
    bool weight_is_real_ = true;
    mutable double last_high_band_ = 0.0;

    // Kaiser-Bessel gridding state.
    int oversampled_ = 0;
    int width_ = 0;
    double beta_ = 0.0;
    std::vector<double> deconv_;      // exact spectral deconvolution factors
    std::vector<long> tap_base_x_, tap_base_y_;
    std::vector<double> tap_wx_, tap_wy_;  // per-point kernel taps

    std::vector<cplx> evaluate_at_points(const FourierField& field) const;
};

// Windowed low-band truncation R_{n0} phi = window * sum_{n<=n0} psi_n phi.
// window given as spatial samples on the field grid (window = {} means the
// constant-one window of the global torus chart).
struct ProjectorReport {
    FourierField projected;
    int realized_rank = 0;        // modes retained above 1e-14 relative
    int rank_bound = 0;           // lattice count with |k| <= 2^{n0+1}
    double idempotence_defect = 0.0;
};

ProjectorReport finite_rank_projector(const FourierField& field, const FilterBank& bank, int n0,
                                      const std::vector<double>& window = {});

}  // namespace aniso
