#pragma once

#include <complex>
#include <vector>

#include "anisolab/linalg2.hpp"
#include "anisolab/rng.hpp"

namespace aniso {

using cplx = std::complex<double>;

// Raw FFT helpers (FFTW, plans cached per size, FFTW_ESTIMATE so planning
// is deterministic). Out-of-place; in and out must not alias.
void fft2(int n, const cplx* in, cplx* out, int sign);  // sign=-1 forward, +1 backward
void fft1(int n, const cplx* in, cplx* out, int sign);

// Real Fourier multiplier symbol on the N x N frequency lattice, stored in
// FFT order (index i corresponds to k = i < N/2 ? i : i - N).
struct Symbol {
    int resolution = 0;
    std::vector<double> values;

    Symbol() = default;
    explicit Symbol(int n) : resolution(n), values(size_t(n) * n, 0.0) {}

    static int wrap_index(int k, int n) { return ((k % n) + n) % n; }
    double& at(int k1, int k2) {
        return values[size_t(wrap_index(k1, resolution)) * resolution + wrap_index(k2, resolution)];
    }
    double at(int k1, int k2) const {
        return values[size_t(wrap_index(k1, resolution)) * resolution + wrap_index(k2, resolution)];
    }
    Symbol& operator+=(const Symbol& o);
    Symbol operator*(const Symbol& o) const;  // pointwise
};

// Band-limited complex field on the 2-torus,
//   phi(x) = sum_k c_k e^{2 pi i k.x},  k in [-N/2, N/2)^2.
// The spectral array is canonical; spatial samples live on the N x N grid
// x_j = (j1/N, j2/N).
class FourierField {
public:
    FourierField() = default;
    explicit FourierField(int resolution)
        : n_(resolution), c_(size_t(resolution) * resolution, cplx{0.0, 0.0}) {}

    int resolution() const { return n_; }
    int half() const { return n_ / 2; }

    cplx& at(int k1, int k2) {
        return c_[size_t(Symbol::wrap_index(k1, n_)) * n_ + Symbol::wrap_index(k2, n_)];
    }
    cplx at(int k1, int k2) const {
        return c_[size_t(Symbol::wrap_index(k1, n_)) * n_ + Symbol::wrap_index(k2, n_)];
    }
    const std::vector<cplx>& coefficients() const { return c_; }
    std::vector<cplx>& coefficients() { return c_; }

    // Frequency at storage index.
    int freq_of_index(int i) const { return i < n_ / 2 ? i : i - n_; }

    std::vector<cplx> spatial() const;
    static FourierField from_spatial(int n, const std::vector<cplx>& samples);

    // Evaluate the trigonometric series at an arbitrary point (exact, O(N^2)).
    cplx evaluate(const Vec2& x) const;

    double l2_norm() const;                      // sqrt(sum |c_k|^2) (Parseval)
    double lp_norm(double p) const;              // discrete L_p of spatial samples
    double energy_fraction_above(int kmax) const;  // |k|_inf > kmax

    FourierField& multiply(const Symbol& s);     // coefficient-wise
    FourierField filtered(const Symbol& s) const;
    FourierField& operator+=(const FourierField& o);
    FourierField& operator-=(const FourierField& o);
    FourierField& operator*=(cplx z);

    // phi(x - v): coefficient phase rotation.
    FourierField translated(const Vec2& v) const;

    // Pointwise product with spatial samples (e.g. an indicator), computed
    // through the grid: result coefficients are the aliased transform.
    FourierField spatial_product(const std::vector<double>& samples) const;

    // Uniformly random coefficients in the |k|_inf <= kmax box, normalized
    // to unit l2. Deterministic in the rng stream.
    static FourierField random_band_limited(int n, int kmax, Rng& rng);

private:
    int n_ = 0;
    std::vector<cplx> c_;
};

// L1 norm of the convolution kernel of a symbol: (1/N^2) sum_j |K(x_j)|
// with K the inverse transform. Reproduces Young-inequality constants for
// the discrete convolution exactly.
double kernel_l1_norm(const Symbol& s);

}  // namespace aniso
