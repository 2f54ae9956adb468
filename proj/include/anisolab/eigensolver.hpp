#pragma once

#include <complex>
#include <functional>
#include <string>
#include <vector>

namespace aniso {

using cplx = std::complex<double>;

struct EigenPair {
    cplx value{0.0, 0.0};
    double residual = 0.0;  // |A v - lambda v| / |v|, -1 when unavailable
    bool converged = true;
};

struct SpectrumResult {
    std::vector<EigenPair> eigenvalues;  // sorted by modulus, descending
    std::vector<cplx> leading_vector;    // eigenvector of the top eigenvalue
    int dim = 0;
    std::string method;                  // "dense" or "arnoldi"
    int krylov_dim = 0;                  // 0 for dense
};

using Matvec = std::function<void(const cplx* in, cplx* out)>;

// Dense nonsymmetric solve (LAPACK), destroying a copy of the matrix.
// matrix is column-major dim x dim.
SpectrumResult dense_spectrum(const std::vector<cplx>& matrix, int dim, int how_many);

// Arnoldi with full reorthogonalization and a fixed deterministic start
// vector (all ones). No restarts: the basis is sized generously instead;
// residuals are computed exactly for every reported pair.
SpectrumResult arnoldi_spectrum(const Matvec& op, int dim, int how_many, int basis = 0);

// Dispatch: dense up to dim <= 4096, Arnoldi above.
SpectrumResult spectrum(const std::vector<cplx>& matrix, int dim, int how_many);

inline constexpr int kDenseLimit = 4096;

// Column-major matrix-vector product helper.
Matvec matvec_of(const std::vector<cplx>& matrix, int dim);

}  // namespace aniso
