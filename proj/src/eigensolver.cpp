#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>

#include "anisolab/eigensolver.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <complex>

#include "anisolab/errors.hpp"

namespace aniso {

namespace {

void sort_pairs(std::vector<EigenPair>& pairs) {
    std::stable_sort(pairs.begin(), pairs.end(), [](const EigenPair& a, const EigenPair& b) {
        const double ma = std::abs(a.value), mb = std::abs(b.value);
        if (ma != mb) return ma > mb;
        if (a.value.real() != b.value.real()) return a.value.real() > b.value.real();
        return a.value.imag() > b.value.imag();
    });
}

// Eigen-decomposition of a small dense matrix with right eigenvectors.
void small_zgeev(std::vector<cplx> a, int n, std::vector<cplx>& values,
                 std::vector<cplx>& vectors) {
    values.assign(std::size_t(n), cplx{0.0, 0.0});
    vectors.assign(std::size_t(n) * n, cplx{0.0, 0.0});
    const int info = LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', 'V', n, a.data(), n, values.data(),
                                   nullptr, 1, vectors.data(), n);
    if (info != 0) {
        throw NumericError("dense eigensolver failed to converge");
    }
}

}  // namespace

Matvec matvec_of(const std::vector<cplx>& matrix, int dim) {
    return [&matrix, dim](const cplx* in, cplx* out) {
        std::fill(out, out + dim, cplx{0.0, 0.0});
        for (int j = 0; j < dim; ++j) {
            const cplx xj = in[j];
            if (xj == cplx{0.0, 0.0}) continue;
            const cplx* col = matrix.data() + std::size_t(j) * dim;
            for (int i = 0; i < dim; ++i) out[i] += col[i] * xj;
        }
    };
}

SpectrumResult dense_spectrum(const std::vector<cplx>& matrix, int dim, int how_many) {
    if (dim <= 0 || matrix.size() != std::size_t(dim) * dim) {
        throw ConfigError("dense spectrum: matrix size mismatch");
    }
    std::vector<cplx> values, vectors;
    small_zgeev(matrix, dim, values, vectors);

    std::vector<int> order(static_cast<std::size_t>(dim));
    for (int i = 0; i < dim; ++i) order[std::size_t(i)] = i;
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return std::abs(values[std::size_t(a)]) > std::abs(values[std::size_t(b)]);
    });

    const Matvec op = matvec_of(matrix, dim);
    SpectrumResult res;
    res.dim = dim;
    res.method = "dense";
    const int keep = std::min(how_many, dim);
    std::vector<cplx> av(static_cast<std::size_t>(dim));
    for (int r = 0; r < keep; ++r) {
        const int idx = order[std::size_t(r)];
        const cplx* v = vectors.data() + std::size_t(idx) * dim;
        op(v, av.data());
        double num = 0.0, den = 0.0;
        for (int i = 0; i < dim; ++i) {
            num += std::norm(av[std::size_t(i)] - values[std::size_t(idx)] * v[i]);
            den += std::norm(v[i]);
        }
        EigenPair p;
        p.value = values[std::size_t(idx)];
        p.residual = den > 0.0 ? std::sqrt(num / den) : -1.0;
        p.converged = true;
        res.eigenvalues.push_back(p);
        if (r == 0) res.leading_vector.assign(v, v + dim);
    }
    sort_pairs(res.eigenvalues);
    return res;
}

SpectrumResult arnoldi_spectrum(const Matvec& op, int dim, int how_many, int basis) {
    if (dim <= 0) throw ConfigError("arnoldi: dimension must be positive");
    if (basis <= 0) basis = std::min(dim, std::max(2 * how_many + 40, 160));
    basis = std::min(basis, dim);

    // Deterministic start: the all-ones vector.
    std::vector<std::vector<cplx>> V;
    V.reserve(std::size_t(basis) + 1);
    std::vector<cplx> v0(std::size_t(dim), cplx{1.0, 0.0});
    {
        const double n0 = std::sqrt(double(dim));
        for (cplx& c : v0) c /= n0;
    }
    V.push_back(std::move(v0));

    std::vector<cplx> H(std::size_t(basis + 1) * basis, cplx{0.0, 0.0});  // column-major (basis+1) x basis
    std::vector<cplx> w(static_cast<std::size_t>(dim));
    int m = 0;
    bool breakdown = false;
    for (int j = 0; j < basis; ++j) {
        op(V[std::size_t(j)].data(), w.data());
        // Modified Gram-Schmidt with one full re-orthogonalization pass.
        for (int pass = 0; pass < 2; ++pass) {
            for (int i = 0; i <= j; ++i) {
                cplx h{0.0, 0.0};
                const cplx* vi = V[std::size_t(i)].data();
                for (int r = 0; r < dim; ++r) h += std::conj(vi[r]) * w[std::size_t(r)];
                H[std::size_t(j) * (basis + 1) + i] += h;
                for (int r = 0; r < dim; ++r) w[std::size_t(r)] -= h * vi[r];
            }
        }
        double nw = 0.0;
        for (const cplx& c : w) nw += std::norm(c);
        nw = std::sqrt(nw);
        H[std::size_t(j) * (basis + 1) + (j + 1)] = nw;
        m = j + 1;
        if (nw < 1e-13) {
            breakdown = true;  // invariant subspace found: Ritz values are exact
            break;
        }
        std::vector<cplx> vn(static_cast<std::size_t>(dim));
        for (int r = 0; r < dim; ++r) vn[std::size_t(r)] = w[std::size_t(r)] / nw;
        V.push_back(std::move(vn));
    }

    // Ritz pairs from the m x m Hessenberg block.
    std::vector<cplx> Hm(std::size_t(m) * m);
    for (int j = 0; j < m; ++j) {
        for (int i = 0; i < m; ++i) {
            Hm[std::size_t(j) * m + i] = H[std::size_t(j) * (basis + 1) + i];
        }
    }
    std::vector<cplx> theta, Y;
    small_zgeev(Hm, m, theta, Y);

    std::vector<int> order(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) order[std::size_t(i)] = i;
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return std::abs(theta[std::size_t(a)]) > std::abs(theta[std::size_t(b)]);
    });

    SpectrumResult res;
    res.dim = dim;
    res.method = "arnoldi";
    res.krylov_dim = m;
    const int keep = std::min(how_many, m);
    std::vector<cplx> ritz(static_cast<std::size_t>(dim)), av(static_cast<std::size_t>(dim));
    for (int r = 0; r < keep; ++r) {
        const int idx = order[std::size_t(r)];
        // Assemble the Ritz vector V * y.
        std::fill(ritz.begin(), ritz.end(), cplx{0.0, 0.0});
        for (int i = 0; i < m; ++i) {
            const cplx yi = Y[std::size_t(idx) * m + i];
            if (yi == cplx{0.0, 0.0}) continue;
            const cplx* vi = V[std::size_t(i)].data();
            for (int q = 0; q < dim; ++q) ritz[std::size_t(q)] += yi * vi[q];
        }
        op(ritz.data(), av.data());
        double num = 0.0, den = 0.0;
        for (int q = 0; q < dim; ++q) {
            num += std::norm(av[std::size_t(q)] - theta[std::size_t(idx)] * ritz[std::size_t(q)]);
            den += std::norm(ritz[std::size_t(q)]);
        }
        EigenPair p;
        p.value = theta[std::size_t(idx)];
        p.residual = den > 0.0 ? std::sqrt(num / den) : -1.0;
        p.converged = breakdown || p.residual < 1e-8;
        res.eigenvalues.push_back(p);
        if (r == 0) res.leading_vector = ritz;
    }
    sort_pairs(res.eigenvalues);
    return res;
}

SpectrumResult spectrum(const std::vector<cplx>& matrix, int dim, int how_many) {
    if (dim <= kDenseLimit) {
        return dense_spectrum(matrix, dim, how_many);
    }
    return arnoldi_spectrum(matvec_of(matrix, dim), dim, how_many);
}

}  // namespace aniso
