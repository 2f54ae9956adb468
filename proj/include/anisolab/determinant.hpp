#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "anisolab/orbits.hpp"
#include "anisolab/torus_map.hpp"

namespace aniso {

using cplx = std::complex<double>;

// One weighted periodic-orbit sum S_n = sum_{T^n x = x} g^{(n)}(x) / |det(id - DT_x^{-n})|.
struct OrbitSumRow {
    int n = 0;
    cplx value{0.0, 0.0};
    std::int64_t point_count = 0;
    std::int64_t expected_count = 0;
    bool complete = false;
};

std::vector<OrbitSumRow> orbit_sums(const TorusMap& map, const Weight& weight, int n_max,
                                    const OrbitOptions& opts = {});

// Truncated dynamical determinant d(z) = exp(-sum_n S_n z^n / n) as a Taylor
// polynomial: c_0 = 1, (j+1) c_{j+1} = -sum_{n=1}^{j+1} S_n c_{j+1-n}.
struct DeterminantSeries {
    std::vector<cplx> coeffs;  // c_0 .. c_{n_max}
    std::vector<OrbitSumRow> sums;
    double trust_radius = 0.0;  // half the radius where the last two terms reach 1e-8

    int degree() const { return static_cast<int>(coeffs.size()) - 1; }
    // Horner evaluation; truncate >= 0 drops coefficients beyond that index.
    cplx evaluate(cplx z, int truncate = -1) const;
};

DeterminantSeries series_from_sums(std::vector<OrbitSumRow> sums);
DeterminantSeries determinant_series(const TorusMap& map, const Weight& weight, int n_max,
                                     const OrbitOptions& opts = {});

// A polynomial root of the truncated determinant, with its validation data.
struct DeterminantZero {
    cplx z{0.0, 0.0};
    cplx inverse{0.0, 0.0};         // 1/z, the matching eigenvalue candidate
    double abs_value = 0.0;         // |d(z)| at the root
    double truncation_shift = 0.0;  // distance moved when one order is dropped
    bool validated = false;
};

// Roots inside the search radius (default: the trust radius) via the
// companion matrix, validated by residual < 1e-8 and one-order truncation
// shift < 1e-4. Roots failing validation are kept but flagged.
std::vector<DeterminantZero> find_zeros(const DeterminantSeries& series,
                                        double search_radius = 0.0);

// Essential-spectral-radius bound from the variational expression, measured
// through weighted periodic-orbit ensembles:
//   rho_n = ( sum_{T^n x = x} |g^{(n)}| |det DT^n|_{E^s}|
//             max(|DT^n|_{E^u}|^{-t}, |DT^n|_{E^s}|^{|t+s|})
//             |det DT^n|_{E^u}| / |det(id - DT^{-n})| )^{1/n},
// which collapses to lambda_u^{-min(t, |t+s|)} for exact linear maps.
struct EssentialRadiusReport {
    double value = 0.0;
    bool exact_linear = false;
    std::vector<int> orders;      // the n used
    std::vector<double> per_n;    // rho_n
    double t = 0.0;
    double s = 0.0;
};

EssentialRadiusReport essential_radius_bound(const TorusMap& map, const Weight& weight, double t,
                                             double s, int n_max = 8,
                                             const OrbitOptions& opts = {});

// Eigenvalues present in both lists within tol (greedy nearest pairing);
// used to declare spectra stable across truncation sizes.
std::vector<cplx> stable_eigenvalues(const std::vector<cplx>& a, const std::vector<cplx>& b,
                                     double tol);

// Greedy matching of determinant zeros (as 1/z) against eigenvalues with
// modulus >= radius.
struct SpectrumMatch {
    struct Pair {
        cplx zero_inverse{0.0, 0.0};
        cplx eigenvalue{0.0, 0.0};
        double distance = 0.0;
    };
    std::vector<Pair> matched;
    std::vector<cplx> unmatched_zero_inverses;
    std::vector<cplx> unmatched_eigenvalues;
    double radius = 0.0;
    double tol = 0.0;
};

SpectrumMatch match_zeros_spectrum(const std::vector<DeterminantZero>& zeros,
                                   const std::vector<cplx>& eigenvalues, double radius,
                                   double tol);

}  // namespace aniso
