#pragma once

// Independent reference implementation of the windowed leafwise Besov
// norm: direct O(m^2) discrete Fourier sums instead of the FFT pipeline,
// with its own trace sampling, block filtering, and level combination.
// Shared by the unit tests and the acceptance suite as the oracle.

#include <cmath>
#include <complex>
#include <limits>
#include <vector>

#include "anisolab/chi_profile.hpp"
#include "anisolab/filter_bank.hpp"
#include "anisolab/fourier_field.hpp"
#include "anisolab/leaf.hpp"
#include "anisolab/leaf_restriction.hpp"

namespace naive {

using cplx = std::complex<double>;

struct Trace {
    double length = 0.0;
    std::vector<cplx> values;
    std::vector<double> mu;
};

// Windowed samples of the field along the leaf graph, via pointwise
// evaluation of the Fourier sum (no phase tables, no FFT).
inline Trace sample_leaf(const aniso::FourierField& field, const aniso::AdmissibleLeaf& leaf,
                         int m, const aniso::ChiProfile& chi) {
    Trace t;
    t.length = leaf.length();
    t.values.resize(static_cast<std::size_t>(m));
    t.mu.resize(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
        const double x = leaf.x0() + t.length * double(i) / double(m);
        const double g = leaf.gamma(x);
        const double w = aniso::chart_window(chi, double(i) / double(m));
        t.values[static_cast<std::size_t>(i)] = field.evaluate(aniso::Vec2{x, g}) * w;
        const double gp = leaf.gamma_deriv(1, x);
        t.mu[static_cast<std::size_t>(i)] = std::sqrt(1.0 + gp * gp) * t.length / double(m);
    }
    return t;
}

inline std::vector<cplx> dft_forward(const std::vector<cplx>& v) {
    const int m = static_cast<int>(v.size());
    std::vector<cplx> out(v.size());
    const double w = -2.0 * M_PI / double(m);
    for (int j = 0; j < m; ++j) {
        cplx acc{0.0, 0.0};
        for (int i = 0; i < m; ++i) {
            const double ph = w * double(i) * double(j);
            acc += v[static_cast<std::size_t>(i)] * cplx{std::cos(ph), std::sin(ph)};
        }
        out[static_cast<std::size_t>(j)] = acc / double(m);
    }
    return out;
}

inline std::vector<cplx> dft_backward(const std::vector<cplx>& hat) {
    const int m = static_cast<int>(hat.size());
    std::vector<cplx> out(hat.size());
    const double w = 2.0 * M_PI / double(m);
    for (int i = 0; i < m; ++i) {
        cplx acc{0.0, 0.0};
        for (int j = 0; j < m; ++j) {
            const double ph = w * double(i) * double(j);
            acc += hat[static_cast<std::size_t>(j)] * cplx{std::cos(ph), std::sin(ph)};
        }
        out[static_cast<std::size_t>(i)] = acc;
    }
    return out;
}

inline double lp_against_measure(const std::vector<cplx>& v, const std::vector<double>& mu,
                                 double p) {
    if (std::isinf(p)) {
        double m = 0.0;
        for (const cplx& z : v) m = std::max(m, std::abs(z));
        return m;
    }
    double s = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) s += std::pow(std::abs(v[i]), p) * mu[i];
    return std::pow(s, 1.0 / p);
}

// Reference Besov norm of a sampled trace.
inline double besov_reference(const Trace& t, double s, double p, double q,
                              const aniso::ChiProfile& chi) {
    const int m = static_cast<int>(t.values.size());
    const double nyquist = double(m) / (2.0 * t.length);
    int lmax = 0;
    while (std::ldexp(2.0, lmax + 1) <= nyquist / 2.0) ++lmax;

    const std::vector<cplx> hat = dft_forward(t.values);
    const bool sup_mode = std::isinf(q);
    double acc = 0.0;
    for (int l = 0; l <= lmax; ++l) {
        std::vector<cplx> filtered(hat.size());
        for (int i = 0; i < m; ++i) {
            const int j = i < m / 2 ? i : i - m;
            const double freq = std::abs(double(j)) / t.length;
            filtered[static_cast<std::size_t>(i)] =
                hat[static_cast<std::size_t>(i)] * aniso::FilterBank::psi_value(chi, l, freq);
        }
        const std::vector<cplx> block = dft_backward(filtered);
        const double bn = lp_against_measure(block, t.mu, p);
        const double weighted = bn * std::pow(2.0, double(l) * s);
        if (sup_mode)
            acc = std::max(acc, weighted);
        else
            acc += std::pow(weighted, q);
    }
    return sup_mode ? acc : std::pow(acc, 1.0 / q);
}

}  // namespace naive
