#pragma once

#include <limits>
#include <vector>

#include "anisolab/chi_profile.hpp"
#include "anisolab/fourier_field.hpp"

namespace aniso {

// 1-D dyadic analysis on a periodic chart of given length sampled at m
// uniform points. Frequencies are measured in cycles per unit of the
// chart coordinate: bin j carries frequency j/length.

// Highest dyadic level whose block support fits under half the chart
// Nyquist frequency.
int chart_levels(int m, double length);

// Multiply the trace by the level-l dyadic block symbol (or its fat
// companion) in the chart frequency domain.
std::vector<cplx> chart_filter(const std::vector<cplx>& trace, double length, int level,
                               const ChiProfile& chi, bool fat = false);

struct BesovParams {
    double s = 0.0;
    double p = 2.0;
    double q = std::numeric_limits<double>::infinity();
};

// Weighted L_p of a trace: (sum_i |v_i|^p mu_i)^{1/p}; p = inf gives the
// max ignoring weights. mu are quadrature weights of the leaf measure.
double weighted_lp(const std::vector<cplx>& v, const std::vector<double>& mu, double p);

// Chart Besov norm: levels 0..chart_levels, block norms in L_p(mu),
// combined with the 2^{ls} weights in l_q.
double besov_norm_1d(const std::vector<cplx>& trace, double length,
                     const std::vector<double>& mu, const BesovParams& params,
                     const ChiProfile& chi, std::vector<double>* per_level = nullptr);

}  // namespace aniso
