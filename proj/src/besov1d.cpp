#include "anisolab/besov1d.hpp"

#include <cmath>
#include <limits>

#include "anisolab/errors.hpp"
#include "anisolab/filter_bank.hpp"

namespace aniso {

int chart_levels(int m, double length) {
    if (m < 8 || (m & (m - 1)) != 0)
        throw ConfigError("chart resolution must be a power of two >= 8");
    const double nyquist = double(m) / (2.0 * length);
    int l = 0;
    while (std::ldexp(2.0, l + 1) <= nyquist / 2.0) ++l;
    return l;
}

std::vector<cplx> chart_filter(const std::vector<cplx>& trace, double length, int level,
                               const ChiProfile& chi, bool fat) {
    const int m = (int)trace.size();
    std::vector<cplx> hat(trace.size());
    fft1(m, trace.data(), hat.data(), -1);
    for (int i = 0; i < m; ++i) {
        const int j = i < m / 2 ? i : i - m;
        const double freq = std::abs(double(j)) / length;
        const double sym = fat ? FilterBank::psi_fat_value(chi, level, freq)
                               : FilterBank::psi_value(chi, level, freq);
        hat[size_t(i)] *= sym / double(m);  // fold in the inverse-transform scale
    }
    std::vector<cplx> out(trace.size());
    fft1(m, hat.data(), out.data(), +1);
    return out;
}

double weighted_lp(const std::vector<cplx>& v, const std::vector<double>& mu, double p) {
    if (std::isinf(p)) {
        double m = 0.0;
        for (const auto& z : v) m = std::max(m, std::abs(z));
        return m;
    }
    double s = 0.0;
    for (size_t i = 0; i < v.size(); ++i) s += std::pow(std::abs(v[i]), p) * mu[i];
    return std::pow(s, 1.0 / p);
}

double besov_norm_1d(const std::vector<cplx>& trace, double length,
                     const std::vector<double>& mu, const BesovParams& params,
                     const ChiProfile& chi, std::vector<double>* per_level) {
    const int m = (int)trace.size();
    const int lmax = chart_levels(m, length);
    if (per_level) per_level->assign(size_t(lmax) + 1, 0.0);

    double acc = 0.0;
    const bool sup_mode = std::isinf(params.q);
    for (int l = 0; l <= lmax; ++l) {
        const auto block = chart_filter(trace, length, l, chi);
        const double bn = weighted_lp(block, mu, params.p);
        const double weighted = bn * std::pow(2.0, double(l) * params.s);
        if (per_level) (*per_level)[size_t(l)] = weighted;
        if (sup_mode)
            acc = std::max(acc, weighted);
        else
            acc += std::pow(weighted, params.q);
    }
    return sup_mode ? acc : std::pow(acc, 1.0 / params.q);
}

}  // namespace aniso
