#include "anisolab/leaf_restriction.hpp"

#include <cmath>

#include "anisolab/errors.hpp"

namespace aniso {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
}

double chart_window(const ChiProfile& chi, double u, double ramp) {
    return chi.smooth_step(u / ramp) * chi.smooth_step((1.0 - u) / ramp);
}

LeafRestriction restrict_to_leaf(const FourierField& field, const AdmissibleLeaf& leaf,
                                 int chart_m, const ChiProfile& chi) {
    const int n = field.resolution();
    const int m = chart_m;
    if (m < 8 || (m & (m - 1)) != 0)
        throw ConfigError("chart resolution must be a power of two >= 8");

    LeafRestriction r;
    r.length = leaf.length();
    r.trace.assign(size_t(m), cplx{0.0, 0.0});
    r.mu.resize(static_cast<std::size_t>(m));

    const double L = leaf.length(), x0 = leaf.x0();
    std::vector<double> xs(static_cast<std::size_t>(m)), gs(static_cast<std::size_t>(m)), win(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
        xs[size_t(i)] = x0 + L * double(i) / double(m);
        gs[size_t(i)] = leaf.gamma(xs[size_t(i)]);
        win[size_t(i)] = chart_window(chi, double(i) / double(m));
        const double gp = leaf.gamma_deriv(1, xs[size_t(i)]);
        r.mu[size_t(i)] = std::sqrt(1.0 + gp * gp) * L / double(m);
    }

    // Phase tables: E1[i*n + j1] = e^{2 pi i k1 x_i}, E2 likewise over the
    // graph coordinate. The double loop below then touches only nonzero
    // spectral rows.
    std::vector<cplx> e1(size_t(m) * n), e2(size_t(m) * n);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j) {
            const int k = j < n / 2 ? j : j - n;
            const double p1 = kTwoPi * double(k) * xs[size_t(i)];
            const double p2 = kTwoPi * double(k) * gs[size_t(i)];
            e1[size_t(i) * n + j] = cplx{std::cos(p1), std::sin(p1)};
            e2[size_t(i) * n + j] = cplx{std::cos(p2), std::sin(p2)};
        }

    const auto& c = field.coefficients();
    std::vector<cplx> row_acc(static_cast<std::size_t>(m));
    for (int j1 = 0; j1 < n; ++j1) {
        // Row of coefficients at fixed k1; skip entirely zero rows (common
        // after dyadic filtering).
        bool any = false;
        for (int j2 = 0; j2 < n; ++j2)
            if (c[size_t(j1) * n + j2] != cplx{0.0, 0.0}) {
                any = true;
                break;
            }
        if (!any) continue;
        std::fill(row_acc.begin(), row_acc.end(), cplx{0.0, 0.0});
        for (int j2 = 0; j2 < n; ++j2) {
            const cplx cc = c[size_t(j1) * n + j2];
            if (cc == cplx{0.0, 0.0}) continue;
            for (int i = 0; i < m; ++i) row_acc[size_t(i)] += cc * e2[size_t(i) * n + j2];
        }
        for (int i = 0; i < m; ++i)
            r.trace[size_t(i)] += row_acc[size_t(i)] * e1[size_t(i) * n + j1];
    }
    for (int i = 0; i < m; ++i) r.trace[size_t(i)] *= win[size_t(i)];
    return r;
}

LeafRestriction restrict_mode_to_leaf(const IVec2& k, cplx amp, const AdmissibleLeaf& leaf,
                                      int chart_m, const ChiProfile& chi) {
    const int m = chart_m;
    if (m < 8 || (m & (m - 1)) != 0)
        throw ConfigError("chart resolution must be a power of two >= 8");
    LeafRestriction r;
    r.length = leaf.length();
    r.trace.resize(static_cast<std::size_t>(m));
    r.mu.resize(static_cast<std::size_t>(m));
    const double L = leaf.length(), x0 = leaf.x0();
    for (int i = 0; i < m; ++i) {
        const double x = x0 + L * double(i) / double(m);
        const double g = leaf.gamma(x);
        const double phase = kTwoPi * (double(k[0]) * x + double(k[1]) * g);
        const double w = chart_window(chi, double(i) / double(m));
        r.trace[size_t(i)] = amp * cplx{std::cos(phase), std::sin(phase)} * w;
        const double gp = leaf.gamma_deriv(1, x);
        r.mu[size_t(i)] = std::sqrt(1.0 + gp * gp) * L / double(m);
    }
    return r;
}

int suggested_chart_resolution(const AdmissibleLeaf& leaf, int field_resolution) {
    // Worst-case chart frequency of a field mode: |k1| + sup|gamma'| |k2|.
    double slope_max = 0.0;
    for (int i = 0; i <= 64; ++i) {
        const double x = leaf.x0() + leaf.length() * double(i) / 64.0;
        slope_max = std::max(slope_max, std::abs(leaf.gamma_deriv(1, x)));
    }
    const double fmax = (field_resolution / 2.0) * (1.0 + slope_max);
    // Keep the top chart frequency at or below half the chart Nyquist.
    int m = 8;
    while (double(m) / (4.0 * leaf.length()) < fmax) m *= 2;
    return m;
}

std::vector<cplx> leafwise_filter(const FourierField& field, const AdmissibleLeaf& leaf,
                                  int level, int chart_m, const ChiProfile& chi) {
    const auto r = restrict_to_leaf(field, leaf, chart_m, chi);
    return chart_filter(r.trace, r.length, level, chi);
}

double leafwise_besov_norm(const FourierField& field, const AdmissibleLeaf& leaf,
                           const BesovParams& params, int chart_m, const ChiProfile& chi,
                           std::vector<double>* per_level) {
    const auto r = restrict_to_leaf(field, leaf, chart_m, chi);
    return besov_norm_1d(r.trace, r.length, r.mu, params, chi, per_level);
}

}  // namespace aniso
