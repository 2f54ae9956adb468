#include "anisolab/determinant.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "anisolab/eigensolver.hpp"
#include "anisolab/errors.hpp"

namespace aniso {

namespace {

constexpr double kCoeffFloor = 1e-14;     // relative trim threshold for trailing coefficients
constexpr double kTailBudget = 1e-8;      // allowed contribution of the last kept terms
constexpr double kTrustCap = 1e3;         // cap when trailing coefficients vanish
constexpr double kZeroResidualTol = 1e-8;
constexpr double kZeroShiftTol = 1e-4;

// Roots of sum_j coeffs[j] z^j after trimming trailing noise, via the
// companion matrix of the monic normalization.
std::vector<cplx> polynomial_roots(const std::vector<cplx>& coeffs) {
    double scale = 0.0;
    for (const cplx& c : coeffs) scale = std::max(scale, std::abs(c));
    if (scale == 0.0) return {};
    int deg = static_cast<int>(coeffs.size()) - 1;
    while (deg > 0 && std::abs(coeffs[static_cast<std::size_t>(deg)]) <= kCoeffFloor * scale) {
        --deg;
    }
    if (deg <= 0) return {};

    const cplx lead = coeffs[static_cast<std::size_t>(deg)];
    std::vector<cplx> companion(static_cast<std::size_t>(deg) * deg, cplx{0.0, 0.0});
    for (int j = 0; j + 1 < deg; ++j) {
        companion[static_cast<std::size_t>(j) * deg + (j + 1)] = cplx{1.0, 0.0};  // subdiagonal
    }
    for (int i = 0; i < deg; ++i) {
        companion[static_cast<std::size_t>(deg - 1) * deg + i] =
            -coeffs[static_cast<std::size_t>(i)] / lead;
    }
    const SpectrumResult spec = dense_spectrum(companion, deg, deg);
    std::vector<cplx> roots;
    roots.reserve(spec.eigenvalues.size());
    for (const EigenPair& p : spec.eigenvalues) roots.push_back(p.value);
    return roots;
}

struct LongMat2 {
    long double a11 = 1.0L, a12 = 0.0L, a21 = 0.0L, a22 = 1.0L;

    LongMat2 times(const Mat2& m) const {
        LongMat2 r;
        r.a11 = a11 * m.a11 + a12 * m.a21;
        r.a12 = a11 * m.a12 + a12 * m.a22;
        r.a21 = a21 * m.a11 + a22 * m.a21;
        r.a22 = a21 * m.a12 + a22 * m.a22;
        return r;
    }
    long double det() const { return a11 * a22 - a12 * a21; }
    long double trace() const { return a11 + a22; }
};

}  // namespace

std::vector<OrbitSumRow> orbit_sums(const TorusMap& map, const Weight& weight, int n_max,
                                    const OrbitOptions& opts) {
    if (n_max < 1) throw ConfigError("orbit sums need n_max >= 1");
    std::vector<OrbitSumRow> rows;
    rows.reserve(static_cast<std::size_t>(n_max));
    for (int n = 1; n <= n_max; ++n) {
        const PeriodicOrbitTable table = enumerate_periodic_points(map, weight, n, opts);
        OrbitSumRow row;
        row.n = n;
        row.point_count = static_cast<std::int64_t>(table.points.size());
        row.expected_count = table.expected_count;
        row.complete = row.point_count == row.expected_count;
        cplx sum{0.0, 0.0};
        for (const PeriodicPoint& p : table.points) {
            if (!(p.det_term > 0.0)) {
                throw NumericError("degenerate determinant term in orbit sum");
            }
            sum += p.weight_product / p.det_term;
        }
        row.value = sum;
        rows.push_back(row);
    }
    return rows;
}

cplx DeterminantSeries::evaluate(cplx z, int truncate) const {
    int last = static_cast<int>(coeffs.size()) - 1;
    if (truncate >= 0) last = std::min(last, truncate);
    cplx acc{0.0, 0.0};
    for (int j = last; j >= 0; --j) {
        acc = acc * z + coeffs[static_cast<std::size_t>(j)];
    }
    return acc;
}

DeterminantSeries series_from_sums(std::vector<OrbitSumRow> sums) {
    DeterminantSeries out;
    const int n_max = static_cast<int>(sums.size());
    out.coeffs.assign(static_cast<std::size_t>(n_max) + 1, cplx{0.0, 0.0});
    out.coeffs[0] = cplx{1.0, 0.0};
    for (int j = 0; j < n_max; ++j) {
        cplx acc{0.0, 0.0};
        for (int n = 1; n <= j + 1; ++n) {
            acc += sums[static_cast<std::size_t>(n) - 1].value *
                   out.coeffs[static_cast<std::size_t>(j + 1 - n)];
        }
        out.coeffs[static_cast<std::size_t>(j) + 1] = -acc / static_cast<double>(j + 1);
    }
    out.sums = std::move(sums);

    // Trust radius: where the last two retained terms each stay below the
    // tail budget, halved for safety; capped when they vanish identically.
    double trust = kTrustCap;
    for (int j = n_max; j >= 1 && j >= n_max - 1; --j) {
        const double cj = std::abs(out.coeffs[static_cast<std::size_t>(j)]);
        double rj = kTrustCap;
        if (cj > 0.0) {
            rj = std::pow(kTailBudget / cj, 1.0 / static_cast<double>(j));
            rj = std::min(rj, kTrustCap);
        }
        trust = std::min(trust, rj);
    }
    out.trust_radius = 0.5 * trust;
    return out;
}

DeterminantSeries determinant_series(const TorusMap& map, const Weight& weight, int n_max,
                                     const OrbitOptions& opts) {
    return series_from_sums(orbit_sums(map, weight, n_max, opts));
}

std::vector<DeterminantZero> find_zeros(const DeterminantSeries& series, double search_radius) {
    const double radius = search_radius > 0.0 ? search_radius : series.trust_radius;
    const std::vector<cplx> roots = polynomial_roots(series.coeffs);

    // Stability reference: the series with one fewer orbit sum.
    std::vector<cplx> reduced_roots;
    if (series.sums.size() >= 2) {
        std::vector<OrbitSumRow> reduced(series.sums.begin(), series.sums.end() - 1);
        reduced_roots = polynomial_roots(series_from_sums(std::move(reduced)).coeffs);
    }

    std::vector<DeterminantZero> zeros;
    for (const cplx& z : roots) {
        if (std::abs(z) > radius) continue;
        DeterminantZero rec;
        rec.z = z;
        rec.inverse = cplx{1.0, 0.0} / z;
        rec.abs_value = std::abs(series.evaluate(z));
        double shift = std::numeric_limits<double>::infinity();
        for (const cplx& w : reduced_roots) shift = std::min(shift, std::abs(z - w));
        if (series.sums.size() < 2) shift = 0.0;  // nothing to compare against
        rec.truncation_shift = shift;
        rec.validated = rec.abs_value < kZeroResidualTol && rec.truncation_shift < kZeroShiftTol;
        zeros.push_back(rec);
    }
    std::sort(zeros.begin(), zeros.end(), [](const DeterminantZero& a, const DeterminantZero& b) {
        return std::abs(a.z) < std::abs(b.z);
    });
    return zeros;
}

EssentialRadiusReport essential_radius_bound(const TorusMap& map, const Weight& weight, double t,
                                             double s, int n_max, const OrbitOptions& opts) {
    if (n_max < 1) throw ConfigError("essential radius bound needs n_max >= 1");
    EssentialRadiusReport report;
    report.t = t;
    report.s = s;
    report.exact_linear = map.is_linear() && weight.is_reciprocal_jacobian();

    const double exp_u = -t;
    const double exp_s = std::abs(t + s);

    for (int n = 1; n <= n_max; ++n) {
        const PeriodicOrbitTable table = enumerate_periodic_points(map, weight, n, opts);
        long double sum = 0.0L;
        for (const PeriodicPoint& p : table.points) {
            LongMat2 jac;
            Vec2 x = p.x;
            for (int j = 0; j < n; ++j) {
                jac = jac.times(map.jacobian(x));
                x = map.evaluate(x);
            }
            const long double tr = jac.trace();
            const long double det = jac.det();
            const long double disc = tr * tr - 4.0L * det;
            if (!(disc > 0.0L)) {
                throw NumericError("non-hyperbolic periodic point in essential radius bound");
            }
            const long double root = std::sqrt(disc);
            const long double l1 = (tr + root) / 2.0L;
            const long double l2 = (tr - root) / 2.0L;
            const long double au = std::max(std::abs(l1), std::abs(l2));
            const long double as = std::min(std::abs(l1), std::abs(l2));
            if (!(au > 1.0L && as < 1.0L)) {
                throw NumericError("periodic point without expansion/contraction split");
            }
            const long double anisotropy =
                std::max(std::pow(static_cast<double>(au), exp_u),
                         std::pow(static_cast<double>(as), exp_s));
            sum += std::abs(p.weight_product) * as * anisotropy * au /
                   static_cast<long double>(p.det_term);
        }
        if (!(sum > 0.0L)) throw NumericError("vanishing orbit-ensemble sum");
        report.orders.push_back(n);
        report.per_n.push_back(
            std::pow(static_cast<double>(sum), 1.0 / static_cast<double>(n)));
    }

    if (report.exact_linear) {
        const auto mult = map.linear_multipliers();
        const double lu = std::abs(mult[0]);
        report.value = std::pow(lu, -std::min(t, std::abs(t + s)));
    } else {
        report.value = report.per_n.back();
    }
    return report;
}

std::vector<cplx> stable_eigenvalues(const std::vector<cplx>& a, const std::vector<cplx>& b,
                                     double tol) {
    std::vector<bool> used(b.size(), false);
    std::vector<cplx> stable;
    for (const cplx& x : a) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t best_j = b.size();
        for (std::size_t j = 0; j < b.size(); ++j) {
            if (used[j]) continue;
            const double d = std::abs(x - b[j]);
            if (d < best) {
                best = d;
                best_j = j;
            }
        }
        if (best_j < b.size() && best <= tol) {
            used[best_j] = true;
            stable.push_back(x);
        }
    }
    return stable;
}

SpectrumMatch match_zeros_spectrum(const std::vector<DeterminantZero>& zeros,
                                   const std::vector<cplx>& eigenvalues, double radius,
                                   double tol) {
    SpectrumMatch match;
    match.radius = radius;
    match.tol = tol;

    std::vector<cplx> zi;
    for (const DeterminantZero& z : zeros) {
        if (z.validated && std::abs(z.inverse) >= radius) zi.push_back(z.inverse);
    }
    std::vector<cplx> ev;
    for (const cplx& e : eigenvalues) {
        if (std::abs(e) >= radius) ev.push_back(e);
    }

    std::vector<bool> zi_used(zi.size(), false);
    std::vector<bool> ev_used(ev.size(), false);
    // Globally greedy: repeatedly bind the closest remaining pair.
    while (true) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t bi = zi.size(), bj = ev.size();
        for (std::size_t i = 0; i < zi.size(); ++i) {
            if (zi_used[i]) continue;
            for (std::size_t j = 0; j < ev.size(); ++j) {
                if (ev_used[j]) continue;
                const double d = std::abs(zi[i] - ev[j]);
                if (d < best) {
                    best = d;
                    bi = i;
                    bj = j;
                }
            }
        }
        if (bi == zi.size() || best > tol) break;
        zi_used[bi] = true;
        ev_used[bj] = true;
        match.matched.push_back({zi[bi], ev[bj], best});
    }
    for (std::size_t i = 0; i < zi.size(); ++i) {
        if (!zi_used[i]) match.unmatched_zero_inverses.push_back(zi[i]);
    }
    for (std::size_t j = 0; j < ev.size(); ++j) {
        if (!ev_used[j]) match.unmatched_eigenvalues.push_back(ev[j]);
    }
    return match;
}

}  // namespace aniso
