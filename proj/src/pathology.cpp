#include "anisolab/pathology.hpp"

#include <algorithm>
#include <cmath>

#include "anisolab/errors.hpp"
#include "anisolab/filter_bank.hpp"

namespace aniso {

namespace {

double wrap_mod_pi(double a) {
    while (a <= -M_PI / 2) a += M_PI;
    while (a > M_PI / 2) a -= M_PI;
    return a;
}

bool in_sector_mod_pi(double theta, const ConeSpec& s) {
    return std::abs(wrap_mod_pi(theta - s.axis_angle)) <= s.half_aperture + 1e-12;
}

// Single-sided sector membership (no mod-pi symmetrization): the source
// spectrum sits on one half of the cone only.
bool in_upper_sector(const IVec2& k, const ConeSpec& s) {
    if (k[1] < 2) return false;
    const double theta = std::atan2(double(k[1]), double(k[0]));
    double d = theta - s.axis_angle;
    while (d <= -M_PI) d += 2 * M_PI;
    while (d > M_PI) d -= 2 * M_PI;
    return std::abs(d) <= s.half_aperture + 1e-12;
}

struct CaseGeometry {
    ConeSpec source;       // minus cone carrying the spectrum
    ConeSpec target;       // plus cone whose energy is tracked
    int band_coordinate;   // 0: indicator of x1-band, 1: x2-band
    bool log_profile;      // 1/(q log q) instead of q^{-a}
};

CaseGeometry case_geometry(int case_id) {
    const double ap = M_PI / 8.0;
    switch (case_id) {
        case 1:
            // Vertical source cone, horizontal target cone, band edges
            // parallel to the vertical axis (boundary direction inside the
            // source cone).
            return {ConeSpec{M_PI / 2, ap}, ConeSpec{0.0, ap}, 0, false};
        case 2:
            // Same cones, horizontal band edges (boundary direction inside
            // the target cone), borderline profile.
            return {ConeSpec{M_PI / 2, ap}, ConeSpec{0.0, ap}, 1, true};
        case 3: {
            // Tilted sectors: source spanning directions with
            // -xi2 <= xi1 <= -xi2/2, target with xi2/2 <= xi1 <= xi2; a
            // vertical band boundary avoids both.
            const double lo_m = std::atan2(1.0, -1.0);        // 3 pi / 4
            const double hi_m = std::atan2(1.0, -0.5);
            const double lo_p = std::atan2(1.0, 1.0);         // pi / 4
            const double hi_p = std::atan2(1.0, 0.5);
            const ConeSpec minus{0.5 * (lo_m + hi_m), 0.5 * std::abs(lo_m - hi_m)};
            const ConeSpec plus{0.5 * (lo_p + hi_p), 0.5 * std::abs(hi_p - lo_p)};
            return {minus, plus, 0, false};
        }
        default:
            throw ConfigError("blow-up experiment case must be 1, 2, or 3");
    }
}

double fit_loglog_slope(const std::vector<double>& x, const std::vector<double>& y,
                        std::size_t tail) {
    const std::size_t n = std::min(tail, x.size());
    if (n < 2) return 0.0;
    const std::size_t start = x.size() - n;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = start; i < x.size(); ++i) {
        const double lx = std::log(x[i]);
        const double ly = std::log(std::max(y[i], 1e-300));
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    const double d = double(n) * sxx - sx * sx;
    if (d == 0.0) return 0.0;
    return (double(n) * sxy - sx * sy) / d;
}

}  // namespace

BlowupReport halfplane_blowup_experiment(const BlowupOptions& opt) {
    const int N = opt.resolution;
    if (N < 32 || (N & (N - 1)) != 0) {
        throw ConfigError("blow-up experiment needs a power-of-two resolution >= 32");
    }
    if (!(opt.band_lo < opt.band_hi && opt.band_lo >= 0.0 && opt.band_hi <= 1.0)) {
        throw ConfigError("indicator band edges must satisfy 0 <= lo < hi <= 1");
    }
    const CaseGeometry geo = case_geometry(opt.case_id);

    // Source field: profile(k2) on the chosen one-sided sector.
    FourierField source(N);
    double l2 = 0.0;
    const int h = N / 2;
    for (int k1 = -h; k1 < h; ++k1) {
        for (int k2 = 2; k2 < h; ++k2) {
            const IVec2 k{k1, k2};
            if (!in_upper_sector(k, geo.source)) continue;
            const double q = double(k2);
            const double prof =
                geo.log_profile ? 1.0 / (q * std::log(q)) : std::pow(q, -opt.profile_exponent);
            source.at(k1, k2) = cplx{prof, 0.0};
            l2 += prof * prof;
        }
    }
    if (l2 == 0.0) {
        throw NumericError("blow-up source spectrum is empty at this resolution");
    }

    // Multiply by the band indicator in space.
    std::vector<double> ind(std::size_t(N) * N, 0.0);
    for (int i1 = 0; i1 < N; ++i1) {
        const double x1 = double(i1) / N;
        for (int i2 = 0; i2 < N; ++i2) {
            const double x2 = double(i2) / N;
            const double c = geo.band_coordinate == 0 ? x1 : x2;
            if (c >= opt.band_lo && c < opt.band_hi) {
                ind[std::size_t(i1) * N + i2] = 1.0;
            }
        }
    }
    const FourierField product = source.spatial_product(ind);

    // Weighted target-cone energy below dyadic cutoffs.
    BlowupReport rep;
    rep.case_id = opt.case_id;
    rep.resolution = N;
    rep.t = opt.t;
    rep.source_l2 = std::sqrt(l2);
    for (double lam = 8.0; lam <= double(N) / 4.0 + 0.5; lam *= 2.0) {
        rep.cutoffs.push_back(lam);
    }
    if (rep.cutoffs.size() < 3) {
        throw ConfigError("blow-up experiment needs at least three dyadic cutoffs; raise the resolution");
    }
    std::vector<double> energy(rep.cutoffs.size(), 0.0);
    for (int k1 = -h; k1 < h; ++k1) {
        for (int k2 = -h; k2 < h; ++k2) {
            if (k1 == 0 && k2 == 0) continue;
            const double rad = std::hypot(double(k1), double(k2));
            if (rad < 2.0) continue;
            const double theta = std::atan2(double(k2), double(k1));
            if (!in_sector_mod_pi(theta, geo.target)) continue;
            const double w = std::pow(1.0 + rad * rad, opt.t);
            const double a = std::norm(product.at(k1, k2)) * w;
            for (std::size_t j = 0; j < rep.cutoffs.size(); ++j) {
                if (rad <= rep.cutoffs[j]) energy[j] += a;
            }
        }
    }
    rep.energy = energy;

    rep.increasing = true;
    for (std::size_t j = 0; j < energy.size(); ++j) {
        if (j > 0) {
            rep.increments.push_back(energy[j] - energy[j - 1]);
            const double dlog = std::log(rep.cutoffs[j]) - std::log(rep.cutoffs[j - 1]);
            const double dle = std::log(std::max(energy[j], 1e-300)) -
                               std::log(std::max(energy[j - 1], 1e-300));
            rep.pair_slopes.push_back(dle / dlog);
            if (!(energy[j] > energy[j - 1])) rep.increasing = false;
        }
    }
    rep.loglog_slope = fit_loglog_slope(rep.cutoffs, energy, 3);
    if (rep.pair_slopes.size() >= 2) {
        const double a = rep.pair_slopes[rep.pair_slopes.size() - 2];
        const double b = rep.pair_slopes.back();
        rep.slope_stable = a > 0.0 && b > 0.0 && b / a >= 0.5 && b / a <= 2.0;
    }
    if (rep.increments.size() >= 3) {
        const std::size_t n = rep.increments.size();
        rep.increments_decay = rep.increments[n - 1] < rep.increments[n - 2] &&
                               rep.increments[n - 2] < rep.increments[n - 3];
    } else if (rep.increments.size() == 2) {
        rep.increments_decay = rep.increments[1] < rep.increments[0];
    }
    rep.declared_divergent = rep.loglog_slope > kBlowupSlopeThreshold;
    return rep;
}

IndicatorProbeReport indicator_multiplier_probe(const IndicatorProbeOptions& opt,
                                                const ConeSystem& cones, const ChiProfile& chi) {
    validate_probe_params(opt.params);
    if (opt.resolutions.empty()) {
        throw ConfigError("indicator probe needs at least one resolution");
    }
    if (!(opt.band_lo < opt.band_hi && opt.band_lo >= 0.0 && opt.band_hi <= 1.0)) {
        throw ConfigError("indicator band edges must satisfy 0 <= lo < hi <= 1");
    }
    // Transversality precondition: the boundary direction of the band must
    // avoid the minus cone (otherwise the blow-up mechanism applies and the
    // probe question is void).
    const double boundary_angle = opt.orientation == 0 ? M_PI / 2 : 0.0;
    const Vec2 boundary_dir{std::cos(boundary_angle), std::sin(boundary_angle)};
    if (cones.contains_minus(boundary_dir)) {
        throw ConfigError("probe band boundary direction lies in the minus cone; "
                          "rotate the band or the cone pair");
    }

    IndicatorProbeReport rep;
    for (const int N : opt.resolutions) {
        if (N < 32 || (N & (N - 1)) != 0) {
            throw ConfigError("probe resolutions must be powers of two >= 32");
        }
        LeafFamilyOptions lf;
        lf.count = opt.leaf_count;
        lf.wiggle_terms = opt.wiggle_terms;
        lf.wiggle_amplitude = opt.wiggle_terms > 0 ? 0.01 : 0.0;
        lf.seed = opt.seed;
        const std::vector<AdmissibleLeaf> leaves = sample_leaf_family(cones, lf, opt.params.r);

        Rng rng(opt.seed + std::uint64_t(N));
        const FourierField field = FourierField::random_band_limited(N, N / 8, rng);

        std::vector<double> ind(std::size_t(N) * N, 0.0);
        for (int i1 = 0; i1 < N; ++i1) {
            const double x1 = double(i1) / N;
            for (int i2 = 0; i2 < N; ++i2) {
                const double x2 = double(i2) / N;
                const double c = opt.orientation == 0 ? x1 : x2;
                if (c >= opt.band_lo && c < opt.band_hi) {
                    ind[std::size_t(i1) * N + i2] = 1.0;
                }
            }
        }
        const FourierField cut = field.spatial_product(ind);

        const FilterBank bank(N, chi);
        IndicatorProbePoint pt;
        pt.resolution = N;
        pt.norm_before = u_norm(field, bank, leaves, opt.params, chi).value;
        pt.norm_after = u_norm(cut, bank, leaves, opt.params, chi).value;
        pt.ratio = pt.norm_before > 0.0 ? pt.norm_after / pt.norm_before : 0.0;
        rep.points.push_back(pt);
    }
    rep.ratio_monotone_increasing = rep.points.size() >= 2;
    for (std::size_t i = 1; i < rep.points.size(); ++i) {
        if (!(rep.points[i].ratio > rep.points[i - 1].ratio)) {
            rep.ratio_monotone_increasing = false;
        }
    }
    return rep;
}

}  // namespace aniso
