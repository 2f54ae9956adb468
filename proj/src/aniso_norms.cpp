#include "anisolab/aniso_norms.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "anisolab/besov1d.hpp"
#include "anisolab/errors.hpp"

namespace aniso {

void validate_aniso_params(const AnisoParams& p) {
    if (!(p.p >= 1.0)) {
        throw ConfigError("integrability index p must satisfy p >= 1");
    }
    if (!(p.r > 1.0)) {
        throw ConfigError("smoothness r must exceed 1");
    }
    const bool ok = (p.t - (p.r - 1.0) < p.s) && (p.s < -p.t) && (p.t > 0.0);
    if (!ok) {
        std::ostringstream os;
        os << "parameter window t-(r-1) < s < -t < 0 violated: t=" << p.t << " s=" << p.s
           << " r=" << p.r;
        throw ConfigError(os.str());
    }
    if (!(p.delta >= 0.0)) {
        throw ConfigError("tail slack delta must be nonnegative");
    }
}

void validate_probe_params(const AnisoParams& p) {
    if (!(p.p > 1.0)) {
        throw ConfigError("probe requires p > 1");
    }
    const bool ok = (-1.0 + 1.0 / p.p < p.s) && (p.s < -p.t) && (p.t > 0.0) && (p.t < 1.0 / p.p);
    if (!ok) {
        std::ostringstream os;
        os << "probe window -1+1/p < s < -t < 0 < t < 1/p violated: t=" << p.t << " s=" << p.s
           << " p=" << p.p;
        throw ConfigError(os.str());
    }
}

namespace {

NormReport finalize(std::vector<UNormEntry> table) {
    NormReport rep;
    rep.table = std::move(table);
    for (const UNormEntry& e : rep.table) {
        if (e.weighted > rep.value) {
            rep.value = e.weighted;
            rep.argmax_leaf = e.leaf;
            rep.argmax_level = e.level;
        }
    }
    return rep;
}

}  // namespace

NormReport u_norm(const FourierField& field, const FilterBank& bank,
                  const std::vector<AdmissibleLeaf>& leaves, const AnisoParams& params,
                  const ChiProfile& chi, int chart_m) {
    validate_aniso_params(params);
    if (leaves.empty()) {
        throw ConfigError("anisotropic norm needs at least one leaf");
    }
    const BesovParams bp{params.s, params.p, params.q};
    std::vector<UNormEntry> table;
    table.reserve(leaves.size() * std::size_t(bank.n_max() + 1));
    for (int level = 0; level <= bank.n_max(); ++level) {
        const FourierField block = field.filtered(bank.psi(level));
        const double block_weight = std::pow(2.0, double(level) * params.t);
        for (std::size_t j = 0; j < leaves.size(); ++j) {
            const int m = chart_m > 0 ? chart_m
                                      : suggested_chart_resolution(leaves[j], field.resolution());
            const double bn = leafwise_besov_norm(block, leaves[j], bp, m, chi);
            table.push_back(UNormEntry{int(j), level, bn, block_weight * bn});
        }
    }
    return finalize(std::move(table));
}

NormReport u_norm_mode(const IVec2& k, cplx amp, const std::vector<AdmissibleLeaf>& leaves,
                       const AnisoParams& params, const ChiProfile& chi) {
    validate_aniso_params(params);
    if (leaves.empty()) {
        throw ConfigError("anisotropic norm needs at least one leaf");
    }
    const BesovParams bp{params.s, params.p, params.q};
    const double rad = std::hypot(double(k[0]), double(k[1]));

    // Dyadic blocks meeting this mode: psi_n(rad) != 0 for at most two n.
    int lo = 0;
    if (rad > 1.0) lo = std::max(0, int(std::floor(std::log2(rad))) - 1);
    const int hi = rad > 0.0 ? int(std::ceil(std::log2(std::max(rad, 1.0)))) + 1 : 0;

    std::vector<UNormEntry> table;
    for (int level = lo; level <= hi; ++level) {
        const double w = FilterBank::psi_value(chi, level, rad);
        if (w == 0.0) continue;
        const cplx block_amp = amp * w;
        const double block_weight = std::pow(2.0, double(level) * params.t);
        for (std::size_t j = 0; j < leaves.size(); ++j) {
            const AdmissibleLeaf& leaf = leaves[j];
            // Chart frequency of the restricted mode is bounded by
            // |k1| + sup|gamma'| * |k2|; resolve it with margin.
            double slope_sup = std::abs(leaf.slope());
            for (const LeafTrigTerm& term : leaf.wiggle()) {
                slope_sup += 2.0 * M_PI * std::abs(term.freq) *
                             std::hypot(term.cos_coeff, term.sin_coeff);
            }
            const double fmax = std::abs(double(k[0])) + slope_sup * std::abs(double(k[1]));
            int m = 64;
            while (double(m) / (4.0 * leaf.length()) < fmax + 2.0 && m < (1 << 24)) m <<= 1;
            const LeafRestriction restr = restrict_mode_to_leaf(k, block_amp, leaf, m, chi);
            const double bn = besov_norm_1d(restr.trace, restr.length, restr.mu, bp, chi);
            table.push_back(UNormEntry{int(j), level, bn, block_weight * bn});
        }
    }
    return finalize(std::move(table));
}

double w_dagger_norm(const FourierField& field, const ConeSystem& cones, double t, double v,
                     double p) {
    const int N = field.resolution();
    const Symbol plus = cones.weight_symbol(N, t, +1);
    const Symbol minus = cones.weight_symbol(N, v, -1);
    return field.filtered(plus).lp_norm(p) + field.filtered(minus).lp_norm(p);
}

double triebel_norm(const FourierField& field, double t, double s, double p) {
    const int N = field.resolution();
    Symbol sym(N);
    for (int i1 = 0; i1 < N; ++i1) {
        const double k1 = i1 < N / 2 ? double(i1) : double(i1 - N);
        for (int i2 = 0; i2 < N; ++i2) {
            const double k2 = i2 < N / 2 ? double(i2) : double(i2 - N);
            const double full = std::pow(1.0 + k1 * k1 + k2 * k2, 0.5 * t);
            const double stable = std::pow(1.0 + k1 * k1, 0.5 * s);
            sym.values[std::size_t(i1) * N + i2] = full * stable;
        }
    }
    return field.filtered(sym).lp_norm(p);
}

double holder_proxy_norm(const FourierField& field, const FilterBank& bank, double u) {
    double best = 0.0;
    for (int n = 0; n <= bank.n_max(); ++n) {
        const double ln = field.filtered(bank.psi(n)).lp_norm(std::numeric_limits<double>::infinity());
        best = std::max(best, std::pow(2.0, double(n) * u) * ln);
    }
    return best;
}

}  // namespace aniso
