#include "anisolab/splitting.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "anisolab/errors.hpp"

namespace aniso {

namespace {

double pow2(int e) { return std::ldexp(1.0, e); }

// Least-squares slope of y against x.
double ls_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    if (n < 2) return 0.0;
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double d = static_cast<double>(n) * sxx - sx * sx;
    if (std::abs(d) < 1e-300) return 0.0;
    return (static_cast<double>(n) * sxy - sx * sy) / d;
}

}  // namespace

bool hook_relation(int l, int tau, int n, int sigma, const ConeHyperbolicityStats& stats,
                   int m0) {
    const double two_n = pow2(n);
    if (tau > 0 && sigma > 0) {
        return two_n <= stats.norm_plus * pow2(l + 4);
    }
    if (tau < 0 && sigma < 0) {
        return pow2(m0) <= two_n && two_n <= pow2(l + 4) * stats.norm_minusminus;
    }
    if (tau > 0 && sigma < 0) {
        return pow2(m0) <= two_n && two_n <= pow2(l + 4) * stats.norm_minusminus;
    }
    // tau < 0, sigma > 0: never hooks.
    return false;
}

bool hook_relation_1d(int l_s, int n_s, const ConeHyperbolicityStats& stats) {
    return stats.norm_minus * pow2(l_s - 4) <= pow2(n_s);
}

SplitResult split_bounded_compact(const OperatorAction& op, const FourierField& phi,
                                  const FilterBank& bank, const ConeSystem& source,
                                  const ConeSystem& target, const ConeHyperbolicityStats& stats,
                                  int m0) {
    const int n_max = bank.n_max();
    const int levels = n_max + 1;
    const int sectors[2] = {+1, -1};

    // Block images y_{l,tau} = op(psi_{source,l,tau} phi), computed once.
    std::vector<FourierField> images;
    images.reserve(static_cast<std::size_t>(levels) * 2);
    for (int l = 0; l <= n_max; ++l) {
        for (int si = 0; si < 2; ++si) {
            FourierField block = phi.filtered(source.cone_dyadic_symbol(bank, l, sectors[si], false));
            images.push_back(op(block));
        }
    }

    SplitResult result;
    result.bounded = FourierField(phi.resolution());
    result.compact = FourierField(phi.resolution());

    for (int n = 0; n <= n_max; ++n) {
        for (int gi = 0; gi < 2; ++gi) {
            const int sigma = sectors[gi];
            FourierField hooked_sum(phi.resolution());
            FourierField free_sum(phi.resolution());
            bool any_hooked = false;
            bool any_free = false;
            for (int l = 0; l <= n_max; ++l) {
                for (int si = 0; si < 2; ++si) {
                    const int tau = sectors[si];
                    const FourierField& y = images[static_cast<std::size_t>(l) * 2 + si];
                    ++result.total_pairs;
                    if (hook_relation(l, tau, n, sigma, stats, m0)) {
                        hooked_sum += y;
                        any_hooked = true;
                        ++result.hooked_pairs;
                    } else {
                        free_sum += y;
                        any_free = true;
                    }
                }
            }
            const Symbol out_sym = target.cone_dyadic_symbol(bank, n, sigma, false);
            if (any_hooked) result.bounded += hooked_sum.filtered(out_sym);
            if (any_free) result.compact += free_sum.filtered(out_sym);
        }
    }
    return result;
}

double structural_constant(double s) { return 1.0 / (1.0 + std::abs(s)); }

LYBound ly_theoretical_bound(const LYBoundInputs& in) {
    if (!(in.p >= 1.0)) {
        throw ConfigError("Lasota-Yorke bound requires p >= 1");
    }
    LYBound out;
    out.c_structural = structural_constant(in.s);
    out.c_f_gamma_s = std::abs(in.s) * in.df_leaf_inv_cr * in.det_leaf_inv_cr;

    const double det_target = in.stats.det_restricted_target;
    if (!(det_target > 0.0)) {
        throw NumericError("nonpositive target-cone determinant in Lasota-Yorke bound");
    }
    const double det_root = std::pow(det_target, 1.0 / in.p);

    const double main_term = out.c_f_gamma_s * in.f_comp_cr * std::pow(in.stats.norm_plus, in.t) +
                             in.f_sup * std::pow(in.stats.norm_minus, in.s) *
                                 std::pow(in.stats.norm_minusminus, in.t);
    out.nu_b = out.c_structural * main_term / det_root;

    // Refined bound needs the auxiliary hyperbolicity conditions.
    std::string reason;
    if (!(in.stats.det_restricted_source > 1.0)) {
        reason = "source-cone determinant not larger than 1";
    } else if (!(in.stats.norm_minusminus >= in.stats.norm_minus && in.stats.norm_minus > 1.0)) {
        reason = "unstable norms not ordered above 1";
    } else if (!(in.stats.norm_plus < 1.0)) {
        reason = "stable norm not below 1";
    } else if (!(out.c_f_gamma_s <= 2.0)) {
        reason = "leaf constant exceeds 2";
    }
    if (reason.empty()) {
        out.refined_available = true;
        const double refined_term = in.f_comp_cr * std::pow(in.stats.norm_plus, in.t) +
                                    in.f_sup * std::pow(in.stats.norm_minus, in.s + in.t);
        out.nu_b_refined = out.c_structural * refined_term / det_root;
    } else {
        out.refined_available = false;
        out.withheld_reason = reason;
    }
    return out;
}

LeafCocycleConstants leaf_cocycle_constants(const TorusMap& map, int iterate,
                                            const Weight& weight, const AdmissibleLeaf& leaf,
                                            int samples) {
    if (iterate < 0) throw ConfigError("leaf cocycle iterate must be nonnegative");
    if (samples < 5) samples = 5;

    const double length = leaf.length();
    const double h = length / static_cast<double>(samples - 1);

    std::vector<cplx> inv_stretch(samples);  // 1 / |DF tau|, the leaf derivative inverse
    std::vector<cplx> f_comp(samples);       // f_m(T^m w) along the leaf

    for (int i = 0; i < samples; ++i) {
        const double u = leaf.x0() + static_cast<double>(i) * h;
        const Vec2 w = leaf.point(u);

        // Backward orbit w = w_0, w_{j+1} = T^{-1} w_j down to w_m = T^{-m} w.
        // D(T^m) at w_m chains the forward Jacobians; DF = its inverse.
        Mat2 jac_fwd{1.0, 0.0, 0.0, 1.0};
        Vec2 y = w;
        for (int j = 0; j < iterate; ++j) {
            y = map.inverse_point(y);
            jac_fwd = jac_fwd * map.jacobian(y);
        }
        const Mat2 df = jac_fwd.inverse();

        const double gp = leaf.gamma_deriv(1, u);
        const double tnorm = std::hypot(1.0, gp);
        const Vec2 tangent{1.0 / tnorm, gp / tnorm};
        const Vec2 img = df.apply(tangent);
        const double stretch = std::hypot(img[0], img[1]);
        if (!(stretch > 1e-300)) {
            throw NumericError("degenerate leaf stretch in cocycle constants");
        }
        inv_stretch[i] = cplx{1.0 / stretch, 0.0};

        // f_m composed with F^{-1} = T^m evaluates the weight along the
        // forward orbit w, T w, ..., T^m w (first factor at T w).
        cplx prod{1.0, 0.0};
        Vec2 z = w;
        for (int j = 1; j <= iterate; ++j) {
            z = map.evaluate(z);
            prod *= weight.evaluate(map, z);
        }
        f_comp[i] = prod;
    }

    auto cr_proxy = [&](const std::vector<cplx>& v) {
        double sup0 = 0.0;
        for (const cplx& x : v) sup0 = std::max(sup0, std::abs(x));
        double sup1 = 0.0;
        for (int i = 1; i + 1 < samples; ++i) {
            sup1 = std::max(sup1, std::abs((v[i + 1] - v[i - 1]) / (2.0 * h)));
        }
        double sup2 = 0.0;
        for (int i = 1; i + 1 < samples; ++i) {
            sup2 = std::max(sup2, std::abs((v[i + 1] - 2.0 * v[i] + v[i - 1]) / (h * h)));
        }
        return std::max({sup0, sup1, sup2});
    };

    LeafCocycleConstants out;
    out.df_leaf_inv_cr = cr_proxy(inv_stretch);
    out.det_leaf_inv_cr = out.df_leaf_inv_cr;  // one-dimensional leaves
    out.f_comp_cr = cr_proxy(f_comp);
    for (const cplx& x : f_comp) out.f_sup = std::max(out.f_sup, std::abs(x));
    return out;
}

LYGrowthReport ly_measured_growth(const TorusMap& map, const Weight& weight,
                                  const LYGrowthOptions& opt,
                                  const std::vector<AdmissibleLeaf>& leaves,
                                  const ChiProfile& chi) {
    validate_aniso_params(opt.params);
    if (opt.probe_modes.empty()) throw ConfigError("measured growth needs at least one probe mode");
    if (opt.m_max < 1) throw ConfigError("measured growth needs m_max >= 1");

    LYGrowthReport report;

    const bool constant_weight = weight.kind() == Weight::Kind::Constant;
    const bool unit_jacobian_weight =
        weight.is_reciprocal_jacobian() && map.is_linear() && std::abs(map.linear_part().det()) == 1;
    const bool mode_path = !opt.force_grid && map.is_linear() && (constant_weight || unit_jacobian_weight);
    report.used_mode_path = mode_path;

    std::vector<double> xs(static_cast<std::size_t>(opt.m_max) + 1);
    for (int m = 0; m <= opt.m_max; ++m) xs[static_cast<std::size_t>(m)] = m;

    for (std::size_t pi = 0; pi < opt.probe_modes.size(); ++pi) {
        std::vector<double> norms;
        norms.reserve(static_cast<std::size_t>(opt.m_max) + 1);

        if (mode_path) {
            // L e_k = c e_{B k} with B = (A^{tr})^{-1}; iterate the mode exactly.
            const IMat2 ainv = map.linear_inverse();
            const IMat2 b{ainv.a11, ainv.a21, ainv.a12, ainv.a22};  // transpose of A^{-1}
            cplx amp{1.0, 0.0};
            cplx step_amp{1.0, 0.0};
            if (constant_weight) step_amp = weight.constant_value();
            IVec2 k = opt.probe_modes[pi];
            for (int m = 0; m <= opt.m_max; ++m) {
                const NormReport nr = u_norm_mode(k, amp, leaves, opt.params, chi);
                norms.push_back(nr.value);
                k = b.apply(k);
                amp *= step_amp;
            }
        } else {
            TransferOperator op(map, weight, opt.resolution);
            FilterBank bank(opt.resolution);
            FourierField field(opt.resolution);
            field.at(static_cast<int>(opt.probe_modes[pi][0]),
                     static_cast<int>(opt.probe_modes[pi][1])) = cplx{1.0, 0.0};
            for (int m = 0; m <= opt.m_max; ++m) {
                const NormReport nr = u_norm(field, bank, leaves, opt.params, chi);
                norms.push_back(nr.value);
                if (m < opt.m_max) field = op.apply(field);
            }
        }

        std::vector<double> logs(norms.size());
        for (std::size_t i = 0; i < norms.size(); ++i) {
            if (!(norms[i] > 0.0)) throw NumericError("vanishing probe norm in measured growth");
            logs[i] = std::log(norms[i]);
        }

        for (int m = 0; m <= opt.m_max; ++m) {
            ProbeGrowthRow row;
            row.probe = static_cast<int>(pi);
            row.m = m;
            row.norm = norms[static_cast<std::size_t>(m)];
            row.step_ratio = m == 0 ? 0.0
                                    : norms[static_cast<std::size_t>(m)] /
                                          norms[static_cast<std::size_t>(m) - 1];
            report.growth.push_back(row);
        }

        ProbeFit fit;
        fit.probe = static_cast<int>(pi);
        fit.fitted_rate = std::exp(ls_slope(xs, logs));
        fit.endpoint_rate = std::pow(norms.back() / norms.front(), 1.0 / opt.m_max);
        report.fits.push_back(fit);
        report.max_fitted_rate = std::max(report.max_fitted_rate, fit.fitted_rate);
    }
    return report;
}

TailDecayReport compact_tail_decay(const OperatorAction& op, const FourierField& probe,
                                   const FilterBank& bank, const ConeSystem& source,
                                   const ConeSystem& target,
                                   const ConeHyperbolicityStats& stats, int m0,
                                   const AnisoParams& params,
                                   const std::vector<AdmissibleLeaf>& leaves,
                                   const ChiProfile& chi) {
    validate_aniso_params(params);
    const SplitResult split = split_bounded_compact(op, probe, bank, source, target, stats, m0);

    TailDecayReport rpt;
    rpt.required_exponent = (params.r - 1.0) - 2.0 * params.delta - (params.t - params.s);

    std::vector<double> xs;
    std::vector<double> ys;
    for (int n0 = 1; n0 < bank.n_max(); ++n0) {
        // (id - R_{n0}) keeps the part of the compact piece above level n0.
        FourierField tail = split.compact;
        tail -= split.compact.filtered(bank.low_pass(n0));
        const NormReport nr = u_norm(tail, bank, leaves, params, chi);
        TailDecayRow row;
        row.n0 = n0;
        row.tail_norm = nr.value;
        rpt.rows.push_back(row);
        if (nr.value > 0.0) {
            xs.push_back(static_cast<double>(n0));
            ys.push_back(std::log2(nr.value));
        }
    }
    if (xs.size() >= 2) rpt.fitted_exponent = -ls_slope(xs, ys);
    return rpt;
}

}  // namespace aniso
