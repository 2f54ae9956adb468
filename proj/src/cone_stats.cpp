#include "anisolab/cone_stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "anisolab/errors.hpp"

namespace aniso {

namespace {

struct Extrema {
    double norm_plus = 0.0;
    double norm_minus = std::numeric_limits<double>::infinity();
    double norm_minusminus = 0.0;
    double det_target = std::numeric_limits<double>::infinity();
    double det_source = std::numeric_limits<double>::infinity();
    double margin = std::numeric_limits<double>::infinity();
};

// Fold one sampled derivative into the running extrema. dftr acts on
// frequency directions; df on tangent lines for the restricted
// determinant.
void fold_matrix(Extrema& ex, const Mat2& dftr, const Mat2& df, const ConeSystem& source,
                 const ConeSystem& target, int angle_grid) {
    for (int i = 0; i < angle_grid; ++i) {
        // Directions mod pi: stretch factors are even in xi.
        const double theta = M_PI * (double(i) + 0.5) / double(angle_grid);
        const Vec2 xi{std::cos(theta), std::sin(theta)};
        const Vec2 img = dftr.apply(xi);
        const double stretch = std::hypot(img[0], img[1]);

        if (target.margin_minus(img) < 0.0) {
            ex.norm_plus = std::max(ex.norm_plus, stretch);
        }
        if (source.margin_plus(xi) < 0.0) {
            ex.norm_minus = std::min(ex.norm_minus, stretch);
            ex.norm_minusminus = std::max(ex.norm_minusminus, stretch);
            ex.margin = std::min(ex.margin, target.margin_minus(img));
        }

        // Restricted determinant: lines l with normal xi inside the plus
        // cone; in 2-D the line direction is xi rotated by pi/2.
        const Vec2 line{-xi[1], xi[0]};
        const Vec2 dfl = df.apply(line);
        const double line_stretch = std::hypot(dfl[0], dfl[1]);
        if (target.margin_plus(xi) >= 0.0) {
            ex.det_target = std::min(ex.det_target, line_stretch);
        }
        if (source.margin_plus(xi) >= 0.0) {
            ex.det_source = std::min(ex.det_source, line_stretch);
        }
    }
}

ConeHyperbolicityStats finish(const Extrema& ex, int space_samples, int angle_grid) {
    ConeHyperbolicityStats st;
    st.norm_plus = ex.norm_plus;
    st.norm_minus = ex.norm_minus;
    st.norm_minusminus = ex.norm_minusminus;
    st.det_restricted_target = ex.det_target;
    st.det_restricted_source = ex.det_source;
    st.invariance_margin = ex.margin;
    st.cone_invariant = ex.margin > 0.0;
    st.space_samples = space_samples;
    st.angle_samples = angle_grid;
    if (!(st.norm_minus <= st.norm_minusminus)) {
        throw NumericError("cone stats inconsistent: no sampled direction outside the plus cone");
    }
    return st;
}

}  // namespace

ConeHyperbolicityStats cone_stats(const TorusMap& map, int iterate, const ConeSystem& source,
                                  const ConeSystem& target, int space_grid, int angle_grid) {
    if (iterate < 1) throw ConfigError("cone stats iterate must be >= 1");
    if (space_grid < 1 || angle_grid < 16) {
        throw ConfigError("cone stats grids too small");
    }
    Extrema ex;
    for (int i1 = 0; i1 < space_grid; ++i1) {
        for (int i2 = 0; i2 < space_grid; ++i2) {
            const Vec2 x{(double(i1) + 0.5) / space_grid, (double(i2) + 0.5) / space_grid};
            // F = T^{-iterate}: walk the backward orbit of x and chain the
            // forward derivative along it, then invert.
            Vec2 y = x;
            Mat2 jac_fwd{1.0, 0.0, 0.0, 1.0};
            for (int j = 0; j < iterate; ++j) {
                y = map.inverse_point(y);
                jac_fwd = jac_fwd * map.jacobian(y);
            }
            const Mat2 df = jac_fwd.inverse();
            fold_matrix(ex, df.transpose(), df, source, target, angle_grid);
        }
    }
    return finish(ex, space_grid * space_grid, angle_grid);
}

ConeHyperbolicityStats cone_stats_linear(const Mat2& dftr, const Mat2& df,
                                         const ConeSystem& source, const ConeSystem& target,
                                         int angle_grid) {
    Extrema ex;
    fold_matrix(ex, dftr, df, source, target, angle_grid);
    return finish(ex, 1, angle_grid);
}

ConeHyperbolicityStats linear_asymptotic_stats(const Mat2& dftr, const ConeSystem& source,
                                               const ConeSystem& target) {
    const double tr = dftr.trace();
    const double det = dftr.det();
    const double disc = tr * tr - 4.0 * det;
    if (disc <= 0.0) {
        throw NumericError("asymptotic cone stats need real distinct eigenvalues");
    }
    const double sq = std::sqrt(disc);
    const double l1 = 0.5 * (tr + sq);
    const double l2 = 0.5 * (tr - sq);
    const double big = std::abs(l1) >= std::abs(l2) ? l1 : l2;
    const double small = std::abs(l1) >= std::abs(l2) ? l2 : l1;
    if (std::abs(big) <= 1.0 || std::abs(small) >= 1.0) {
        throw NumericError("asymptotic cone stats need a hyperbolic matrix");
    }

    const auto eigvec = [&](double lambda) -> Vec2 {
        // (dftr - lambda I) v = 0; pick the better-conditioned row.
        const double a = dftr.a11 - lambda, b = dftr.a12;
        const double c = dftr.a21, d = dftr.a22 - lambda;
        Vec2 v;
        if (std::hypot(a, b) >= std::hypot(c, d)) {
            v = {-b, a};
        } else {
            v = {-d, c};
        }
        const double n = std::hypot(v[0], v[1]);
        if (n == 0.0) throw NumericError("degenerate eigenvector");
        return {v[0] / n, v[1] / n};
    };
    const Vec2 v_expand = eigvec(big);
    const Vec2 v_contract = eigvec(small);
    if (!source.contains_plus(v_contract)) {
        throw NumericError("contracting eigendirection not inside the source plus cone");
    }
    if (!target.contains_minus(v_expand)) {
        throw NumericError("expanding eigendirection not inside the target minus cone");
    }

    ConeHyperbolicityStats st;
    st.norm_plus = std::abs(small);
    st.norm_minus = std::abs(big);
    st.norm_minusminus = std::abs(big);
    st.det_restricted_target = std::abs(big);
    st.det_restricted_source = std::abs(big);
    st.invariance_margin = std::min(source.margin_plus(v_contract), target.margin_minus(v_expand));
    st.cone_invariant = true;
    st.space_samples = 1;
    st.angle_samples = 0;
    return st;
}

}  // namespace aniso
