#include "anisolab/transfer.hpp"

#include <algorithm>
#include <cmath>

#include "anisolab/errors.hpp"

namespace aniso {

namespace {

constexpr int kTaps = 15;             // Kaiser-Bessel taps per dimension
constexpr double kHalfWidth = 7.5;    // support half-width in fine cells
constexpr int kOversample = 2;

double kb_kernel(double z, double beta) {
    const double u = 1.0 - (z / kHalfWidth) * (z / kHalfWidth);
    if (u <= 0.0) return 0.0;
    return std::cyl_bessel_i(0.0, beta * std::sqrt(u));
}

}  // namespace

TransferOperator::TransferOperator(const TorusMap& map, const Weight& weight, int resolution)
    : n_(resolution), map_(map) {
    if (n_ < 16 || (n_ & (n_ - 1)) != 0) {
        throw ConfigError("transfer operator needs a power-of-two resolution >= 16");
    }
    oversampled_ = kOversample * n_;
    width_ = kTaps;
    beta_ = M_PI * double(kTaps) * (1.0 - 1.0 / (2.0 * kOversample)) * 0.976;

    const int N = n_;
    const std::size_t total = std::size_t(N) * N;
    px_.resize(total);
    py_.resize(total);
    wre_.resize(total);
    weight_is_real_ = weight.is_real();
    if (!weight_is_real_) wim_.resize(total);
    for (int i1 = 0; i1 < N; ++i1) {
        for (int i2 = 0; i2 < N; ++i2) {
            const Vec2 y{double(i1) / N, double(i2) / N};
            const Vec2 p = map_.inverse_point(y);
            const std::size_t j = std::size_t(i1) * N + i2;
            px_[j] = p[0];
            py_[j] = p[1];
            const cplx g = weight.evaluate(map_, p);
            wre_[j] = g.real();
            if (!weight_is_real_) wim_[j] = g.imag();
        }
    }

    // Exact discrete deconvolution factors: DFT of the sampled kernel on
    // the oversampled grid.
    const int M = oversampled_;
    std::vector<cplx> kern(std::size_t(M), cplx{0.0, 0.0});
    for (int i = -kTaps / 2; i <= kTaps / 2; ++i) {
        kern[std::size_t((i % M + M) % M)] = cplx{kb_kernel(double(i), beta_), 0.0};
    }
    std::vector<cplx> spec(static_cast<std::size_t>(M));
    fft1(M, kern.data(), spec.data(), -1);
    deconv_.resize(std::size_t(M));
    for (int k = 0; k < M; ++k) {
        const double d = spec[std::size_t(k)].real();
        if (std::abs(d) < 1e-12) {
            throw NumericError("gridding kernel spectrum vanishes; widen the kernel");
        }
        deconv_[std::size_t(k)] = d;
    }

    // Per-point kernel taps, computed once: the inverse-image points never
    // change over the operator's lifetime.
    tap_base_x_.resize(total);
    tap_base_y_.resize(total);
    tap_wx_.resize(total * kTaps);
    tap_wy_.resize(total * kTaps);
    for (std::size_t j = 0; j < total; ++j) {
        const double cx = px_[j] * M;
        const double cy = py_[j] * M;
        const long bx = std::lround(cx);
        const long by = std::lround(cy);
        tap_base_x_[j] = bx;
        tap_base_y_[j] = by;
        for (int a = 0; a < kTaps; ++a) {
            tap_wx_[j * kTaps + std::size_t(a)] =
                kb_kernel(cx - double(bx + a - kTaps / 2), beta_);
            tap_wy_[j * kTaps + std::size_t(a)] =
                kb_kernel(cy - double(by + a - kTaps / 2), beta_);
        }
    }
}

std::vector<cplx> TransferOperator::evaluate_at_points(const FourierField& field) const {
    const int N = n_;
    const int M = oversampled_;
    const int h = N / 2;

    // Deconvolved, zero-padded spectrum on the fine grid.
    std::vector<cplx> fine(std::size_t(M) * M, cplx{0.0, 0.0});
    for (int k1 = -h; k1 < h; ++k1) {
        const int i1 = (k1 % M + M) % M;
        const double d1 = deconv_[std::size_t(i1)];
        for (int k2 = -h; k2 < h; ++k2) {
            const cplx c = field.at(k1, k2);
            if (c == cplx{0.0, 0.0}) continue;
            const int i2 = (k2 % M + M) % M;
            fine[std::size_t(i1) * M + i2] = c / (d1 * deconv_[std::size_t(i2)]);
        }
    }
    std::vector<cplx> u(std::size_t(M) * M);
    fft2(M, fine.data(), u.data(), +1);

    // Gather through the precomputed kernel taps.
    const std::size_t total = px_.size();
    std::vector<cplx> out(total);
    for (std::size_t j = 0; j < total; ++j) {
        const double* wx = tap_wx_.data() + j * kTaps;
        const double* wy = tap_wy_.data() + j * kTaps;
        const long bx = tap_base_x_[j];
        const long by = tap_base_y_[j];
        cplx acc{0.0, 0.0};
        for (int a = 0; a < kTaps; ++a) {
            if (wx[a] == 0.0) continue;
            const long ia = ((bx + a - kTaps / 2) % M + M) % M;
            cplx row{0.0, 0.0};
            const cplx* base = u.data() + std::size_t(ia) * M;
            for (int b = 0; b < kTaps; ++b) {
                if (wy[b] == 0.0) continue;
                const long ib = ((by + b - kTaps / 2) % M + M) % M;
                row += wy[b] * base[ib];
            }
            acc += wx[a] * row;
        }
        out[j] = acc;
    }
    return out;
}

FourierField TransferOperator::apply(const FourierField& field) const {
    if (field.resolution() != n_) {
        throw ConfigError("field resolution does not match the transfer operator grid");
    }
    std::vector<cplx> samples = evaluate_at_points(field);
    for (std::size_t j = 0; j < samples.size(); ++j) {
        const cplx g = weight_is_real_ ? cplx{wre_[j], 0.0} : cplx{wre_[j], wim_[j]};
        samples[j] *= g;
    }
    FourierField out = FourierField::from_spatial(n_, samples);
    last_high_band_ = out.energy_fraction_above(n_ / 4);
    if (last_high_band_ > aliasing_threshold) {
        throw NumericError("transfer-operator output exceeds the aliasing threshold: "
                           "raise the resolution");
    }
    return out;
}

std::vector<cplx> TransferOperator::assemble_matrix(int cutoff) const {
    const int N = n_;
    const int dim = matrix_dim(cutoff);
    if (2 * cutoff >= N / 2) {
        throw ConfigError("matrix cutoff too large for the grid resolution");
    }
    const double bytes = 16.0 * double(dim) * double(dim);
    if (bytes > 3.5e9) {
        throw ConfigError("matrix would exceed the memory budget");
    }
    const std::size_t total = px_.size();

    // Column for mode k: spatial samples g(p_j) e^{2 pi i k.p_j}. Sweep k2
    // within each k1 via per-point phase increments; one forward transform
    // per column projects onto the mode box.
    std::vector<cplx> matrix(std::size_t(dim) * dim, cplx{0.0, 0.0});
    std::vector<cplx> stepx(total), stepy(total), rowbase(total), col(total), spec(total);
    for (std::size_t j = 0; j < total; ++j) {
        stepx[j] = std::polar(1.0, 2.0 * M_PI * px_[j]);
        stepy[j] = std::polar(1.0, 2.0 * M_PI * py_[j]);
        const cplx g = weight_is_real_ ? cplx{wre_[j], 0.0} : cplx{wre_[j], wim_[j]};
        // Start the sweep at k = (-cutoff, -cutoff).
        rowbase[j] = g * std::polar(1.0, -2.0 * M_PI * cutoff * (px_[j] + py_[j]));
    }
    const double inv_total = 1.0 / double(total);
    for (int k1 = -cutoff; k1 <= cutoff; ++k1) {
        col = rowbase;
        for (int k2 = -cutoff; k2 <= cutoff; ++k2) {
            fft2(N, col.data(), spec.data(), -1);
            const int col_index = (k1 + cutoff) * (2 * cutoff + 1) + (k2 + cutoff);
            cplx* out = matrix.data() + std::size_t(col_index) * dim;
            for (int m1 = -cutoff; m1 <= cutoff; ++m1) {
                const std::size_t r1 = std::size_t((m1 % N + N) % N);
                for (int m2 = -cutoff; m2 <= cutoff; ++m2) {
                    const std::size_t r2 = std::size_t((m2 % N + N) % N);
                    out[(m1 + cutoff) * (2 * cutoff + 1) + (m2 + cutoff)] =
                        spec[r1 * N + r2] * inv_total;
                }
            }
            if (k2 < cutoff) {
                for (std::size_t j = 0; j < total; ++j) col[j] *= stepy[j];
            }
        }
        if (k1 < cutoff) {
            for (std::size_t j = 0; j < total; ++j) rowbase[j] *= stepx[j];
        }
    }
    return matrix;
}

ProjectorReport finite_rank_projector(const FourierField& field, const FilterBank& bank, int n0,
                                      const std::vector<double>& window) {
    if (n0 < 0 || n0 > bank.n_max()) {
        throw ConfigError("projector level must lie in [0, n_max]");
    }
    const int N = field.resolution();
    const Symbol low = bank.low_pass(n0);

    const auto project = [&](const FourierField& f) {
        FourierField base = f.filtered(low);
        if (window.empty()) return base;
        return base.spatial_product(window);
    };

    ProjectorReport rep;
    rep.projected = project(field);
    const FourierField twice = project(rep.projected);
    FourierField defect = twice;
    defect -= rep.projected;
    const double scale = rep.projected.l2_norm();
    rep.idempotence_defect = scale > 0.0 ? defect.l2_norm() / scale : 0.0;

    const double floor_level = 1e-14 * std::max(scale, 1e-300);
    int rank = 0;
    for (const cplx& c : rep.projected.coefficients()) {
        if (std::abs(c) > floor_level) ++rank;
    }
    rep.realized_rank = rank;
    const double radius = std::pow(2.0, double(n0) + 1.0);
    int bound = 0;
    const int h = N / 2;
    for (int k1 = -h; k1 < h; ++k1) {
        for (int k2 = -h; k2 < h; ++k2) {
            if (std::hypot(double(k1), double(k2)) <= radius) ++bound;
        }
    }
    rep.rank_bound = bound;
    return rep;
}

}  // namespace aniso
