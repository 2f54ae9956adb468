#include "anisolab/fourier_field.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>

#include "anisolab/errors.hpp"

namespace aniso {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;

// Plan cache. FFTW_UNALIGNED lifts the alignment requirement so plans can
// be reused on any std::vector buffer via fftw_execute_dft.
class PlanCache {
public:
    fftw_plan get(int rank, int n, int sign) {
        std::lock_guard<std::mutex> lock(mu_);
        const auto key = std::tuple<int, int, int>(rank, n, sign);
        auto it = plans_.find(key);
        if (it != plans_.end()) return it->second;
        std::vector<fftw_complex> a(rank == 2 ? size_t(n) * n : size_t(n));
        std::vector<fftw_complex> b(a.size());
        fftw_plan p = rank == 2
                          ? fftw_plan_dft_2d(n, n, a.data(), b.data(), sign,
                                             FFTW_ESTIMATE | FFTW_UNALIGNED)
                          : fftw_plan_dft_1d(n, a.data(), b.data(), sign,
                                             FFTW_ESTIMATE | FFTW_UNALIGNED);
        plans_[key] = p;
        return p;
    }

private:
    std::mutex mu_;
    std::map<std::tuple<int, int, int>, fftw_plan> plans_;
};

PlanCache& plan_cache() {
    static PlanCache c;
    return c;
}

void check_pow2(int n) {
    if (n < 4 || (n & (n - 1)) != 0)
        throw ConfigError("grid resolution must be a power of two >= 4");
}
}  // namespace

void fft2(int n, const cplx* in, cplx* out, int sign) {
    fftw_plan p = plan_cache().get(2, n, sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD);
    fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(const_cast<cplx*>(in)),
                     reinterpret_cast<fftw_complex*>(out));
}

void fft1(int n, const cplx* in, cplx* out, int sign) {
    fftw_plan p = plan_cache().get(1, n, sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD);
    fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(const_cast<cplx*>(in)),
                     reinterpret_cast<fftw_complex*>(out));
}

Symbol& Symbol::operator+=(const Symbol& o) {
    for (size_t i = 0; i < values.size(); ++i) values[i] += o.values[i];
    return *this;
}

Symbol Symbol::operator*(const Symbol& o) const {
    Symbol r(resolution);
    for (size_t i = 0; i < values.size(); ++i) r.values[i] = values[i] * o.values[i];
    return r;
}

std::vector<cplx> FourierField::spatial() const {
    std::vector<cplx> out(c_.size());
    fft2(n_, c_.data(), out.data(), +1);  // unnormalized backward = synthesis
    return out;
}

FourierField FourierField::from_spatial(int n, const std::vector<cplx>& samples) {
    check_pow2(n);
    if (samples.size() != size_t(n) * n)
        throw ConfigError("from_spatial: sample count does not match resolution");
    FourierField f(n);
    fft2(n, samples.data(), f.c_.data(), -1);
    const double scale = 1.0 / (double(n) * double(n));
    for (auto& v : f.c_) v *= scale;
    return f;
}

cplx FourierField::evaluate(const Vec2& x) const {
    cplx acc{0.0, 0.0};
    for (int i1 = 0; i1 < n_; ++i1) {
        const int k1 = freq_of_index(i1);
        // Horner-style inner sweep over k2 for each row.
        cplx row{0.0, 0.0};
        for (int i2 = 0; i2 < n_; ++i2) {
            const int k2 = freq_of_index(i2);
            const cplx c = c_[size_t(i1) * n_ + i2];
            if (c == cplx{0.0, 0.0}) continue;
            const double phase = kTwoPi * (double(k2) * x[1]);
            row += c * cplx{std::cos(phase), std::sin(phase)};
        }
        if (row == cplx{0.0, 0.0}) continue;
        const double phase = kTwoPi * (double(k1) * x[0]);
        acc += row * cplx{std::cos(phase), std::sin(phase)};
    }
    return acc;
}

double FourierField::l2_norm() const {
    double s = 0.0;
    for (const auto& v : c_) s += std::norm(v);
    return std::sqrt(s);
}

double FourierField::lp_norm(double p) const {
    const auto sam = spatial();
    if (std::isinf(p)) {
        double m = 0.0;
        for (const auto& v : sam) m = std::max(m, std::abs(v));
        return m;
    }
    double s = 0.0;
    for (const auto& v : sam) s += std::pow(std::abs(v), p);
    return std::pow(s / double(sam.size()), 1.0 / p);
}

double FourierField::energy_fraction_above(int kmax) const {
    double total = 0.0, high = 0.0;
    for (int i1 = 0; i1 < n_; ++i1)
        for (int i2 = 0; i2 < n_; ++i2) {
            const double e = std::norm(c_[size_t(i1) * n_ + i2]);
            total += e;
            if (std::max(std::abs(freq_of_index(i1)), std::abs(freq_of_index(i2))) > kmax)
                high += e;
        }
    return total == 0.0 ? 0.0 : high / total;
}

FourierField& FourierField::multiply(const Symbol& s) {
    if (s.resolution != n_) throw ConfigError("symbol resolution mismatch");
    for (size_t i = 0; i < c_.size(); ++i) c_[i] *= s.values[i];
    return *this;
}

FourierField FourierField::filtered(const Symbol& s) const {
    FourierField f = *this;
    f.multiply(s);
    return f;
}

FourierField& FourierField::operator+=(const FourierField& o) {
    for (size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
    return *this;
}

FourierField& FourierField::operator-=(const FourierField& o) {
    for (size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
    return *this;
}

FourierField& FourierField::operator*=(cplx z) {
    for (auto& v : c_) v *= z;
    return *this;
}

FourierField FourierField::translated(const Vec2& v) const {
    FourierField f(n_);
    for (int i1 = 0; i1 < n_; ++i1)
        for (int i2 = 0; i2 < n_; ++i2) {
            const double phase =
                -kTwoPi * (double(freq_of_index(i1)) * v[0] + double(freq_of_index(i2)) * v[1]);
            f.c_[size_t(i1) * n_ + i2] =
                c_[size_t(i1) * n_ + i2] * cplx{std::cos(phase), std::sin(phase)};
        }
    return f;
}

FourierField FourierField::spatial_product(const std::vector<double>& samples) const {
    if (samples.size() != c_.size())
        throw ConfigError("spatial_product: sample count does not match resolution");
    auto sam = spatial();
    for (size_t i = 0; i < sam.size(); ++i) sam[i] *= samples[i];
    return from_spatial(n_, sam);
}

FourierField FourierField::random_band_limited(int n, int kmax, Rng& rng) {
    check_pow2(n);
    if (kmax >= n / 2) throw ConfigError("random_band_limited: kmax must be below N/2");
    FourierField f(n);
    for (int k1 = -kmax; k1 <= kmax; ++k1)
        for (int k2 = -kmax; k2 <= kmax; ++k2)
            f.at(k1, k2) = cplx{rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
    const double nrm = f.l2_norm();
    f *= cplx{1.0 / nrm, 0.0};
    return f;
}

double kernel_l1_norm(const Symbol& s) {
    const int n = s.resolution;
    std::vector<cplx> buf(s.values.size());
    for (size_t i = 0; i < buf.size(); ++i) buf[i] = cplx{s.values[i], 0.0};
    std::vector<cplx> kernel(buf.size());
    fft2(n, buf.data(), kernel.data(), +1);
    double sum = 0.0;
    for (const auto& v : kernel) sum += std::abs(v);
    return sum / (double(n) * double(n));
}

}  // namespace aniso
