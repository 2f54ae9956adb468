#include "anisolab/cone_system.hpp"

#include <cmath>

#include "anisolab/errors.hpp"

namespace aniso {

namespace {
constexpr double kPi = 3.1415926535897932384626433832795;
}

ConeSystem::ConeSystem(ConeSpec plus, ConeSpec minus, ChiProfile chi)
    : plus_(plus), minus_(minus), chi_(chi) {
    if (plus_.half_aperture <= 0.0 || plus_.half_aperture >= kPi / 2 ||
        minus_.half_aperture <= 0.0 || minus_.half_aperture >= kPi / 2)
        throw ConfigError("cone apertures must lie in (0, pi/2)");
    const double sep = std::abs(wrap_mod_pi(plus_.axis_angle - minus_.axis_angle));
    if (sep <= plus_.half_aperture + minus_.half_aperture)
        throw ConfigError("cones overlap: axis separation must exceed the aperture sum");
}

double ConeSystem::wrap_mod_pi(double a) {
    // Directions are identified with their negatives; reduce to (-pi/2, pi/2].
    a = std::fmod(a, kPi);
    if (a > kPi / 2) a -= kPi;
    if (a <= -kPi / 2) a += kPi;
    return a;
}

double ConeSystem::sector_distance(double theta, const ConeSpec& s) {
    const double d = std::abs(wrap_mod_pi(theta - s.axis_angle));
    return std::max(0.0, d - s.half_aperture);
}

double ConeSystem::sector_margin(const Vec2& dir, const ConeSpec& s) {
    const double theta = std::atan2(dir[1], dir[0]);
    return s.half_aperture - std::abs(wrap_mod_pi(theta - s.axis_angle));
}

double ConeSystem::phi_dir(double theta, int sigma) const {
    const double dp = sector_distance(theta, plus_);
    const double dm = sector_distance(theta, minus_);
    // Inside the plus sector dp = 0 and dm > 0, so the ramp argument is 1;
    // inside the minus sector it is 0. The chi bridge interpolates on the
    // gap, where dp + dm > 0 by the disjointness check.
    const double p = chi_.smooth_step(dm / (dp + dm));
    return sigma > 0 ? p : 1.0 - p;
}

double ConeSystem::phi_at(const IVec2& k, int sigma) const {
    if (k[0] == 0 && k[1] == 0) return sigma > 0 ? 1.0 : 0.0;
    return phi_dir(std::atan2(double(k[1]), double(k[0])), sigma);
}

Symbol ConeSystem::angular_symbol(int resolution, int sigma) const {
    Symbol s(resolution);
    for (int i1 = 0; i1 < resolution; ++i1) {
        const int k1 = i1 < resolution / 2 ? i1 : i1 - resolution;
        for (int i2 = 0; i2 < resolution; ++i2) {
            const int k2 = i2 < resolution / 2 ? i2 : i2 - resolution;
            s.values[size_t(i1) * resolution + i2] = phi_at({k1, k2}, sigma);
        }
    }
    return s;
}

Symbol ConeSystem::cone_dyadic_symbol(const FilterBank& bank, int level, int sigma,
                                      bool fat) const {
    const Symbol& radial = fat ? bank.psi_fat(level) : bank.psi(level);
    return radial * angular_symbol(bank.resolution(), sigma);
}

Symbol ConeSystem::weight_symbol(int resolution, double t, int sigma) const {
    Symbol s = angular_symbol(resolution, sigma);
    for (int i1 = 0; i1 < resolution; ++i1) {
        const int k1 = i1 < resolution / 2 ? i1 : i1 - resolution;
        for (int i2 = 0; i2 < resolution; ++i2) {
            const int k2 = i2 < resolution / 2 ? i2 : i2 - resolution;
            const double w =
                std::pow(1.0 + double(k1) * k1 + double(k2) * k2, t / 2.0);
            s.values[size_t(i1) * resolution + i2] *= w;
        }
    }
    return s;
}

}  // namespace aniso
