#include "anisolab/chi_profile.hpp"

#include <cmath>

#include "anisolab/errors.hpp"

namespace aniso {

ChiProfile::ChiProfile(double sharpness) : sharpness_(sharpness) {
    if (!(sharpness > 0.0)) throw ConfigError("chi profile sharpness must be positive");
}

double ChiProfile::bump(double u) const {
    if (u <= 0.0) return 0.0;
    return std::exp(-sharpness_ / u);
}

double ChiProfile::smooth_step(double u) const {
    if (u <= 0.0) return 0.0;
    if (u >= 1.0) return 1.0;
    const double f = bump(u);
    const double g = bump(1.0 - u);
    return f / (f + g);
}

double ChiProfile::operator()(double x) const {
    return smooth_step(2.0 - x);
}

}  // namespace aniso
