#pragma once

namespace aniso {

// Smooth cutoff profile used by every filter in the project: value 1 on
// (-inf, 1], value 0 on [2, inf), and a fixed C-infinity bridge on (1, 2)
// built from u -> exp(-a/u). All dyadic, cone, and window symbols derive
// from this single profile so that support bookkeeping stays exact.
class ChiProfile {
public:
    explicit ChiProfile(double sharpness = 1.0);

    // The step itself: chi(x) = 1 for x <= 1, 0 for x >= 2.
    double operator()(double x) const;

    // Monotone C-infinity ramp: 0 for u <= 0, 1 for u >= 1, strictly
    // increasing in between, flat to all orders at both ends.
    double smooth_step(double u) const;

    double sharpness() const { return sharpness_; }

private:
    double bump(double u) const;  // exp(-a/u) for u > 0, else 0
    double sharpness_;
};

}  // namespace aniso
