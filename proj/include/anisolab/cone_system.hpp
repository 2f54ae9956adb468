#pragma once

#include "anisolab/chi_profile.hpp"
#include "anisolab/filter_bank.hpp"
#include "anisolab/fourier_field.hpp"

namespace aniso {

// Symmetric closed sector of directions: all xi with the angle between
// xi (mod sign) and the axis at most half_aperture.
struct ConeSpec {
    double axis_angle = 0.0;      // radians
    double half_aperture = 0.0;   // radians, in (0, pi/2)
};

// Pair of disjoint frequency cones with a smooth angular partition
// phi_plus + phi_minus = 1, phi_plus = 1 on the plus cone and 0 on the
// minus cone. The partition is built from the shared chi profile composed
// with angular distances to the two sectors.
class ConeSystem {
public:
    ConeSystem(ConeSpec plus, ConeSpec minus, ChiProfile chi = ChiProfile());

    const ConeSpec& plus() const { return plus_; }
    const ConeSpec& minus() const { return minus_; }

    // Angular distance (mod pi) from direction angle theta to each sector;
    // zero inside.
    double distance_plus(double theta) const { return sector_distance(theta, plus_); }
    double distance_minus(double theta) const { return sector_distance(theta, minus_); }

    // Signed containment margin: aperture - |angle to axis| (mod pi).
    double margin_plus(const Vec2& dir) const { return sector_margin(dir, plus_); }
    double margin_minus(const Vec2& dir) const { return sector_margin(dir, minus_); }
    bool contains_plus(const Vec2& dir) const { return margin_plus(dir) >= 0.0; }
    bool contains_minus(const Vec2& dir) const { return margin_minus(dir) >= 0.0; }

    // Smooth angular partition evaluated on a direction angle. sigma = +1
    // selects phi_plus, sigma = -1 selects phi_minus. The zero frequency is
    // assigned to the plus factor by convention.
    double phi_dir(double theta, int sigma) const;
    double phi_at(const IVec2& k, int sigma) const;

    // phi_sigma(xi/|xi|) tabulated on the lattice.
    Symbol angular_symbol(int resolution, int sigma) const;

    // Cone-dyadic block: psi_l(|xi|) phi_sigma(xi/|xi|); fat variant uses
    // the enlarged radial factor.
    Symbol cone_dyadic_symbol(const FilterBank& bank, int level, int sigma,
                              bool fat = false) const;

    // Sobolev cone weight (1+|xi|^2)^{t/2} phi_sigma(xi/|xi|).
    Symbol weight_symbol(int resolution, double t, int sigma) const;

private:
    static double wrap_mod_pi(double a);  // into (-pi/2, pi/2]
    static double sector_distance(double theta, const ConeSpec& s);
    static double sector_margin(const Vec2& dir, const ConeSpec& s);

    ConeSpec plus_;
    ConeSpec minus_;
    ChiProfile chi_;
};

}  // namespace aniso
