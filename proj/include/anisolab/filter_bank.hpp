#pragma once

#include <vector>

#include "anisolab/chi_profile.hpp"
#include "anisolab/fourier_field.hpp"

namespace aniso {

// Dyadic Paley-Littlewood filter bank on the N x N frequency lattice.
// Block n lives on the annulus 2^{n-1} <= |xi| <= 2^{n+1}; block 0 is the
// ball |xi| <= 2. The "fat" companions are 1 on the support of the sharp
// block of the same index and vanish outside a three-octave window; they
// implement the reproducing property psi_fat * psi = psi.
class FilterBank {
public:
    FilterBank(int resolution, ChiProfile chi = ChiProfile());

    int resolution() const { return n_; }
    int n_max() const { return n_max_; }
    const ChiProfile& chi() const { return chi_; }

    const Symbol& psi(int n) const;
    const Symbol& psi_fat(int l) const;

    // sum_{n <= n0} psi_n; equals 1 on |xi| <= 2^{n0} by telescoping.
    Symbol low_pass(int n0) const;

    // Scalar radial profiles (shared with the 1-D chart filters).
    static double psi_value(const ChiProfile& chi, int n, double r);
    static double psi_fat_value(const ChiProfile& chi, int l, double r);

private:
    int n_;
    int n_max_;
    ChiProfile chi_;
    std::vector<Symbol> psi_;
    std::vector<Symbol> psi_fat_;
};

}  // namespace aniso
