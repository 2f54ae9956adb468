#include "anisolab/filter_bank.hpp"

#include <cmath>

#include "anisolab/errors.hpp"

namespace aniso {

double FilterBank::psi_value(const ChiProfile& chi, int n, double r) {
    if (n == 0) return chi(r);
    return chi(std::ldexp(r, -n)) - chi(std::ldexp(r, -n + 1));
}

double FilterBank::psi_fat_value(const ChiProfile& chi, int l, double r) {
    if (l == 0) return chi(std::ldexp(r, -1));
    return chi(std::ldexp(r, -l - 1)) - chi(std::ldexp(r, -l + 2));
}

FilterBank::FilterBank(int resolution, ChiProfile chi)
    : n_(resolution), chi_(chi) {
    if (resolution < 16 || (resolution & (resolution - 1)) != 0)
        throw ConfigError("filter bank resolution must be a power of two >= 16");
    // Highest block fully representable on the lattice: support of psi_n
    // reaches 2^{n+1}, which must stay within the axis Nyquist N/2.
    n_max_ = 0;
    while ((2 << (n_max_ + 1)) <= resolution / 2) ++n_max_;
    // n_max satisfies 2^{n_max+1} = N/2, i.e. n_max = log2(N) - 2.

    psi_.reserve(size_t(n_max_) + 1);
    psi_fat_.reserve(size_t(n_max_) + 1);
    for (int lvl = 0; lvl <= n_max_; ++lvl) {
        Symbol s(n_), f(n_);
        for (int i1 = 0; i1 < n_; ++i1) {
            const int k1 = i1 < n_ / 2 ? i1 : i1 - n_;
            for (int i2 = 0; i2 < n_; ++i2) {
                const int k2 = i2 < n_ / 2 ? i2 : i2 - n_;
                const double r = std::hypot(double(k1), double(k2));
                s.values[size_t(i1) * n_ + i2] = psi_value(chi_, lvl, r);
                f.values[size_t(i1) * n_ + i2] = psi_fat_value(chi_, lvl, r);
            }
        }
        psi_.push_back(std::move(s));
        psi_fat_.push_back(std::move(f));
    }
}

const Symbol& FilterBank::psi(int n) const {
    if (n < 0 || n > n_max_) throw ConfigError("filter level out of range");
    return psi_[size_t(n)];
}

const Symbol& FilterBank::psi_fat(int l) const {
    if (l < 0 || l > n_max_) throw ConfigError("filter level out of range");
    return psi_fat_[size_t(l)];
}

Symbol FilterBank::low_pass(int n0) const {
    if (n0 < 0 || n0 > n_max_) throw ConfigError("low_pass level out of range");
    Symbol out(n_);
    for (int lvl = 0; lvl <= n0; ++lvl) out += psi_[size_t(lvl)];
    return out;
}

}  // namespace aniso
