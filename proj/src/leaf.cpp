#include "anisolab/leaf.hpp"

#include <cmath>

#include "anisolab/errors.hpp"

namespace aniso {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
}

AdmissibleLeaf::AdmissibleLeaf(double x0, double length, double offset, double slope,
                               std::vector<LeafTrigTerm> wiggle)
    : x0_(x0), length_(length), offset_(offset), slope_(slope), wiggle_(std::move(wiggle)) {
    if (!(length > 0.0)) throw ConfigError("leaf chart length must be positive");
}

double AdmissibleLeaf::gamma(double x) const {
    double y = offset_ + slope_ * x;
    for (const auto& t : wiggle_) {
        const double ph = kTwoPi * t.freq * x;
        y += t.cos_coeff * std::cos(ph) + t.sin_coeff * std::sin(ph);
    }
    return y;
}

double AdmissibleLeaf::gamma_deriv(int order, double x) const {
    if (order == 0) return gamma(x);
    double y = (order == 1) ? slope_ : 0.0;
    for (const auto& t : wiggle_) {
        const double w = kTwoPi * t.freq;
        const double ph = w * x;
        const double amp = std::pow(w, order);
        // cos -> -sin -> -cos -> sin cycle under differentiation.
        double c, s;
        switch (order % 4) {
            case 0: c = std::cos(ph); s = std::sin(ph); break;
            case 1: c = -std::sin(ph); s = std::cos(ph); break;
            case 2: c = -std::cos(ph); s = -std::sin(ph); break;
            default: c = std::sin(ph); s = -std::cos(ph); break;
        }
        y += amp * (t.cos_coeff * c + t.sin_coeff * s);
    }
    return y;
}

AdmissibleLeaf AdmissibleLeaf::translated(const Vec2& v) const {
    // Shifted graph: gamma_new(x) = gamma(x + v1) - v2 over [x0 - v1, ...).
    // Trig terms pick up a phase: cos(w(x+v1)) = cos(wv1)cos(wx) - sin(wv1)sin(wx).
    std::vector<LeafTrigTerm> terms;
    terms.reserve(wiggle_.size());
    for (const auto& t : wiggle_) {
        const double ph = kTwoPi * t.freq * v[0];
        const double c = std::cos(ph), s = std::sin(ph);
        LeafTrigTerm nt;
        nt.freq = t.freq;
        nt.cos_coeff = t.cos_coeff * c + t.sin_coeff * s;
        nt.sin_coeff = -t.cos_coeff * s + t.sin_coeff * c;
        terms.push_back(nt);
    }
    return AdmissibleLeaf(x0_ - v[0], length_, offset_ + slope_ * v[0] - v[1], slope_,
                          std::move(terms));
}

double AdmissibleLeaf::cr_proxy_norm(int orders) const {
    const int grid = 257;
    double m = 0.0;
    for (int j = 0; j <= orders; ++j)
        for (int i = 0; i < grid; ++i) {
            const double x = x0_ + length_ * double(i) / double(grid - 1);
            m = std::max(m, std::abs(gamma_deriv(j, x)));
        }
    return m;
}

LeafValidation validate_leaf(const AdmissibleLeaf& leaf, const ConeSystem& cones,
                             double cone_constant, double r) {
    LeafValidation v;

    // Chord sample: all pairs from the depth-3 dyadic points, plus
    // consecutive chords at depth 7, plus the endpoint chord.
    double worst = 1e9;
    const auto chord_margin = [&](double xa, double xb) {
        const Vec2 a = leaf.point(xa), b = leaf.point(xb);
        const Vec2 normal{-(b[1] - a[1]), b[0] - a[0]};
        return cones.margin_plus(normal);
    };
    const double x0 = leaf.x0(), L = leaf.length();
    const int coarse = 8;
    for (int i = 0; i <= coarse; ++i)
        for (int j = i + 1; j <= coarse; ++j)
            worst = std::min(worst, chord_margin(x0 + L * i / coarse, x0 + L * j / coarse));
    const int fine = 128;
    for (int i = 0; i < fine; ++i)
        worst = std::min(worst,
                         chord_margin(x0 + L * i / fine, x0 + L * (i + 1) / fine));
    v.worst_chord_margin = worst;

    const int orders = (int)std::ceil(r);
    v.cr_norm = leaf.cr_proxy_norm(orders);
    v.cr_bound = kLeafNormSlack * cone_constant;
    v.cr_ratio = v.cr_norm / cone_constant;

    if (worst <= 0.0) {
        v.failure = "chord normal leaves the plus cone";
        return v;
    }
    if (v.cr_norm > v.cr_bound) {
        v.failure = "graph derivative norm exceeds the family allowance";
        return v;
    }
    v.admissible = true;
    return v;
}

std::vector<AdmissibleLeaf> sample_leaf_family(const ConeSystem& cones,
                                               const LeafFamilyOptions& opts, double r) {
    if (opts.count < 1) throw ConfigError("leaf family count must be positive");
    Rng rng(opts.seed);
    std::vector<AdmissibleLeaf> out;
    out.reserve(size_t(opts.count));
    int attempts = 0;
    while ((int)out.size() < opts.count) {
        if (++attempts > 100 * opts.count)
            throw NumericError("sample_leaf_family: rejection sampling exhausted; "
                               "cone or wiggle parameters leave no admissible leaves");
        const int i = (int)out.size();
        // Stratified offsets cover the torus deterministically; jitter on top.
        const double offset = fract(double(i) / double(opts.count) + 0.25 * rng.uniform());
        const double x0 = fract(0.618 * double(i) + 0.2 * rng.uniform());
        const double slope =
            opts.slope + (opts.slope_jitter == 0.0 ? 0.0
                                                   : rng.uniform(-opts.slope_jitter,
                                                                 opts.slope_jitter));
        std::vector<LeafTrigTerm> wiggle;
        for (int w = 0; w < opts.wiggle_terms; ++w) {
            LeafTrigTerm t;
            t.freq = double(w + 1);
            t.cos_coeff = opts.wiggle_amplitude * rng.uniform(-1.0, 1.0);
            t.sin_coeff = opts.wiggle_amplitude * rng.uniform(-1.0, 1.0);
            wiggle.push_back(t);
        }
        AdmissibleLeaf leaf(x0, opts.length, offset, slope, std::move(wiggle));
        if (validate_leaf(leaf, cones, opts.cone_constant, r).admissible)
            out.push_back(std::move(leaf));
    }
    return out;
}

}  // namespace aniso
