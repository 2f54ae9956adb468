#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "anisolab/cone_system.hpp"
#include "anisolab/linalg2.hpp"
#include "anisolab/rng.hpp"

namespace aniso {

// One oscillatory term of a leaf graph, frequency in cycles per unit of
// the chart coordinate.
struct LeafTrigTerm {
    double freq = 0.0;
    double cos_coeff = 0.0;
    double sin_coeff = 0.0;
};

// Curve Gamma = {(x, gamma(x)) : x in [x0, x0 + length)} embedded in the
// torus, with gamma a trigonometric-plus-affine graph over the first
// (chart) coordinate. Admissibility against a cone system means every
// chord's normal direction lies strictly inside the plus cone.
class AdmissibleLeaf {
public:
    AdmissibleLeaf(double x0, double length, double offset, double slope,
                   std::vector<LeafTrigTerm> wiggle = {});

    double x0() const { return x0_; }
    double length() const { return length_; }
    double slope() const { return slope_; }
    double offset() const { return offset_; }
    const std::vector<LeafTrigTerm>& wiggle() const { return wiggle_; }

    double gamma(double x) const;
    // Exact derivative of any order (trig-affine closed form).
    double gamma_deriv(int order, double x) const;
    Vec2 point(double x) const { return {x, gamma(x)}; }

    // Leaf shifted by the torus vector v (graph over the shifted chart).
    AdmissibleLeaf translated(const Vec2& v) const;

    // Sup over a dense grid of |gamma^(j)|, j = 0..orders.
    double cr_proxy_norm(int orders) const;

private:
    double x0_;
    double length_;
    double offset_;
    double slope_;
    std::vector<LeafTrigTerm> wiggle_;
};

struct LeafValidation {
    bool admissible = false;
    double worst_chord_margin = 0.0;  // min cone margin of chord normals (radians)
    double cr_norm = 0.0;             // measured C^r proxy norm of the graph
    double cr_bound = 0.0;            // allowance actually used for the check
    double cr_ratio = 0.0;            // cr_norm / cone_constant (diagnostic)
    std::string failure;
};

// Fixed factor relating the sampled derivative norm to the family constant.
inline constexpr double kLeafNormSlack = 4.0;

// Chord normals are sampled at endpoints plus nested dyadic midpoints; the
// worst margin over all sampled chords is reported.
LeafValidation validate_leaf(const AdmissibleLeaf& leaf, const ConeSystem& cones,
                             double cone_constant, double r);

struct LeafFamilyOptions {
    int count = 8;
    double slope = 0.0;
    double slope_jitter = 0.0;
    double wiggle_amplitude = 0.0;
    int wiggle_terms = 0;
    double length = 1.0;
    double cone_constant = 10.0;
    std::uint64_t seed = 1;
};

// Deterministic admissible family: offsets stratified over the torus,
// slopes and wiggles jittered, every member validated (rejection sampling
// with a bounded retry budget).
std::vector<AdmissibleLeaf> sample_leaf_family(const ConeSystem& cones,
                                               const LeafFamilyOptions& opts, double r);

}  // namespace aniso
