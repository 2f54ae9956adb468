#pragma once

#include <vector>

#include "anisolab/besov1d.hpp"
#include "anisolab/fourier_field.hpp"
#include "anisolab/leaf.hpp"

namespace aniso {

// Windowed trace of a field along a leaf, sampled on the uniform chart
// grid x_i = x0 + i L/m. The window is the C-infinity bump equal to 1 on
// the middle 80% of the chart; mu holds arclength quadrature weights.
struct LeafRestriction {
    double length = 0.0;
    std::vector<cplx> trace;
    std::vector<double> mu;
};

// C-infinity window on [0,1] with value 1 on [ramp, 1-ramp].
double chart_window(const ChiProfile& chi, double u, double ramp = 0.1);

LeafRestriction restrict_to_leaf(const FourierField& field, const AdmissibleLeaf& leaf,
                                 int chart_m, const ChiProfile& chi);

// Same trace for a single Fourier mode amp * e^{2 pi i k.x}; exact and
// grid-free in the field, used when mode indices overflow any feasible
// 2-D grid.
LeafRestriction restrict_mode_to_leaf(const IVec2& k, cplx amp, const AdmissibleLeaf& leaf,
                                      int chart_m, const ChiProfile& chi);

// Chart resolution that keeps the restricted spectrum of a field at
// resolution n well under the chart Nyquist rate.
int suggested_chart_resolution(const AdmissibleLeaf& leaf, int field_resolution);

// Level-l chart filter applied to the leaf trace of the field.
std::vector<cplx> leafwise_filter(const FourierField& field, const AdmissibleLeaf& leaf,
                                  int level, int chart_m, const ChiProfile& chi);

// Leafwise Besov norm of the windowed trace.
double leafwise_besov_norm(const FourierField& field, const AdmissibleLeaf& leaf,
                           const BesovParams& params, int chart_m, const ChiProfile& chi,
                           std::vector<double>* per_level = nullptr);

}  // namespace aniso
