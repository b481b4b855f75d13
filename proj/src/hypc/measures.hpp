#pragma once

#include <functional>
#include <string>

#include "hypc/adjust.hpp"
#include "hypc/counting.hpp"
#include "hypc/fuchsian.hpp"
#include "hypc/plane.hpp"

namespace hypc {

// One numerical integral of e^{F} against a boundary measure, reported in the
// unit-scale angle normalization at the reference point.
struct SigmaEstimate {
    double value = 0.0;
    double quadrature_error = 0.0;  // node-doubling comparison, floored
    int n_nodes = 0;                // nodes behind the reported value
    std::string normalization;
};

// Normalization-free comparison of leading counting constants for two
// adjustment pairs.  The overall measure scale cancels in the ratio.
struct RatioPrediction {
    std::string pair_a;
    std::string pair_b;
    double predicted_ratio = 0.0;
    double empirical_ratio = 0.0;
    double rel_dev = 0.0;         // |empirical / predicted - 1|
    bool low_confidence = false;  // some empirical count used was below 100
};

// Integral over one period of the unit normal bundle of the class axis of
// e^{F1(v)} e^{-busemann(v_fwd, base(v), o)} d(angle at o of v_fwd), both
// sides.  Invariant under shifting the window by window_offset.  The value
// comes from 2*n_nodes nodes per side; quadrature_error compares against the
// n_nodes rule.
SigmaEstimate sigma_gamma_quad(
    const ConjClass& c, const std::function<double(const NormalVector&)>& F1,
    const HPoint& o, int n_nodes, double window_offset = 0.0,
    double mu_scale = 1.0);

// Integral over the unit circle at x of e^{F2(v)} e^{-busemann(v_fwd, x, o)}
// d(angle at o of v_fwd).  For F2 = 0 the value is the full angle 2*pi,
// independent of x.
SigmaEstimate sigma_x_quad(const HPoint& x,
                           const std::function<double(const UnitTangent&)>& F2,
                           const HPoint& o, int n_nodes, double mu_scale = 1.0);

// Predicted ratio of leading constants for the adjusted counts of pair_a and
// pair_b, sigma_gamma(F1_a) sigma_x(F2_a) / (same for b), against the
// empirical ratio N_a(T)/N_b(T) averaged over the top three grid points
// complete in both series.  Both series must share one grid.
RatioPrediction predict_ratio(const ConjClass& c, const AdjustmentPair& pair_a,
                              const AdjustmentPair& pair_b, const HPoint& x,
                              const HPoint& o, const CountSeries& series_a,
                              const CountSeries& series_b);

}  // namespace hypc
