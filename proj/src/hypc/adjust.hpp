#pragma once

#include <functional>
#include <string>

#include "hypc/fuchsian.hpp"
#include "hypc/plane.hpp"

namespace hypc {

enum class Side { left, right };

// Unit normal vector to a conjugacy-class axis.  The base point sits at
// arclength axis_param (measured from the foot of the origin) along the axis,
// and the vector points away from the axis on the given side.
struct NormalVector {
    ConjClass cls;
    double axis_param = 0.0;
    Side side = Side::right;
};

// Copy of v with the base point moved dt along the axis, parameter wrapped
// back into [0, primitive_length).
NormalVector shifted(const NormalVector& v, double dt);

// Realizes the normal vector as a unit tangent: base point on the axis,
// forward endpoint on the chosen side.
UnitTangent normal_to_tangent(const NormalVector& v);

// Axis adjustment at v: sum of the Busemann values of v+ and gamma v+ taken
// at the projection of o onto the geodesic (v+, gamma v+), measured against
// the base point of v and its gamma image.  Independent of o (moving the
// projection along that geodesic shifts the two terms oppositely) and
// invariant under the primitive axis translation.
double eval_F1(const NormalVector& v, const HPoint& o);

// Same quantity as the limit d(p_t, gamma p_t) - 2t along the normal ray,
// evaluated at t = t_max (>= 10).  Converges like exp(-t_max); serves as the
// independent cross-check for eval_F1.
double eval_F1_limit(const NormalVector& v, double t_max);

// Direction adjustment at a unit tangent based at x: Busemann value of the
// forward endpoint comparing y against x.  Bounded by dist(x, y).  Throws
// std::domain_error when v is not based at x.
double eval_F2(const UnitTangent& v, const HPoint& y, const HPoint& x);

// A pair of adjustment functions: F1 on normal vectors to the class axis,
// F2 on unit tangents at the observation point.  The bounds are sup-norm
// bounds on |F1| and |F2|; enumeration radii for adjusted counts rely on
// them, so custom pairs must set them soundly.
struct AdjustmentPair {
    std::function<double(const NormalVector&)> F1;
    std::function<double(const UnitTangent&)> F2;
    double f1_bound = 0.0;
    double f2_bound = 0.0;
    std::string label;
};

AdjustmentPair zero_pair();
AdjustmentPair constant_pair(double c1, double c2);
// Smooth nonconstant demo pair: F1 is a cosine profile in the axis parameter
// plus a side offset, F2 a low trig polynomial in the direction angle.
AdjustmentPair smooth_pair();
// Pair built from the class's own adjustment values, scaled by s1 and s2.
// x and y fix the F2 comparison points (and hence the bounds).
AdjustmentPair scaled_class_pair(const ConjClass& c, const HPoint& x,
                                 const HPoint& y, double s1, double s2);

// Height of a coset representative after the adjustments: distance from g x
// to the axis minus F1 at the inward normal of the foot minus F2 at the
// pulled-back direction from x toward the foot.
struct AdjustedHeight {
    CosetRep g;
    double d_to_axis = 0.0;
    double F1_val = 0.0;
    double F2_val = 0.0;
    double h = 0.0;
};

// Throws std::domain_error when g x lies on the axis (no normal direction).
AdjustedHeight adjusted_height(const ConjClass& c, const AdjustmentPair& pair,
                               const CosetRep& g, const HPoint& x);

// Defect of the two-step reduction at g: how far d(gx, gamma g y) deviates
// from twice the axis depth plus the two adjustments.  Decays exponentially
// in the depth; near the axis (small depth) no smallness is claimed.
struct Residual {
    double residual = 0.0;
    double depth = 0.0;
};

Residual reduction_residual(const ConjClass& c, const GroupElement& g,
                            const HPoint& x, const HPoint& y);

}  // namespace hypc
