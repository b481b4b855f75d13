#pragma once
// Hyperbolic plane primitives in the upper half-plane model (curvature -1).
// Points are x + iy with y > 0.  The ideal boundary is the real line plus a
// single point at infinity.  Boundary "angles" refer to the Poincare disk
// chart that sends a reference interior point to the disk center; unless a
// basepoint is given explicitly the reference point is kOrigin = i.

#include <stdexcept>

namespace hypc {

inline constexpr double kPi = 3.14159265358979323846;

struct HPoint {
    double x = 0.0;
    double y = 1.0;
};

inline constexpr HPoint kOrigin{0.0, 1.0};

// Ideal boundary point: a finite real coordinate or the point at infinity.
struct HBoundary {
    bool inf = false;
    double v = 0.0;

    static HBoundary infinity() { return HBoundary{true, 0.0}; }
    static HBoundary at(double value) { return HBoundary{false, value}; }
};

bool boundary_close(const HBoundary& a, const HBoundary& b, double tol);

// Oriented geodesic, determined by two distinct ideal endpoints.
struct Geodesic {
    HBoundary neg;
    HBoundary pos;
    Geodesic(const HBoundary& n, const HBoundary& p);
};

// Unit tangent vector, stored as base point plus forward ideal endpoint.
struct UnitTangent {
    HPoint base;
    HBoundary fwd;
};

// Orientation-preserving isometry: a real 2x2 matrix acting as a Mobius map
// z -> (az + b)/(cz + d).  Instances are kept with det = 1 and a canonical
// sign: the first of (a, b, c, d) whose magnitude exceeds
// max(1e-12, 1e-9 * max|entry|) is positive.  The sign convention makes
// matrices representing the same isometry bitwise comparable.
struct Isometry {
    double a = 1.0, b = 0.0, c = 0.0, d = 1.0;

    static Isometry identity() { return Isometry{}; }
    // Scales to det 1 and fixes the sign.  Throws std::invalid_argument if
    // the determinant is not positive or an entry is not finite.
    static Isometry from_entries(double a, double b, double c, double d);

    Isometry inverse() const;
    Isometry operator*(const Isometry& rhs) const;
    double trace() const { return a + d; }
    double max_abs() const;
};

// Largest entry-wise deviation divided by the larger of the two matrix
// scales; both arguments are assumed canonical.
double rel_gap(const Isometry& m, const Isometry& n);

// Distance and boundary functionals ------------------------------------------

double dist(const HPoint& p, const HPoint& q);

// Horocycle cocycle at zeta: limit of dist(z, p) - dist(z, q) as z -> zeta.
double busemann(const HBoundary& zeta, const HPoint& p, const HPoint& q);
// Same quantity evaluated at a point distance t along the ray [p, zeta);
// converges to busemann() as t grows.  Diagnostic evaluator.
double busemann_limit(const HBoundary& zeta, const HPoint& p, const HPoint& q,
                      double t);

// Boundary metric seen from x: exp(-(zeta|eta)_x) where (.|.)_x is the Gromov
// product based at x.  Equals sin(half the angle between the two rays),
// so it is 0 iff the endpoints agree and 1 for diametrically opposite ones.
double visual_dist(const HPoint& x, const HBoundary& zeta, const HBoundary& eta);
// Gromov product evaluated with rays truncated at length t.  Diagnostic.
double visual_dist_limit(const HPoint& x, const HBoundary& zeta,
                         const HBoundary& eta, double t);

// Projections -----------------------------------------------------------------

struct Projection {
    HPoint foot;
    double dist;
};

// Foot of the perpendicular from p to L, with the distance to it.
Projection project(const Geodesic& L, const HPoint& p);

// Continuous extension of the projection to ideal points.  Throws
// std::domain_error when zeta is an endpoint of L.
HPoint project_boundary(const Geodesic& L, const HBoundary& zeta);

// Tangents and the geodesic flow ----------------------------------------------

// Unit tangent at p pointing toward q.  Throws std::invalid_argument when the
// points coincide (no direction is defined).
UnitTangent tangent(const HPoint& p, const HPoint& q);
UnitTangent tangent(const HPoint& p, const HBoundary& zeta);

// Backward ideal endpoint of the geodesic through u.
HBoundary backward(const UnitTangent& u);

// Geodesic flow: moves the base point t along the geodesic toward fwd
// (backwards for t < 0).  dist(u.base, flow(u, t).base) == |t|.
UnitTangent flow(const UnitTangent& u, double t);

// Angle charts ----------------------------------------------------------------

// Angle of zeta in the disk chart centered at x, in [0, 2*pi).  Increasing in
// the finite boundary coordinate; the point at infinity sits at angle 0.
double angle_from(const HPoint& x, const HBoundary& zeta);
// Inverse chart.  Angles within 1e-15 of 0 or 2*pi give the infinite point.
HBoundary boundary_at_angle(const HPoint& x, double theta);

double boundary_angle(const HBoundary& zeta);   // chart at kOrigin
HBoundary boundary_from_angle(double theta);    // chart at kOrigin

// Point reached from x after distance r in the direction with chart angle
// theta at x.
HPoint point_at(const HPoint& x, double theta, double r);

// Isometry actions -------------------------------------------------------------

HPoint apply(const Isometry& g, const HPoint& p);
HBoundary apply(const Isometry& g, const HBoundary& zeta);
Geodesic apply(const Isometry& g, const Geodesic& L);
UnitTangent apply(const Isometry& g, const UnitTangent& u);

// Chart isometries --------------------------------------------------------------

// Maps L.neg -> 0 and L.pos -> infinity, so L becomes the upward imaginary
// axis.
Isometry axis_chart(const Geodesic& L);
// Same, additionally placing the foot of the perpendicular from ref at i.
Isometry axis_chart_through(const Geodesic& L, const HPoint& ref);
// Hyperbolic translation by t along L (toward L.pos for t > 0).
Isometry translation(const Geodesic& L, double t);
// Elliptic rotation about kOrigin; the derivative at kOrigin turns tangent
// directions by +phi in the disk chart.
Isometry rotation_about_origin(double phi);

}  // namespace hypc
