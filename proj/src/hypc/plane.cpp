#include "hypc/plane.hpp"

#include <algorithm>
#include <cmath>

namespace hypc {

namespace {

constexpr double kSignEps = 1e-12;
constexpr double kAngleInfEps = 1e-15;

// log(1 + u + sqrt(u*(u+2))) == acosh(1 + u), stable for small u.
double acosh1p(double u) {
    if (u < 0.0) u = 0.0;
    return std::log1p(u + std::sqrt(u * (u + 2.0)));
}

double sqr(double t) { return t * t; }

void check_point(const HPoint& p) {
    if (!(p.y > 0.0) || !std::isfinite(p.x) || !std::isfinite(p.y))
        throw std::invalid_argument("point must lie in the open upper half-plane");
}

void check_boundary(const HBoundary& z) {
    if (!z.inf && !std::isfinite(z.v))
        throw std::invalid_argument("finite boundary coordinate must be finite");
}

double wrap_2pi(double t) {
    t = std::fmod(t, 2.0 * kPi);
    if (t < 0.0) t += 2.0 * kPi;
    return t;
}

}  // namespace

bool boundary_close(const HBoundary& a, const HBoundary& b, double tol) {
    if (a.inf || b.inf) return a.inf == b.inf;
    return std::abs(a.v - b.v) <= tol;
}

Geodesic::Geodesic(const HBoundary& n, const HBoundary& p) : neg(n), pos(p) {
    check_boundary(n);
    check_boundary(p);
    if (n.inf && p.inf)
        throw std::invalid_argument("geodesic endpoints must be distinct");
    if (!n.inf && !p.inf && n.v == p.v)
        throw std::invalid_argument("geodesic endpoints must be distinct");
}

Isometry Isometry::from_entries(double a, double b, double c, double d) {
    double det = a * d - b * c;
    if (!std::isfinite(det) || det <= 0.0)
        throw std::invalid_argument("matrix must have positive determinant");
    double s = std::sqrt(det);
    Isometry g{a / s, b / s, c / s, d / s};
    // Canonical sign: first entry clear of the noise floor decides.
    double floor = std::max(kSignEps, 1e-9 * g.max_abs());
    const double e[4] = {g.a, g.b, g.c, g.d};
    for (double v : e) {
        if (std::abs(v) > floor) {
            if (v < 0.0) { g.a = -g.a; g.b = -g.b; g.c = -g.c; g.d = -g.d; }
            break;
        }
    }
    return g;
}

Isometry Isometry::inverse() const {
    return Isometry{d, -b, -c, a};
}

Isometry Isometry::operator*(const Isometry& rhs) const {
    // Renormalize: products drift away from det 1 and canonical sign.
    return from_entries(a * rhs.a + b * rhs.c, a * rhs.b + b * rhs.d,
                        c * rhs.a + d * rhs.c, c * rhs.b + d * rhs.d);
}

double Isometry::max_abs() const {
    return std::max(std::max(std::abs(a), std::abs(b)),
                    std::max(std::abs(c), std::abs(d)));
}

double rel_gap(const Isometry& m, const Isometry& n) {
    double scale = std::max(m.max_abs(), n.max_abs());
    double gap = std::max(std::max(std::abs(m.a - n.a), std::abs(m.b - n.b)),
                          std::max(std::abs(m.c - n.c), std::abs(m.d - n.d)));
    return gap / scale;
}

double dist(const HPoint& p, const HPoint& q) {
    check_point(p);
    check_point(q);
    double u = (sqr(p.x - q.x) + sqr(p.y - q.y)) / (2.0 * p.y * q.y);
    return acosh1p(u);
}

double busemann(const HBoundary& zeta, const HPoint& p, const HPoint& q) {
    check_boundary(zeta);
    check_point(p);
    check_point(q);
    if (zeta.inf) return std::log(q.y / p.y);
    double np = sqr(p.x - zeta.v) + sqr(p.y);
    double nq = sqr(q.x - zeta.v) + sqr(q.y);
    return std::log(q.y * np / (p.y * nq));
}

double busemann_limit(const HBoundary& zeta, const HPoint& p, const HPoint& q,
                      double t) {
    HPoint z = flow(tangent(p, zeta), t).base;
    return dist(z, p) - dist(z, q);
}

double visual_dist(const HPoint& x, const HBoundary& zeta, const HBoundary& eta) {
    check_point(x);
    double dt = std::abs(angle_from(x, zeta) - angle_from(x, eta));
    if (dt > kPi) dt = 2.0 * kPi - dt;
    return std::sin(0.5 * dt);
}

double visual_dist_limit(const HPoint& x, const HBoundary& zeta,
                         const HBoundary& eta, double t) {
    HPoint zt = flow(tangent(x, zeta), t).base;
    HPoint et = flow(tangent(x, eta), t).base;
    // exp(-(zeta|eta)_x) with the Gromov product truncated at parameter t.
    return std::exp(0.5 * dist(zt, et) - t);
}

Projection project(const Geodesic& L, const HPoint& p) {
    check_point(p);
    Isometry n = axis_chart(L);
    HPoint w = apply(n, p);
    double r = std::hypot(w.x, w.y);
    HPoint foot = apply(n.inverse(), HPoint{0.0, r});
    // acosh(r / w.y) written via acosh1p for accuracy near the axis.
    double u = sqr(w.x) / ((r + w.y) * w.y);
    return Projection{foot, acosh1p(u)};
}

HPoint project_boundary(const Geodesic& L, const HBoundary& zeta) {
    check_boundary(zeta);
    if (boundary_close(zeta, L.neg, 0.0) || boundary_close(zeta, L.pos, 0.0))
        throw std::domain_error("cannot project an endpoint of the geodesic");
    Isometry n = axis_chart(L);
    HBoundary w = apply(n, zeta);
    if (w.inf || w.v == 0.0)  // rounding collapsed zeta onto an endpoint
        throw std::domain_error("cannot project an endpoint of the geodesic");
    return apply(n.inverse(), HPoint{0.0, std::abs(w.v)});
}

UnitTangent tangent(const HPoint& p, const HPoint& q) {
    check_point(p);
    check_point(q);
    if (p.x == q.x && p.y == q.y)
        throw std::invalid_argument("tangent direction requires distinct points");
    if (p.x == q.x) {
        return UnitTangent{p, q.y > p.y ? HBoundary::infinity()
                                        : HBoundary::at(p.x)};
    }
    // Geodesic through p, q: half-circle centered on the real axis.
    double c = (sqr(q.x) + sqr(q.y) - sqr(p.x) - sqr(p.y)) / (2.0 * (q.x - p.x));
    double r = std::hypot(p.x - c, p.y);
    return UnitTangent{p, HBoundary::at(q.x > p.x ? c + r : c - r)};
}

UnitTangent tangent(const HPoint& p, const HBoundary& zeta) {
    check_point(p);
    check_boundary(zeta);
    return UnitTangent{p, zeta};
}

HBoundary backward(const UnitTangent& u) {
    check_point(u.base);
    check_boundary(u.fwd);
    if (u.fwd.inf) return HBoundary::at(u.base.x);
    if (u.fwd.v == u.base.x) return HBoundary::infinity();
    double z = u.fwd.v;
    double c = (sqr(u.base.x) + sqr(u.base.y) - sqr(z)) / (2.0 * (u.base.x - z));
    return HBoundary::at(2.0 * c - z);
}

UnitTangent flow(const UnitTangent& u, double t) {
    HBoundary eta = backward(u);
    Isometry n = axis_chart(Geodesic(eta, u.fwd));
    HPoint w = apply(n, u.base);
    // On the axis chart the flow scales height by exp(t).
    double h = std::hypot(w.x, w.y) * std::exp(t);
    HPoint moved = apply(n.inverse(), HPoint{0.0, h});
    return UnitTangent{moved, u.fwd};
}

double angle_from(const HPoint& x, const HBoundary& zeta) {
    check_point(x);
    check_boundary(zeta);
    if (zeta.inf) return 0.0;
    // Disk chart at x: zeta maps to the unit circle point of this angle.
    return wrap_2pi(-2.0 * std::atan2(x.y, zeta.v - x.x));
}

HBoundary boundary_at_angle(const HPoint& x, double theta) {
    check_point(x);
    theta = wrap_2pi(theta);
    if (theta < kAngleInfEps || 2.0 * kPi - theta < kAngleInfEps)
        return HBoundary::infinity();
    return HBoundary::at(x.x - x.y / std::tan(0.5 * theta));
}

double boundary_angle(const HBoundary& zeta) { return angle_from(kOrigin, zeta); }

HBoundary boundary_from_angle(double theta) {
    return boundary_at_angle(kOrigin, theta);
}

HPoint point_at(const HPoint& x, double theta, double r) {
    if (r == 0.0) return x;
    return flow(tangent(x, boundary_at_angle(x, theta)), r).base;
}

HPoint apply(const Isometry& g, const HPoint& p) {
    check_point(p);
    double den = sqr(g.c * p.x + g.d) + sqr(g.c * p.y);
    double rx = ((g.a * p.x + g.b) * (g.c * p.x + g.d) + g.a * g.c * sqr(p.y)) / den;
    double ry = p.y / den;  // det 1 keeps the imaginary part this simple
    return HPoint{rx, ry};
}

HBoundary apply(const Isometry& g, const HBoundary& zeta) {
    check_boundary(zeta);
    if (zeta.inf) {
        if (g.c == 0.0) return HBoundary::infinity();
        return HBoundary::at(g.a / g.c);
    }
    double den = g.c * zeta.v + g.d;
    if (den == 0.0) return HBoundary::infinity();
    double w = (g.a * zeta.v + g.b) / den;
    if (!std::isfinite(w)) return HBoundary::infinity();
    return HBoundary::at(w);
}

Geodesic apply(const Isometry& g, const Geodesic& L) {
    return Geodesic(apply(g, L.neg), apply(g, L.pos));
}

UnitTangent apply(const Isometry& g, const UnitTangent& u) {
    return UnitTangent{apply(g, u.base), apply(g, u.fwd)};
}

Isometry axis_chart(const Geodesic& L) {
    // Sends L.neg -> 0, L.pos -> infinity with positive determinant.
    if (L.pos.inf) return Isometry::from_entries(1.0, -L.neg.v, 0.0, 1.0);
    if (L.neg.inf) return Isometry::from_entries(0.0, -1.0, 1.0, -L.pos.v);
    double al = L.neg.v, be = L.pos.v;
    if (al - be > 0.0) return Isometry::from_entries(1.0, -al, 1.0, -be);
    return Isometry::from_entries(1.0, -al, -1.0, be);
}

Isometry axis_chart_through(const Geodesic& L, const HPoint& ref) {
    Isometry n = axis_chart(L);
    HPoint w = apply(n, ref);
    double s = std::log(std::hypot(w.x, w.y));
    // Compose with the axis translation putting the foot of ref at i.
    Isometry shift = Isometry::from_entries(std::exp(-0.5 * s), 0.0, 0.0,
                                            std::exp(0.5 * s));
    return shift * n;
}

Isometry translation(const Geodesic& L, double t) {
    Isometry n = axis_chart(L);
    Isometry core = Isometry::from_entries(std::exp(0.5 * t), 0.0, 0.0,
                                           std::exp(-0.5 * t));
    return n.inverse() * core * n;
}

Isometry rotation_about_origin(double phi) {
    double ch = std::cos(0.5 * phi), sh = std::sin(0.5 * phi);
    return Isometry::from_entries(ch, sh, -sh, ch);
}

}  // namespace hypc
