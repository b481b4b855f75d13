#include "hypc/adjust.hpp"

#include <cmath>
#include <stdexcept>

namespace hypc {

namespace {

double wrap_param(double s, double period) {
    double w = s - period * std::floor(s / period);
    if (w >= period) w -= period;  // guard against floor rounding at the seam
    return w;
}

// Depth, foot, axis coordinate, and side of p relative to the class axis.
struct AxisFrame {
    double coord;
    Side side;
    double depth;
    HPoint foot;
};

AxisFrame frame_at(const ConjClass& c, const HPoint& p) {
    Projection pr = project(c.axis, p);
    if (pr.dist <= 1e-12)
        throw std::domain_error("point lies on the class axis");
    Isometry n = axis_chart_through(c.axis, kOrigin);
    HPoint w = apply(n, p);
    double s = std::log(std::hypot(w.x, w.y));
    return AxisFrame{wrap_param(s, c.primitive_length()),
                     w.x >= 0.0 ? Side::right : Side::left, pr.dist, pr.foot};
}

}  // namespace

NormalVector shifted(const NormalVector& v, double dt) {
    NormalVector out = v;
    out.axis_param = wrap_param(v.axis_param + dt, v.cls.primitive_length());
    return out;
}

UnitTangent normal_to_tangent(const NormalVector& v) {
    Isometry back = axis_chart_through(v.cls.axis, kOrigin).inverse();
    double r = std::exp(v.axis_param);
    HPoint base = apply(back, HPoint{0.0, r});
    double e = v.side == Side::right ? r : -r;
    return UnitTangent{base, apply(back, HBoundary::at(e))};
}

double eval_F1(const NormalVector& v, const HPoint& o) {
    const Isometry& gamma = v.cls.gamma.mat;
    UnitTangent u = normal_to_tangent(v);
    HBoundary vp = u.fwd;
    HBoundary gvp = apply(gamma, vp);
    HPoint p = project(Geodesic(vp, gvp), o).foot;
    return busemann(vp, p, u.base) + busemann(gvp, p, apply(gamma, u.base));
}

double eval_F1_limit(const NormalVector& v, double t_max) {
    if (t_max < 10.0)
        throw std::invalid_argument("limit evaluation needs t_max >= 10");
    HPoint pt = flow(normal_to_tangent(v), t_max).base;
    return dist(pt, apply(v.cls.gamma.mat, pt)) - 2.0 * t_max;
}

double eval_F2(const UnitTangent& v, const HPoint& y, const HPoint& x) {
    if (dist(v.base, x) > 1e-9)
        throw std::domain_error("direction adjustment needs a tangent based at x");
    return busemann(v.fwd, y, x);
}

AdjustmentPair zero_pair() {
    return AdjustmentPair{[](const NormalVector&) { return 0.0; },
                          [](const UnitTangent&) { return 0.0; }, 0.0, 0.0,
                          "zero"};
}

AdjustmentPair constant_pair(double c1, double c2) {
    return AdjustmentPair{[c1](const NormalVector&) { return c1; },
                          [c2](const UnitTangent&) { return c2; },
                          std::abs(c1), std::abs(c2),
                          "constant(" + std::to_string(c1) + "," +
                              std::to_string(c2) + ")"};
}

AdjustmentPair smooth_pair() {
    auto f1 = [](const NormalVector& v) {
        double s = 2.0 * kPi * v.axis_param / v.cls.primitive_length();
        return 0.25 * std::cos(s) + (v.side == Side::right ? 0.1 : -0.1);
    };
    auto f2 = [](const UnitTangent& u) {
        double phi = angle_from(u.base, u.fwd);
        return 0.2 * std::sin(phi) + 0.1 * std::cos(2.0 * phi);
    };
    return AdjustmentPair{f1, f2, 0.35, 0.3, "smooth"};
}

AdjustmentPair scaled_class_pair(const ConjClass& c, const HPoint& x,
                                 const HPoint& y, double s1, double s2) {
    auto f1 = [s1](const NormalVector& v) { return s1 * eval_F1(v, kOrigin); };
    auto f2 = [y, s2](const UnitTangent& u) {
        return s2 * busemann(u.fwd, y, u.base);
    };
    // F1 is the constant 2*log(sinh(l/2)) in curvature -1; |F2| <= dist(x, y)
    double b1 = std::abs(s1 * 2.0 * std::log(std::sinh(0.5 * c.translation_length))) + 1e-9;
    double b2 = std::abs(s2) * dist(x, y) + 1e-9;
    return AdjustmentPair{f1, f2, b1, b2,
                          "class-scaled(" + std::to_string(s1) + "," +
                              std::to_string(s2) + ")"};
}

AdjustedHeight adjusted_height(const ConjClass& c, const AdjustmentPair& pair,
                               const CosetRep& g, const HPoint& x) {
    HPoint gx = apply(g.g.mat, x);
    AxisFrame fr = frame_at(c, gx);
    NormalVector v1{c, fr.coord, fr.side};
    UnitTangent v2 = apply(g.g.mat.inverse(), tangent(gx, fr.foot));
    double f1 = pair.F1(v1);
    double f2 = pair.F2(v2);
    return AdjustedHeight{g, fr.depth, f1, f2, fr.depth - f1 - f2};
}

Residual reduction_residual(const ConjClass& c, const GroupElement& g,
                            const HPoint& x, const HPoint& y) {
    HPoint gx = apply(g.mat, x);
    AxisFrame fr = frame_at(c, gx);
    double f1 = eval_F1(NormalVector{c, fr.coord, fr.side}, kOrigin);
    UnitTangent v2 = apply(g.mat.inverse(), tangent(gx, fr.foot));
    double f2 = eval_F2(v2, y, x);
    double span = dist(gx, apply(c.gamma.mat, apply(g.mat, y)));
    return Residual{span - 2.0 * fr.depth - f1 - f2, fr.depth};
}

}  // namespace hypc
