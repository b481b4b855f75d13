#include "hypc/properties.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "hypc/adjust.hpp"
#include "hypc/fuchsian.hpp"
#include "hypc/plane.hpp"

namespace hypc {

namespace {

struct Rng {
    std::mt19937_64 eng;
    explicit Rng(unsigned long long seed) : eng(seed) {}

    double uniform(double lo, double hi) {
        return std::uniform_real_distribution<double>(lo, hi)(eng);
    }
    HPoint point() { return HPoint{uniform(-3.0, 3.0), uniform(0.1, 5.0)}; }
    HBoundary boundary() {
        return boundary_from_angle(uniform(0.0, 2.0 * kPi));
    }
    Geodesic geodesic() {
        for (;;) {
            HBoundary a = boundary(), b = boundary();
            if (!boundary_close(a, b, 1e-6)) return Geodesic(a, b);
        }
    }
};

PropertyLine upper(const std::string& label, double observed, double bound) {
    return PropertyLine{label + " <=", observed, bound, observed <= bound};
}

PropertyLine lower(const std::string& label, double observed, double bound) {
    return PropertyLine{label + " >=", observed, bound, observed >= bound};
}

SuiteReport finish(std::string name, std::vector<PropertyLine> lines) {
    bool ok = true;
    for (const PropertyLine& l : lines) ok = ok && l.pass;
    return SuiteReport{std::move(name), ok, std::move(lines)};
}

double lsq_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
    double n = static_cast<double>(xs.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    double den = sxx - sx * sx / n;
    if (den <= 0.0) throw std::runtime_error("degenerate slope fit");
    return (sxy - sx * sy / n) / den;
}

SuiteReport busemann_suite(Rng& rng, int n) {
    double anti = 0, cocycle = 0, excess = 0, lim = 0;
    for (int i = 0; i < n; ++i) {
        HBoundary z = rng.boundary();
        HPoint p = rng.point(), q = rng.point(), r = rng.point();
        double bpq = busemann(z, p, q);
        anti = std::max(anti, std::abs(bpq + busemann(z, q, p)));
        cocycle = std::max(
            cocycle, std::abs(bpq + busemann(z, q, r) - busemann(z, p, r)));
        excess = std::max(excess, std::abs(bpq) - dist(p, q));
        lim = std::max(lim, std::abs(bpq - busemann_limit(z, p, q, 30.0)));
    }
    // pairs of boundary points at varied separations; the cocycle difference
    // should scale at least like a 0.45 power of the visual distance
    std::vector<double> lv, ld;
    for (int i = 0; i < n; ++i) {
        double r0 = rng.uniform(0.0, 1.5);
        HPoint x = point_at(kOrigin, rng.uniform(0.0, 2.0 * kPi), r0);
        HPoint y = point_at(x, rng.uniform(0.0, 2.0 * kPi),
                            rng.uniform(0.05, 1.5));
        double th = rng.uniform(0.0, 2.0 * kPi);
        double eps = std::pow(10.0, rng.uniform(-5.0, -1.0));
        HBoundary z1 = boundary_at_angle(x, th);
        HBoundary z2 = boundary_at_angle(x, th + eps);
        double d = std::abs(busemann(z1, x, y) - busemann(z2, x, y));
        double v = visual_dist(x, z1, z2);
        if (d > 1e-13 && v > 1e-13) {
            lv.push_back(std::log(v));
            ld.push_back(std::log(d));
        }
    }
    return finish("busemann",
                  {upper("antisymmetry defect", anti, 1e-8),
                   upper("cocycle defect", cocycle, 1e-8),
                   upper("excess over distance", excess, 1e-9),
                   upper("truncated limit gap at t=30", lim, 1e-6),
                   lower("boundary-variable slope", lsq_slope(lv, ld), 0.45)});
}

SuiteReport visual_suite(Rng& rng, int n) {
    double lim = 0, sym = 0, range = 0;
    for (int i = 0; i < n; ++i) {
        HPoint x = rng.point();
        HBoundary z = rng.boundary(), e = rng.boundary();
        double v = visual_dist(x, z, e);
        lim = std::max(lim, std::abs(v - visual_dist_limit(x, z, e, 30.0)));
        sym = std::max(sym, std::abs(v - visual_dist(x, e, z)));
        range = std::max(range, v - 1.0);
    }
    return finish("visual", {upper("truncated limit gap at t=30", lim, 1e-6),
                             upper("symmetry defect", sym, 1e-12),
                             upper("excess over one", range, 1e-9)});
}

SuiteReport projection_suite(Rng& rng, int n) {
    double contraction = 0, nonexp = 0;
    for (int i = 0; i < n; ++i) {
        Geodesic C = rng.geodesic();
        HPoint x = rng.point();
        HPoint y = point_at(x, rng.uniform(0.0, 2.0 * kPi),
                            rng.uniform(1e-3, 1.0));
        Projection px = project(C, x), py = project(C, y);
        double dxy = dist(x, y);
        double dpp = dist(px.foot, py.foot);
        nonexp = std::max(nonexp, dpp - dxy);
        contraction = std::max(contraction, dpp / (std::exp(-px.dist) * dxy));
    }
    return finish("projection",
                  {upper("contraction constant", contraction, 10.0),
                   upper("expansion over input", nonexp, 1e-9)});
}

SuiteReport convergence_suite(Rng& rng, int n) {
    double ratio = 0;
    for (int i = 0; i < n; ++i) {
        HPoint z = rng.point();
        double R = rng.uniform(2.0, 8.0);
        double t1 = rng.uniform(0.0, 2.0 * kPi);
        double t2 = t1 + rng.uniform(0.05, 0.7) / std::sinh(R);
        HPoint x = point_at(z, t1, R), y = point_at(z, t2, R);
        double T = rng.uniform(0.5, R - 0.5);
        HPoint xp = point_at(z, t1, R - T), yp = point_at(z, t2, R - T);
        ratio = std::max(ratio,
                         dist(xp, yp) / (std::exp(-T) * dist(x, y)));
    }
    return finish("convergence",
                  {upper("equal-radius ray ratio", ratio, 10.0)});
}

SuiteReport busemann_distance_suite(Rng& rng, int n) {
    double ratio = 0;
    for (int i = 0; i < n; ++i) {
        HPoint x = rng.point();
        HBoundary z = rng.boundary();
        HPoint y = point_at(x, rng.uniform(0.0, 2.0 * kPi),
                            rng.uniform(0.05, 1.5));
        double t = rng.uniform(1.5, 10.0);
        HPoint zt = flow(tangent(x, z), t).base;
        double err =
            std::abs(busemann(z, x, y) - (dist(zt, x) - dist(zt, y)));
        ratio = std::max(ratio, err / std::exp(-t));
    }
    return finish("busemann-distance",
                  {upper("ray-difference ratio", ratio, 10.0)});
}

double midpoint_worst(const ConjClass& c, Rng& rng, int n) {
    double worst = 0;
    int done = 0;
    while (done < n) {
        HBoundary z = rng.boundary();
        if (visual_dist(kOrigin, z, c.axis.neg) < 1e-3 ||
            visual_dist(kOrigin, z, c.axis.pos) < 1e-3)
            continue;
        ++done;
        HPoint p = project_boundary(c.axis, z);
        HPoint gp = apply(c.gamma.mat, p);
        HPoint mid = flow(tangent(p, gp), 0.5 * dist(p, gp)).base;
        Geodesic moved(z, apply(c.gamma.mat, z));
        worst = std::max(worst, project(moved, mid).dist);
    }
    return worst;
}

SuiteReport midpoint_suite(Rng& rng, int n) {
    GroupSpec G = load_group("cyclic-demo");
    GroupSpec B = load_group("bolza");
    ConjClass cc = conj_data(G, word_element(G, {0}));
    ConjClass cb = conj_data(B, word_element(B, {0, 1}));
    return finish(
        "midpoint",
        {upper("cyclic class midpoint gap", midpoint_worst(cc, rng, n), 10.0),
         upper("bolza class midpoint gap", midpoint_worst(cb, rng, n), 10.0)});
}

SuiteReport adjust_suite(Rng& rng, int n) {
    GroupSpec G = load_group("cyclic-demo");
    GroupSpec B = load_group("bolza");
    std::vector<ConjClass> classes;
    classes.push_back(conj_data(G, word_element(G, {0})));
    classes.push_back(conj_data(B, word_element(B, {0})));
    classes.push_back(conj_data(B, word_element(B, {0, 1})));
    double lim = 0, excess = 0;
    for (int i = 0; i < n; ++i) {
        const ConjClass& c = classes[static_cast<std::size_t>(i) % classes.size()];
        NormalVector v{c, rng.uniform(0.0, c.primitive_length()),
                       i % 2 == 0 ? Side::right : Side::left};
        lim = std::max(lim,
                       std::abs(eval_F1(v, kOrigin) - eval_F1_limit(v, 30.0)));
        HPoint x = rng.point(), y = rng.point();
        UnitTangent u = tangent(x, rng.boundary());
        excess = std::max(excess, std::abs(eval_F2(u, y, x)) - dist(x, y));
    }
    return finish("adjust",
                  {upper("axis adjustment limit gap at t=30", lim, 1e-6),
                   upper("direction adjustment excess", excess, 1e-9)});
}

}  // namespace

std::vector<std::string> suite_names() {
    return {"busemann",    "visual",   "projection", "convergence",
            "busemann-distance", "midpoint", "adjust"};
}

std::vector<SuiteReport> run_suites(const std::string& name,
                                    unsigned long long seed, int samples) {
    if (samples < 10) throw std::invalid_argument("suites need >= 10 samples");
    Rng rng(seed);
    std::vector<SuiteReport> out;
    auto want = [&](const char* s) { return name == "all" || name == s; };
    if (want("busemann")) out.push_back(busemann_suite(rng, samples));
    if (want("visual")) out.push_back(visual_suite(rng, samples));
    if (want("projection")) out.push_back(projection_suite(rng, samples));
    if (want("convergence")) out.push_back(convergence_suite(rng, samples));
    if (want("busemann-distance"))
        out.push_back(busemann_distance_suite(rng, samples));
    if (want("midpoint")) out.push_back(midpoint_suite(rng, samples));
    if (want("adjust")) out.push_back(adjust_suite(rng, samples));
    if (out.empty()) throw std::invalid_argument("unknown suite: " + name);
    return out;
}

}  // namespace hypc
