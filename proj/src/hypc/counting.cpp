#include "hypc/counting.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace hypc {

namespace {

void check_grid(const std::vector<double>& T_grid) {
    if (T_grid.empty())
        throw std::invalid_argument("T grid must not be empty");
    for (std::size_t i = 0; i + 1 < T_grid.size(); ++i)
        if (!(T_grid[i] < T_grid[i + 1]))
            throw std::invalid_argument("T grid must be strictly increasing");
}

std::vector<std::int64_t> cumulative(std::vector<double> vals,
                                     const std::vector<double>& T_grid) {
    std::sort(vals.begin(), vals.end());
    std::vector<std::int64_t> out;
    out.reserve(T_grid.size());
    for (double T : T_grid)
        out.push_back(static_cast<std::int64_t>(
            std::upper_bound(vals.begin(), vals.end(), T) - vals.begin()));
    return out;
}

std::string fmt_point(const HPoint& p) {
    std::ostringstream os;
    os << "(" << p.x << "," << p.y << ")";
    return os.str();
}

std::string fmt_word(const Word& w) {
    if (w.empty()) return "-";
    std::ostringstream os;
    for (std::size_t i = 0; i < w.size(); ++i)
        os << (i ? "." : "") << w[i];
    return os.str();
}

// The axis constant 2*log(sinh(l/2)): d(p, gamma p) >= 2*depth(p) + constant
// at every depth, which turns a bound on d(g x, gamma g y) into a bound on
// the depth of g x.
double axis_constant(const ConjClass& c) {
    return 2.0 * std::log(std::sinh(0.5 * c.translation_length));
}

// Canonical representatives of every coset meeting the enumeration ball, in
// first-discovery order.
struct CosetScan {
    Ball ball;
    std::vector<CosetRep> reps;
    double anchor_gap;  // dist(x, foot of the origin) + primitive length
};

CosetScan scan_cosets(const GroupSpec& G, const ConjClass& c, const HPoint& x,
                      double depth_max, int word_cap) {
    HPoint y0 = project(c.axis, kOrigin).foot;
    double anchor_gap = dist(x, y0) + c.primitive_length();
    BallOptions bo;
    bo.radius = anchor_gap + depth_max + 0.25;
    bo.x = x;
    bo.y = x;
    bo.word_cap = word_cap;
    bo.prune = true;
    CosetScan scan{enumerate_ball(G, bo), {}, anchor_gap};
    MatrixDedup seen;
    Isometry prim = c.primitive_root.mat;
    Isometry prim_inv = prim.inverse();
    for (std::size_t i = 0; i < scan.ball.size(); ++i) {
        CosetRep rep = coset_canonicalize(c, scan.ball.element(i), x);
        // A projected basepoint sitting exactly on the window edge can round
        // to either side, so same-coset elements may canonicalize one
        // primitive slot apart.  Registering both neighbors keeps the count
        // one per coset; a neighbor can never collide with a different coset,
        // since reps differing by a primitive power share their coset.
        bool fresh = seen.insert(rep.g.mat);
        fresh = seen.insert(prim * rep.g.mat) && fresh;
        fresh = seen.insert(prim_inv * rep.g.mat) && fresh;
        if (fresh) scan.reps.push_back(std::move(rep));
    }
    return scan;
}

}  // namespace

CountSeries count_orbit(const GroupSpec& G, const HPoint& x, const HPoint& y,
                        const std::vector<double>& T_grid, int word_cap) {
    check_grid(T_grid);
    BallOptions bo;
    bo.radius = T_grid.back();
    bo.x = x;
    bo.y = y;
    bo.word_cap = word_cap;
    bo.prune = true;
    Ball b = enumerate_ball(G, bo);
    CountSeries s;
    s.kind = "orbit";
    s.T_grid = T_grid;
    s.N = cumulative(b.dists, T_grid);
    for (double T : T_grid) s.complete.push_back(b.complete_at(T));
    std::ostringstream os;
    os << "group=" << G.name << " x=" << fmt_point(x) << " y=" << fmt_point(y)
       << " cap=" << word_cap;
    s.params = os.str();
    return s;
}

CountSeries count_conj(const GroupSpec& G, const ConjClass& c, const HPoint& x,
                       const HPoint& y, const std::vector<double>& T_grid,
                       int word_cap) {
    check_grid(T_grid);
    double dxy = dist(x, y);
    double depth_max = 0.5 * (T_grid.back() + dxy - axis_constant(c)) + 0.25;
    CosetScan scan = scan_cosets(G, c, x, std::max(depth_max, 0.0), word_cap);
    std::vector<double> ds;
    ds.reserve(scan.reps.size());
    for (const CosetRep& rep : scan.reps)
        ds.push_back(dist(apply(rep.g.mat, x),
                          apply(c.gamma.mat, apply(rep.g.mat, y))));
    CountSeries s;
    s.kind = "conj";
    s.T_grid = T_grid;
    s.N = cumulative(std::move(ds), T_grid);
    for (double T : T_grid) {
        double need = scan.anchor_gap +
                      std::max(0.5 * (T + dxy - axis_constant(c)) + 0.25, 0.0) +
                      0.25;
        s.complete.push_back(scan.ball.complete_at(need));
    }
    std::ostringstream os;
    os << "group=" << G.name << " class=" << fmt_word(c.gamma.word)
       << " x=" << fmt_point(x) << " y=" << fmt_point(y) << " cap=" << word_cap
       << " mode=coset";
    s.params = os.str();
    return s;
}

CountSeries count_conj_direct(const GroupSpec& G, const ConjClass& c,
                              const HPoint& x, const HPoint& y,
                              const std::vector<double>& T_grid, int word_cap) {
    check_grid(T_grid);
    double dxy = dist(x, y);
    double depth_max = 0.5 * (T_grid.back() + dxy - axis_constant(c)) + 0.25;
    HPoint y0 = project(c.axis, kOrigin).foot;
    double anchor_gap = dist(x, y0) + c.primitive_length();
    BallOptions bo;
    bo.radius = anchor_gap + std::max(depth_max, 0.0) + 0.25;
    bo.x = x;
    bo.y = x;
    bo.word_cap = word_cap;
    bo.prune = true;
    Ball b = enumerate_ball(G, bo);
    MatrixDedup seen;
    std::vector<double> ds;
    for (std::size_t i = 0; i < b.size(); ++i) {
        Isometry h = b.mats[i].inverse() * c.gamma.mat * b.mats[i];
        if (seen.insert(h)) ds.push_back(dist(x, apply(h, y)));
    }
    CountSeries s;
    s.kind = "conj";
    s.T_grid = T_grid;
    s.N = cumulative(std::move(ds), T_grid);
    for (double T : T_grid) {
        double need = anchor_gap +
                      std::max(0.5 * (T + dxy - axis_constant(c)) + 0.25, 0.0) +
                      0.25;
        s.complete.push_back(b.complete_at(need));
    }
    std::ostringstream os;
    os << "group=" << G.name << " class=" << fmt_word(c.gamma.word)
       << " x=" << fmt_point(x) << " y=" << fmt_point(y) << " cap=" << word_cap
       << " mode=direct";
    s.params = os.str();
    return s;
}

CountSeries count_adjusted(const GroupSpec& G, const ConjClass& c,
                           const AdjustmentPair& pair, const HPoint& x,
                           const std::vector<double>& T_grid, int word_cap) {
    check_grid(T_grid);
    double depth_max = T_grid.back() + pair.f1_bound + pair.f2_bound + 0.25;
    CosetScan scan = scan_cosets(G, c, x, std::max(depth_max, 0.0), word_cap);
    CountSeries s;
    s.kind = "adjusted";
    std::vector<double> hs;
    hs.reserve(scan.reps.size());
    for (const CosetRep& rep : scan.reps) {
        if (project(c.axis, apply(rep.g.mat, x)).dist <= 1e-12) {
            ++s.skipped;
            continue;
        }
        hs.push_back(adjusted_height(c, pair, rep, x).h);
    }
    s.T_grid = T_grid;
    s.N = cumulative(std::move(hs), T_grid);
    for (double T : T_grid) {
        double need = scan.anchor_gap +
                      std::max(T + pair.f1_bound + pair.f2_bound + 0.25, 0.0) +
                      0.25;
        s.complete.push_back(scan.ball.complete_at(need));
    }
    std::ostringstream os;
    os << "group=" << G.name << " class=" << fmt_word(c.gamma.word)
       << " pair=" << pair.label << " x=" << fmt_point(x)
       << " cap=" << word_cap;
    s.params = os.str();
    return s;
}

CountSeries count_adjusted_custom(
    const GroupSpec& G, const ConjClass& c,
    const std::function<double(const CosetRep&)>& height, double depth_max,
    const HPoint& x, const std::vector<double>& T_grid, int word_cap) {
    check_grid(T_grid);
    CosetScan scan = scan_cosets(G, c, x, std::max(depth_max, 0.0), word_cap);
    std::vector<double> hs;
    hs.reserve(scan.reps.size());
    for (const CosetRep& rep : scan.reps) hs.push_back(height(rep));
    CountSeries s;
    s.kind = "adjusted";
    s.T_grid = T_grid;
    s.N = cumulative(std::move(hs), T_grid);
    // one caller-supplied depth bound covers the whole grid
    bool complete = scan.ball.complete_at(scan.ball.radius);
    s.complete.assign(T_grid.size(), complete);
    std::ostringstream os;
    os << "group=" << G.name << " class=" << fmt_word(c.gamma.word)
       << " pair=custom x=" << fmt_point(x) << " cap=" << word_cap
       << " depth_max=" << depth_max;
    s.params = os.str();
    return s;
}

GrowthFit fit_growth(const CountSeries& s, double expected_slope) {
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < s.T_grid.size(); ++i) {
        if (!s.complete[i] || s.N[i] < 30) continue;
        xs.push_back(s.T_grid[i]);
        ys.push_back(std::log(static_cast<double>(s.N[i])));
    }
    if (xs.size() < 4)
        throw std::runtime_error("growth fit needs at least 4 usable grid points");
    double n = static_cast<double>(xs.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    GrowthFit f;
    double den = n * sxx - sx * sx;
    f.slope = (n * sxy - sx * sy) / den;
    f.intercept = (sy - f.slope * sx) / n;
    f.sigma_hat = std::exp(f.intercept);
    double ssr = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        double r = ys[i] - (f.slope * xs[i] + f.intercept);
        ssr += r * r;
    }
    if (xs.size() > 2)
        f.stderr_slope = std::sqrt(ssr / (n - 2.0) / (sxx - sx * sx / n));
    f.window_lo = xs.front();
    f.window_hi = xs.back();
    f.points_used = static_cast<int>(xs.size());
    f.deviates = std::abs(f.slope - expected_slope) > 0.15;
    return f;
}

}  // namespace hypc
