#include "hypc/measures.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "hypc/parallel.hpp"

namespace hypc {

namespace {

double wrap_pi(double a) {
    a = std::fmod(a, 2.0 * kPi);
    if (a <= -kPi) a += 2.0 * kPi;
    if (a > kPi) a -= 2.0 * kPi;
    return a;
}

// Evaluate f(0..n-1) in parallel, then reduce by pairwise summation in index
// order so the sum does not depend on the worker count.
double sum_nodes(int n, const std::function<double(int)>& f) {
    std::vector<double> vals(static_cast<std::size_t>(n), 0.0);
    parallel_for(vals.size(), 0, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) vals[i] = f(static_cast<int>(i));
    });
    for (std::size_t stride = 1; stride < vals.size(); stride *= 2)
        for (std::size_t i = 0; i + stride < vals.size(); i += 2 * stride)
            vals[i] += vals[i + stride];
    return vals.empty() ? 0.0 : vals[0];
}

// d(theta)/dt by wrap-aware central differences at steps h and h/2, combined
// to cancel the leading error term.
double dtheta(const std::function<double(double)>& theta, double t, double h) {
    if (!(h > 0.0) || t + h == t)
        throw std::invalid_argument("derivative step underflowed");
    double d1 = wrap_pi(theta(t + h) - theta(t - h)) / (2.0 * h);
    double d2 = wrap_pi(theta(t + 0.5 * h) - theta(t - 0.5 * h)) / h;
    return (4.0 * d2 - d1) / 3.0;
}

constexpr double kJacobianStep = 1e-5;

std::string scale_label(double mu_scale) {
    if (mu_scale == 1.0) return "mu_o = angle measure at o, unit scale";
    return "mu_o = angle measure at o, scale " + std::to_string(mu_scale);
}

void check_quad_args(int n_nodes, double mu_scale) {
    if (n_nodes < 4)
        throw std::invalid_argument("quadrature needs at least 4 nodes");
    if (!(mu_scale > 0.0))
        throw std::invalid_argument("measure scale must be positive");
}

// Error floor: the angle derivative carries roundoff of order
// eps / kJacobianStep ~ 1e-11 relative, so node refinement plateaus there.
double floor_error(double raw, double value) {
    return std::max(raw, 2e-10 * (1.0 + std::abs(value)));
}

}  // namespace

SigmaEstimate sigma_gamma_quad(
    const ConjClass& c, const std::function<double(const NormalVector&)>& F1,
    const HPoint& o, int n_nodes, double window_offset, double mu_scale) {
    check_quad_args(n_nodes, mu_scale);
    double period = c.primitive_length();
    auto rule = [&](int n) {
        double step = period / n;
        // flat index: first the right side, then the left
        return sum_nodes(2 * n, [&](int i) {
            Side side = i < n ? Side::right : Side::left;
            int j = i < n ? i : i - n;
            double s = window_offset + (j + 0.5) * step;
            auto theta = [&](double t) {
                return angle_from(o, normal_to_tangent(NormalVector{c, t, side}).fwd);
            };
            double jac = std::abs(dtheta(theta, s, kJacobianStep));
            UnitTangent u = normal_to_tangent(NormalVector{c, s, side});
            double w =
                std::exp(F1(NormalVector{c, s, side}) - busemann(u.fwd, u.base, o));
            return w * jac * step * mu_scale;
        });
    };
    double coarse = rule(n_nodes);
    double fine = rule(2 * n_nodes);
    return SigmaEstimate{fine, floor_error(std::abs(fine - coarse), fine),
                         2 * n_nodes, scale_label(mu_scale)};
}

SigmaEstimate sigma_x_quad(const HPoint& x,
                           const std::function<double(const UnitTangent&)>& F2,
                           const HPoint& o, int n_nodes, double mu_scale) {
    check_quad_args(n_nodes, mu_scale);
    auto rule = [&](int n) {
        double step = 2.0 * kPi / n;
        return sum_nodes(n, [&](int i) {
            double phi = (i + 0.5) * step;
            auto theta = [&](double t) {
                return angle_from(o, boundary_at_angle(x, t));
            };
            double jac = std::abs(dtheta(theta, phi, kJacobianStep));
            HBoundary zeta = boundary_at_angle(x, phi);
            double w = std::exp(F2(tangent(x, zeta)) - busemann(zeta, x, o));
            return w * jac * step * mu_scale;
        });
    };
    double coarse = rule(n_nodes);
    double fine = rule(2 * n_nodes);
    return SigmaEstimate{fine, floor_error(std::abs(fine - coarse), fine),
                         2 * n_nodes, scale_label(mu_scale)};
}

RatioPrediction predict_ratio(const ConjClass& c, const AdjustmentPair& pair_a,
                              const AdjustmentPair& pair_b, const HPoint& x,
                              const HPoint& o, const CountSeries& series_a,
                              const CountSeries& series_b) {
    if (series_a.T_grid != series_b.T_grid)
        throw std::invalid_argument("count series grids differ");
    const int n = 256;
    double num = sigma_gamma_quad(c, pair_a.F1, o, n).value *
                 sigma_x_quad(x, pair_a.F2, o, n).value;
    double den = sigma_gamma_quad(c, pair_b.F1, o, n).value *
                 sigma_x_quad(x, pair_b.F2, o, n).value;
    if (!(num > 0.0) || !(den > 0.0))
        throw std::runtime_error("sigma estimate not positive");
    RatioPrediction out;
    out.pair_a = pair_a.label;
    out.pair_b = pair_b.label;
    out.predicted_ratio = num / den;

    double sum = 0.0;
    int used = 0;
    std::int64_t min_count = 0;
    for (std::size_t k = series_a.T_grid.size(); k-- > 0 && used < 3;) {
        if (!series_a.complete[k] || !series_b.complete[k]) continue;
        if (series_a.N[k] <= 0 || series_b.N[k] <= 0) continue;
        sum += static_cast<double>(series_a.N[k]) /
               static_cast<double>(series_b.N[k]);
        std::int64_t lo = std::min(series_a.N[k], series_b.N[k]);
        min_count = used == 0 ? lo : std::min(min_count, lo);
        ++used;
    }
    if (used == 0)
        throw std::runtime_error(
            "count series share no complete grid points with positive counts");
    out.empirical_ratio = sum / used;
    out.rel_dev = std::abs(out.empirical_ratio / out.predicted_ratio - 1.0);
    out.low_confidence = min_count < 100;
    return out;
}

}  // namespace hypc
