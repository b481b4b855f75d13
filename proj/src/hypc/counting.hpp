#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "hypc/adjust.hpp"
#include "hypc/fuchsian.hpp"
#include "hypc/plane.hpp"

namespace hypc {

// One counting experiment: cumulative counts N(T) over an increasing grid,
// with a per-T completeness flag from the enumeration certificate.
struct CountSeries {
    std::string kind;  // "orbit" | "conj" | "adjusted"
    std::vector<double> T_grid;
    std::vector<std::int64_t> N;
    std::vector<bool> complete;
    std::string params;
    std::int64_t skipped = 0;  // degenerate cosets (base point on the axis)
};

// Least-squares fit of log N against T, restricted to complete grid points
// with N >= 30.
struct GrowthFit {
    double slope = 0.0;
    double intercept = 0.0;
    double sigma_hat = 0.0;  // exp(intercept)
    double stderr_slope = 0.0;
    double window_lo = 0.0;
    double window_hi = 0.0;
    int points_used = 0;
    bool deviates = false;  // |slope - expected| > 0.15
};

// Orbit count: N(T) = #{g : dist(x, g y) <= T} from one enumeration pass.
CountSeries count_orbit(const GroupSpec& G, const HPoint& x, const HPoint& y,
                        const std::vector<double>& T_grid, int word_cap);

// Conjugacy count via canonical coset representatives:
// N(T) = #{cosets <primitive> g : dist(g x, gamma g y) <= T}.
CountSeries count_conj(const GroupSpec& G, const ConjClass& c, const HPoint& x,
                       const HPoint& y, const std::vector<double>& T_grid,
                       int word_cap);

// Same count through the other side of the coset correspondence, with no
// canonicalization involved: N(T) = #{distinct h = g^-1 gamma g :
// dist(x, h y) <= T}.  Cross-check for count_conj; equal wherever complete.
CountSeries count_conj_direct(const GroupSpec& G, const ConjClass& c,
                              const HPoint& x, const HPoint& y,
                              const std::vector<double>& T_grid, int word_cap);

// Adjusted count: N(T) = #{cosets : adjusted_height <= T}.  Cosets whose
// representative maps x onto the axis have no height and are tallied in
// skipped.
CountSeries count_adjusted(const GroupSpec& G, const ConjClass& c,
                           const AdjustmentPair& pair, const HPoint& x,
                           const std::vector<double>& T_grid, int word_cap);

// Adjusted count under a caller-supplied height.  depth_max must bound
// dist(g x, axis) over every coset with height <= max(T_grid); the
// enumeration radius is derived from it.
CountSeries count_adjusted_custom(
    const GroupSpec& G, const ConjClass& c,
    const std::function<double(const CosetRep&)>& height, double depth_max,
    const HPoint& x, const std::vector<double>& T_grid, int word_cap);

// Throws std::runtime_error when fewer than 4 grid points are usable.
GrowthFit fit_growth(const CountSeries& s, double expected_slope);

}  // namespace hypc
