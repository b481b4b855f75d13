#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "hypc/adjust.hpp"
#include "hypc/counting.hpp"
#include "hypc/fuchsian.hpp"
#include "hypc/plane.hpp"
#include "oracles.hpp"

using namespace hypc;

namespace {

std::vector<double> grid(double lo, double hi, double step) {
    std::vector<double> g;
    for (double T = lo; T <= hi + 1e-9; T += step) g.push_back(T);
    return g;
}

}  // namespace

TEST_CASE("orbit count on the cyclic group is 2*floor(T/2)+1") {
    GroupSpec G = load_group("cyclic-demo");
    CountSeries s = count_orbit(G, kOrigin, kOrigin, grid(1.0, 5.0, 1.0), 10);
    // powers gamma^n displace the origin by 2|n|
    std::vector<std::int64_t> expect{1, 3, 3, 5, 5};
    REQUIRE(s.N.size() == expect.size());
    for (std::size_t i = 0; i < expect.size(); ++i) {
        CHECK(s.N[i] == expect[i]);
        CHECK(s.complete[i]);
    }
    CHECK(s.kind == "orbit");
}

TEST_CASE("orbit count separates disjoint orbits and counts the identity") {
    GroupSpec G = load_group("cyclic-demo");
    // y = 2i is not in the orbit of i; nearest orbit point is ln 2 away
    CountSeries off = count_orbit(G, kOrigin, HPoint{0.0, 2.0}, {0.2, 0.5}, 8);
    CHECK(off.N[0] == 0);
    CHECK(off.N[1] == 0);
    CountSeries on = count_orbit(G, kOrigin, kOrigin, {0.0, 0.2}, 8);
    CHECK(on.N[0] == 1);
    CHECK(on.N[1] == 1);
}

TEST_CASE("orbit count matches the exhaustive census on bolza") {
    GroupSpec G = load_group("bolza");
    std::vector<double> g = grid(3.0, 6.0, 1.0);
    CountSeries s = count_orbit(G, kOrigin, kOrigin, g, 6);
    for (std::size_t i = 0; i < g.size(); ++i) {
        oracle::DfsCensus ref = oracle::dfs_census(G, 6, kOrigin, kOrigin, g[i]);
        CHECK(s.N[i] == static_cast<std::int64_t>(ref.within));
        CHECK(s.complete[i]);
    }
    // monotone by construction of the cumulative counts
    for (std::size_t i = 0; i + 1 < s.N.size(); ++i) CHECK(s.N[i] <= s.N[i + 1]);
}

TEST_CASE("conjugacy count inside the cyclic group itself is an indicator") {
    GroupSpec G = load_group("cyclic-demo");
    ConjClass c = conj_data(G, word_element(G, {0}));
    HPoint x = kOrigin;
    HPoint y{0.2, 1.1};
    // the whole group is one coset, so the count jumps 0 -> 1 at d(x, gamma y)
    double dstar = dist(x, apply(c.gamma.mat, y));
    CountSeries s = count_conj(G, c, x, y, {dstar - 0.1, dstar + 0.1}, 10);
    CHECK(s.N[0] == 0);
    CHECK(s.N[1] == 1);
    CountSeries d = count_conj_direct(G, c, x, y, {dstar - 0.1, dstar + 0.1}, 10);
    CHECK(d.N[0] == 0);
    CHECK(d.N[1] == 1);
}

TEST_CASE("conjugacy count below the minimal displacement is zero") {
    GroupSpec G = load_group("bolza");
    ConjClass c = conj_data(G, word_element(G, {0}));
    // no conjugate of gamma moves y closer to x than the translation length
    CountSeries s = count_conj(G, c, kOrigin, kOrigin, {1.0, 2.0, 3.0}, 6);
    CHECK(s.N[0] == 0);
    CHECK(s.N[1] == 0);
    CHECK(s.N[2] == 0);
}

TEST_CASE("coset and direct conjugacy counts agree exactly") {
    GroupSpec B = load_group("bolza");
    ConjClass c = conj_data(B, word_element(B, {0}));
    std::vector<double> g = grid(4.0, 9.0, 0.5);
    SUBCASE("same base points") {
        CountSeries a = count_conj(B, c, kOrigin, kOrigin, g, 9);
        CountSeries b = count_conj_direct(B, c, kOrigin, kOrigin, g, 9);
        REQUIRE(a.N.size() == b.N.size());
        for (std::size_t i = 0; i < a.N.size(); ++i) {
            CHECK(a.N[i] == b.N[i]);
            CHECK(a.complete[i]);
            CHECK(b.complete[i]);
        }
        CHECK(a.N.back() >= 10);  // the window genuinely exercises growth
    }
    SUBCASE("split base points") {
        HPoint x{0.1, 0.9};
        HPoint y{-0.2, 1.3};
        CountSeries a = count_conj(B, c, x, y, g, 9);
        CountSeries b = count_conj_direct(B, c, x, y, g, 9);
        for (std::size_t i = 0; i < a.N.size(); ++i) CHECK(a.N[i] == b.N[i]);
    }
}

TEST_CASE("adjusted count with the zero pair counts depth directly") {
    GroupSpec B = load_group("bolza");
    ConjClass c = conj_data(B, word_element(B, {0}));
    HPoint x{0.15, 1.1};  // off the axis: no degenerate coset
    std::vector<double> g = grid(1.0, 4.0, 0.5);
    CountSeries s = count_adjusted(B, c, zero_pair(), x, g, 9);
    CHECK(s.skipped == 0);
    // independent route: custom height equal to the raw depth
    auto depth = [&](const CosetRep& r) {
        return project(c.axis, apply(r.g.mat, x)).dist;
    };
    CountSeries d =
        count_adjusted_custom(B, c, depth, g.back() + 0.1, x, g, 9);
    REQUIRE(s.N.size() == d.N.size());
    for (std::size_t i = 0; i < s.N.size(); ++i) CHECK(s.N[i] == d.N[i]);
    for (std::size_t i = 0; i < s.N.size(); ++i) CHECK(s.complete[i]);
}

TEST_CASE("adjusted count skips the degenerate coset when x is on the axis") {
    GroupSpec B = load_group("bolza");
    ConjClass c = conj_data(B, word_element(B, {0}));
    CountSeries s = count_adjusted(B, c, zero_pair(), kOrigin,
                                   grid(1.0, 3.0, 1.0), 8);
    CHECK(s.skipped == 1);
}

TEST_CASE("constant adjustments shift the count grid exactly") {
    GroupSpec B = load_group("bolza");
    ConjClass c = conj_data(B, word_element(B, {0}));
    HPoint x{0.15, 1.1};
    std::vector<double> g = grid(1.0, 4.5, 0.5);
    CountSeries zero = count_adjusted(B, c, zero_pair(), x, g, 9);
    CountSeries shifted = count_adjusted(B, c, constant_pair(0.3, 0.2), x, g, 9);
    // h drops by exactly 0.5, so counts at T match zero-pair counts at T+0.5
    for (std::size_t i = 0; i + 1 < g.size(); ++i) {
        REQUIRE(zero.complete[i + 1]);
        REQUIRE(shifted.complete[i]);
        CHECK(shifted.N[i] == zero.N[i + 1]);
    }
}

TEST_CASE("half-span height reproduces the conjugacy count at doubled T") {
    GroupSpec B = load_group("bolza");
    ConjClass c = conj_data(B, word_element(B, {0}));
    HPoint x{0.1, 0.9};
    HPoint y{-0.2, 1.3};
    std::vector<double> half = grid(2.0, 4.5, 0.5);
    std::vector<double> full;
    for (double T : half) full.push_back(2.0 * T);
    auto h = [&](const CosetRep& r) {
        return 0.5 * dist(apply(r.g.mat, x),
                          apply(c.gamma.mat, apply(r.g.mat, y)));
    };
    // depth <= (2T + d(x,y) - 2 log sinh(l/2))/2 for h <= T
    double depth_max = 0.5 * (2.0 * half.back() + dist(x, y) -
                              2.0 * std::log(std::sinh(0.5 * c.translation_length))) +
                       0.25;
    CountSeries a = count_adjusted_custom(B, c, h, depth_max, x, half, 9);
    CountSeries b = count_conj(B, c, x, y, full, 9);
    REQUIRE(a.N.size() == b.N.size());
    for (std::size_t i = 0; i < a.N.size(); ++i) CHECK(a.N[i] == b.N[i]);
    CHECK(a.N.back() >= 10);
}

TEST_CASE("growth fit recovers a synthetic exponent") {
    CountSeries s;
    s.kind = "orbit";
    s.T_grid = grid(4.0, 12.0, 0.5);
    for (double T : s.T_grid) {
        s.N.push_back(static_cast<std::int64_t>(std::llround(3.0 * std::exp(0.5 * T))));
        s.complete.push_back(true);
    }
    GrowthFit f = fit_growth(s, 0.5);
    CHECK(std::abs(f.slope - 0.5) <= 0.02);
    CHECK(f.sigma_hat >= 2.7);
    CHECK(f.sigma_hat <= 3.3);
    CHECK_FALSE(f.deviates);
    CHECK(f.points_used >= 10);
}

TEST_CASE("growth fit flags a constant series and rejects thin data") {
    CountSeries s;
    s.T_grid = grid(1.0, 4.0, 1.0);
    s.N = {50, 50, 50, 50};
    s.complete = {true, true, true, true};
    GrowthFit f = fit_growth(s, 0.5);
    CHECK(std::abs(f.slope) <= 1e-12);
    CHECK(f.deviates);

    CountSeries thin;
    thin.T_grid = {1.0, 2.0, 3.0, 4.0};
    thin.N = {50, 60, 20, 70};  // the N=20 point is dropped, leaving 3
    thin.complete = {true, true, true, true};
    CHECK_THROWS_AS(fit_growth(thin, 0.5), std::runtime_error);

    CountSeries incomplete;
    incomplete.T_grid = {1.0, 2.0, 3.0, 4.0, 5.0};
    incomplete.N = {50, 60, 70, 80, 90};
    incomplete.complete = {true, true, true, true, false};
    GrowthFit f2 = fit_growth(incomplete, 0.1);
    CHECK(f2.points_used == 4);
    CHECK(f2.window_hi == 4.0);
}

TEST_CASE("fit on a real bolza orbit window sits near unit slope") {
    GroupSpec B = load_group("bolza");
    CountSeries s = count_orbit(B, kOrigin, kOrigin, grid(5.0, 9.0, 0.5), 9);
    GrowthFit f = fit_growth(s, 1.0);
    CHECK(f.slope >= 0.75);
    CHECK(f.slope <= 1.25);
    CHECK(f.points_used >= 5);
}

TEST_CASE("count series reject malformed grids") {
    GroupSpec G = load_group("cyclic-demo");
    CHECK_THROWS_AS(count_orbit(G, kOrigin, kOrigin, {}, 8),
                    std::invalid_argument);
    CHECK_THROWS_AS(count_orbit(G, kOrigin, kOrigin, {2.0, 1.0}, 8),
                    std::invalid_argument);
}
