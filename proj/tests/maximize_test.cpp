#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

#include "ptbench/maximize.hpp"

using namespace ptbench;
using Catch::Matchers::WithinAbs;

TEST_CASE("refinement climbs a separable quadratic") {
    const auto f = [](std::span<const double> x) {
        return -(x[0] - 0.3) * (x[0] - 0.3) - 2.0 * (x[1] + 1.7) * (x[1] + 1.7);
    };
    std::vector<double> x{0.0, 0.0};
    const double best = refine_maximize(f, x, {});
    REQUIRE_THAT(x[0], WithinAbs(0.3, 1e-7));
    REQUIRE_THAT(x[1], WithinAbs(-1.7, 1e-7));
    REQUIRE_THAT(best, WithinAbs(0.0, 1e-12));
}

TEST_CASE("refinement handles coupled coordinates") {
    // maximum of -(x-y)^2 - (x+y-2)^2 at x = y = 1
    const auto f = [](std::span<const double> x) {
        const double a = x[0] - x[1];
        const double b = x[0] + x[1] - 2.0;
        return -a * a - b * b;
    };
    std::vector<double> x{0.4, -0.2};
    refine_maximize(f, x, {});
    REQUIRE_THAT(x[0], WithinAbs(1.0, 1e-6));
    REQUIRE_THAT(x[1], WithinAbs(1.0, 1e-6));
}

TEST_CASE("refinement never leaves a flat objective") {
    const auto f = [](std::span<const double>) { return 4.0; };
    std::vector<double> x{0.25};
    const double best = refine_maximize(f, x, {});
    REQUIRE(best == 4.0);
    REQUIRE(x[0] == 0.25); // ties never move the point
}

TEST_CASE("refinement sharpens a one-dimensional peak") {
    const auto f = [](std::span<const double> x) { return std::cos(x[0] - 0.123); };
    std::vector<double> x{0.5};
    RefineOptions opt;
    opt.initial_step = 0.5;
    const double best = refine_maximize(f, x, opt);
    REQUIRE_THAT(x[0], WithinAbs(0.123, 1e-6));
    REQUIRE_THAT(best, WithinAbs(1.0, 1e-12));
}

TEST_CASE("refinement validates its inputs") {
    const auto f = [](std::span<const double> x) { return -x[0] * x[0]; };
    std::vector<double> empty;
    REQUIRE_THROWS_AS(refine_maximize(f, empty, {}), std::invalid_argument);

    std::vector<double> x{1.0};
    RefineOptions bad;
    bad.initial_step = 0.0;
    REQUIRE_THROWS_AS(refine_maximize(f, x, bad), std::invalid_argument);
    bad.initial_step = 0.1;
    bad.min_step = -1.0;
    REQUIRE_THROWS_AS(refine_maximize(f, x, bad), std::invalid_argument);
}
