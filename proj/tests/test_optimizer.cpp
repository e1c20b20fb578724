#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "gdss/optimizer.hpp"
#include "gdss/rng.hpp"

using gdss::minimize_bounded;
using gdss::NelderMeadOptions;

TEST_CASE("finds an interior quadratic minimum") {
    auto f = [](std::span<const double> x) { return (x[0] - 0.2) * (x[0] - 0.2) + 3 * (x[1] + 0.1) * (x[1] + 0.1); };
    const double x0[] = {0.0, 0.0};
    const double lo[] = {-0.5, -0.5};
    const double hi[] = {0.5, 0.5};
    const auto r = minimize_bounded(f, x0, lo, hi, {1e-14, 1e-8, 500, 0.1});
    CHECK(r.converged);
    CHECK(r.x[0] == doctest::Approx(0.2).epsilon(1e-6));
    CHECK(r.x[1] == doctest::Approx(-0.1).epsilon(1e-6));
}

TEST_CASE("minimum outside the box lands on the boundary") {
    auto f = [](std::span<const double> x) { return (x[0] - 2.0) * (x[0] - 2.0) + x[1] * x[1]; };
    const double x0[] = {0.0, 0.3};
    const double lo[] = {-0.5, -0.5};
    const double hi[] = {0.5, 0.5};
    int outside = 0;
    auto guarded = [&](std::span<const double> x) {
        if (std::abs(x[0]) > 0.5 || std::abs(x[1]) > 0.5) ++outside;
        return f(x);
    };
    const auto r = minimize_bounded(guarded, x0, lo, hi);
    CHECK(outside == 0);
    CHECK(r.x[0] == doctest::Approx(0.5));
    CHECK(std::abs(r.x[1]) < 1e-4);
}

TEST_CASE("never returns worse than the start and respects the iteration cap") {
    gdss::Rng rng(4);
    for (int trial = 0; trial < 100; ++trial) {
        const double a = rng.uniform(-1, 1);
        const double b = rng.uniform(-1, 1);
        auto rosen = [&](std::span<const double> x) {
            return 100 * std::pow(x[1] - x[0] * x[0] - b, 2) + std::pow(a - x[0], 2) + std::sin(7 * x[0]);
        };
        const double x0[] = {rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5)};
        const double lo[] = {-0.5, -0.5};
        const double hi[] = {0.5, 0.5};
        const auto r = minimize_bounded(rosen, x0, lo, hi, {1e-12, 1e-12, 25, 0.1});
        CHECK(r.value <= rosen(x0));
        CHECK(r.iterations <= 25);
        CHECK(std::abs(r.x[0]) <= 0.5);
        CHECK(std::abs(r.x[1]) <= 0.5);
    }
}

TEST_CASE("NaN objective values are treated as worst") {
    auto f = [](std::span<const double> x) { return x[0] > 0.3 ? NAN : (x[0] + 0.1) * (x[0] + 0.1); };
    const double x0[] = {0.0};
    const double lo[] = {-1.0};
    const double hi[] = {1.0};
    const auto r = minimize_bounded(f, x0, lo, hi);
    CHECK(r.x[0] == doctest::Approx(-0.1).epsilon(1e-5));
}

TEST_CASE("argument validation") {
    auto f = [](std::span<const double>) { return 0.0; };
    const double x0[] = {0.0, 0.0};
    const double lo1[] = {0.0};
    const double lo[] = {1.0, 0.0};
    const double hi[] = {0.0, 1.0};
    CHECK_THROWS_AS(minimize_bounded(f, x0, lo1, hi), std::invalid_argument);
    CHECK_THROWS_AS(minimize_bounded(f, x0, lo, hi), std::invalid_argument);
}
