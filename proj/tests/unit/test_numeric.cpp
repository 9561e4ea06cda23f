#include <catch_amalgamated.hpp>

#include <cmath>

#include "qhe/numeric.hpp"

using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;
namespace nm = qhe::numeric;

TEST_CASE("band fraction matches high-precision values")
{
    // 1/x - 1/(e^x - 1) evaluated with 50-digit arithmetic.
    CHECK_THAT(nm::band_fraction(1.0), WithinRel(0.41802329313067358, 1e-15));
    CHECK_THAT(nm::band_fraction(0.4), WithinRel(0.46675521828026364, 1e-15));
    CHECK_THAT(nm::band_fraction(1e-6), WithinRel(0.49999991666666667, 1e-15));
    CHECK_THAT(nm::band_fraction(50.0), WithinRel(0.02, 1e-15));
}

TEST_CASE("series and closed branch agree at the switch point")
{
    const double x = nm::series_threshold;
    const double series = nm::band_fraction(std::nextafter(x, 0.0));
    const double closed = nm::band_fraction(x);
    CHECK_THAT(series, WithinRel(closed, 1e-13));
}

TEST_CASE("g is strictly decreasing from -1/2 towards -1")
{
    double prev = nm::engine_g(1e-9);
    CHECK_THAT(prev, WithinAbs(-0.5, 1e-9));
    for (double x = 1e-4; x < 200.0; x *= 1.1) {
        const double g = nm::engine_g(x);
        CHECK(g < prev);
        CHECK(g > -1.0);
        prev = g;
    }
}

TEST_CASE("g equals its defining expression")
{
    for (double x : {0.02, 0.3, 1.0, 3.0, 10.0}) {
        const double direct = 1.0 / (std::exp(-x) - 1.0) + 1.0 / x;
        CHECK_THAT(nm::engine_g(x), WithinRel(direct, 1e-12));
    }
}

TEST_CASE("compensated sum recovers small terms")
{
    nm::CompensatedSum s;
    s.add(1e16);
    for (int i = 0; i < 1000; ++i) s.add(1.0);
    s.add(-1e16);
    CHECK(s.value() == 1000.0);
}

TEST_CASE("relative error uses the scale floor")
{
    CHECK(nm::relative_error(1.0, 1.0) == 0.0);
    CHECK_THAT(nm::relative_error(1e-20, 2e-20, 1.0), WithinAbs(1e-20, 1e-30));
    CHECK_THAT(nm::relative_error(2.0, 1.0), WithinAbs(0.5, 1e-15));
}
