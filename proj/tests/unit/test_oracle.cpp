#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "qhe/oracle.hpp"
#include "qhe/otto_cycle.hpp"
#include "qhe/quadrature.hpp"
#include "qhe/verification.hpp"
#include "support.hpp"

using namespace qhe;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("quadrature integrates known functions")
{
    CHECK_THAT(quad::quad_integrate([](double x) { return std::exp(x); }, 0.0, 1.0, 1e-13),
               WithinRel(std::numbers::e - 1.0, 1e-13));
    CHECK_THAT(quad::quad_integrate([](double x) { return std::sin(x); }, 0.0, std::numbers::pi, 1e-12),
               WithinRel(2.0, 1e-12));
    CHECK_THAT(quad::quad_integrate([](double x) { return std::sqrt(x); }, 0.0, 1.0, 1e-10), WithinRel(2.0 / 3.0, 1e-10));
    // Narrow peak forces adaptive refinement.
    const auto r = quad::integrate([](double x) { return 1.0 / (1e-4 + x * x); }, -1.0, 1.0);
    CHECK_THAT(r.value, WithinRel(2.0 / 1e-2 * std::atan(1.0 / 1e-2), 1e-11));
    CHECK(r.intervals > 1);
}

TEST_CASE("quadrature rejects bad input and reports non-convergence")
{
    auto f = [](double x) { return x; };
    CHECK_THROWS_AS(quad::quad_integrate(f, 0.0, 1.0, 0.0), InvalidInput);
    CHECK_THROWS_AS(quad::quad_integrate(f, 0.0, 1.0, 1e-2), InvalidInput);
    CHECK_THROWS_AS(quad::quad_integrate(f, 1.0, 0.0, 1e-8), InvalidInput);
    quad::Options opt;
    opt.max_intervals = 4;
    CHECK_THROWS_AS(quad::integrate([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0, opt), QuadratureError);
}

TEST_CASE("closed forms agree with quadrature over 1000 random structures")
{
    const auto samples = verify::draw_samples(2024, 1000);
    for (const auto& s : samples) {
        const auto spec = s.spec();
        const auto ends = s.endpoints();
        const auto q = oracle::oracle_branch_quantities(spec, ends, 1e-12);
        const auto r = run_cycle(spec, ends);
        CHECK(numeric::relative_error(branch_work_2(spec, s.p0_hot), q.ledgers[1].work_out, q.work_scale_2) <= 1e-9);
        CHECK(numeric::relative_error(branch_work_4(spec, s.p0_cold), q.ledgers[3].work_out, q.work_scale_4) <= 1e-9);
        CHECK(numeric::relative_error(r.net_work, q.net_work, q.work_scale_2 + q.work_scale_4) <= 1e-9);
        const auto corners = cycle_corners(spec, ends);
        for (int k = 0; k < 4; ++k)
            CHECK(numeric::relative_error(corners[k].mean_energy, q.corner_energy[k]) <= 1e-10);
    }
}

TEST_CASE("ladder oracle converges to the closed form")
{
    const auto spec = testing::reference_spec();
    const auto ends = testing::reference_ends();
    const double exact = net_work(spec, ends);

    auto err = [&](int n, oracle::LadderPlacement p) { return std::abs(oracle::ladder_oracle(spec, ends, n, p).cycle.net_work - exact); };
    // Left-edge levels: first order, error halves when N doubles.
    for (int n : {100, 200, 400}) {
        const double ratio = err(2 * n, oracle::LadderPlacement::left_edge) / err(n, oracle::LadderPlacement::left_edge);
        CHECK(ratio >= 0.4);
        CHECK(ratio <= 0.6);
    }
    // Midpoint levels: second order.
    const double r2 = err(200, oracle::LadderPlacement::midpoint) / err(100, oracle::LadderPlacement::midpoint);
    CHECK_THAT(r2, WithinAbs(0.25, 0.02));

    const auto conv = verify::ladder_convergence(spec, ends);
    CHECK(conv.monotone);
    CHECK(conv.min_ratio >= 8.0);
    CHECK(conv.pass);
}

TEST_CASE("ladder heats from population changes match the first-law ledgers")
{
    const auto spec = make_spec_from_broadenings(0.5, 3.0, 2.0, 0.7, 2.0, 8.0, 0.5);
    const auto lad = oracle::ladder_oracle(spec, {0.2, 0.7}, 500);
    for (int i = 0; i < 4; ++i)
        CHECK_THAT(lad.heat_by_population_change[i], WithinAbs(lad.cycle.ledgers[i].heat_in, 1e-12));
    CHECK_THROWS_AS(oracle::ladder_oracle(spec, {0.2, 0.7}, 1), InvalidInput);
}
