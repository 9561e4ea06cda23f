#include <catch_amalgamated.hpp>

#include <cmath>

#include "qhe/equilibrium.hpp"
#include "qhe/verification.hpp"
#include "support.hpp"

using namespace qhe;

TEST_CASE("reference point verifies")
{
    const auto r = verify::run_verification(testing::reference_spec(), testing::reference_ends());
    CHECK(r.validated);
    CHECK(r.pass);
    CHECK(r.entries.size() == 6);
    for (const auto& e : r.entries) {
        CHECK(e.pass);
        CHECK(e.ladder);
    }
    REQUIRE(r.high_temperature_gaps.size() == 2);
    for (const auto& g : r.high_temperature_gaps) CHECK(std::abs(g.gap - g.asymptote) < 1e-2);
    CHECK(std::abs(r.high_temperature_gaps[1].gap - r.high_temperature_gaps[1].asymptote) <
          std::abs(r.high_temperature_gaps[0].gap - r.high_temperature_gaps[0].asymptote));
}

TEST_CASE("a corrupted rescaling constraint is reported, not compared")
{
    auto spec = testing::reference_spec();
    spec.cold = LevelStructure(spec.cold.e0(), spec.cold.delta_gap(), spec.cold.broadening(), spec.cold.rho() * 1.01);
    const auto r = verify::run_verification(spec, testing::reference_ends());
    CHECK_FALSE(r.validated);
    CHECK_FALSE(r.pass);
    REQUIRE(r.validation_errors.size() == 1);
    CHECK(r.validation_errors[0].find("rescaling constraint") != std::string::npos);
    CHECK(r.entries.empty());
}

TEST_CASE("reductions are checked on their subspaces")
{
    const auto eq = make_spec_from_broadenings(2.0, 1.5, 0.5, 1.5, 0.7, 4.0, 1.0);
    auto r = verify::run_verification(eq, {0.2, 0.6});
    CHECK(r.pass);
    CHECK(std::any_of(r.checks.begin(), r.checks.end(), [](auto& c) { return c.name == "reduction.equal_broadening"; }));

    r = verify::run_verification(testing::reference_spec(), {0.4, 0.4});
    CHECK(r.pass);
    CHECK(std::any_of(r.checks.begin(), r.checks.end(), [](auto& c) { return c.name == "reduction.frozen_population"; }));
}

TEST_CASE("equilibrium mode reports the Carnot comparison")
{
    const auto spec = testing::reference_spec();
    const auto r = verify::run_verification(spec, equilibrium_endpoints(spec));
    CHECK(r.pass);
    CHECK(std::any_of(r.notes.begin(), r.notes.end(), [](auto& n) { return n.find("carnot") != std::string::npos; }));
}

TEST_CASE("random draws are reproducible and inside their ranges")
{
    const auto a = verify::draw_samples(7, 500);
    const auto b = verify::draw_samples(7, 500);
    REQUIRE(a.size() == 500);
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].delta_h == b[i].delta_h);
        CHECK(a[i].p0_cold == b[i].p0_cold);
        CHECK((a[i].gap_h >= 0.0 && a[i].gap_h < 5.0));
        CHECK((a[i].delta_l >= 0.05 && a[i].delta_l < 5.0));
        CHECK((a[i].rho_h >= 0.1 && a[i].rho_h < 10.0));
        CHECK((a[i].t_hot >= 0.1 && a[i].t_hot < 20.0));
        CHECK((a[i].p0_hot >= 0.05 && a[i].p0_hot < 0.95));
    }
    CHECK(verify::draw_samples(8, 1)[0].delta_h != a[0].delta_h);
}

TEST_CASE("battery result does not depend on the thread count")
{
    const auto spec = testing::reference_spec();
    const auto ends = testing::reference_ends();
    const auto one = verify::run_battery(spec, ends, 3, 60, {}, 1);
    const auto many = verify::run_battery(spec, ends, 3, 60, {}, 4);
    CHECK(one.pass);
    CHECK(many.pass);
    REQUIRE(one.quantities.size() == many.quantities.size());
    for (std::size_t i = 0; i < one.quantities.size(); ++i) {
        CHECK(one.quantities[i].name == many.quantities[i].name);
        CHECK(one.quantities[i].worst == many.quantities[i].worst);
        CHECK(one.quantities[i].worst_sample == many.quantities[i].worst_sample);
    }
    CHECK(one.f_limit.pass);
    CHECK(one.f_limit.max_abs_residual < 1e-5);
}

TEST_CASE("a too-strict tolerance makes the battery fail")
{
    verify::Config cfg;
    cfg.match_tol = 1e-30;
    const auto rep = verify::run_battery(testing::reference_spec(), testing::reference_ends(), 3, 20, cfg);
    CHECK_FALSE(rep.pass);
    CHECK_FALSE(rep.failures.empty());
}
