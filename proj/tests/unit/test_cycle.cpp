#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "qhe/equilibrium.hpp"
#include "qhe/otto_cycle.hpp"
#include "support.hpp"

using namespace qhe;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("reference point values")
{
    const auto spec = testing::reference_spec();
    const auto ends = testing::reference_ends();
    CHECK_THAT(engine_f(spec, ends), WithinRel(-0.082282993769152238, 1e-14));
    CHECK_THAT(net_work(spec, ends), WithinRel(0.11771700623084776, 1e-14));
    const auto q = heat_aggregates(spec, ends);
    CHECK_THAT(q.heat_in_total, WithinRel(0.43543401246169552, 1e-14));
    CHECK_THAT(q.heat_out_total, WithinRel(0.31771700623084776, 1e-14));
    CHECK_THAT(efficiency(spec, ends), WithinRel(0.27034407708608466, 1e-14));
}

TEST_CASE("engine function at explicit arguments")
{
    CHECK_THAT(engine_f(0.3, 0.5, 0.4, 1.0), WithinRel(-0.082282993769152238, 1e-14));
    CHECK_THROWS_AS(engine_f(0.3, 0.5, 0.0, 1.0), InvalidInput);
    CHECK_THROWS_AS(engine_f(1.5, 0.5, 1.0, 1.0), InvalidInput);
}

TEST_CASE("engine function tends to (p0_h - p0_l)/2 for narrow bands")
{
    for (auto [ph, pl] : {std::pair{0.3, 0.5}, std::pair{0.9, 0.1}, std::pair{0.4, 0.4}})
        CHECK_THAT(engine_f(ph, pl, 1e-6, 1e-6), WithinAbs((ph - pl) / 2.0, 1e-6));
}

TEST_CASE("adiabatic map keeps the fractional band position")
{
    const auto spec = make_spec_from_broadenings(1.0, 2.0, 0.5, 0.5, 1.0, 3.0, 1.0);
    CHECK(adiabatic_energy_map(spec, spec.hot.e_min()) == spec.cold.e_min());
    CHECK_THAT(adiabatic_energy_map(spec, spec.hot.e_max()), WithinRel(spec.cold.e_max(), 1e-15));
    CHECK_THAT(adiabatic_energy_map(spec, 2.0), WithinRel(0.75, 1e-15));
    for (double e = spec.hot.e_min(); e <= spec.hot.e_max(); e += 0.1)
        CHECK_THAT(inverse_adiabatic_energy_map(spec, adiabatic_energy_map(spec, e)), WithinRel(e, 1e-14));
    CHECK_THROWS_AS(adiabatic_energy_map(spec, 0.5), InvalidInput);
    CHECK_THROWS_AS(inverse_adiabatic_energy_map(spec, 2.0), InvalidInput);
}

TEST_CASE("ledgers close: heat equals energy change plus work on every stroke")
{
    const auto spec = testing::reference_spec();
    const auto ends = testing::reference_ends();
    const auto r = run_cycle(spec, ends);
    double du = 0.0, w = 0.0, q = 0.0;
    for (const auto& l : r.ledgers) {
        CHECK(l.heat_in == l.delta_u + l.work_out);
        du += l.delta_u;
        w += l.work_out;
        q += l.heat_in;
    }
    CHECK_THAT(du, WithinAbs(0.0, 1e-15));
    CHECK_THAT(w, WithinRel(r.net_work, 1e-13));
    CHECK_THAT(q, WithinRel(r.net_work, 1e-13));
    CHECK_THAT(r.ledgers[0].heat_in + r.ledgers[3].heat_in, WithinRel(r.heat_in_total, 1e-13));
    CHECK_THAT(-(r.ledgers[1].heat_in + r.ledgers[2].heat_in), WithinRel(r.heat_out_total, 1e-13));
    CHECK(r.ledgers[0].work_out == 0.0);
    CHECK(r.ledgers[2].work_out == 0.0);
    REQUIRE(r.efficiency);
    CHECK(r.efficiency_note == "ok");
}

TEST_CASE("equal broadenings reduce to the two-level engine")
{
    const auto spec = make_spec_from_broadenings(2.0, 1.5, 0.5, 1.5, 0.7, 4.0, 1.0);
    const PopulationEndpoints ends(0.2, 0.6);
    CHECK_THAT(net_work(spec, ends), WithinAbs(limit_two_level_work(spec, ends), 1e-14));
    CHECK_THAT(net_work(spec, ends), WithinRel(0.4 * 1.5, 1e-14));
}

TEST_CASE("frozen occupations reduce to the band-rescaling engine")
{
    const auto spec = make_spec_from_broadenings(1.0, 3.0, 0.4, 1.0, 1.0, 5.0, 1.0);
    const PopulationEndpoints ends(0.35, 0.35);
    CHECK_THAT(net_work(spec, ends), WithinAbs(limit_frozen_population_work(spec, 0.35), 1e-14));
    CHECK_THAT(efficiency(spec, ends), WithinRel(limit_frozen_population_efficiency(spec), 1e-13));
    CHECK_THAT(efficiency(spec, ends), WithinRel(2.0 / 3.0, 1e-13));
}

TEST_CASE("continuum breaks the two-level efficiency")
{
    // Gaps 2 and 1 give 1/2 for a two-level engine; the bands change it.
    const auto spec = make_spec_from_broadenings(2.0, 1.0, 1.0, 1.0, 1.0, 5.0, 1.0);
    CHECK_THAT(efficiency(spec, {0.3, 0.5}), WithinRel(0.37783651995948506, 1e-13));
    CHECK_THAT(efficiency(spec, equilibrium_endpoints(spec)), WithinRel(0.39239365572243376, 1e-13));
}

TEST_CASE("high-temperature behaviour")
{
    const auto spec0 = make_spec_from_broadenings(1.0, 2.0, 1.0, 1.0, 1.0, 1.0, 1.0);
    const PopulationEndpoints ends(0.3, 0.5);
    double prev_gap = 1.0;
    for (double t : {1e2, 1e3, 1e4}) {
        const auto spec = make_spec_from_broadenings(1.0, 2.0, 1.0, 1.0, 1.0, 1.5 * t, t);
        const double gap = net_work(spec, ends) - limit_high_temperature_work(spec, ends);
        const double residual = std::abs(gap - high_temperature_gap_asymptote(spec, ends));
        CHECK(residual < prev_gap);
        prev_gap = residual;
    }
    CHECK(prev_gap < 1e-4);
    CHECK(high_temperature_gap_asymptote(spec0, ends) == Catch::Approx(-0.1));
    CHECK_THAT(limit_high_temperature_efficiency(spec0), WithinRel(1.0 / 3.0, 1e-15));
}

TEST_CASE("efficiency is undefined when no heat enters")
{
    const LevelStructure s(0, 1, 1, 1);
    const CycleSpec spec{s, s, 1.0, 1.0};
    const PopulationEndpoints ends(0.4, 0.4);
    CHECK_THROWS_AS(efficiency(spec, ends), Degenerate);
    const auto r = run_cycle(spec, ends);
    CHECK_FALSE(r.efficiency);
    CHECK(r.net_work == 0.0);

    // Occupation flow in the wrong direction: heat leaves the hot side.
    const auto rev = run_cycle(testing::reference_spec(), PopulationEndpoints(0.9, 0.1));
    CHECK(rev.heat_in_total < 0.0);
    CHECK_FALSE(rev.efficiency);
}

TEST_CASE("property: common energy shift leaves work and efficiency unchanged")
{
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.1, 3.0), p(0.05, 0.95);
    for (int i = 0; i < 200; ++i) {
        const double dh = u(rng), dl = u(rng), th = 5 * u(rng), tl = u(rng), c = 4 * u(rng) - 6;
        const auto spec = make_spec_from_broadenings(u(rng), dh, u(rng), dl, u(rng), th, tl);
        const CycleSpec moved{spec.hot.shifted(c), spec.cold.shifted(c), th, tl};
        const PopulationEndpoints ends(p(rng), p(rng));
        const double w = net_work(spec, ends);
        CHECK_THAT(net_work(moved, ends), WithinAbs(w, 1e-12 * (1 + std::abs(c))));
        const auto r0 = branch_ledgers(spec, ends);
        const auto r1 = branch_ledgers(moved, ends);
        for (int k = 0; k < 4; ++k) CHECK_THAT(r1[k].work_out, WithinAbs(r0[k].work_out, 1e-12 * (1 + std::abs(c))));
    }
}

TEST_CASE("property: scaling every energy and temperature scales work, keeps efficiency")
{
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> u(0.1, 3.0), p(0.05, 0.95);
    for (int i = 0; i < 200; ++i) {
        const double c = 0.2 + u(rng);
        const auto spec = make_spec_from_broadenings(u(rng), u(rng), u(rng), u(rng), u(rng), 5 * u(rng), u(rng));
        const CycleSpec big{spec.hot.scaled(c), spec.cold.scaled(c), c * spec.t_hot, c * spec.t_cold};
        const PopulationEndpoints ends(p(rng), p(rng));
        const auto a = heat_aggregates(spec, ends);
        const auto b = heat_aggregates(big, ends);
        const double scale = detail::heat_in_scale(spec, ends);
        CHECK_THAT(net_work(big, ends), WithinAbs(c * net_work(spec, ends), 1e-12 * c * scale));
        CHECK_THAT(b.heat_in_total, WithinAbs(c * a.heat_in_total, 1e-12 * c * scale));
        // Equilibrium occupations depend only on energies times beta.
        CHECK_THAT(equilibrium_p0(big.hot, big.beta_hot()), WithinRel(equilibrium_p0(spec.hot, spec.beta_hot()), 1e-13));
    }
}

TEST_CASE("property: exchanging the hot and cold sides leaves the net work unchanged")
{
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> u(0.1, 3.0), p(0.05, 0.95);
    for (int i = 0; i < 200; ++i) {
        const auto spec = make_spec_from_broadenings(u(rng), u(rng), u(rng), u(rng), u(rng), 5 * u(rng), u(rng));
        const PopulationEndpoints ends(p(rng), p(rng));
        const CycleSpec swapped{spec.cold, spec.hot, spec.t_cold, spec.t_hot};
        const PopulationEndpoints swapped_ends(ends.p0_cold(), ends.p0_hot());
        const double w = net_work(spec, ends);
        CHECK_THAT(net_work(swapped, swapped_ends), WithinAbs(w, 1e-12 * (1 + std::abs(w)) * 10));
    }
}

TEST_CASE("property: reversing the occupation flow changes the sign of the transfer term")
{
    std::mt19937_64 rng(14);
    std::uniform_real_distribution<double> u(0.1, 3.0), p(0.05, 0.95);
    for (int i = 0; i < 200; ++i) {
        const double d = u(rng);
        const auto spec = make_spec_from_broadenings(u(rng), d, u(rng), d, u(rng), 5 * u(rng), u(rng));
        const double a = p(rng), b = p(rng);
        CHECK_THAT(net_work(spec, {a, b}), WithinAbs(-net_work(spec, {b, a}), 1e-13));
    }
}

TEST_CASE("property: frozen-occupation work has the sign of the rescaling condition")
{
    std::mt19937_64 rng(15);
    std::uniform_real_distribution<double> u(0.05, 5.0), r(1.1, 10.0), p(0.05, 0.95);
    for (int i = 0; i < 500; ++i) {
        const double dh = u(rng), dl = u(rng), ratio = r(rng);
        const auto spec = make_spec_from_broadenings(1.0, dh, 1.0, dl, 1.0, ratio, 1.0);
        const double w = limit_frozen_population_work(spec, p(rng));
        const bool same = (dh > dl) == (dl > dh / ratio);
        CHECK((w > 0.0) == same);
    }
}
