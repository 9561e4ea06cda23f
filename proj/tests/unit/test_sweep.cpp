#include <catch_amalgamated.hpp>

#include <cmath>

#include "qhe/otto_cycle.hpp"
#include "qhe/sweep.hpp"

using namespace qhe;
using namespace qhe::sweep;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("parameter names round-trip")
{
    for (const auto& p : param_table) CHECK(parse_param(p.name) == p.param);
    CHECK_FALSE(parse_param("nope"));
    CHECK(info(Param::t_hot).unit == Unit::energy);
    CHECK(info(Param::p0_hot).unit == Unit::dimensionless);
}

TEST_CASE("axes are linear and validated")
{
    const Axis a{Param::delta_h, 0.05, 5.0, 101};
    CHECK(a.value(0) == 0.05);
    CHECK(a.value(100) == 5.0);
    CHECK_THAT(a.value(50), WithinRel(2.525, 1e-15));
    CHECK_THROWS_AS(require_axes({{Param::delta_h, 1, 2, 0}}), InvalidInput);
    CHECK_THROWS_AS(require_axes({{Param::delta_h, 2, 1, 3}}), InvalidInput);
    CHECK_THROWS_AS(require_axes({{Param::delta_h, 1, 2, 3}, {Param::delta_h, 1, 2, 3}}), InvalidInput);
    CHECK_THROWS_AS(require_axes({}), InvalidInput);
}

TEST_CASE("work difference equals the net work of the full cycle")
{
    for (double dh : {0.1, 1.0, 3.7})
        for (double dl : {0.2, 1.0, 4.4}) {
            const auto spec = make_spec_from_broadenings(1.0, dh, 1.0, dl, 1.0, 5.0, 1.0);
            CHECK_THAT(work_difference(dh, dl, 0.3, 0.5, 5.0, 1.0), WithinAbs(net_work(spec, {0.3, 0.5}), 1e-14));
        }
}

TEST_CASE("work-difference surface: shape, diagonal, and slope scans")
{
    const Fig3Params p;
    const auto g = fig3_surface(p, default_axis(Param::delta_h), default_axis(Param::delta_l), 2);
    REQUIRE(g.values.size() == 101u * 101u);
    for (int i = 0; i < 101; ++i) CHECK(g.values[static_cast<std::size_t>(i) * 101 + i] == 0.0);
    for (auto s : g.status) CHECK(s == CellStatus::ok);
    CHECK(g.coordinates(101)[0] == g.axes[0].value(1));
    CHECK(g.coordinates(101)[1] == g.axes[1].value(0));

    const auto small = work_difference_slope_scan(p, 0.1, default_axis(Param::delta_l));
    CHECK(small.negative == 101);
    const auto large = work_difference_slope_scan(p, 4.5, default_axis(Param::delta_l));
    CHECK(large.positive + large.negative + large.zero == 101);

    const auto d = near_diagonal_signs(g);
    CHECK(d.above_positive + d.above_negative == 100);
    CHECK(d.below_positive + d.below_negative == 100);

    CHECK_THROWS_AS(fig3_surface(p, default_axis(Param::delta_l), default_axis(Param::delta_h)), InvalidInput);
}

TEST_CASE("surface does not depend on the thread count")
{
    const Fig3Params p;
    const auto a = fig3_surface(p, default_axis(Param::delta_h), default_axis(Param::delta_l), 1);
    const auto b = fig3_surface(p, default_axis(Param::delta_h), default_axis(Param::delta_l), 8);
    CHECK(a.values == b.values);
}

TEST_CASE("general grid flags invalid cells without aborting")
{
    GridConfig cfg;
    cfg.base.rho_l = 2.0; // consistent only where rho_h*delta_h == 2
    cfg.axes = {{Param::delta_h, 1.0, 3.0, 3}};
    const auto t = evaluate(cfg, 1);
    REQUIRE(t.cells.size() == 3);
    CHECK(t.cells[0].status == CellStatus::invalid_spec);
    CHECK(t.cells[0].error.find("rescaling constraint") != std::string::npos);
    CHECK(t.cells[1].status == CellStatus::ok);
    CHECK(t.cells[2].status == CellStatus::invalid_spec);
    CHECK(std::isnan(t.grid.values[0]));
    CHECK(t.grid.fixed.count("t_hot") == 1);
    CHECK(t.grid.fixed.count("delta_h") == 0);
}

TEST_CASE("equilibrium mode forbids occupation axes")
{
    GridConfig cfg;
    cfg.base.mode = PopulationMode::equilibrium;
    cfg.axes = {{Param::p0_hot, 0.1, 0.5, 3}};
    CHECK_THROWS_AS(evaluate(cfg), InvalidInput);
    cfg.axes = {{Param::t_hot, 1.0, 10.0, 4}};
    const auto t = evaluate(cfg);
    CHECK(t.grid.fixed.count("p0_hot") == 0);
}

TEST_CASE("positive-work region matches the sign of the net work")
{
    GridConfig cfg;
    cfg.axes = {{Param::delta_h, 0.1, 4.0, 21}, {Param::delta_l, 0.1, 4.0, 21}};
    const auto t = evaluate(cfg);
    const auto m = positive_work_region(cfg);
    for (std::size_t i = 0; i < t.cells.size(); ++i) {
        const double w = t.cells[i].cycle->net_work;
        if (m.region[i] == Region::positive) CHECK(w > 0.0);
        if (m.region[i] == Region::nonpositive) CHECK(w <= 0.0);
    }
    CHECK(classify(1e-20, 1.0, 1e-12) == Region::boundary);
    CHECK(classify(-1.0, 1.0, 1e-12) == Region::nonpositive);
}

TEST_CASE("best point takes the maximum with ties to the lowest index")
{
    GridConfig cfg;
    cfg.axes = {{Param::delta_gap_h, 0.5, 3.0, 6}};
    const auto t = evaluate(cfg);
    const auto b = best_point(t, Objective::net_work);
    for (const auto& c : t.cells) CHECK(c.cycle->net_work <= b.value);
    CHECK(b.cell == 5); // work grows with the hot gap when p0_cold > p0_hot

    GridConfig flat; // work independent of e0_h: every cell ties
    flat.axes = {{Param::e0_h, -1.0, 1.0, 5}};
    const auto tf = evaluate(flat);
    const auto bf = best_point(tf, Objective::efficiency);
    for (const auto& c : tf.cells) CHECK(*c.cycle->efficiency == bf.value);
    CHECK(bf.cell == 0);

    GridConfig none;
    none.base.p0_hot = 0.9;
    none.base.p0_cold = 0.1;
    none.axes = {{Param::t_hot, 5.0, 6.0, 2}};
    CHECK_THROWS_AS(best_point(none, Objective::efficiency), Degenerate);
}
