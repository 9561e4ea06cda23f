#pragma once

// Parameter grids over the cycle: the work-difference surface over the two
// broadenings, positive-work masks, and best-cell search.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qhe/equilibrium.hpp"
#include "qhe/errors.hpp"
#include "qhe/medium.hpp"
#include "qhe/numeric.hpp"
#include "qhe/otto_cycle.hpp"
#include "qhe/parallel.hpp"

namespace qhe::sweep {

enum class Param { delta_gap_h, delta_h, rho_h, e0_h, delta_gap_l, delta_l, e0_l, t_hot, t_cold, p0_hot, p0_cold };

enum class Unit { energy, inverse_energy, dimensionless };

struct ParamInfo {
    Param param;
    std::string_view name;
    Unit unit;
};

inline constexpr ParamInfo param_table[] = {
    {Param::delta_gap_h, "delta_gap_h", Unit::energy}, {Param::delta_h, "delta_h", Unit::energy},
    {Param::rho_h, "rho_h", Unit::inverse_energy},     {Param::e0_h, "e0_h", Unit::energy},
    {Param::delta_gap_l, "delta_gap_l", Unit::energy}, {Param::delta_l, "delta_l", Unit::energy},
    {Param::e0_l, "e0_l", Unit::energy},               {Param::t_hot, "t_hot", Unit::energy},
    {Param::t_cold, "t_cold", Unit::energy},           {Param::p0_hot, "p0_hot", Unit::dimensionless},
    {Param::p0_cold, "p0_cold", Unit::dimensionless},
};

inline const ParamInfo& info(Param p)
{
    for (const auto& i : param_table)
        if (i.param == p) return i;
    throw InvalidInput("unknown sweep parameter");
}

inline std::string_view param_name(Param p) { return info(p).name; }

inline std::optional<Param> parse_param(std::string_view name)
{
    for (const auto& i : param_table)
        if (i.name == name) return i.param;
    return std::nullopt;
}

/// Linearly spaced axis; a single-point axis sits at `min`.
struct Axis {
    Param param;
    double min;
    double max;
    int count;

    [[nodiscard]] double value(int i) const
    {
        if (count == 1) return min;
        if (i == count - 1) return max;
        return min + (max - min) * static_cast<double>(i) / static_cast<double>(count - 1);
    }

    bool operator==(const Axis&) const = default;
};

/**
 * Scalar parameters of one cycle. The cold density of states follows the
 * rescaling constraint unless `rho_l` is pinned, in which case a mismatch is
 * reported by validation.
 */
struct CycleParams {
    PopulationMode mode = PopulationMode::free;
    double delta_gap_h = 1.0;
    double delta_h = 2.0;
    double rho_h = 1.0;
    double e0_h = 0.0;
    double delta_gap_l = 1.0;
    double delta_l = 1.0;
    double e0_l = 0.0;
    std::optional<double> rho_l;
    double t_hot = 5.0;
    double t_cold = 1.0;
    double p0_hot = 0.3;
    double p0_cold = 0.5;

    bool operator==(const CycleParams&) const = default;

    [[nodiscard]] double get(Param p) const
    {
        switch (p) {
        case Param::delta_gap_h: return delta_gap_h;
        case Param::delta_h: return delta_h;
        case Param::rho_h: return rho_h;
        case Param::e0_h: return e0_h;
        case Param::delta_gap_l: return delta_gap_l;
        case Param::delta_l: return delta_l;
        case Param::e0_l: return e0_l;
        case Param::t_hot: return t_hot;
        case Param::t_cold: return t_cold;
        case Param::p0_hot: return p0_hot;
        case Param::p0_cold: return p0_cold;
        }
        throw InvalidInput("unknown sweep parameter");
    }

    void set(Param p, double v)
    {
        switch (p) {
        case Param::delta_gap_h: delta_gap_h = v; return;
        case Param::delta_h: delta_h = v; return;
        case Param::rho_h: rho_h = v; return;
        case Param::e0_h: e0_h = v; return;
        case Param::delta_gap_l: delta_gap_l = v; return;
        case Param::delta_l: delta_l = v; return;
        case Param::e0_l: e0_l = v; return;
        case Param::t_hot: t_hot = v; return;
        case Param::t_cold: t_cold = v; return;
        case Param::p0_hot: p0_hot = v; return;
        case Param::p0_cold: p0_cold = v; return;
        }
        throw InvalidInput("unknown sweep parameter");
    }

    /// Throws InvalidInput on a structure that cannot exist; constraint mismatches surface through validate_spec.
    [[nodiscard]] CycleSpec spec() const
    {
        if (!rho_l) return make_spec_from_broadenings(delta_gap_h, delta_h, delta_gap_l, delta_l, rho_h, t_hot, t_cold, e0_h, e0_l);
        return CycleSpec{LevelStructure{e0_h, delta_gap_h, delta_h, rho_h},
                         LevelStructure{e0_l, delta_gap_l, delta_l, *rho_l}, t_hot, t_cold};
    }

    [[nodiscard]] PopulationEndpoints endpoints(const CycleSpec& s) const
    {
        if (mode == PopulationMode::equilibrium) return equilibrium_endpoints(s);
        return PopulationEndpoints{p0_hot, p0_cold, PopulationMode::free};
    }
};

enum class CellStatus { ok, invalid_spec, undefined_efficiency };

inline std::string_view to_string(CellStatus s)
{
    switch (s) {
    case CellStatus::ok: return "ok";
    case CellStatus::invalid_spec: return "invalid-spec";
    case CellStatus::undefined_efficiency: return "undefined-efficiency";
    }
    return "?";
}

/// Row-major grid of scalar values: the first axis varies slowest.
struct SweepGrid {
    std::vector<Axis> axes;
    std::map<std::string, double> fixed;
    std::vector<double> values;
    std::vector<CellStatus> status;

    [[nodiscard]] std::size_t cell_count() const
    {
        std::size_t n = 1;
        for (const auto& a : axes) n *= static_cast<std::size_t>(a.count);
        return n;
    }

    /// Per-axis indices of a flat cell index.
    [[nodiscard]] std::vector<int> indices(std::size_t cell) const
    {
        std::vector<int> idx(axes.size());
        for (std::size_t k = axes.size(); k-- > 0;) {
            const auto n = static_cast<std::size_t>(axes[k].count);
            idx[k] = static_cast<int>(cell % n);
            cell /= n;
        }
        return idx;
    }

    [[nodiscard]] std::vector<double> coordinates(std::size_t cell) const
    {
        const auto idx = indices(cell);
        std::vector<double> out(axes.size());
        for (std::size_t k = 0; k < axes.size(); ++k) out[k] = axes[k].value(idx[k]);
        return out;
    }
};

inline void require_axes(const std::vector<Axis>& axes)
{
    if (axes.empty()) throw InvalidInput("sweep needs at least one axis");
    for (const auto& a : axes) {
        if (a.count < 1) throw InvalidInput("axis " + std::string(param_name(a.param)) + ": count must be >= 1");
        if (!std::isfinite(a.min) || !std::isfinite(a.max) || a.max < a.min)
            throw InvalidInput("axis " + std::string(param_name(a.param)) + ": need finite min <= max");
    }
    for (std::size_t i = 0; i < axes.size(); ++i)
        for (std::size_t j = i + 1; j < axes.size(); ++j)
            if (axes[i].param == axes[j].param)
                throw InvalidInput("axis " + std::string(param_name(axes[i].param)) + " appears twice");
}

// ---------------------------------------------------------------------------
// Work-difference surface

/// Net work minus its equal-broadening (two-level) counterpart, (delta_h - delta_l)[(p0_l - p0_h) + f].
inline double work_difference(double delta_h, double delta_l, double p0_hot, double p0_cold, double t_hot,
                              double t_cold)
{
    const double d = delta_h - delta_l;
    if (d == 0.0) return 0.0; // avoid -0 on the diagonal
    return d * ((p0_cold - p0_hot) + engine_f(p0_hot, p0_cold, delta_h / t_hot, delta_l / t_cold));
}

struct Fig3Params {
    double p0_cold = 0.5;
    double p0_hot = 0.3;
    double t_hot = 5.0;
    double t_cold = 1.0;
    double delta_gap = 1.0; // shared by both structures; the work difference does not depend on it
};

inline Axis default_axis(Param p) { return Axis{p, 0.05, 5.0, 101}; }

/**
 * Work difference over (delta_h, delta_l) with both gaps equal. Cells whose
 * broadenings or temperatures are not positive are flagged invalid-spec.
 * Diagonal cells are exactly zero.
 */
inline SweepGrid fig3_surface(const Fig3Params& p, const Axis& axis_h, const Axis& axis_l, unsigned threads = 0)
{
    if (axis_h.param != Param::delta_h || axis_l.param != Param::delta_l)
        throw InvalidInput("fig3_surface axes must be delta_h and delta_l");
    require_axes({axis_h, axis_l});
    if (axis_h.count < 2 || axis_l.count < 2) throw InvalidInput("fig3_surface axes need at least 2 points");
    [[maybe_unused]] const PopulationEndpoints occupations{p.p0_hot, p.p0_cold}; // validates the range

    SweepGrid g;
    g.axes = {axis_h, axis_l};
    g.fixed = {{"p0_cold", p.p0_cold}, {"p0_hot", p.p0_hot}, {"t_hot", p.t_hot}, {"t_cold", p.t_cold},
               {"delta_gap_h", p.delta_gap}, {"delta_gap_l", p.delta_gap}};
    const std::size_t n = g.cell_count();
    g.values.assign(n, 0.0);
    g.status.assign(n, CellStatus::ok);
    parallel_for(n, [&](std::size_t i) {
        const auto c = g.coordinates(i);
        if (!(c[0] > 0.0) || !(c[1] > 0.0) || !(p.t_hot > 0.0) || !(p.t_cold > 0.0)) {
            g.status[i] = CellStatus::invalid_spec;
            g.values[i] = std::nan("");
            return;
        }
        g.values[i] = work_difference(c[0], c[1], p.p0_hot, p.p0_cold, p.t_hot, p.t_cold);
    }, threads);
    return g;
}

/// Finite-difference slopes of the work difference along delta_l at one delta_h.
struct SlopeScan {
    double delta_h;
    int negative = 0;
    int positive = 0;
    int zero = 0;
    std::vector<double> delta_l;
    std::vector<double> slope;
};

inline SlopeScan work_difference_slope_scan(const Fig3Params& p, double delta_h, const Axis& axis_l,
                                            double step = 1e-5)
{
    SlopeScan s;
    s.delta_h = delta_h;
    for (int i = 0; i < axis_l.count; ++i) {
        const double dl = axis_l.value(i);
        if (dl - step <= 0.0) continue;
        const double d = (work_difference(delta_h, dl + step, p.p0_hot, p.p0_cold, p.t_hot, p.t_cold) -
                          work_difference(delta_h, dl - step, p.p0_hot, p.p0_cold, p.t_hot, p.t_cold)) /
                         (2 * step);
        s.delta_l.push_back(dl);
        s.slope.push_back(d);
        if (d < 0) ++s.negative;
        else if (d > 0) ++s.positive;
        else ++s.zero;
    }
    return s;
}

/// Sign census of the surface next to the diagonal (|i - j| == 1 on a square grid).
struct DiagonalSigns {
    int above_positive = 0; // delta_l > delta_h
    int above_negative = 0;
    int below_positive = 0; // delta_l < delta_h
    int below_negative = 0;
};

inline DiagonalSigns near_diagonal_signs(const SweepGrid& g)
{
    DiagonalSigns d;
    for (std::size_t i = 0; i < g.values.size(); ++i) {
        if (g.status[i] != CellStatus::ok) continue;
        const auto idx = g.indices(i);
        const double v = g.values[i];
        if (idx[1] == idx[0] + 1) {
            if (v > 0) ++d.above_positive;
            if (v < 0) ++d.above_negative;
        } else if (idx[1] + 1 == idx[0]) {
            if (v > 0) ++d.below_positive;
            if (v < 0) ++d.below_negative;
        }
    }
    return d;
}

// ---------------------------------------------------------------------------
// General grids

struct GridConfig {
    CycleParams base;
    std::vector<Axis> axes;
    double boundary_tol = 1e-12; // relative to the magnitude of the net-work terms
};

struct CellResult {
    CellStatus status = CellStatus::invalid_spec;
    std::optional<CycleResult> cycle;
    std::optional<PopulationEndpoints> endpoints;
    std::string error;
};

struct SweepTable {
    SweepGrid grid; // values hold net work
    std::vector<CellResult> cells;
};

inline CellResult evaluate_cell(const CycleParams& params)
{
    CellResult out;
    try {
        const auto spec = params.spec();
        const auto report = validate_spec(spec);
        if (!report.valid()) {
            out.error = report.errors_text();
            return out;
        }
        const auto ends = params.endpoints(spec);
        out.cycle = run_cycle(spec, ends);
        out.endpoints = ends;
        out.status = out.cycle->efficiency ? CellStatus::ok : CellStatus::undefined_efficiency;
    } catch (const std::exception& e) {
        out.status = CellStatus::invalid_spec;
        out.cycle.reset();
        out.error = e.what();
    }
    return out;
}

inline SweepTable evaluate(const GridConfig& cfg, unsigned threads = 0)
{
    require_axes(cfg.axes);
    if (cfg.base.mode == PopulationMode::equilibrium)
        for (const auto& a : cfg.axes)
            if (a.param == Param::p0_hot || a.param == Param::p0_cold)
                throw InvalidInput("occupation axes are not allowed in equilibrium mode");

    SweepTable t;
    t.grid.axes = cfg.axes;
    for (const auto& pi : param_table) {
        const bool swept = std::any_of(cfg.axes.begin(), cfg.axes.end(), [&](const Axis& a) { return a.param == pi.param; });
        const bool occupation = pi.param == Param::p0_hot || pi.param == Param::p0_cold;
        if (!swept && !(occupation && cfg.base.mode == PopulationMode::equilibrium))
            t.grid.fixed[std::string(pi.name)] = cfg.base.get(pi.param);
    }
    const std::size_t n = t.grid.cell_count();
    t.cells.resize(n);
    t.grid.values.assign(n, std::nan(""));
    t.grid.status.assign(n, CellStatus::invalid_spec);
    parallel_for(n, [&](std::size_t i) {
        CycleParams p = cfg.base;
        const auto c = t.grid.coordinates(i);
        for (std::size_t k = 0; k < c.size(); ++k) p.set(cfg.axes[k].param, c[k]);
        t.cells[i] = evaluate_cell(p);
        t.grid.status[i] = t.cells[i].status;
        if (t.cells[i].cycle) t.grid.values[i] = t.cells[i].cycle->net_work;
    }, threads);
    return t;
}

enum class Region { positive, nonpositive, boundary, invalid };

inline std::string_view to_string(Region r)
{
    switch (r) {
    case Region::positive: return "positive";
    case Region::nonpositive: return "nonpositive";
    case Region::boundary: return "boundary";
    case Region::invalid: return "invalid";
    }
    return "?";
}

struct RegionMask {
    SweepGrid grid; // values: 1 where net work > 0, else 0
    std::vector<Region> region;
};

/// Net-work scale used for boundary classification of a cell.
inline double net_work_scale(const CycleSpec& s, const PopulationEndpoints& e)
{
    const double dp = std::abs(e.p0_cold() - e.p0_hot());
    return dp * (s.hot.delta_gap() + s.hot.broadening() + s.cold.delta_gap() + s.cold.broadening()) +
           std::abs(s.hot.broadening() - s.cold.broadening()) * (2.0 - e.p0_hot() - e.p0_cold());
}

inline Region classify(double net, double scale, double tol)
{
    if (std::abs(net) <= tol * scale) return Region::boundary;
    return net > 0 ? Region::positive : Region::nonpositive;
}

/// Cells with net work > 0; cells within boundary_tol of zero are marked boundary and excluded.
inline RegionMask positive_work_region(const GridConfig& cfg, unsigned threads = 0)
{
    auto table = evaluate(cfg, threads);
    RegionMask m;
    m.grid = table.grid;
    m.region.assign(table.cells.size(), Region::invalid);
    for (std::size_t i = 0; i < table.cells.size(); ++i) {
        const auto& cell = table.cells[i];
        if (!cell.cycle) {
            m.grid.values[i] = 0.0;
            continue;
        }
        CycleParams p = cfg.base;
        const auto c = m.grid.coordinates(i);
        for (std::size_t k = 0; k < c.size(); ++k) p.set(cfg.axes[k].param, c[k]);
        const double scale = net_work_scale(p.spec(), *cell.endpoints);
        m.region[i] = classify(cell.cycle->net_work, scale, cfg.boundary_tol);
        m.grid.values[i] = m.region[i] == Region::positive ? 1.0 : 0.0;
    }
    return m;
}

enum class Objective { net_work, efficiency };

struct BestPoint {
    std::size_t cell;
    std::vector<int> indices;
    std::vector<double> coordinates;
    double value;
};

/// Argmax over feasible cells; ties go to the lowest row-major index.
inline BestPoint best_point(const SweepTable& t, Objective objective)
{
    std::optional<BestPoint> best;
    for (std::size_t i = 0; i < t.cells.size(); ++i) {
        const auto& c = t.cells[i];
        if (!c.cycle) continue;
        double v;
        if (objective == Objective::net_work) {
            v = c.cycle->net_work;
        } else {
            if (!c.cycle->efficiency) continue;
            v = *c.cycle->efficiency;
        }
        if (!best || v > best->value) best = BestPoint{i, t.grid.indices(i), t.grid.coordinates(i), v};
    }
    if (!best) throw Degenerate("no feasible cell");
    return *best;
}

inline BestPoint best_point(const GridConfig& cfg, Objective objective, unsigned threads = 0)
{
    return best_point(evaluate(cfg, threads), objective);
}

} // namespace qhe::sweep
