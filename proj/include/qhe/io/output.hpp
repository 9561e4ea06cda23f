#pragma once

// CSV and JSON writers for cycle results, grids, and verification reports.
//
// Numbers are written with 17 significant digits through std::to_chars, so
// output is locale-independent and byte-stable. CSV files may end with an
// annotation block of lines starting with "# ".

#include <charconv>
#include <cmath>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "qhe/io/config.hpp"
#include "qhe/otto_cycle.hpp"
#include "qhe/sweep.hpp"
#include "qhe/verification.hpp"

namespace qhe::io {

using Annotations = std::vector<std::pair<std::string, std::string>>;

inline std::string format_number(double v)
{
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v); // shortest round-trip form
    return std::string(buf, res.ptr);
}

/// JSON number, or null for non-finite values.
inline json json_number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

inline double unit_scale(sweep::Unit u, double kt_l)
{
    switch (u) {
    case sweep::Unit::energy: return kt_l;
    case sweep::Unit::inverse_energy: return 1.0 / kt_l;
    case sweep::Unit::dimensionless: return 1.0;
    }
    return 1.0;
}

inline void write_annotations(std::ostream& os, const Annotations& notes)
{
    for (const auto& [k, v] : notes) os << "# " << k << ": " << v << '\n';
}

// ---------------------------------------------------------------------------
// Cycle

/// Four stroke rows plus a cycle row; totals and efficiency in the annotation block.
inline void write_cycle_csv(std::ostream& os, const CycleResult& r, const PopulationEndpoints& ends, double kt_l)
{
    os << "row,delta_u,work_out,heat_in\n";
    double du = 0.0, w = 0.0, q = 0.0;
    for (const auto& b : r.ledgers) {
        os << "branch_" << b.branch_id << ',' << format_number(b.delta_u * kt_l) << ','
           << format_number(b.work_out * kt_l) << ',' << format_number(b.heat_in * kt_l) << '\n';
        du += b.delta_u;
        w += b.work_out;
        q += b.heat_in;
    }
    os << "cycle," << format_number(du * kt_l) << ',' << format_number(w * kt_l) << ',' << format_number(q * kt_l)
       << '\n';
    write_annotations(os, {{"p0_hot", format_number(ends.p0_hot())},
                           {"p0_cold", format_number(ends.p0_cold())},
                           {"mode", std::string(to_string(ends.mode()))},
                           {"net_work", format_number(r.net_work * kt_l)},
                           {"heat_in_total", format_number(r.heat_in_total * kt_l)},
                           {"heat_out_total", format_number(r.heat_out_total * kt_l)},
                           {"efficiency", r.efficiency ? format_number(*r.efficiency) : r.efficiency_note}});
}

inline json cycle_to_json(const CycleResult& r, const PopulationEndpoints& ends, const std::array<CornerState, 4>& corners,
                          double kt_l)
{
    json j;
    j["endpoints"] = {{"p0_hot", ends.p0_hot()}, {"p0_cold", ends.p0_cold()}, {"mode", std::string(to_string(ends.mode()))}};
    json branches = json::array();
    for (const auto& b : r.ledgers)
        branches.push_back({{"branch", b.branch_id}, {"delta_u", json_number(b.delta_u * kt_l)},
                            {"work_out", json_number(b.work_out * kt_l)}, {"heat_in", json_number(b.heat_in * kt_l)}});
    j["branches"] = branches;
    static constexpr const char* names[4] = {"A", "B", "C", "D"};
    json cj = json::array();
    for (int i = 0; i < 4; ++i)
        cj.push_back({{"corner", names[i]}, {"p0", corners[i].p0}, {"beta", json_number(corners[i].beta / kt_l)},
                      {"mean_energy", json_number(corners[i].mean_energy * kt_l)}});
    j["corners"] = cj;
    j["net_work"] = json_number(r.net_work * kt_l);
    j["heat_in_total"] = json_number(r.heat_in_total * kt_l);
    j["heat_out_total"] = json_number(r.heat_out_total * kt_l);
    j["efficiency"] = r.efficiency ? json(*r.efficiency) : json(nullptr);
    j["efficiency_note"] = r.efficiency_note;
    return j;
}

/// Aligned plain-text table for terminals.
inline void print_cycle_table(std::ostream& os, const CycleResult& r, const PopulationEndpoints& ends, double kt_l)
{
    auto cell = [](double v) {
        std::string s = format_number(v);
        if (s.size() < 24) s.insert(0, 24 - s.size(), ' ');
        return s;
    };
    os << "p0_hot = " << format_number(ends.p0_hot()) << ", p0_cold = " << format_number(ends.p0_cold()) << " ("
       << to_string(ends.mode()) << ")\n";
    os << "branch" << std::string(18 + 1, ' ') << "delta_u" << std::string(16, ' ') << "work_out" << std::string(17, ' ')
       << "heat_in\n";
    for (const auto& b : r.ledgers)
        os << "  " << b.branch_id << "   " << cell(b.delta_u * kt_l) << ' ' << cell(b.work_out * kt_l) << ' '
           << cell(b.heat_in * kt_l) << '\n';
    os << "net_work        " << format_number(r.net_work * kt_l) << '\n';
    os << "heat_in_total   " << format_number(r.heat_in_total * kt_l) << '\n';
    os << "heat_out_total  " << format_number(r.heat_out_total * kt_l) << '\n';
    os << "eta             " << (r.efficiency ? format_number(*r.efficiency) : r.efficiency_note) << '\n';
}

// ---------------------------------------------------------------------------
// Grids

/// Header delta_h,delta_l,work_diff,status; one row per cell in row-major order.
inline void write_fig3_csv(std::ostream& os, const sweep::SweepGrid& g, const Annotations& notes, double kt_l)
{
    os << "delta_h,delta_l,work_diff,status\n";
    for (std::size_t i = 0; i < g.values.size(); ++i) {
        const auto c = g.coordinates(i);
        os << format_number(c[0] * kt_l) << ',' << format_number(c[1] * kt_l) << ','
           << format_number(g.values[i] * kt_l) << ',' << sweep::to_string(g.status[i]) << '\n';
    }
    write_annotations(os, notes);
}

inline json axes_to_json(const std::vector<sweep::Axis>& axes, double kt_l)
{
    json out = json::array();
    for (const auto& a : axes) {
        const double s = unit_scale(sweep::info(a.param).unit, kt_l);
        out.push_back({{"param", std::string(sweep::param_name(a.param))}, {"min", a.min * s}, {"max", a.max * s},
                       {"count", a.count}});
    }
    return out;
}

inline json fixed_to_json(const std::map<std::string, double>& fixed, double kt_l)
{
    json out = json::object();
    for (const auto& [k, v] : fixed) {
        const auto p = sweep::parse_param(k);
        out[k] = v * (p ? unit_scale(sweep::info(*p).unit, kt_l) : 1.0);
    }
    return out;
}

inline json annotations_to_json(const Annotations& notes)
{
    json out = json::object();
    for (const auto& [k, v] : notes) out[k] = v;
    return out;
}

inline json fig3_to_json(const sweep::SweepGrid& g, const Annotations& notes, double kt_l)
{
    json cells = json::array();
    for (std::size_t i = 0; i < g.values.size(); ++i) {
        const auto c = g.coordinates(i);
        cells.push_back({{"delta_h", c[0] * kt_l}, {"delta_l", c[1] * kt_l}, {"work_diff", json_number(g.values[i] * kt_l)},
                         {"status", std::string(sweep::to_string(g.status[i]))}});
    }
    return {{"axes", axes_to_json(g.axes, kt_l)}, {"fixed", fixed_to_json(g.fixed, kt_l)}, {"cells", cells},
            {"annotations", annotations_to_json(notes)}};
}

/// Header: one column per axis, then net_work,heat_in_total,heat_out_total,efficiency,region,status.
/// Efficiency is empty where undefined; quantities are empty for invalid cells.
inline void write_sweep_csv(std::ostream& os, const sweep::SweepTable& t, const sweep::RegionMask& mask,
                            const Annotations& notes, double kt_l)
{
    for (const auto& a : t.grid.axes) os << sweep::param_name(a.param) << ',';
    os << "net_work,heat_in_total,heat_out_total,efficiency,region,status\n";
    for (std::size_t i = 0; i < t.cells.size(); ++i) {
        const auto c = t.grid.coordinates(i);
        for (std::size_t k = 0; k < c.size(); ++k)
            os << format_number(c[k] * unit_scale(sweep::info(t.grid.axes[k].param).unit, kt_l)) << ',';
        const auto& cell = t.cells[i];
        if (cell.cycle) {
            os << format_number(cell.cycle->net_work * kt_l) << ',' << format_number(cell.cycle->heat_in_total * kt_l)
               << ',' << format_number(cell.cycle->heat_out_total * kt_l) << ','
               << (cell.cycle->efficiency ? format_number(*cell.cycle->efficiency) : std::string());
        } else {
            os << ",,,";
        }
        os << ',' << sweep::to_string(mask.region[i]) << ',' << sweep::to_string(cell.status) << '\n';
    }
    write_annotations(os, notes);
}

inline json sweep_to_json(const sweep::SweepTable& t, const sweep::RegionMask& mask, const Annotations& notes,
                          double kt_l)
{
    json cells = json::array();
    for (std::size_t i = 0; i < t.cells.size(); ++i) {
        const auto c = t.grid.coordinates(i);
        json cell;
        for (std::size_t k = 0; k < c.size(); ++k)
            cell[std::string(sweep::param_name(t.grid.axes[k].param))] =
                c[k] * unit_scale(sweep::info(t.grid.axes[k].param).unit, kt_l);
        const auto& r = t.cells[i];
        cell["net_work"] = r.cycle ? json_number(r.cycle->net_work * kt_l) : json(nullptr);
        cell["heat_in_total"] = r.cycle ? json_number(r.cycle->heat_in_total * kt_l) : json(nullptr);
        cell["heat_out_total"] = r.cycle ? json_number(r.cycle->heat_out_total * kt_l) : json(nullptr);
        cell["efficiency"] = r.cycle && r.cycle->efficiency ? json(*r.cycle->efficiency) : json(nullptr);
        cell["region"] = std::string(sweep::to_string(mask.region[i]));
        cell["status"] = std::string(sweep::to_string(r.status));
        if (!r.error.empty()) cell["error"] = r.error;
        cells.push_back(std::move(cell));
    }
    return {{"axes", axes_to_json(t.grid.axes, kt_l)}, {"fixed", fixed_to_json(t.grid.fixed, kt_l)}, {"cells", cells},
            {"annotations", annotations_to_json(notes)}};
}

// ---------------------------------------------------------------------------
// Verification reports

inline json report_to_json(const verify::Report& r)
{
    json entries = json::array();
    for (const auto& e : r.entries) {
        json je{{"name", e.name},
                {"closed_form", json_number(e.closed_form)},
                {"quadrature", json_number(e.quadrature)},
                {"abs_error", json_number(e.abs_error)},
                {"rel_error", json_number(e.rel_error)},
                {"pass", e.pass}};
        je["ladder"] = e.ladder ? json_number(*e.ladder) : json(nullptr);
        je["ladder_rel_error"] = e.ladder_rel_error ? json_number(*e.ladder_rel_error) : json(nullptr);
        entries.push_back(std::move(je));
    }
    json checks = json::array();
    for (const auto& c : r.checks)
        checks.push_back({{"name", c.name}, {"residual", json_number(c.residual)}, {"tolerance", c.tolerance},
                          {"pass", c.pass}});
    json gaps = json::array();
    for (const auto& g : r.high_temperature_gaps)
        gaps.push_back({{"kt_over_delta", g.kt_over_delta},
                        {"exact_work", json_number(g.exact_work)},
                        {"two_level_limit_work", json_number(g.limit_work)},
                        {"gap", json_number(g.gap)},
                        {"asymptote", json_number(g.asymptote)},
                        {"exact_efficiency", g.exact_efficiency ? json_number(*g.exact_efficiency) : json(nullptr)},
                        {"two_level_limit_efficiency", json_number(g.limit_efficiency)}});
    return {{"pass", r.pass},         {"validated", r.validated}, {"validation_errors", r.validation_errors},
            {"entries", entries},     {"checks", checks},         {"high_temperature_gaps", gaps},
            {"notes", r.notes}};
}

inline json battery_to_json(const verify::BatteryReport& b, const RunConfig& cfg)
{
    json quantities = json::array();
    for (const auto& a : b.quantities)
        quantities.push_back({{"name", a.name},
                              {"compared", a.compared},
                              {"failures", a.failures},
                              {"worst", json_number(a.worst)},
                              {"worst_sample", a.worst_sample},
                              {"tolerance", a.tolerance}});
    json failures = json::array();
    for (const auto& f : b.failures) {
        const auto& p = f.params;
        failures.push_back({{"sample", f.index},
                            {"params",
                             {{"delta_gap_h", p.gap_h}, {"delta_h", p.delta_h}, {"delta_gap_l", p.gap_l},
                              {"delta_l", p.delta_l}, {"rho_h", p.rho_h}, {"t_hot", p.t_hot}, {"t_cold", p.t_cold},
                              {"p0_hot", p.p0_hot}, {"p0_cold", p.p0_cold}}},
                            {"failed", f.failed}});
    }
    json ladder{{"levels", b.ladder.levels},
                {"errors", json::array()},
                {"ratios", json::array()},
                {"monotone", b.ladder.monotone},
                {"min_ratio", json_number(b.ladder.min_ratio)},
                {"pass", b.ladder.pass}};
    for (double e : b.ladder.errors) ladder["errors"].push_back(json_number(e));
    for (double r : b.ladder.ratios) ladder["ratios"].push_back(json_number(r));

    return {{"pass", b.pass},
            {"seed", b.seed},
            {"samples", b.samples},
            {"config", to_json(cfg)},
            {"tolerances",
             {{"quad", b.config.quad_tol},
              {"match", b.config.match_tol},
              {"ladder_levels", b.config.ladder_levels},
              {"ladder", b.config.ladder_tol},
              {"closure", b.config.closure_tol},
              {"exact", b.config.exact_tol}}},
            {"point", report_to_json(b.point)},
            {"quantities", quantities},
            {"failures", failures},
            {"f_small_width_limit",
             {{"x", b.f_limit.x},
              {"max_abs_residual", json_number(b.f_limit.max_abs_residual)},
              {"tolerance", b.f_limit.tolerance},
              {"pass", b.f_limit.pass}}},
            {"ladder_convergence", ladder}};
}

} // namespace qhe::io
