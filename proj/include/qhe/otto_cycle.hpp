#pragma once

// Closed-form thermodynamics of the four-stroke cycle.
//
// Corners: A (hot structure, p0_cold frozen, continuum at the cold
// temperature), B (hot structure, thermal at t_hot), C (cold structure,
// p0_hot frozen, continuum at t_hot), D (cold structure, thermal at t_cold).
// Strokes: 1 = A->B hot isotherm, 2 = B->C adiabatic, 3 = C->D cold isotherm,
// 4 = D->A adiabatic.
//
// Sign convention: work_out is work delivered BY the medium, heat_in is heat
// absorbed by it, and heat_in = delta_u + work_out on every stroke.

#include <array>
#include <cmath>
#include <optional>
#include <string>

#include "qhe/equilibrium.hpp"
#include "qhe/errors.hpp"
#include "qhe/medium.hpp"
#include "qhe/numeric.hpp"

namespace qhe {

struct BranchLedger {
    int branch_id;
    double delta_u;
    double work_out;
    double heat_in;
};

struct HeatAggregates {
    double heat_in_total;  // Q1 + Q4
    double heat_out_total; // -(Q2 + Q3)
};

struct CycleResult {
    std::array<BranchLedger, 4> ledgers;
    double net_work;
    double heat_in_total;
    double heat_out_total;
    /// Empty when the cycle absorbs no heat from the hot side (heat_in_total <= 0).
    std::optional<double> efficiency;
    std::string efficiency_note;
};

/// Dimensionless band widths x_h = delta_h/KT_h and x_l = delta_l/KT_l.
struct ReducedWidths {
    double x_hot;
    double x_cold;
};

inline ReducedWidths reduced_widths(const CycleSpec& spec)
{
    return {spec.hot.broadening() / spec.t_hot, spec.cold.broadening() / spec.t_cold};
}

/// Carries a hot-band energy to the cold band, keeping its fractional position in the band.
inline double adiabatic_energy_map(const CycleSpec& spec, double e_hot)
{
    const auto& h = spec.hot;
    const auto& c = spec.cold;
    if (!(e_hot >= h.e_min() && e_hot <= h.e_max()))
        throw InvalidInput("adiabatic_energy_map: energy " + detail::fmt_num(e_hot) + " outside the hot band");
    const double t = (e_hot - h.e_min()) / h.broadening();
    return c.e_min() + t * c.broadening();
}

inline double inverse_adiabatic_energy_map(const CycleSpec& spec, double e_cold)
{
    const auto& h = spec.hot;
    const auto& c = spec.cold;
    if (!(e_cold >= c.e_min() && e_cold <= c.e_max()))
        throw InvalidInput("inverse_adiabatic_energy_map: energy " + detail::fmt_num(e_cold) +
                           " outside the cold band");
    const double t = (e_cold - c.e_min()) / c.broadening();
    return h.e_min() + t * h.broadening();
}

namespace detail {
/// Shared shape of the two adiabatic strokes: level-shift work of the discrete
/// level plus that of a continuum whose profile, seen on the hot band, has
/// mean fractional position band_fraction(x).
inline double stroke_shift_work(const CycleSpec& spec, double p0, double x)
{
    const auto& h = spec.hot;
    const auto& c = spec.cold;
    const double rho_h = h.rho();
    const double rho_l = c.rho();
    const double mean_hot = h.e_max() + h.broadening() * numeric::engine_g(x);
    return p0 * (h.e0() - c.e0()) + (1.0 - p0) * ((rho_h * h.e_min() - rho_l * c.e_min()) / rho_l +
                                                  (rho_l - rho_h) / rho_l * mean_hot);
}
} // namespace detail

/// Work delivered on the B->C stroke, with the hot-equilibrium continuum carried along by the map.
inline double branch_work_2(const CycleSpec& spec, double p0_hot)
{
    require_valid(spec);
    detail::require_probability(p0_hot, "p0_hot");
    return detail::stroke_shift_work(spec, p0_hot, spec.hot.broadening() / spec.t_hot);
}

/// Work delivered on the D->A stroke; negative when the stroke compresses the spectrum.
inline double branch_work_4(const CycleSpec& spec, double p0_cold)
{
    require_valid(spec);
    detail::require_probability(p0_cold, "p0_cold");
    // Profile e^(-beta_l E_l) seen on the hot band has reduced width beta_l*delta_l.
    return -detail::stroke_shift_work(spec, p0_cold, spec.cold.broadening() / spec.t_cold);
}

/**
 * Engine function f = (1 - p0_hot) g(x_hot) - (1 - p0_cold) g(x_cold),
 * g(x) = 1/(e^(-x) - 1) + 1/x.
 */
inline double engine_f(double p0_hot, double p0_cold, double x_hot, double x_cold)
{
    if (!(x_hot > 0.0) || !(x_cold > 0.0)) throw InvalidInput("engine_f: reduced widths must be > 0");
    if (!(p0_hot >= 0.0 && p0_hot <= 1.0) || !(p0_cold >= 0.0 && p0_cold <= 1.0))
        throw InvalidInput("engine_f: occupations must lie in [0, 1]");
    return (1.0 - p0_hot) * numeric::engine_g(x_hot) - (1.0 - p0_cold) * numeric::engine_g(x_cold);
}

inline double engine_f(const CycleSpec& spec, const PopulationEndpoints& ends)
{
    const auto x = reduced_widths(spec);
    return engine_f(ends.p0_hot(), ends.p0_cold(), x.x_hot, x.x_cold);
}

/// dW = (p0_l - p0_h)[(gap_h + delta_h) - (gap_l + delta_l)] + (delta_h - delta_l) f.
inline double net_work(const CycleSpec& spec, const PopulationEndpoints& ends)
{
    require_valid(spec);
    const auto& h = spec.hot;
    const auto& c = spec.cold;
    const double dp = ends.p0_cold() - ends.p0_hot();
    return dp * ((h.delta_gap() + h.broadening()) - (c.delta_gap() + c.broadening())) +
           (h.broadening() - c.broadening()) * engine_f(spec, ends);
}

inline HeatAggregates heat_aggregates(const CycleSpec& spec, const PopulationEndpoints& ends)
{
    require_valid(spec);
    const auto& h = spec.hot;
    const auto& c = spec.cold;
    const double dp = ends.p0_cold() - ends.p0_hot();
    const double f = engine_f(spec, ends);
    return {dp * (h.delta_gap() + h.broadening()) + h.broadening() * f,
            dp * (c.delta_gap() + c.broadening()) + c.broadening() * f};
}

namespace detail {
/// Magnitude of the terms in the hot heat aggregate; zero tests are relative to it.
inline double heat_in_scale(const CycleSpec& spec, const PopulationEndpoints& ends)
{
    const double dp = std::abs(ends.p0_cold() - ends.p0_hot());
    const double f_scale = (1.0 - ends.p0_hot()) + (1.0 - ends.p0_cold());
    return dp * (spec.hot.delta_gap() + spec.hot.broadening()) + spec.hot.broadening() * f_scale;
}
} // namespace detail

/// eta = 1 - heat_out_total / heat_in_total. Throws Degenerate when heat_in_total vanishes.
inline double efficiency(const CycleSpec& spec, const PopulationEndpoints& ends)
{
    const auto q = heat_aggregates(spec, ends);
    if (std::abs(q.heat_in_total) <= 1e-14 * detail::heat_in_scale(spec, ends))
        throw Degenerate("degenerate cycle: heat_in_total is zero within tolerance");
    return 1.0 - q.heat_out_total / q.heat_in_total;
}

/// Equal broadenings: the two-level result (p0_l - p0_h)(gap_h - gap_l).
inline double limit_two_level_work(const CycleSpec& spec, const PopulationEndpoints& ends)
{
    require_valid(spec);
    return (ends.p0_cold() - ends.p0_hot()) * (spec.hot.delta_gap() - spec.cold.delta_gap());
}

/**
 * High-temperature limit taken as a two-level engine with gaps
 * gap + delta. The exact limit of net_work keeps an extra
 * (delta_h - delta_l)(p0_h - p0_l)/2; see high_temperature_gap_asymptote.
 */
inline double limit_high_temperature_work(const CycleSpec& spec, const PopulationEndpoints& ends)
{
    require_valid(spec);
    return (ends.p0_cold() - ends.p0_hot()) * ((spec.hot.delta_gap() + spec.hot.broadening()) -
                                               (spec.cold.delta_gap() + spec.cold.broadening()));
}

/// Residual net_work - limit_high_temperature_work as both reduced widths go to zero.
inline double high_temperature_gap_asymptote(const CycleSpec& spec, const PopulationEndpoints& ends)
{
    return (spec.hot.broadening() - spec.cold.broadening()) * (ends.p0_hot() - ends.p0_cold()) / 2.0;
}

/// Printed high-temperature efficiency 1 - (gap_l + delta_l)/(gap_h + delta_h).
inline double limit_high_temperature_efficiency(const CycleSpec& spec)
{
    require_valid(spec);
    return 1.0 - (spec.cold.delta_gap() + spec.cold.broadening()) / (spec.hot.delta_gap() + spec.hot.broadening());
}

/// No population transfer (p0_h = p0_l = p): (delta_h - delta_l)(1 - p) f|_{p0=0}.
inline double limit_frozen_population_work(const CycleSpec& spec, double p)
{
    require_valid(spec);
    detail::require_probability(p, "frozen occupation p");
    const auto x = reduced_widths(spec);
    return (spec.hot.broadening() - spec.cold.broadening()) * (1.0 - p) * engine_f(0.0, 0.0, x.x_hot, x.x_cold);
}

/// Frozen-population efficiency 1 - delta_l/delta_h.
inline double limit_frozen_population_efficiency(const CycleSpec& spec)
{
    require_valid(spec);
    return 1.0 - spec.cold.broadening() / spec.hot.broadening();
}

/// Corners in the order A, B, C, D.
inline std::array<CornerState, 4> cycle_corners(const CycleSpec& spec, const PopulationEndpoints& ends)
{
    require_valid(spec);
    const double bh = spec.beta_hot();
    const double bl = spec.beta_cold();
    return {corner_state(spec.hot, bl, ends.p0_cold()), corner_state(spec.hot, bh, ends.p0_hot()),
            corner_state(spec.cold, bh, ends.p0_hot()), corner_state(spec.cold, bl, ends.p0_cold())};
}

inline std::array<BranchLedger, 4> branch_ledgers(const CycleSpec& spec, const PopulationEndpoints& ends)
{
    const auto corners = cycle_corners(spec, ends);
    const double w2 = branch_work_2(spec, ends.p0_hot());
    const double w4 = branch_work_4(spec, ends.p0_cold());
    std::array<BranchLedger, 4> out{};
    const std::array<double, 4> work{0.0, w2, 0.0, w4};
    for (int i = 0; i < 4; ++i) {
        const double du = corners[(i + 1) % 4].mean_energy - corners[i].mean_energy;
        out[i] = BranchLedger{i + 1, du, work[i], du + work[i]};
    }
    return out;
}

inline CycleResult run_cycle(const CycleSpec& spec, const PopulationEndpoints& ends)
{
    CycleResult r{};
    r.ledgers = branch_ledgers(spec, ends);
    r.net_work = net_work(spec, ends);
    const auto q = heat_aggregates(spec, ends);
    r.heat_in_total = q.heat_in_total;
    r.heat_out_total = q.heat_out_total;
    if (std::abs(q.heat_in_total) <= 1e-14 * detail::heat_in_scale(spec, ends)) {
        r.efficiency_note = "undefined: heat_in_total is zero (degenerate cycle)";
    } else if (q.heat_in_total < 0.0) {
        r.efficiency_note = "undefined: heat_in_total < 0, the cycle does not run as an engine";
    } else {
        r.efficiency = efficiency(spec, ends);
        r.efficiency_note = "ok";
    }
    return r;
}

} // namespace qhe
