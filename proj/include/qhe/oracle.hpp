#pragma once

// Independent numerical routes to the cycle thermodynamics.
//
// The quadrature oracle integrates the defining energy and work integrals of
// each stroke directly; the ladder oracle replaces each continuum by n
// discrete levels and evaluates every quantity as a finite sum. Neither calls
// the closed forms in otto_cycle.hpp.

#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

#include "qhe/equilibrium.hpp"
#include "qhe/medium.hpp"
#include "qhe/numeric.hpp"
#include "qhe/otto_cycle.hpp"
#include "qhe/quadrature.hpp"

namespace qhe::oracle {

/// Cycle quantities assembled from four ledgers.
struct OracleCycle {
    std::array<BranchLedger, 4> ledgers;
    std::array<double, 4> corner_energy; // U_A, U_B, U_C, U_D
    double net_work;
    double heat_in_total;  // Q1 + Q4
    double heat_out_total; // -(Q2 + Q3)
    /// Magnitude of the terms summed into each stroke work (cancellation scale).
    double work_scale_2;
    double work_scale_4;
};

namespace detail {

struct BandMoments {
    double weight; // integral of rho e^(-beta (E - e_ref))
    double mean;   // first moment / weight
};

inline BandMoments band_moments(const LevelStructure& s, double beta, double tol)
{
    quad::Options opt;
    opt.rel_tol = tol;
    const double ref = s.e_min();
    auto w = [&](double e) { return s.rho() * std::exp(-beta * (e - ref)); };
    const double weight = quad::integrate(w, s.e_min(), s.e_max(), opt).value;
    // First moment about e_min keeps the integrand positive; the reference is added back.
    const double moment = quad::integrate([&](double e) { return (e - ref) * w(e); }, s.e_min(), s.e_max(), opt).value;
    return {weight, ref + moment / weight};
}

/// Image of a hot-band energy in the cold band: E_l = (rho_h/rho_l)(E_h - Emin_h) + Emin_l.
inline double transport(const CycleSpec& spec, double e_hot)
{
    return spec.hot.rho() / spec.cold.rho() * (e_hot - spec.hot.e_min()) + spec.cold.e_min();
}

inline OracleCycle assemble(const std::array<double, 4>& u, double w2, double w4, double scale2, double scale4)
{
    OracleCycle out{};
    out.corner_energy = u;
    const std::array<double, 4> work{0.0, w2, 0.0, w4};
    for (int i = 0; i < 4; ++i) {
        const double du = u[(i + 1) % 4] - u[i];
        out.ledgers[i] = BranchLedger{i + 1, du, work[i], du + work[i]};
    }
    out.net_work = w2 + w4;
    out.heat_in_total = out.ledgers[0].heat_in + out.ledgers[3].heat_in;
    out.heat_out_total = -(out.ledgers[1].heat_in + out.ledgers[2].heat_in);
    out.work_scale_2 = scale2;
    out.work_scale_4 = scale4;
    return out;
}

} // namespace detail

/**
 * Stroke ledgers from direct quadrature.
 *
 * Corner energies integrate E against each corner's continuum profile.
 * Stroke works integrate the level-shift E_h - E_l of every continuum
 * microstate against the population it carries: the hot-thermal profile on
 * B->C, and the cold-thermal profile pulled back to the hot band on D->A. The
 * D->A profile is normalized on the cold band, so the Jacobian of the map is
 * exercised rather than assumed.
 */
inline OracleCycle oracle_branch_quantities(const CycleSpec& spec, const PopulationEndpoints& ends, double tol)
{
    require_valid(spec);
    const auto& hot = spec.hot;
    const auto& cold = spec.cold;
    const double bh = spec.beta_hot();
    const double bl = spec.beta_cold();
    const double ph = ends.p0_hot();
    const double pl = ends.p0_cold();
    quad::Options opt;
    opt.rel_tol = tol;

    const auto mA = detail::band_moments(hot, bl, tol);
    const auto mB = detail::band_moments(hot, bh, tol);
    const auto mC = detail::band_moments(cold, bh, tol);
    const auto mD = detail::band_moments(cold, bl, tol);
    const std::array<double, 4> u{pl * hot.e0() + (1.0 - pl) * mA.mean, ph * hot.e0() + (1.0 - ph) * mB.mean,
                                  ph * cold.e0() + (1.0 - ph) * mC.mean, pl * cold.e0() + (1.0 - pl) * mD.mean};

    auto shift = [&](double e) { return e - detail::transport(spec, e); };
    const auto t2 = quad::integrate(
        [&](double e) { return hot.rho() * std::exp(-bh * (e - hot.e_min())) * shift(e); }, hot.e_min(), hot.e_max(),
        opt);
    const double w2 = ph * (hot.e0() - cold.e0()) + (1.0 - ph) * t2.value / mB.weight;

    const auto t4 = quad::integrate(
        [&](double e) {
            return hot.rho() * std::exp(-bl * (detail::transport(spec, e) - cold.e_min())) * shift(e);
        },
        hot.e_min(), hot.e_max(), opt);
    const double w4 = -(pl * (hot.e0() - cold.e0()) + (1.0 - pl) * t4.value / mD.weight);

    const double s2 = std::abs(ph * (hot.e0() - cold.e0())) + (1.0 - ph) * t2.abs_integral / mB.weight;
    const double s4 = std::abs(pl * (hot.e0() - cold.e0())) + (1.0 - pl) * t4.abs_integral / mD.weight;
    return detail::assemble(u, w2, w4, s2, s4);
}

enum class LadderPlacement {
    midpoint,  // level k at the centre of sub-band k
    left_edge, // level k at the lower edge of sub-band k
};

/// Ladder-oracle cycle plus the heats evaluated directly as sum E dp.
struct LadderCycle {
    OracleCycle cycle;
    /// Per-stroke heats from sum_i E_i dp_i, independent of the first-law ledgers.
    std::array<double, 4> heat_by_population_change;
};

namespace detail {

/// Populations of the n continuum levels for a profile at beta, normalized to `weight_total`.
inline std::vector<double> ladder_populations(const std::vector<double>& levels, double e_ref, double degeneracy,
                                              double beta, double weight_total)
{
    std::vector<double> pop(levels.size());
    numeric::CompensatedSum z;
    for (std::size_t k = 0; k < levels.size(); ++k) {
        pop[k] = degeneracy * std::exp(-beta * (levels[k] - e_ref));
        z.add(pop[k]);
    }
    const double scale = weight_total / z.value();
    for (auto& p : pop) p *= scale;
    return pop;
}

inline double dot(const std::vector<double>& a, const std::vector<double>& b)
{
    numeric::CompensatedSum s;
    for (std::size_t k = 0; k < a.size(); ++k) s.add(a[k] * b[k]);
    return s.value();
}

} // namespace detail

/**
 * Discretized cycle: each continuum becomes n equally spaced levels of
 * degeneracy rho*delta/n, and every energy, work, and heat is a finite sum
 * over discrete levels. Midpoint placement converges at second order,
 * left-edge placement at first order.
 */
inline LadderCycle ladder_oracle(const CycleSpec& spec, const PopulationEndpoints& ends, int n_levels,
                                 LadderPlacement placement = LadderPlacement::midpoint)
{
    require_valid(spec);
    if (n_levels < 2) throw InvalidInput("ladder_oracle: n_levels must be >= 2");
    const auto& hot = spec.hot;
    const auto& cold = spec.cold;
    const auto n = static_cast<std::size_t>(n_levels);
    const double offset = placement == LadderPlacement::midpoint ? 0.5 : 0.0;

    std::vector<double> eh(n);
    std::vector<double> el(n);
    for (std::size_t k = 0; k < n; ++k) {
        eh[k] = hot.e_min() + (static_cast<double>(k) + offset) * hot.broadening() / n_levels;
        el[k] = detail::transport(spec, eh[k]);
    }
    const double gh = hot.state_count() / n_levels;
    const double gl = cold.state_count() / n_levels;
    const double ph = ends.p0_hot();
    const double pl = ends.p0_cold();

    const auto popA = detail::ladder_populations(eh, hot.e_min(), gh, spec.beta_cold(), 1.0 - pl);
    const auto popB = detail::ladder_populations(eh, hot.e_min(), gh, spec.beta_hot(), 1.0 - ph);
    const auto popC = detail::ladder_populations(el, cold.e_min(), gl, spec.beta_hot(), 1.0 - ph);
    const auto popD = detail::ladder_populations(el, cold.e_min(), gl, spec.beta_cold(), 1.0 - pl);

    const std::array<double, 4> u{pl * hot.e0() + detail::dot(popA, eh), ph * hot.e0() + detail::dot(popB, eh),
                                  ph * cold.e0() + detail::dot(popC, el), pl * cold.e0() + detail::dot(popD, el)};

    // Work delivered: -sum p_i dE_i at frozen populations.
    std::vector<double> shift(n);
    for (std::size_t k = 0; k < n; ++k) shift[k] = eh[k] - el[k];
    const double t2 = detail::dot(popB, shift);
    const double t4 = detail::dot(popD, shift);
    const double w2 = ph * (hot.e0() - cold.e0()) + t2;
    const double w4 = -(pl * (hot.e0() - cold.e0()) + t4);
    double s2 = std::abs(ph * (hot.e0() - cold.e0()));
    double s4 = std::abs(pl * (hot.e0() - cold.e0()));
    for (std::size_t k = 0; k < n; ++k) {
        s2 += popB[k] * std::abs(shift[k]);
        s4 += popD[k] * std::abs(shift[k]);
    }

    // Heat absorbed: sum E_i dp_i at the final levels of each stroke.
    auto heat = [](const std::vector<double>& levels, const std::vector<double>& from, const std::vector<double>& to,
                   double e0, double p_from, double p_to) {
        numeric::CompensatedSum s;
        s.add(e0 * (p_to - p_from));
        for (std::size_t k = 0; k < levels.size(); ++k) s.add(levels[k] * (to[k] - from[k]));
        return s.value();
    };
    LadderCycle out;
    out.cycle = detail::assemble(u, w2, w4, s2, s4);
    out.heat_by_population_change = {heat(eh, popA, popB, hot.e0(), pl, ph), heat(el, popB, popC, cold.e0(), ph, ph),
                                     heat(el, popC, popD, cold.e0(), ph, pl), heat(eh, popD, popA, hot.e0(), pl, pl)};
    return out;
}

} // namespace qhe::oracle
