#pragma once

// Closed-form Boltzmann statistics of a single level structure.

#include <cmath>
#include <string>

#include "qhe/errors.hpp"
#include "qhe/medium.hpp"
#include "qhe/numeric.hpp"

namespace qhe {

namespace detail {
inline void require_beta(double beta)
{
    if (!(beta > 0.0) || !std::isfinite(beta)) throw InvalidInput("inverse temperature must be finite and > 0");
}

inline void require_probability(double p, const char* what)
{
    if (!(p > 0.0 && p < 1.0)) throw InvalidInput(std::string(what) + " must lie strictly inside (0, 1)");
}

/// Continuum weight relative to the discrete level: (rho/beta) e^(-beta*gap) (1 - e^(-beta*delta)).
inline double continuum_to_discrete_ratio(const LevelStructure& s, double beta)
{
    return s.rho() / beta * std::exp(-beta * s.delta_gap()) * numeric::one_minus_exp_neg(beta * s.broadening());
}
} // namespace detail

/// Z = e^(-beta E0) + (rho/beta)(e^(-beta Emin) - e^(-beta Emax)).
inline double partition_function(const LevelStructure& s, double beta)
{
    detail::require_beta(beta);
    return std::exp(-beta * s.e0()) +
           s.rho() / beta * std::exp(-beta * s.e_min()) * numeric::one_minus_exp_neg(beta * s.broadening());
}

/// Thermal occupation of the discrete level, e^(-beta E0) / Z.
inline double equilibrium_p0(const LevelStructure& s, double beta)
{
    detail::require_beta(beta);
    return 1.0 / (1.0 + detail::continuum_to_discrete_ratio(s, beta));
}

/// Mean energy of the continuum alone under the Boltzmann weight at beta.
inline double continuum_mean_energy(const LevelStructure& s, double beta)
{
    detail::require_beta(beta);
    return s.e_min() + s.broadening() * numeric::band_fraction(beta * s.broadening());
}

/**
 * One corner of the cycle: a structure whose discrete level holds p0 and
 * whose continuum carries a Boltzmann profile at beta with total weight 1 - p0.
 *
 * For the thermal corners p0 is the equilibrium value and `norm` equals the
 * partition function. For the corners reached by an adiabatic stroke p0 is
 * frozen from the preceding isotherm and `norm` only normalizes the
 * continuum profile to 1 - p0.
 */
struct CornerState {
    LevelStructure structure;
    double beta;
    double p0;
    double norm;
    double mean_energy;

    [[nodiscard]] double continuum_mean() const { return continuum_mean_energy(structure, beta); }
    /// Population density p(E) of the continuum at energy e inside the band.
    [[nodiscard]] double density(double e) const { return structure.rho() / norm * std::exp(-beta * e); }
};

inline CornerState corner_state(const LevelStructure& s, double beta, double p0)
{
    detail::require_beta(beta);
    detail::require_probability(p0, "corner occupation p0");
    const double x = beta * s.broadening();
    const double continuum = s.rho() / beta * std::exp(-beta * s.e_min()) * numeric::one_minus_exp_neg(x);
    // e0 + (1-p0)(<E> - e0) keeps the global shift exact.
    const double mean = s.e0() + (1.0 - p0) * (s.delta_gap() + s.broadening() * numeric::band_fraction(x));
    return CornerState{s, beta, p0, continuum / (1.0 - p0), mean};
}

/// Self-consistent thermal corner (B and D of the cycle).
inline CornerState thermal_corner(const LevelStructure& s, double beta)
{
    return corner_state(s, beta, equilibrium_p0(s, beta));
}

/**
 * Gap Delta = Emin - E0 at which the thermal occupation equals target_p0.
 *
 * May be negative; no continuum lying above the discrete level reaches such
 * an occupation. This form never throws on sign.
 */
inline double gap_for_occupation(double target_p0, double broadening, double rho, double beta)
{
    detail::require_beta(beta);
    detail::require_probability(target_p0, "target occupation");
    if (!(broadening > 0.0) || !(rho > 0.0)) throw InvalidInput("broadening and rho must be > 0");
    const double log_arg = std::log(beta) + std::log1p(-target_p0) - std::log(target_p0) - std::log(rho) -
                           std::log(numeric::one_minus_exp_neg(beta * broadening));
    return -log_arg / beta;
}

/// Like gap_for_occupation, but rejects occupations that need the continuum below the level.
inline double solve_gap_for_p0(double target_p0, double broadening, double rho, double beta)
{
    const double gap = gap_for_occupation(target_p0, broadening, rho, beta);
    if (gap >= 0.0) return gap;
    // Rounding of an exact zero gap.
    if (gap > -1e-12 * std::max(1.0 / beta, broadening)) return 0.0;
    throw Degenerate("unreachable occupation: p0 = " + detail::fmt_num(target_p0) +
                     " needs delta_gap = " + detail::fmt_num(gap) + " < 0");
}

/// Thermal endpoints: p0_hot from the hot structure at t_hot, p0_cold from the cold structure at t_cold.
inline PopulationEndpoints equilibrium_endpoints(const CycleSpec& spec)
{
    require_valid(spec);
    return PopulationEndpoints{equilibrium_p0(spec.hot, spec.beta_hot()), equilibrium_p0(spec.cold, spec.beta_cold()),
                               PopulationMode::equilibrium};
}

} // namespace qhe
