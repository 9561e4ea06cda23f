#pragma once

// Working-medium model: one discrete level below a flat continuum, and the
// pair of structures an Otto cycle alternates between.
//
// Units: the Boltzmann constant is 1 and energies are quoted in units of the
// cold reservoir's KT unless a caller rescales them.

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "qhe/errors.hpp"

namespace qhe {

/// Relative tolerance of the degeneracy rescaling check rho_h*delta_h == rho_l*delta_l.
inline constexpr double rescaling_tolerance = 1e-12;

/**
 * Spectrum of the working medium for one configuration.
 *
 * The discrete level sits at e0; the continuum occupies [e_min, e_max] with
 * e_min = e0 + delta_gap and e_max = e_min + broadening, and carries a
 * constant density of states rho.
 */
class LevelStructure {
public:
    LevelStructure(double e0, double delta_gap, double broadening, double rho)
        : e0_(e0), delta_gap_(delta_gap), broadening_(broadening), rho_(rho)
    {
        if (!std::isfinite(e0) || !std::isfinite(delta_gap) || !std::isfinite(broadening) || !std::isfinite(rho))
            throw InvalidInput("level structure: all parameters must be finite");
        if (broadening <= 0.0) throw InvalidInput("level structure: broadening must be > 0");
        if (rho <= 0.0) throw InvalidInput("level structure: rho must be > 0");
        if (delta_gap < 0.0) throw InvalidInput("level structure: delta_gap must be >= 0");
    }

    [[nodiscard]] double e0() const { return e0_; }
    [[nodiscard]] double delta_gap() const { return delta_gap_; }
    [[nodiscard]] double broadening() const { return broadening_; }
    [[nodiscard]] double rho() const { return rho_; }
    [[nodiscard]] double e_min() const { return e0_ + delta_gap_; }
    [[nodiscard]] double e_max() const { return e_min() + broadening_; }
    /// Total number of continuum states, rho * broadening.
    [[nodiscard]] double state_count() const { return rho_ * broadening_; }

    /// Same structure with every energy moved by `shift`.
    [[nodiscard]] LevelStructure shifted(double shift) const
    {
        return {e0_ + shift, delta_gap_, broadening_, rho_};
    }

    /// Every energy multiplied by `c`; rho divided by `c` so the state count is kept.
    [[nodiscard]] LevelStructure scaled(double c) const
    {
        return {e0_ * c, delta_gap_ * c, broadening_ * c, rho_ / c};
    }

    bool operator==(const LevelStructure&) const = default;

private:
    double e0_;
    double delta_gap_;
    double broadening_;
    double rho_;
};

/// Hot (B, A corners) and cold (C, D corners) structures plus reservoir temperatures KT_h, KT_l.
struct CycleSpec {
    LevelStructure hot;
    LevelStructure cold;
    double t_hot;
    double t_cold;

    [[nodiscard]] double beta_hot() const { return 1.0 / t_hot; }
    [[nodiscard]] double beta_cold() const { return 1.0 / t_cold; }
    /// rho_h / rho_l, which equals delta_l / delta_h on a valid spec.
    [[nodiscard]] double density_ratio() const { return hot.rho() / cold.rho(); }

    bool operator==(const CycleSpec&) const = default;
};

enum class PopulationMode { free, equilibrium };

inline std::string_view to_string(PopulationMode m)
{
    return m == PopulationMode::free ? "free" : "equilibrium";
}

/// Discrete-level occupations at the end of the hot (p0_hot) and cold (p0_cold) isotherms.
class PopulationEndpoints {
public:
    PopulationEndpoints(double p0_hot, double p0_cold, PopulationMode mode = PopulationMode::free)
        : p0_hot_(p0_hot), p0_cold_(p0_cold), mode_(mode)
    {
        if (!(p0_hot > 0.0 && p0_hot < 1.0)) throw InvalidInput("p0_hot must lie strictly inside (0, 1)");
        if (!(p0_cold > 0.0 && p0_cold < 1.0)) throw InvalidInput("p0_cold must lie strictly inside (0, 1)");
    }

    [[nodiscard]] double p0_hot() const { return p0_hot_; }
    [[nodiscard]] double p0_cold() const { return p0_cold_; }
    [[nodiscard]] PopulationMode mode() const { return mode_; }

    bool operator==(const PopulationEndpoints&) const = default;

private:
    double p0_hot_;
    double p0_cold_;
    PopulationMode mode_;
};

enum class Severity { error, warning };

struct Violation {
    Severity severity;
    std::string code;
    std::string message;
};

struct ValidationReport {
    std::vector<Violation> items;

    /// No hard violations; warnings are allowed.
    [[nodiscard]] bool valid() const
    {
        return std::none_of(items.begin(), items.end(),
                            [](const Violation& v) { return v.severity == Severity::error; });
    }
    [[nodiscard]] bool empty() const { return items.empty(); }
    [[nodiscard]] bool has(std::string_view code) const
    {
        return std::any_of(items.begin(), items.end(), [&](const Violation& v) { return v.code == code; });
    }
    [[nodiscard]] std::string errors_text() const
    {
        std::string out;
        for (const auto& v : items) {
            if (v.severity != Severity::error) continue;
            if (!out.empty()) out += "; ";
            out += v.code + ": " + v.message;
        }
        return out;
    }
};

namespace detail {
inline std::string fmt_num(double v)
{
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}
} // namespace detail

/**
 * Collects every violated invariant of a cycle specification.
 *
 * Hard errors: non-positive or non-finite temperatures, and a broken
 * rescaling constraint rho_h*delta_h == rho_l*delta_l. Warnings flag
 * identical structures (the cycle cannot deliver work) and t_hot < t_cold.
 */
inline ValidationReport validate_spec(const CycleSpec& spec)
{
    ValidationReport report;
    auto add = [&](Severity s, std::string code, std::string msg) {
        report.items.push_back({s, std::move(code), std::move(msg)});
    };

    const bool temps_ok = std::isfinite(spec.t_hot) && std::isfinite(spec.t_cold) && spec.t_hot > 0.0 &&
                          spec.t_cold > 0.0;
    if (!(std::isfinite(spec.t_hot) && spec.t_hot > 0.0))
        add(Severity::error, "temperature", "t_hot must be finite and > 0, got " + detail::fmt_num(spec.t_hot));
    if (!(std::isfinite(spec.t_cold) && spec.t_cold > 0.0))
        add(Severity::error, "temperature", "t_cold must be finite and > 0, got " + detail::fmt_num(spec.t_cold));

    const double wh = spec.hot.state_count();
    const double wl = spec.cold.state_count();
    if (std::abs(wh - wl) > rescaling_tolerance * std::max(wh, wl))
        add(Severity::error, "rescaling constraint",
            "rho_h*broadening_h = " + detail::fmt_num(wh) + " differs from rho_l*broadening_l = " +
                detail::fmt_num(wl));

    if (spec.hot == spec.cold)
        add(Severity::warning, "degenerate",
            temps_ok && spec.t_hot == spec.t_cold ? "zero-work cycle candidate: identical structures and temperatures"
                                                  : "zero-work cycle candidate: identical structures");
    if (temps_ok && spec.t_hot < spec.t_cold)
        add(Severity::warning, "reversed temperatures",
            "t_hot = " + detail::fmt_num(spec.t_hot) + " is below t_cold = " + detail::fmt_num(spec.t_cold));
    return report;
}

/// Throws InvalidInput listing every hard violation.
inline void require_valid(const CycleSpec& spec)
{
    const auto report = validate_spec(spec);
    if (!report.valid()) throw InvalidInput("invalid cycle spec: " + report.errors_text());
}

/**
 * Builds a spec whose cold density of states is derived from the rescaling
 * constraint, rho_l = rho_h * delta_h / delta_l.
 */
inline CycleSpec make_spec_from_broadenings(double delta_gap_h, double delta_h, double delta_gap_l, double delta_l,
                                            double rho_h, double t_hot, double t_cold, double e0_h = 0.0,
                                            double e0_l = 0.0)
{
    if (!(delta_h > 0.0) || !(delta_l > 0.0)) throw InvalidInput("broadenings must be > 0");
    if (!(rho_h > 0.0)) throw InvalidInput("rho_h must be > 0");
    if (!(t_hot > 0.0) || !(t_cold > 0.0)) throw InvalidInput("temperatures must be > 0");
    const double rho_l = rho_h * delta_h / delta_l;
    return CycleSpec{LevelStructure{e0_h, delta_gap_h, delta_h, rho_h}, LevelStructure{e0_l, delta_gap_l, delta_l, rho_l},
                     t_hot, t_cold};
}

} // namespace qhe
