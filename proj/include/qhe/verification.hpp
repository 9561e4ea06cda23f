#pragma once

// Cross-checks of the closed forms against the quadrature and ladder oracles.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "qhe/equilibrium.hpp"
#include "qhe/medium.hpp"
#include "qhe/numeric.hpp"
#include "qhe/oracle.hpp"
#include "qhe/otto_cycle.hpp"
#include "qhe/parallel.hpp"

namespace qhe::verify {

struct Config {
    double quad_tol = 1e-12;
    double match_tol = 1e-9;   // closed form vs quadrature, relative
    int ladder_levels = 4096;  // 0 disables the ladder comparison
    double ladder_tol = 1e-4;  // closed form vs ladder, relative
    double closure_tol = 1e-10;
    double exact_tol = 1e-12;  // algebraic identities and reductions

    bool operator==(const Config&) const = default;
};

/// One closed-form quantity against its oracle values.
struct Entry {
    std::string name;
    double closed_form;
    double quadrature;
    std::optional<double> ladder;
    double abs_error;
    double rel_error;
    std::optional<double> ladder_rel_error;
    bool pass;
};

/// A residual that must vanish (identity, reduction, closure).
struct Check {
    std::string name;
    double residual; // relative to the magnitude of the compared terms
    double tolerance;
    bool pass;
};

/// Exact net work against the two-level high-temperature limit at t = scale * delta on both sides.
struct GapMeasurement {
    double kt_over_delta;
    double exact_work;
    double limit_work;
    double gap;
    double asymptote; // (delta_h - delta_l)(p0_h - p0_l)/2
    std::optional<double> exact_efficiency;
    double limit_efficiency;
};

struct Report {
    bool validated = false;
    std::vector<std::string> validation_errors;
    std::vector<Entry> entries; // sorted by name
    std::vector<Check> checks;  // sorted by name
    std::vector<GapMeasurement> high_temperature_gaps;
    std::vector<std::string> notes;
    bool pass = false;
};

namespace detail {

inline Entry compare(std::string name, double closed, double quad, double scale, double tol)
{
    const double abs_err = std::abs(closed - quad);
    const double rel = numeric::relative_error(closed, quad, scale);
    return Entry{std::move(name), closed, quad, std::nullopt, abs_err, rel, std::nullopt, rel <= tol};
}

inline Check check(std::string name, double a, double b, double scale, double tol)
{
    const double r = numeric::relative_error(a, b, scale);
    return Check{std::move(name), r, tol, r <= tol};
}

inline std::string fmt(double v) { return qhe::detail::fmt_num(v); }

} // namespace detail

/**
 * Runs every comparison for one parameter point.
 *
 * A spec that fails validation yields a failing report with no comparisons.
 * Relative errors are taken against max(|closed|, |oracle|, s) where s is the
 * summed magnitude of the terms the oracle added to form the quantity, so a
 * small difference of large terms is judged at the precision those terms carry.
 */
inline Report run_verification(const CycleSpec& spec, const PopulationEndpoints& ends, const Config& cfg = {})
{
    Report rep;
    const auto validation = validate_spec(spec);
    for (const auto& v : validation.items)
        if (v.severity == Severity::error) rep.validation_errors.push_back(v.code + ": " + v.message);
    if (!validation.valid()) {
        rep.notes.push_back("validation failed; no comparisons run");
        return rep;
    }
    rep.validated = true;

    const auto closed = run_cycle(spec, ends);
    const double w2 = branch_work_2(spec, ends.p0_hot());
    const double w4 = branch_work_4(spec, ends.p0_cold());
    const auto q = oracle::oracle_branch_quantities(spec, ends, cfg.quad_tol);
    const auto& u = q.corner_energy;

    const double s_net = q.work_scale_2 + q.work_scale_4;
    const double s_in = std::abs(u[0]) * 2 + std::abs(u[1]) + std::abs(u[3]) + q.work_scale_4;
    const double s_out = std::abs(u[1]) + 2 * std::abs(u[2]) + std::abs(u[3]) + q.work_scale_2;

    rep.entries.push_back(detail::compare("branch_work_2", w2, q.ledgers[1].work_out, q.work_scale_2, cfg.match_tol));
    rep.entries.push_back(detail::compare("branch_work_4", w4, q.ledgers[3].work_out, q.work_scale_4, cfg.match_tol));
    rep.entries.push_back(detail::compare("net_work", closed.net_work, q.net_work, s_net, cfg.match_tol));
    rep.entries.push_back(detail::compare("heat_in_total", closed.heat_in_total, q.heat_in_total, s_in, cfg.match_tol));
    rep.entries.push_back(
        detail::compare("heat_out_total", closed.heat_out_total, q.heat_out_total, s_out, cfg.match_tol));

    std::optional<double> eta_closed;
    double s_eta = 0.0;
    try {
        eta_closed = efficiency(spec, ends);
    } catch (const Degenerate&) {
        rep.notes.push_back("efficiency not compared: heat_in_total vanishes");
    }
    if (eta_closed) {
        const double eta_q = q.net_work / q.heat_in_total;
        s_eta = (s_net + std::abs(eta_q) * s_in) / std::abs(q.heat_in_total);
        rep.entries.push_back(detail::compare("efficiency", *eta_closed, eta_q, s_eta, cfg.match_tol));
    }

    if (cfg.ladder_levels > 0) {
        const auto lad = oracle::ladder_oracle(spec, ends, cfg.ladder_levels);
        auto attach = [&](const std::string& name, double value, double scale) {
            for (auto& e : rep.entries) {
                if (e.name != name) continue;
                e.ladder = value;
                e.ladder_rel_error = numeric::relative_error(e.closed_form, value, scale);
                e.pass = e.pass && *e.ladder_rel_error <= cfg.ladder_tol;
            }
        };
        const auto& lc = lad.cycle;
        attach("branch_work_2", lc.ledgers[1].work_out, lc.work_scale_2);
        attach("branch_work_4", lc.ledgers[3].work_out, lc.work_scale_4);
        attach("net_work", lc.net_work, lc.work_scale_2 + lc.work_scale_4);
        attach("heat_in_total", lc.heat_in_total, s_in);
        attach("heat_out_total", lc.heat_out_total, s_out);
        if (eta_closed) attach("efficiency", lc.net_work / lc.heat_in_total, s_eta);

        double heat_gap = 0.0;
        double heat_scale = 0.0;
        for (int i = 0; i < 4; ++i) {
            heat_gap = std::max(heat_gap, std::abs(lad.heat_by_population_change[i] - lc.ledgers[i].heat_in));
            heat_scale += std::abs(lc.corner_energy[i]) + std::abs(lc.ledgers[i].work_out);
        }
        rep.checks.push_back(detail::check("ladder.heat_sum_vs_first_law", heat_gap, 0.0, heat_scale, cfg.closure_tol));
    }

    // First-law closure over the closed-form and quadrature ledgers.
    auto ledger_closure = [](const std::array<BranchLedger, 4>& l) {
        double heat = 0.0;
        double work = 0.0;
        double scale = 0.0;
        for (const auto& b : l) {
            heat += b.heat_in;
            work += b.work_out;
            scale += std::abs(b.heat_in) + std::abs(b.work_out);
        }
        return std::array<double, 3>{heat, work, scale};
    };
    const auto cc = ledger_closure(closed.ledgers);
    rep.checks.push_back(detail::check("first_law.closed_ledgers", cc[0], cc[1], cc[2], cfg.closure_tol));
    const auto qc = ledger_closure(q.ledgers);
    rep.checks.push_back(detail::check("first_law.quadrature_ledgers", qc[0], qc[1], qc[2], cfg.closure_tol));
    rep.checks.push_back(detail::check("first_law.aggregates", closed.net_work,
                                       closed.heat_in_total - closed.heat_out_total,
                                       std::abs(closed.heat_in_total) + std::abs(closed.heat_out_total),
                                       cfg.exact_tol));
    rep.checks.push_back(detail::check("sum_rule.branch_works", w2 + w4, closed.net_work, std::abs(w2) + std::abs(w4),
                                       cfg.exact_tol));

    // Per-stroke decomposition of the heat aggregates.
    {
        const auto& cl = closed.ledgers;
        const double hot = cl[0].heat_in + cl[3].heat_in;
        const double cold = -(cl[1].heat_in + cl[2].heat_in);
        const double r_hot = numeric::relative_error(hot, closed.heat_in_total, s_in);
        const double r_cold = numeric::relative_error(cold, closed.heat_out_total, s_out);
        rep.notes.push_back("heat_in_total decomposes as Q1 + Q4 of the stroke ledgers: " +
                            std::string(r_hot <= cfg.closure_tol ? "yes" : "no") + " (rel err " + detail::fmt(r_hot) +
                            ")");
        rep.notes.push_back("heat_out_total decomposes as -(Q2 + Q3) of the stroke ledgers: " +
                            std::string(r_cold <= cfg.closure_tol ? "yes" : "no") + " (rel err " +
                            detail::fmt(r_cold) + ")");
    }

    // Reductions that hold exactly on special subspaces.
    const auto& h = spec.hot;
    const auto& c = spec.cold;
    if (h.broadening() == c.broadening()) {
        const double dp = std::abs(ends.p0_cold() - ends.p0_hot());
        const double scale = dp * (h.delta_gap() + h.broadening() + c.delta_gap() + c.broadening());
        auto ck = detail::check("reduction.equal_broadening", closed.net_work, limit_two_level_work(spec, ends), scale,
                                cfg.exact_tol);
        rep.notes.push_back(std::string("equal-broadening reduction to the two-level work ") +
                            (ck.pass ? "exact" : "FAILED"));
        rep.checks.push_back(std::move(ck));
    }
    if (ends.p0_hot() == ends.p0_cold()) {
        const double p = ends.p0_hot();
        const auto x = reduced_widths(spec);
        const double scale = std::abs(h.broadening() - c.broadening()) * (1.0 - p) *
                             (std::abs(numeric::engine_g(x.x_hot)) + std::abs(numeric::engine_g(x.x_cold)));
        rep.checks.push_back(detail::check("reduction.frozen_population", closed.net_work,
                                           limit_frozen_population_work(spec, p), scale, cfg.exact_tol));
        if (eta_closed)
            rep.checks.push_back(detail::check("reduction.frozen_population_efficiency", *eta_closed,
                                               limit_frozen_population_efficiency(spec), 0.0, cfg.exact_tol));
    }

    // Distance between the exact work and the two-level high-temperature limit.
    for (double s : {1e2, 1e3}) {
        const CycleSpec hs{h, c, s * h.broadening(), s * c.broadening()};
        GapMeasurement g{};
        g.kt_over_delta = s;
        g.exact_work = net_work(hs, ends);
        g.limit_work = limit_high_temperature_work(hs, ends);
        g.gap = g.exact_work - g.limit_work;
        g.asymptote = high_temperature_gap_asymptote(hs, ends);
        try {
            g.exact_efficiency = efficiency(hs, ends);
        } catch (const Degenerate&) {
        }
        g.limit_efficiency = limit_high_temperature_efficiency(hs);
        rep.high_temperature_gaps.push_back(g);
    }

    if (ends.mode() == PopulationMode::equilibrium && closed.efficiency) {
        const double carnot = 1.0 - spec.t_cold / spec.t_hot;
        rep.notes.push_back("carnot bound 1 - t_cold/t_hot = " + detail::fmt(carnot) + ", efficiency = " +
                            detail::fmt(*closed.efficiency) +
                            (*closed.efficiency <= carnot ? " (within bound)" : " (exceeds bound)"));
    }

    std::sort(rep.entries.begin(), rep.entries.end(), [](const Entry& a, const Entry& b) { return a.name < b.name; });
    std::sort(rep.checks.begin(), rep.checks.end(), [](const Check& a, const Check& b) { return a.name < b.name; });
    rep.pass = std::all_of(rep.entries.begin(), rep.entries.end(), [](const Entry& e) { return e.pass; }) &&
               std::all_of(rep.checks.begin(), rep.checks.end(), [](const Check& k) { return k.pass; });
    return rep;
}

// ---------------------------------------------------------------------------
// Seeded battery over random parameter sets.

struct SampleParams {
    double gap_h;
    double delta_h;
    double gap_l;
    double delta_l;
    double rho_h;
    double t_hot;
    double t_cold;
    double p0_hot;
    double p0_cold;

    [[nodiscard]] CycleSpec spec() const
    {
        return make_spec_from_broadenings(gap_h, delta_h, gap_l, delta_l, rho_h, t_hot, t_cold);
    }
    [[nodiscard]] PopulationEndpoints endpoints() const { return {p0_hot, p0_cold}; }
};

/// Uniform draw in [lo, hi) from the top 53 bits of a 64-bit Mersenne twister; bit-exact across platforms.
inline double uniform(std::mt19937_64& rng, double lo, double hi)
{
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
}

/// gap in [0,5], delta in [0.05,5], rho_h in [0.1,10], KT in [0.1,20], p0 in [0.05,0.95].
inline std::vector<SampleParams> draw_samples(std::uint64_t seed, std::size_t count)
{
    std::mt19937_64 rng(seed);
    std::vector<SampleParams> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        SampleParams p{};
        p.gap_h = uniform(rng, 0.0, 5.0);
        p.delta_h = uniform(rng, 0.05, 5.0);
        p.gap_l = uniform(rng, 0.0, 5.0);
        p.delta_l = uniform(rng, 0.05, 5.0);
        p.rho_h = uniform(rng, 0.1, 10.0);
        p.t_hot = uniform(rng, 0.1, 20.0);
        p.t_cold = uniform(rng, 0.1, 20.0);
        p.p0_hot = uniform(rng, 0.05, 0.95);
        p.p0_cold = uniform(rng, 0.05, 0.95);
        out.push_back(p);
    }
    return out;
}

/// Worst case of one named comparison across the battery.
struct Aggregate {
    std::string name;
    std::size_t compared = 0;
    std::size_t failures = 0;
    double worst = 0.0;
    std::size_t worst_sample = 0;
    double tolerance = 0.0;
};

struct SampleFailure {
    std::size_t index;
    SampleParams params;
    std::vector<std::string> failed;
};

struct LadderConvergence {
    std::vector<int> levels;
    std::vector<double> errors;
    std::vector<double> ratios; // error(N) / error(10 N)
    bool monotone = false;
    double min_ratio = 0.0;
    bool pass = false;
};

struct FLimit {
    double x;
    double max_abs_residual;
    double tolerance;
    bool pass;
};

struct BatteryReport {
    std::uint64_t seed;
    std::size_t samples;
    Config config;
    Report point; // the configured parameter point
    std::vector<Aggregate> quantities;
    std::vector<SampleFailure> failures;
    FLimit f_limit{};
    LadderConvergence ladder{};
    bool pass = false;
};

/// Error of the ladder net work against the closed form at several level counts.
inline LadderConvergence ladder_convergence(const CycleSpec& spec, const PopulationEndpoints& ends,
                                            std::vector<int> levels = {10, 100, 1000, 10000}, double min_ratio = 8.0)
{
    LadderConvergence out;
    out.levels = std::move(levels);
    const double exact = net_work(spec, ends);
    for (int n : out.levels) out.errors.push_back(std::abs(oracle::ladder_oracle(spec, ends, n).cycle.net_work - exact));
    out.monotone = true;
    out.min_ratio = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < out.errors.size(); ++i) {
        if (!(out.errors[i] < out.errors[i - 1])) out.monotone = false;
        const double r = out.errors[i - 1] / out.errors[i];
        out.ratios.push_back(r);
        out.min_ratio = std::min(out.min_ratio, r);
    }
    // A ladder that is already exact at the coarsest level (identical structures) has nothing to converge.
    const double worst = *std::max_element(out.errors.begin(), out.errors.end());
    out.pass = (out.monotone && out.min_ratio >= min_ratio) || worst <= 1e-13 * (1.0 + std::abs(exact));
    return out;
}

/**
 * Verifies the configured point, then `count` random parameter sets drawn
 * from `seed`. Every random set is checked against both oracles, for
 * first-law closure, for the equal-broadening and frozen-population
 * reductions (on variants of the set), and for the small-width limit of f.
 * Output is independent of thread count and scheduling.
 */
inline BatteryReport run_battery(const CycleSpec& point_spec, const PopulationEndpoints& point_ends,
                                 std::uint64_t seed, std::size_t count, const Config& cfg = {},
                                 unsigned threads = 0)
{
    BatteryReport rep{seed, count, cfg, run_verification(point_spec, point_ends, cfg), {}, {}, {}, {}, false};
    const auto samples = draw_samples(seed, count);

    struct SampleOutcome {
        Report report;
        std::vector<Check> extra;
        double f_residual = 0.0;
    };
    std::vector<SampleOutcome> outcomes(samples.size());
    constexpr double f_x = 1e-6;

    parallel_for(samples.size(), [&](std::size_t i) {
        const auto& sp = samples[i];
        const auto spec = sp.spec();
        const auto ends = sp.endpoints();
        auto& out = outcomes[i];
        out.report = run_verification(spec, ends, cfg);

        // Equal broadenings: cold delta set to the hot one.
        const auto eq = make_spec_from_broadenings(sp.gap_h, sp.delta_h, sp.gap_l, sp.delta_h, sp.rho_h, sp.t_hot,
                                                   sp.t_cold);
        const double dp = std::abs(sp.p0_cold - sp.p0_hot);
        out.extra.push_back(detail::check("reduction.equal_broadening", net_work(eq, ends),
                                          limit_two_level_work(eq, ends),
                                          dp * (sp.gap_h + sp.gap_l + 2 * sp.delta_h), cfg.exact_tol));

        // Frozen population: p0_cold set to p0_hot.
        const PopulationEndpoints fz{sp.p0_hot, sp.p0_hot};
        const auto x = reduced_widths(spec);
        const double fz_scale = std::abs(sp.delta_h - sp.delta_l) * (1.0 - sp.p0_hot) *
                                (std::abs(numeric::engine_g(x.x_hot)) + std::abs(numeric::engine_g(x.x_cold)));
        out.extra.push_back(detail::check("reduction.frozen_population", net_work(spec, fz),
                                          limit_frozen_population_work(spec, sp.p0_hot), fz_scale, cfg.exact_tol));
        try {
            out.extra.push_back(detail::check("reduction.frozen_population_efficiency", efficiency(spec, fz),
                                              limit_frozen_population_efficiency(spec), 0.0, cfg.exact_tol));
        } catch (const Degenerate&) {
        }

        out.f_residual = std::abs(engine_f(sp.p0_hot, sp.p0_cold, f_x, f_x) - (sp.p0_hot - sp.p0_cold) / 2.0);
    }, threads);

    std::map<std::string, Aggregate> agg;
    auto record = [&](const std::string& name, double value, double tol, bool pass, std::size_t i) {
        auto& a = agg[name];
        a.name = name;
        a.tolerance = tol;
        ++a.compared;
        if (!pass) ++a.failures;
        if (value > a.worst || a.compared == 1) {
            a.worst = value;
            a.worst_sample = i;
        }
    };
    rep.f_limit = FLimit{f_x, 0.0, 1e-5, true};
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
        const auto& o = outcomes[i];
        SampleFailure fail{i, samples[i], {}};
        if (!o.report.validated) fail.failed.emplace_back("validation");
        for (const auto& e : o.report.entries) {
            record("quadrature." + e.name, e.rel_error, cfg.match_tol, e.rel_error <= cfg.match_tol, i);
            if (e.ladder_rel_error)
                record("ladder." + e.name, *e.ladder_rel_error, cfg.ladder_tol, *e.ladder_rel_error <= cfg.ladder_tol,
                       i);
            if (!e.pass) fail.failed.push_back(e.name);
        }
        for (const auto* list : {&o.report.checks, &o.extra}) {
            for (const auto& k : *list) {
                record(k.name, k.residual, k.tolerance, k.pass, i);
                if (!k.pass) fail.failed.push_back(k.name);
            }
        }
        rep.f_limit.max_abs_residual = std::max(rep.f_limit.max_abs_residual, o.f_residual);
        if (o.f_residual > rep.f_limit.tolerance) fail.failed.emplace_back("f_small_width_limit");
        if (!fail.failed.empty()) rep.failures.push_back(std::move(fail));
    }
    rep.f_limit.pass = rep.f_limit.max_abs_residual <= rep.f_limit.tolerance;
    for (auto& [name, a] : agg) rep.quantities.push_back(a);

    rep.ladder = ladder_convergence(point_spec, point_ends);
    rep.pass = rep.point.pass && rep.failures.empty() && rep.f_limit.pass && rep.ladder.pass;
    return rep;
}

} // namespace qhe::verify
