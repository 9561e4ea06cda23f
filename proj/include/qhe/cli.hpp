#pragma once

// Command-line surface: cycle, sweep, fig3, verify.
//
// Exit codes: 0 success, 1 verification failure, 2 usage or configuration error.

#include <algorithm>
#include <fstream>
#include <iterator>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qhe/io/config.hpp"
#include "qhe/io/output.hpp"
#include "qhe/otto_cycle.hpp"
#include "qhe/sweep.hpp"
#include "qhe/verification.hpp"

namespace qhe::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_verify_failed = 1;
inline constexpr int exit_usage = 2;

inline io::RunConfig load_config(const std::string& path)
{
    if (path.empty()) return io::parse_config("{}");
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read config file '" + path + "'");
    const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    try {
        return io::parse_config(text);
    } catch (const ConfigError& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

inline void write_file(const std::string& path, const std::string& content)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot write output file '" + path + "'");
    out << content;
    if (!out) throw ConfigError("failed writing output file '" + path + "'");
}

inline io::OutputFormat pick_format(const std::string& flag, const io::RunConfig& cfg)
{
    if (flag.empty()) return cfg.format;
    return flag == "json" ? io::OutputFormat::json : io::OutputFormat::csv;
}

/// Slope signs along delta_l at small and large delta_h, and the sign census beside the diagonal.
inline io::Annotations fig3_annotations(const sweep::SweepGrid& g, const sweep::Fig3Params& p)
{
    io::Annotations notes;
    bool diagonal_zero = true;
    int diagonal_cells = 0;
    for (std::size_t i = 0; i < g.values.size(); ++i) {
        const auto c = g.coordinates(i);
        if (c[0] != c[1]) continue;
        ++diagonal_cells;
        diagonal_zero = diagonal_zero && g.values[i] == 0.0;
    }
    notes.emplace_back("diagonal_cells", std::to_string(diagonal_cells) + (diagonal_zero ? " all exactly 0" : " NOT all 0"));

    struct Claim {
        double delta_h;
        const char* expected;
    };
    for (const Claim claim : {Claim{0.1, "decreasing"}, Claim{4.5, "increasing"}}) {
        const auto s = sweep::work_difference_slope_scan(p, claim.delta_h, g.axes[1]);
        const char* dominant = s.negative > s.positive ? "decreasing" : (s.positive > s.negative ? "increasing" : "mixed");
        std::ostringstream os;
        os << "negative=" << s.negative << " positive=" << s.positive << " zero=" << s.zero << " dominant=" << dominant
           << " expected=" << claim.expected;
        notes.emplace_back("slope_along_delta_l.delta_h=" + io::format_number(claim.delta_h), os.str());
        if (s.positive > 0 && s.negative > 0) {
            // First sign change along delta_l.
            for (std::size_t k = 1; k < s.slope.size(); ++k) {
                if ((s.slope[k] > 0) != (s.slope[k - 1] > 0)) {
                    notes.emplace_back("slope_sign_change.delta_h=" + io::format_number(claim.delta_h),
                                       "between delta_l=" + io::format_number(s.delta_l[k - 1]) + " and " +
                                           io::format_number(s.delta_l[k]));
                    break;
                }
            }
        }
    }

    const auto d = sweep::near_diagonal_signs(g);
    std::ostringstream os;
    os << "delta_l>delta_h: positive=" << d.above_positive << " negative=" << d.above_negative
       << "; delta_l<delta_h: positive=" << d.below_positive << " negative=" << d.below_negative;
    notes.emplace_back("near_diagonal_signs", os.str());
    return notes;
}

inline std::string describe_point(const sweep::SweepTable& t, const sweep::BestPoint& b)
{
    std::ostringstream os;
    os << "cell=" << b.cell;
    for (std::size_t k = 0; k < b.coordinates.size(); ++k)
        os << ' ' << sweep::param_name(t.grid.axes[k].param) << '=' << io::format_number(b.coordinates[k]);
    os << " value=" << io::format_number(b.value);
    return os.str();
}

inline int cmd_cycle(const std::string& config_path, const std::string& out_path, const std::string& format_flag,
                     std::ostream& out)
{
    const auto cfg = load_config(config_path);
    const auto spec = cfg.params.spec();
    const auto ends = cfg.params.endpoints(spec);
    const auto result = run_cycle(spec, ends);
    io::print_cycle_table(out, result, ends, cfg.kt_l);
    if (!out_path.empty()) {
        std::ostringstream os;
        if (pick_format(format_flag, cfg) == io::OutputFormat::json)
            os << io::cycle_to_json(result, ends, cycle_corners(spec, ends), cfg.kt_l).dump(2) << '\n';
        else
            io::write_cycle_csv(os, result, ends, cfg.kt_l);
        write_file(out_path, os.str());
    }
    return exit_ok;
}

inline int cmd_sweep(const std::string& config_path, const std::string& out_path, const std::string& format_flag,
                     unsigned threads, std::ostream& out)
{
    const auto cfg = load_config(config_path);
    sweep::GridConfig grid{cfg.params, cfg.axes};
    const auto table = sweep::evaluate(grid, threads);
    const auto mask = sweep::positive_work_region(grid, threads);

    io::Annotations notes;
    std::size_t positive = 0, boundary = 0, invalid = 0;
    for (auto r : mask.region) {
        positive += r == sweep::Region::positive;
        boundary += r == sweep::Region::boundary;
        invalid += r == sweep::Region::invalid;
    }
    notes.emplace_back("cells", std::to_string(table.cells.size()));
    notes.emplace_back("positive_work_cells", std::to_string(positive));
    notes.emplace_back("boundary_cells", std::to_string(boundary));
    notes.emplace_back("invalid_cells", std::to_string(invalid));
    for (auto [name, obj] : {std::pair{"best_net_work", sweep::Objective::net_work},
                             std::pair{"best_efficiency", sweep::Objective::efficiency}}) {
        try {
            notes.emplace_back(name, describe_point(table, sweep::best_point(table, obj)));
        } catch (const Degenerate&) {
            notes.emplace_back(name, "none (no feasible cell)");
        }
    }

    std::ostringstream os;
    if (pick_format(format_flag, cfg) == io::OutputFormat::json)
        os << io::sweep_to_json(table, mask, notes, cfg.kt_l).dump(2) << '\n';
    else
        io::write_sweep_csv(os, table, mask, notes, cfg.kt_l);
    write_file(out_path, os.str());
    out << "wrote " << table.cells.size() << " cells to " << out_path << '\n';
    for (const auto& [k, v] : notes) out << k << ": " << v << '\n';
    return exit_ok;
}

inline int cmd_fig3(const std::string& config_path, const std::string& out_path, const std::string& format_flag,
                    unsigned threads, std::ostream& out)
{
    const auto cfg = load_config(config_path);
    if (cfg.params.mode != PopulationMode::free)
        throw ConfigError("fig3 uses fixed occupations; set mode to \"free\"");
    if (cfg.axes.size() != 2 || cfg.axes[0].param != sweep::Param::delta_h || cfg.axes[1].param != sweep::Param::delta_l)
        throw ConfigError("fig3 needs sweep axes [delta_h, delta_l]");
    const sweep::Fig3Params fp{cfg.params.p0_cold, cfg.params.p0_hot, cfg.params.t_hot, cfg.params.t_cold,
                               cfg.params.delta_gap_h};
    const auto grid = sweep::fig3_surface(fp, cfg.axes[0], cfg.axes[1], threads);
    const auto notes = fig3_annotations(grid, fp);

    std::ostringstream os;
    if (pick_format(format_flag, cfg) == io::OutputFormat::json)
        os << io::fig3_to_json(grid, notes, cfg.kt_l).dump(2) << '\n';
    else
        io::write_fig3_csv(os, grid, notes, cfg.kt_l);
    write_file(out_path, os.str());
    out << "wrote " << grid.values.size() << " cells to " << out_path << '\n';
    for (const auto& [k, v] : notes) out << k << ": " << v << '\n';
    return exit_ok;
}

inline int cmd_verify(const std::string& config_path, std::uint64_t seed, std::size_t samples,
                      const std::string& out_path, unsigned threads, std::ostream& out, std::ostream& err)
{
    const auto cfg = load_config(config_path);
    const auto spec = cfg.params.spec();
    const auto ends = cfg.params.endpoints(spec);
    verify::Config vc;
    vc.quad_tol = cfg.tolerances.quad;
    vc.match_tol = cfg.tolerances.match;
    const auto report = verify::run_battery(spec, ends, seed, samples, vc, threads);
    const std::string text = io::battery_to_json(report, cfg).dump(2) + "\n";
    if (out_path.empty()) out << text;
    else write_file(out_path, text);

    if (!report.pass) {
        err << "verification failed (" << report.failures.size() << " failing samples); report: "
            << (out_path.empty() ? std::string("<stdout>") : out_path) << '\n';
        return exit_verify_failed;
    }
    if (!out_path.empty()) out << "verification passed: " << samples << " samples, seed " << seed << "; report: " << out_path << '\n';
    return exit_ok;
}

/// Entry point shared by the executable and the tests; `args` excludes the program name.
inline int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Otto-cycle thermodynamics of a discrete level plus a flat continuum", "qhe"};
    app.require_subcommand(1);

    std::string config, out_path, format;
    unsigned threads = 0;
    std::uint64_t seed = 1;
    std::size_t samples = 1000;
    const std::vector<std::string> formats{"csv", "json"};

    auto* cycle = app.add_subcommand("cycle", "Per-branch ledgers, net work, heats, and efficiency for one point");
    cycle->add_option("--config", config, "JSON configuration")->required();
    cycle->add_option("--out", out_path, "Write the result to this file");
    cycle->add_option("--format", format, "csv or json")->check(CLI::IsMember(formats));

    auto* sw = app.add_subcommand("sweep", "Evaluate the cycle over the configured sweep axes");
    sw->add_option("--config", config, "JSON configuration")->required();
    sw->add_option("--out", out_path, "Output file")->required();
    sw->add_option("--format", format, "csv or json")->check(CLI::IsMember(formats));
    sw->add_option("--threads", threads, "Worker threads (0 = all cores)");

    auto* fig = app.add_subcommand("fig3", "Work difference over (delta_h, delta_l) at fixed occupations");
    fig->add_option("--config", config, "JSON configuration");
    fig->add_option("--out", out_path, "Output file")->required();
    fig->add_option("--format", format, "csv or json")->check(CLI::IsMember(formats));
    fig->add_option("--threads", threads, "Worker threads (0 = all cores)");

    auto* ver = app.add_subcommand("verify", "Check closed forms against the quadrature and ladder oracles");
    ver->add_option("--config", config, "JSON configuration for the reference point");
    ver->add_option("--seed", seed, "Seed of the random parameter sets");
    ver->add_option("--samples", samples, "Number of random parameter sets")->check(CLI::PositiveNumber);
    ver->add_option("--out", out_path, "Write the JSON report here instead of stdout");
    ver->add_option("--threads", threads, "Worker threads (0 = all cores)");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return exit_ok;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return exit_usage;
    }

    try {
        if (cycle->parsed()) return cmd_cycle(config, out_path, format, out);
        if (sw->parsed()) return cmd_sweep(config, out_path, format, threads, out);
        if (fig->parsed()) return cmd_fig3(config, out_path, format, threads, out);
        if (ver->parsed()) return cmd_verify(config, seed, samples, out_path, threads, out, err);
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const InvalidInput& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const Degenerate& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    }
    err << app.help();
    return exit_usage;
}

} // namespace qhe::cli
