#pragma once

// Run configuration: JSON document <-> RunConfig.
//
// Keys: mode, hot{delta_gap,broadening,rho,e0}, cold{delta_gap,broadening,rho,e0},
// t_hot, t_cold, p0_hot, p0_cold, sweep{axes:[{param,min,max,count}]},
// tolerances{quad,match}, format, kt_l. Unknown keys are rejected. Omitted
// keys take the work-difference surface defaults (p0_cold 0.5, p0_hot 0.3,
// t_hot 5, t_cold 1, gaps 1, delta_h 2, delta_l 1, rho_h 1).

#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "qhe/errors.hpp"
#include "qhe/medium.hpp"
#include "qhe/sweep.hpp"

namespace qhe::io {

using json = nlohmann::json;

enum class OutputFormat { csv, json };

inline std::string_view to_string(OutputFormat f) { return f == OutputFormat::csv ? "csv" : "json"; }

struct Tolerances {
    double quad = 1e-12;
    double match = 1e-9;

    bool operator==(const Tolerances&) const = default;
};

struct RunConfig {
    sweep::CycleParams params;
    std::vector<sweep::Axis> axes{sweep::default_axis(sweep::Param::delta_h),
                                  sweep::default_axis(sweep::Param::delta_l)};
    Tolerances tolerances;
    OutputFormat format = OutputFormat::csv;
    double kt_l = 1.0; // output scale only

    bool operator==(const RunConfig&) const = default;
};

namespace detail {

inline void reject_unknown(const json& obj, std::string_view where, std::initializer_list<std::string_view> allowed)
{
    for (const auto& [key, value] : obj.items()) {
        bool ok = false;
        for (auto a : allowed) ok = ok || key == a;
        if (!ok)
            throw ConfigError("config: unknown key '" + (where.empty() ? key : std::string(where) + "." + key) + "'");
    }
}

inline const json& require_object(const json& j, const std::string& where)
{
    if (!j.is_object()) throw ConfigError("config key '" + where + "': expected an object");
    return j;
}

inline void read_number(const json& obj, const char* key, const std::string& where, double& target)
{
    if (!obj.contains(key)) return;
    const auto& v = obj.at(key);
    const std::string path = where.empty() ? key : where + "." + key;
    if (!v.is_number()) throw ConfigError("config key '" + path + "': expected a number");
    target = v.get<double>();
}

inline std::string path_of(const std::string& where, const char* key) { return where.empty() ? key : where + "." + key; }

} // namespace detail

/**
 * Parses and validates a configuration document.
 *
 * Throws ConfigError on malformed JSON (with line and column), on type or
 * unknown-key errors (with the key path), and on semantic violations such as
 * a broken rescaling constraint or occupations given in equilibrium mode.
 */
inline RunConfig parse_config(std::string_view text)
{
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
    if (!root.is_object()) throw ConfigError("config: top level must be a JSON object");
    detail::reject_unknown(root, "", {"mode", "hot", "cold", "t_hot", "t_cold", "p0_hot", "p0_cold", "sweep",
                                      "tolerances", "format", "kt_l"});

    RunConfig cfg;
    auto& p = cfg.params;

    if (root.contains("mode")) {
        const auto& m = root.at("mode");
        if (m == "free") p.mode = PopulationMode::free;
        else if (m == "equilibrium") p.mode = PopulationMode::equilibrium;
        else throw ConfigError("config key 'mode': expected \"free\" or \"equilibrium\"");
    }

    if (root.contains("hot")) {
        const auto& h = detail::require_object(root.at("hot"), "hot");
        detail::reject_unknown(h, "hot", {"delta_gap", "broadening", "rho", "e0"});
        detail::read_number(h, "delta_gap", "hot", p.delta_gap_h);
        detail::read_number(h, "broadening", "hot", p.delta_h);
        detail::read_number(h, "rho", "hot", p.rho_h);
        detail::read_number(h, "e0", "hot", p.e0_h);
    }
    if (root.contains("cold")) {
        const auto& c = detail::require_object(root.at("cold"), "cold");
        detail::reject_unknown(c, "cold", {"delta_gap", "broadening", "rho", "e0"});
        detail::read_number(c, "delta_gap", "cold", p.delta_gap_l);
        detail::read_number(c, "broadening", "cold", p.delta_l);
        detail::read_number(c, "e0", "cold", p.e0_l);
        if (c.contains("rho")) {
            double rho = 0.0;
            detail::read_number(c, "rho", "cold", rho);
            p.rho_l = rho;
        }
    }
    detail::read_number(root, "t_hot", "", p.t_hot);
    detail::read_number(root, "t_cold", "", p.t_cold);

    const bool has_p0 = root.contains("p0_hot") || root.contains("p0_cold");
    if (p.mode == PopulationMode::equilibrium && has_p0)
        throw ConfigError("config: endpoints not allowed in equilibrium mode (remove p0_hot/p0_cold)");
    detail::read_number(root, "p0_hot", "", p.p0_hot);
    detail::read_number(root, "p0_cold", "", p.p0_cold);

    if (root.contains("sweep")) {
        const auto& s = detail::require_object(root.at("sweep"), "sweep");
        detail::reject_unknown(s, "sweep", {"axes"});
        if (s.contains("axes")) {
            const auto& axes = s.at("axes");
            if (!axes.is_array() || axes.empty()) throw ConfigError("config key 'sweep.axes': expected a non-empty array");
            cfg.axes.clear();
            for (std::size_t i = 0; i < axes.size(); ++i) {
                const std::string where = "sweep.axes[" + std::to_string(i) + "]";
                const auto& a = detail::require_object(axes[i], where);
                detail::reject_unknown(a, where, {"param", "min", "max", "count"});
                for (const char* k : {"param", "min", "max", "count"})
                    if (!a.contains(k)) throw ConfigError("config key '" + detail::path_of(where, k) + "': missing");
                if (!a.at("param").is_string())
                    throw ConfigError("config key '" + where + ".param': expected a string");
                const auto param = sweep::parse_param(a.at("param").get<std::string>());
                if (!param)
                    throw ConfigError("config key '" + where + ".param': unknown parameter '" +
                                      a.at("param").get<std::string>() + "'");
                sweep::Axis axis{*param, 0.0, 0.0, 0};
                detail::read_number(a, "min", where, axis.min);
                detail::read_number(a, "max", where, axis.max);
                if (!a.at("count").is_number_integer())
                    throw ConfigError("config key '" + where + ".count': expected an integer");
                axis.count = a.at("count").get<int>();
                cfg.axes.push_back(axis);
            }
            try {
                sweep::require_axes(cfg.axes);
            } catch (const InvalidInput& e) {
                throw ConfigError(std::string("config key 'sweep.axes': ") + e.what());
            }
            if (p.mode == PopulationMode::equilibrium)
                for (const auto& a : cfg.axes)
                    if (a.param == sweep::Param::p0_hot || a.param == sweep::Param::p0_cold)
                        throw ConfigError("config: occupation axes not allowed in equilibrium mode");
        }
    }

    if (root.contains("tolerances")) {
        const auto& t = detail::require_object(root.at("tolerances"), "tolerances");
        detail::reject_unknown(t, "tolerances", {"quad", "match"});
        detail::read_number(t, "quad", "tolerances", cfg.tolerances.quad);
        detail::read_number(t, "match", "tolerances", cfg.tolerances.match);
        if (!(cfg.tolerances.quad > 0.0 && cfg.tolerances.quad <= 1e-3))
            throw ConfigError("config key 'tolerances.quad': must lie in (0, 1e-3]");
        if (!(cfg.tolerances.match > 0.0)) throw ConfigError("config key 'tolerances.match': must be > 0");
    }

    if (root.contains("format")) {
        const auto& f = root.at("format");
        if (f == "csv") cfg.format = OutputFormat::csv;
        else if (f == "json") cfg.format = OutputFormat::json;
        else throw ConfigError("config key 'format': expected \"csv\" or \"json\"");
    }
    detail::read_number(root, "kt_l", "", cfg.kt_l);
    if (!(cfg.kt_l > 0.0) || !std::isfinite(cfg.kt_l)) throw ConfigError("config key 'kt_l': must be finite and > 0");

    // Semantic checks on the base point.
    try {
        const auto spec = p.spec();
        const auto report = validate_spec(spec);
        if (!report.valid()) throw ConfigError("config: " + report.errors_text());
        if (p.mode == PopulationMode::free) (void)p.endpoints(spec);
    } catch (const InvalidInput& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    return cfg;
}

/// Serializes every field explicitly; parse_config(to_json(c).dump()) == c.
inline json to_json(const RunConfig& cfg)
{
    const auto& p = cfg.params;
    json j;
    j["mode"] = std::string(to_string(p.mode));
    j["hot"] = {{"delta_gap", p.delta_gap_h}, {"broadening", p.delta_h}, {"rho", p.rho_h}, {"e0", p.e0_h}};
    j["cold"] = {{"delta_gap", p.delta_gap_l}, {"broadening", p.delta_l}, {"e0", p.e0_l}};
    if (p.rho_l) j["cold"]["rho"] = *p.rho_l;
    j["t_hot"] = p.t_hot;
    j["t_cold"] = p.t_cold;
    if (p.mode == PopulationMode::free) {
        j["p0_hot"] = p.p0_hot;
        j["p0_cold"] = p.p0_cold;
    }
    json axes = json::array();
    for (const auto& a : cfg.axes)
        axes.push_back({{"param", std::string(sweep::param_name(a.param))}, {"min", a.min}, {"max", a.max},
                        {"count", a.count}});
    j["sweep"] = {{"axes", axes}};
    j["tolerances"] = {{"quad", cfg.tolerances.quad}, {"match", cfg.tolerances.match}};
    j["format"] = std::string(to_string(cfg.format));
    j["kt_l"] = cfg.kt_l;
    return j;
}

} // namespace qhe::io
