#include "swarmdoppler/config.hpp"

#include <algorithm>
#include <array>
#include <limits>

#include "swarmdoppler/errors.hpp"

namespace swarmdoppler {

using nlohmann::json;

namespace {

std::string line_column(std::string_view text, std::size_t byte) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < std::min(byte, text.size()); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

template <std::size_t N>
void reject_unknown(const json& obj, const std::array<std::string_view, N>& allowed, const std::string& where) {
    for (const auto& [key, _] : obj.items()) {
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
            throw ConfigError("unknown key \"" + where + key + "\"");
    }
}

const json& require(const json& obj, const std::string& key, const std::string& where) {
    auto it = obj.find(key);
    if (it == obj.end()) throw ConfigError("missing required key \"" + where + key + "\"");
    return *it;
}

std::int64_t as_integer(const json& v, const std::string& key) {
    if (!v.is_number_integer()) throw ConfigError("key \"" + key + "\" must be an integer");
    if (v.is_number_unsigned() && v.get<std::uint64_t>() > static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max()))
        throw ConfigError("key \"" + key + "\" is out of range");
    return v.get<std::int64_t>();
}

int as_count(const json& v, const std::string& key) {
    const auto n = as_integer(v, key);
    if (n > std::numeric_limits<int>::max() || n < std::numeric_limits<int>::min())
        throw ConfigError("key \"" + key + "\" is out of range");
    return static_cast<int>(n);
}

double as_real(const json& v, const std::string& key) {
    if (!v.is_number()) throw ConfigError("key \"" + key + "\" must be a number");
    return v.get<double>();
}

}  // namespace

std::string to_string(EstimatorMode mode) {
    return mode == EstimatorMode::single_reference ? "single_reference" : "time_averaged";
}

RunConfig config_from_json(const json& doc) {
    if (!doc.is_object()) throw ConfigError("configuration document must be a JSON object");
    static constexpr std::array<std::string_view, 10> top_keys{
        "n_drones",         "n_rotors",       "n_blades",       "blade_length_m", "wavelength_m",
        "mean_speed_rad_s", "speed_variance", "gain_magnitude", "grid",           "estimator"};
    reject_unknown(doc, top_keys, "");

    RunConfig cfg;
    auto& p = cfg.params;
    p.n_drones = as_count(require(doc, "n_drones", ""), "n_drones");
    p.n_rotors = as_count(require(doc, "n_rotors", ""), "n_rotors");
    p.n_blades = as_count(require(doc, "n_blades", ""), "n_blades");
    p.blade_length = as_real(require(doc, "blade_length_m", ""), "blade_length_m");
    p.wavelength = as_real(require(doc, "wavelength_m", ""), "wavelength_m");
    p.mean_speed = as_real(require(doc, "mean_speed_rad_s", ""), "mean_speed_rad_s");
    p.speed_variance = as_real(require(doc, "speed_variance", ""), "speed_variance");
    if (auto it = doc.find("gain_magnitude"); it != doc.end()) p.gain_magnitude = as_real(*it, "gain_magnitude");
    p.validate();

    if (auto it = doc.find("grid"); it != doc.end()) {
        const json& g = *it;
        if (!g.is_object()) throw ConfigError("key \"grid\" must be an object");
        static constexpr std::array<std::string_view, 4> grid_keys{"t_start_s", "dt_s", "n_samples",
                                                                   "allow_undersampled"};
        reject_unknown(g, grid_keys, "grid.");
        cfg.grid.t_start = as_real(require(g, "t_start_s", "grid."), "grid.t_start_s");
        cfg.grid.dt = as_real(require(g, "dt_s", "grid."), "grid.dt_s");
        cfg.grid.n_samples = as_integer(require(g, "n_samples", "grid."), "grid.n_samples");
        if (auto a = g.find("allow_undersampled"); a != g.end()) {
            if (!a->is_boolean()) throw ConfigError("key \"grid.allow_undersampled\" must be a boolean");
            cfg.allow_undersampled = a->get<bool>();
        }
    } else {
        cfg.grid = default_grid(p);
    }
    check_grid(p, cfg.grid, cfg.allow_undersampled);

    if (auto it = doc.find("estimator"); it != doc.end()) {
        const json& e = *it;
        if (!e.is_object()) throw ConfigError("key \"estimator\" must be an object");
        static constexpr std::array<std::string_view, 4> est_keys{"n_realizations", "seed", "t_ref_index", "mode"};
        reject_unknown(e, est_keys, "estimator.");
        auto& est = cfg.estimator;
        est.n_realizations = as_integer(require(e, "n_realizations", "estimator."), "estimator.n_realizations");
        const json& seed = require(e, "seed", "estimator.");
        if (!seed.is_number_integer() || (seed.is_number_integer() && !seed.is_number_unsigned() && seed.get<std::int64_t>() < 0))
            throw ConfigError("key \"estimator.seed\" must be a non-negative integer");
        est.seed = seed.get<std::uint64_t>();
        if (auto t = e.find("t_ref_index"); t != e.end()) est.t_ref_index = as_integer(*t, "estimator.t_ref_index");
        if (auto m = e.find("mode"); m != e.end()) {
            if (*m == "single_reference") est.mode = EstimatorMode::single_reference;
            else if (*m == "time_averaged") est.mode = EstimatorMode::time_averaged;
            else throw ConfigError("key \"estimator.mode\" must be \"single_reference\" or \"time_averaged\"");
        }
        if (est.n_realizations < 1) throw ValidationError("estimator.n_realizations", "must be >= 1");
        if (est.t_ref_index < 0 || est.t_ref_index >= cfg.grid.n_samples)
            throw ValidationError("estimator.t_ref_index", "must index a grid sample");
    }
    return cfg;
}

RunConfig load_config(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        throw ConfigError("parse error at " + line_column(text, e.byte == 0 ? 0 : e.byte - 1) + ": " + e.what());
    }
    return config_from_json(doc);
}

json params_to_json(const SwarmParams& p) {
    return json{{"n_drones", p.n_drones},
                {"n_rotors", p.n_rotors},
                {"n_blades", p.n_blades},
                {"blade_length_m", p.blade_length},
                {"wavelength_m", p.wavelength},
                {"mean_speed_rad_s", p.mean_speed},
                {"speed_variance", p.speed_variance},
                {"gain_magnitude", p.gain_magnitude}};
}

json grid_to_json(const SamplingGrid& g) {
    return json{{"t_start_s", g.t_start}, {"dt_s", g.dt}, {"n_samples", g.n_samples}};
}

json config_to_json(const RunConfig& c) {
    json doc = params_to_json(c.params);
    doc["grid"] = grid_to_json(c.grid);
    if (c.allow_undersampled) doc["grid"]["allow_undersampled"] = true;
    doc["estimator"] = json{{"n_realizations", c.estimator.n_realizations},
                            {"seed", c.estimator.seed},
                            {"t_ref_index", c.estimator.t_ref_index},
                            {"mode", to_string(c.estimator.mode)}};
    return doc;
}

std::string serialize(const RunConfig& config) { return config_to_json(config).dump(2) + "\n"; }

}  // namespace swarmdoppler
