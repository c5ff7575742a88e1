#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "swarmdoppler/model.hpp"

namespace swarmdoppler {

enum class EstimatorMode {
    single_reference,  // one reference time t_ref, the plain ensemble average
    time_averaged,     // additionally averages over every valid reference time
};

std::string to_string(EstimatorMode mode);

struct EstimatorSettings {
    std::int64_t n_realizations = 10000;
    std::uint64_t seed = 0;
    std::int64_t t_ref_index = 0;
    EstimatorMode mode = EstimatorMode::single_reference;

    bool operator==(const EstimatorSettings&) const = default;
};

/// A fully resolved and validated run description.
struct RunConfig {
    SwarmParams params;
    SamplingGrid grid;
    bool allow_undersampled = false;
    EstimatorSettings estimator;

    bool operator==(const RunConfig&) const = default;
};

/// Parses a configuration document. Unknown keys are rejected; `grid` falls
/// back to default_grid() and `estimator` to EstimatorSettings{} when absent.
///
/// Throws ConfigError (syntax, with line/column, missing or unknown keys,
/// wrong types) or ValidationError (value invariants).
RunConfig load_config(std::string_view text);

RunConfig config_from_json(const nlohmann::json& doc);

/// Canonical document; load_config(serialize(c)) == c for valid c.
nlohmann::json config_to_json(const RunConfig& config);
std::string serialize(const RunConfig& config);

nlohmann::json params_to_json(const SwarmParams& params);
nlohmann::json grid_to_json(const SamplingGrid& grid);

}  // namespace swarmdoppler
