#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include "swarmdoppler/config.hpp"

namespace swarmdoppler::cli {

/// Exit codes, see docs/cli.md.
enum ExitCode : int {
    kOk = 0,
    kUsage = 1,
    kConfigNotFound = 2,
    kConfigInvalid = 3,
    kIoError = 4,
    kThresholdFailed = 5,
    kInternal = 6,
};

/// Thrown for option values that parse but make no sense (negative counts...).
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Everything a command needs. `options` holds the fully resolved
/// command-specific settings so that the manifest can replay the run.
struct Invocation {
    std::string command;
    RunConfig config;
    nlohmann::json options = nlohmann::json::object();
    std::filesystem::path out_dir = ".";
    unsigned workers = 0;  // does not affect any output
};

/// Runs the command, writes its outputs and manifest.json, and returns the
/// process exit code (kOk or kThresholdFailed).
int run(const Invocation& inv);

/// Rebuilds the invocation recorded in a manifest, writing to `out_dir`.
Invocation from_manifest(const nlohmann::json& manifest, const std::filesystem::path& out_dir);

}  // namespace swarmdoppler::cli
