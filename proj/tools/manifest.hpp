#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

namespace swarmdoppler::cli {

std::string sha256_hex(std::string_view bytes);
std::string sha256_file(const std::filesystem::path& path);
std::string utc_now();

/// Collects the files a command writes, with their digests, and emits
/// manifest.json next to them.
class OutputSet {
public:
    explicit OutputSet(std::filesystem::path dir);

    const std::filesystem::path& dir() const { return dir_; }
    std::filesystem::path path(const std::string& name) const { return dir_ / name; }

    /// Writes `content` to dir/name and records it.
    void write(const std::string& name, const std::string& content);
    /// Records a file that was written by other means.
    void record(const std::string& name);

    const nlohmann::json& files() const { return files_; }

private:
    std::filesystem::path dir_;
    nlohmann::json files_ = nlohmann::json::array();
};

}  // namespace swarmdoppler::cli
