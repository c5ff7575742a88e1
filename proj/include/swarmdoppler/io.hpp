#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>

#include <nlohmann/json.hpp>

#include "swarmdoppler/model.hpp"
#include "swarmdoppler/simulate.hpp"

namespace swarmdoppler {

/// Binary ensemble container, version 1 (all integers little-endian):
///
///   offset  size  field
///   0       8     magic "SWDENS\0\1"
///   8       4     u32 format version (1)
///   12      4     u32 sample type: 1 = complex64, 2 = complex128
///   16      8     u64 header length H in bytes
///   24      H     UTF-8 JSON header: format, version, params, grid,
///                 master_seed, n_realizations, n_samples, sample_type
///   24+H    ...   payload, realization-major: for each realization, for each
///                 sample, real then imaginary part (IEEE-754 LE)
enum class SampleType : std::uint32_t { complex64 = 1, complex128 = 2 };

inline constexpr std::uint32_t kEnsembleFormatVersion = 1;

void write_ensemble(std::ostream& out, const Ensemble& ensemble, SampleType type = SampleType::complex128);
void write_ensemble(const std::filesystem::path& path, const Ensemble& ensemble,
                    SampleType type = SampleType::complex128);

/// Streaming form of write_ensemble: write the prefix once, then exactly
/// n_realizations * n_samples values in one or more calls to
/// write_ensemble_rows.
void write_ensemble_prefix(std::ostream& out, const SwarmParams& params, const SamplingGrid& grid,
                           std::uint64_t master_seed, std::int64_t n_realizations,
                           SampleType type = SampleType::complex128);
void write_ensemble_rows(std::ostream& out, std::span<const std::complex<double>> values,
                         SampleType type = SampleType::complex128);

/// Throws ConfigError on a malformed or truncated container.
Ensemble read_ensemble(std::istream& in);
Ensemble read_ensemble(const std::filesystem::path& path);

nlohmann::json ensemble_header(const SwarmParams& params, const SamplingGrid& grid, std::uint64_t master_seed,
                               std::int64_t n_realizations, SampleType type);

/// CSV with header `x,y_re,y_im`, values printed with round-trip precision.
std::string curve_to_csv(const Curve& curve);
nlohmann::json curve_to_json(const Curve& curve);

/// Writes `text` to `path`, throwing std::ios_base::failure on error.
void write_text_file(const std::filesystem::path& path, const std::string& text);
std::string read_text_file(const std::filesystem::path& path);

/// Shortest decimal form that parses back to the same double.
std::string format_double(double v);

}  // namespace swarmdoppler
