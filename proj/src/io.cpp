#include "swarmdoppler/io.hpp"

#include <array>
#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "swarmdoppler/config.hpp"
#include "swarmdoppler/errors.hpp"

namespace swarmdoppler {

namespace {

static_assert(std::endian::native == std::endian::little, "ensemble I/O assumes a little-endian host");

constexpr std::array<char, 8> kMagic{'S', 'W', 'D', 'E', 'N', 'S', '\0', '\1'};

template <typename T>
void put(std::ostream& out, T value) {
    out.write(reinterpret_cast<const char*>(&value), sizeof value);
}

template <typename T>
T get(std::istream& in, const char* what) {
    T value{};
    if (!in.read(reinterpret_cast<char*>(&value), sizeof value))
        throw ConfigError(std::string("ensemble container truncated while reading ") + what);
    return value;
}

}  // namespace

std::string format_double(double v) {
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), res.ptr);
}

nlohmann::json ensemble_header(const SwarmParams& params, const SamplingGrid& grid, std::uint64_t master_seed,
                               std::int64_t n_realizations, SampleType type) {
    return {{"format", "swarmdoppler-ensemble"},
            {"version", kEnsembleFormatVersion},
            {"params", params_to_json(params)},
            {"grid", grid_to_json(grid)},
            {"master_seed", master_seed},
            {"n_realizations", n_realizations},
            {"n_samples", grid.n_samples},
            {"sample_type", type == SampleType::complex64 ? "complex64" : "complex128"}};
}

void write_ensemble_prefix(std::ostream& out, const SwarmParams& params, const SamplingGrid& grid,
                           std::uint64_t master_seed, std::int64_t n_realizations, SampleType type) {
    const std::string header = ensemble_header(params, grid, master_seed, n_realizations, type).dump();
    out.write(kMagic.data(), kMagic.size());
    put<std::uint32_t>(out, kEnsembleFormatVersion);
    put<std::uint32_t>(out, static_cast<std::uint32_t>(type));
    put<std::uint64_t>(out, header.size());
    out.write(header.data(), static_cast<std::streamsize>(header.size()));
    if (!out) throw std::ios_base::failure("write_ensemble: stream error");
}

void write_ensemble_rows(std::ostream& out, std::span<const std::complex<double>> values, SampleType type) {
    if (type == SampleType::complex128) {
        out.write(reinterpret_cast<const char*>(values.data()),
                  static_cast<std::streamsize>(values.size() * sizeof(std::complex<double>)));
    } else {
        std::vector<std::complex<float>> narrow(values.size());
        for (std::size_t i = 0; i < narrow.size(); ++i)
            narrow[i] = {static_cast<float>(values[i].real()), static_cast<float>(values[i].imag())};
        out.write(reinterpret_cast<const char*>(narrow.data()),
                  static_cast<std::streamsize>(narrow.size() * sizeof(std::complex<float>)));
    }
    if (!out) throw std::ios_base::failure("write_ensemble: stream error");
}

void write_ensemble(std::ostream& out, const Ensemble& e, SampleType type) {
    write_ensemble_prefix(out, e.params, e.grid, e.master_seed, e.n_realizations, type);
    write_ensemble_rows(out, e.signals, type);
}

void write_ensemble(const std::filesystem::path& path, const Ensemble& e, SampleType type) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::ios_base::failure("cannot open " + path.string() + " for writing");
    write_ensemble(out, e, type);
}

Ensemble read_ensemble(std::istream& in) {
    std::array<char, 8> magic{};
    if (!in.read(magic.data(), magic.size()) || magic != kMagic) throw ConfigError("not a swarmdoppler ensemble container");
    const auto version = get<std::uint32_t>(in, "version");
    if (version != kEnsembleFormatVersion)
        throw ConfigError("unsupported ensemble container version " + std::to_string(version));
    const auto type = static_cast<SampleType>(get<std::uint32_t>(in, "sample type"));
    if (type != SampleType::complex64 && type != SampleType::complex128)
        throw ConfigError("unknown ensemble sample type");
    const auto header_len = get<std::uint64_t>(in, "header length");
    if (header_len > (1u << 24)) throw ConfigError("ensemble header is implausibly large");
    std::string header(header_len, '\0');
    if (!in.read(header.data(), static_cast<std::streamsize>(header_len))) throw ConfigError("ensemble header truncated");

    nlohmann::json h;
    try {
        h = nlohmann::json::parse(header);
    } catch (const nlohmann::json::exception& ex) {
        throw ConfigError(std::string("ensemble header is not valid JSON: ") + ex.what());
    }
    Ensemble e;
    try {
        RunConfig cfg = config_from_json([&] {
            auto doc = h.at("params");
            doc["grid"] = h.at("grid");
            doc["grid"]["allow_undersampled"] = true;
            return doc;
        }());
        e.params = cfg.params;
        e.grid = cfg.grid;
        e.master_seed = h.at("master_seed").get<std::uint64_t>();
        e.n_realizations = h.at("n_realizations").get<std::int64_t>();
    } catch (const nlohmann::json::exception& ex) {
        throw ConfigError(std::string("ensemble header is incomplete: ") + ex.what());
    }
    if (e.n_realizations < 1) throw ConfigError("ensemble header has no realizations");
    const auto count = static_cast<std::size_t>(e.n_realizations) * static_cast<std::size_t>(e.grid.n_samples);
    e.signals.resize(count);
    if (type == SampleType::complex128) {
        if (!in.read(reinterpret_cast<char*>(e.signals.data()),
                     static_cast<std::streamsize>(count * sizeof(std::complex<double>))))
            throw ConfigError("ensemble payload truncated");
    } else {
        std::vector<std::complex<float>> narrow(count);
        if (!in.read(reinterpret_cast<char*>(narrow.data()),
                     static_cast<std::streamsize>(count * sizeof(std::complex<float>))))
            throw ConfigError("ensemble payload truncated");
        for (std::size_t i = 0; i < count; ++i) e.signals[i] = {narrow[i].real(), narrow[i].imag()};
    }
    return e;
}

Ensemble read_ensemble(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::ios_base::failure("cannot open " + path.string());
    return read_ensemble(in);
}

std::string curve_to_csv(const Curve& curve) {
    std::string out = "x,y_re,y_im\n";
    for (std::size_t i = 0; i < curve.size(); ++i) {
        out += format_double(curve.x[i]);
        out += ',';
        out += format_double(curve.y[i].real());
        out += ',';
        out += format_double(curve.y[i].imag());
        out += '\n';
    }
    return out;
}

nlohmann::json curve_to_json(const Curve& curve) {
    nlohmann::json re = nlohmann::json::array(), im = nlohmann::json::array();
    for (const auto& v : curve.y) {
        re.push_back(v.real());
        im.push_back(v.imag());
    }
    nlohmann::json j{{"axis", to_string(curve.axis)}, {"x", curve.x}, {"y_re", re}, {"meta", curve.meta}};
    if (curve.complex_valued) j["y_im"] = im;
    return j;
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::ios_base::failure("cannot open " + path.string() + " for writing");
    out << text;
    if (!out) throw std::ios_base::failure("failed writing " + path.string());
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::ios_base::failure("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace swarmdoppler
