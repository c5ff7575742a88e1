#include <cstdio>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "commands.hpp"
#include "swarmdoppler/errors.hpp"
#include "swarmdoppler/estimate.hpp"
#include "swarmdoppler/io.hpp"

using namespace swarmdoppler;
using namespace swarmdoppler::cli;
namespace fs = std::filesystem;

namespace {

class ConfigNotFound : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct GlobalOptions {
    std::string config_path;
    std::string preset;
    std::optional<std::uint64_t> seed;
    std::string out = ".";
    std::string format = "csv";
    bool hz = false;
    unsigned workers = 0;
};

RunConfig resolve_config(const GlobalOptions& g) {
    if (!g.config_path.empty() && !g.preset.empty()) throw UsageError("--config and --preset are mutually exclusive");
    RunConfig cfg;
    if (!g.preset.empty()) {
        if (g.preset != "mavic-like") throw UsageError("unknown preset \"" + g.preset + "\" (available: mavic-like)");
        cfg.params = mavic_like();
        cfg.grid = default_grid(cfg.params);
    } else if (!g.config_path.empty()) {
        if (!fs::exists(g.config_path)) throw ConfigNotFound("config file not found: " + g.config_path);
        cfg = load_config(read_text_file(g.config_path));
    } else {
        throw UsageError("one of --config <path> or --preset mavic-like is required");
    }
    if (g.seed) cfg.estimator.seed = *g.seed;
    return cfg;
}

int report_error(int code, const char* kind, const std::string& what) {
    std::fprintf(stderr, "swarmdoppler: %s: %s\n", kind, what.c_str());
    return code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Drone-swarm micro-Doppler second-order model, Monte Carlo simulator and validator"};
    app.require_subcommand(1);
    app.fallthrough();

    GlobalOptions g;
    app.add_option("--config", g.config_path, "Run configuration (JSON)");
    app.add_option("--preset", g.preset, "Named parameter set instead of --config")->check(CLI::IsMember({"mavic-like"}));
    app.add_option("--seed", g.seed, "Master seed (overrides estimator.seed)");
    app.add_option("--out", g.out, "Output directory")->capture_default_str();
    app.add_option("--format", g.format, "Data file format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
    app.add_flag("--hz", g.hz, "Display frequencies in Hz in plots and summaries (data stay in rad/s)");
    app.add_option("--workers", g.workers, "Worker threads, 0 = all cores (never changes results)");

    auto* acf = app.add_subcommand("acf", "Closed-form autocorrelation");
    std::optional<double> tau_max;
    std::int64_t acf_points = 1001;
    bool deterministic = false;
    acf->add_option("--tau-max", tau_max, "Largest lag in seconds (default: 20 main-lobe widths)");
    acf->add_option("--points", acf_points, "Number of lags")->capture_default_str();
    acf->add_flag("--deterministic", deterministic, "Also evaluate the deterministic-speed finite form");

    auto* psd = app.add_subcommand("psd", "Closed-form power spectral density over its support");
    std::int64_t psd_points = 4001;
    psd->add_option("--points", psd_points, "Number of frequencies")->capture_default_str();

    auto* sim = app.add_subcommand("simulate", "Simulate an ensemble and store it");
    std::optional<std::int64_t> sim_n;
    std::string precision = "complex128";
    bool want_spectrogram = false;
    StftConfig stft;
    std::string window = "hann";
    sim->add_option("-n,--realizations", sim_n, "Realizations (overrides estimator.n_realizations)");
    sim->add_option("--precision", precision, "Stored sample type")
        ->check(CLI::IsMember({"complex64", "complex128"}))
        ->capture_default_str();
    sim->add_flag("--spectrogram", want_spectrogram, "Also plot the STFT of realization 0");
    sim->add_option("--window", window, "STFT window")->check(CLI::IsMember({"hann", "rectangular"}))->capture_default_str();
    sim->add_option("--window-length", stft.window_length, "STFT window length")->capture_default_str();
    sim->add_option("--hop", stft.hop, "STFT hop")->capture_default_str();
    sim->add_option("--fft-length", stft.fft_length, "STFT transform length")->capture_default_str();

    auto* val = app.add_subcommand("validate", "Monte Carlo estimates against the closed forms");
    std::optional<std::int64_t> val_n;
    val->add_option("-n,--realizations", val_n, "Realizations (overrides estimator.n_realizations)");

    auto* coeffs = app.add_subcommand("coeffs", "Series coefficients and their power concentration");
    int coeff_count = kPowerStudyCoefficients;
    std::vector<double> l_factors{0.5, 1.0, 2.0};
    coeffs->add_option("--count", coeff_count, "Number of coefficients")->capture_default_str();
    coeffs->add_option("--l-factors", l_factors, "Multiples of l for the power-fraction table")->capture_default_str();

    auto* rerun = app.add_subcommand("rerun", "Repeat the run recorded in a manifest");
    std::string manifest_path;
    rerun->add_option("manifest", manifest_path, "manifest.json of an earlier run")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        Invocation inv;
        inv.out_dir = g.out;
        inv.workers = g.workers;
        if (rerun->parsed()) {
            if (!fs::exists(manifest_path)) throw ConfigNotFound("manifest not found: " + manifest_path);
            nlohmann::json m;
            try {
                m = nlohmann::json::parse(read_text_file(manifest_path));
            } catch (const nlohmann::json::parse_error& e) {
                throw ConfigError(std::string("manifest is not valid JSON: ") + e.what());
            }
            inv = from_manifest(m, g.out);
            inv.workers = g.workers;
            return run(inv);
        }

        inv.config = resolve_config(g);
        inv.options = {{"format", g.format}, {"hz", g.hz}};
        if (acf->parsed()) {
            inv.command = "acf";
            const double t = tau_max.value_or(20.0 * mainlobe_width(inv.config.params));
            if (!(t >= 0.0) || !std::isfinite(t)) throw UsageError("--tau-max must be finite and >= 0");
            if (acf_points < 2 && t > 0.0) throw UsageError("--points must be >= 2");
            inv.options["tau_max_s"] = t;
            inv.options["points"] = acf_points;
            inv.options["deterministic"] = deterministic;
        } else if (psd->parsed()) {
            inv.command = "psd";
            if (psd_points < 2) throw UsageError("--points must be >= 2");
            inv.options["points"] = psd_points;
        } else if (sim->parsed()) {
            inv.command = "simulate";
            if (sim_n) inv.config.estimator.n_realizations = *sim_n;
            if (inv.config.estimator.n_realizations < 1) throw UsageError("--realizations must be >= 1");
            stft.window = window == "rectangular" ? WindowKind::rectangular : WindowKind::hann;
            if (want_spectrogram) stft.validate();
            inv.options["precision"] = precision;
            inv.options["spectrogram"] = want_spectrogram;
            inv.options["stft"] = {{"window", window},
                                   {"window_length", stft.window_length},
                                   {"hop", stft.hop},
                                   {"fft_length", stft.fft_length}};
        } else if (val->parsed()) {
            inv.command = "validate";
            if (val_n) inv.config.estimator.n_realizations = *val_n;
            if (inv.config.estimator.n_realizations < 1) throw UsageError("--realizations must be >= 1");
        } else {
            inv.command = "coeffs";
            if (coeff_count < 1) throw UsageError("--count must be >= 1");
            for (double f : l_factors)
                if (!(f > 0.0)) throw UsageError("--l-factors must be positive");
            inv.options["count"] = coeff_count;
            inv.options["l_factors"] = l_factors;
        }
        return run(inv);
    } catch (const UsageError& e) {
        return report_error(kUsage, "usage", e.what());
    } catch (const ConfigNotFound& e) {
        return report_error(kConfigNotFound, "config not found", e.what());
    } catch (const ValidationError& e) {
        return report_error(kConfigInvalid, "invalid configuration", e.what());
    } catch (const ConfigError& e) {
        return report_error(kConfigInvalid, "invalid configuration", e.what());
    } catch (const DomainError& e) {
        return report_error(kConfigInvalid, "unsupported input", e.what());
    } catch (const ResourceError& e) {
        return report_error(kIoError, "out of resources", e.what());
    } catch (const std::ios_base::failure& e) {
        return report_error(kIoError, "I/O error", e.what());
    } catch (const fs::filesystem_error& e) {
        return report_error(kIoError, "I/O error", e.what());
    } catch (const std::exception& e) {
        return report_error(kInternal, "internal error", e.what());
    }
}
