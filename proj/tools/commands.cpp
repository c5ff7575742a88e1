#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>

#include "manifest.hpp"
#include "swarmdoppler/analytic.hpp"
#include "swarmdoppler/errors.hpp"
#include "swarmdoppler/estimate.hpp"
#include "swarmdoppler/io.hpp"
#include "swarmdoppler/simulate.hpp"
#include "swarmdoppler/svg.hpp"
#include "swarmdoppler/validation.hpp"

#ifndef SWARMDOPPLER_VERSION
#define SWARMDOPPLER_VERSION "unknown"
#endif

namespace swarmdoppler::cli {

using nlohmann::json;

namespace {

constexpr double kAcfThreshold = 0.05;
constexpr double kPsdThreshold = 0.10;
constexpr double kConsistencyThreshold = 1e-6;
constexpr std::int64_t kSimulateBlock = 256;

struct Context {
    const Invocation& inv;
    OutputSet out;
    json results = json::object();
    bool threshold_failed = false;

    explicit Context(const Invocation& i) : inv(i), out(i.out_dir) {}

    const SwarmParams& params() const { return inv.config.params; }
    std::string format() const { return inv.options.value("format", "csv"); }
    bool hz() const { return inv.options.value("hz", false); }
    // Frequencies are computed in rad/s; --hz only changes what is displayed.
    double freq_scale() const { return hz() ? 1.0 / (2.0 * std::numbers::pi) : 1.0; }
    std::string freq_unit() const { return hz() ? "Hz" : "rad/s"; }
};

void write_curve(Context& ctx, const std::string& base, const Curve& curve) {
    if (ctx.format() == "json") ctx.out.write(base + ".json", curve_to_json(curve).dump(1) + "\n");
    else ctx.out.write(base + ".csv", curve_to_csv(curve));
}

void write_table(Context& ctx, const std::string& base, const std::vector<std::string>& columns,
                 const std::vector<std::vector<double>>& rows) {
    if (ctx.format() == "json") {
        json doc = json::object();
        for (std::size_t c = 0; c < columns.size(); ++c) {
            json col = json::array();
            for (const auto& r : rows) col.push_back(r[c]);
            doc[columns[c]] = std::move(col);
        }
        ctx.out.write(base + ".json", doc.dump(1) + "\n");
        return;
    }
    std::string text;
    for (std::size_t c = 0; c < columns.size(); ++c) text += (c ? "," : "") + columns[c];
    text += '\n';
    for (const auto& r : rows) {
        for (std::size_t c = 0; c < r.size(); ++c) text += (c ? "," : "") + format_double(r[c]);
        text += '\n';
    }
    ctx.out.write(base + ".csv", text);
}

std::vector<double> scaled(const std::vector<double>& v, double s) {
    std::vector<double> out(v.size());
    std::transform(v.begin(), v.end(), out.begin(), [s](double x) { return x * s; });
    return out;
}

double acf_lag_span(const SwarmParams& p, const SamplingGrid& grid) {
    return std::ceil(20.0 * mainlobe_width(p) / grid.dt) * grid.dt;
}

double sigma0_consistency(const SwarmParams& base) {
    auto p = base;
    p.speed_variance = 0.0;
    const auto acf = build_acf(p);
    const double r0 = acf_eval(acf, 0.0);
    const double span = 10.0 * mainlobe_width(p);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const double t = span * i / 999.0;
        worst = std::max(worst, std::abs(acf_eval(acf, t) - acf_deterministic_eval(p, t)) / r0);
    }
    return worst;
}

void cmd_acf(Context& ctx) {
    const auto& p = ctx.params();
    const auto acf = build_acf(p);
    const double width = mainlobe_width(p);
    const double tau_max = ctx.inv.options.at("tau_max_s").get<double>();
    const auto points = tau_max == 0.0 ? std::int64_t{1} : ctx.inv.options.at("points").get<std::int64_t>();
    const bool deterministic = ctx.inv.options.value("deterministic", false) || p.speed_variance == 0.0;

    std::vector<double> tau(static_cast<std::size_t>(points)), r(tau.size()), rd(tau.size());
    for (std::size_t i = 0; i < tau.size(); ++i) {
        tau[i] = points == 1 ? 0.0 : tau_max * static_cast<double>(i) / static_cast<double>(points - 1);
        r[i] = acf_eval(acf, tau[i]);
        if (deterministic) rd[i] = acf_deterministic_eval(p, tau[i]);
    }
    auto curve = make_real_curve(CurveAxis::lag_s, tau, r);
    curve.meta = {{"quantity", "acf_analytic"}, {"n_terms", acf.n_terms}, {"params_digest", params_digest(p)}};
    write_curve(ctx, "acf", curve);
    if (deterministic) {
        auto det = make_real_curve(CurveAxis::lag_s, tau, rd);
        det.meta = {{"quantity", "acf_deterministic"}, {"params_digest", params_digest(p)}};
        write_curve(ctx, "acf_deterministic", det);
    }

    double first_null = std::nan("");
    try {
        first_null = acf_first_null(p);
    } catch (const NumericError&) {
    }

    svg::LinePlot plot;
    plot.title = "Autocorrelation R(tau)";
    plot.x_label = "lag tau (s)";
    plot.y_label = "R(tau)";
    plot.series.push_back({tau, r, "closed-form series", "#1f77b4", false, points == 1});
    if (deterministic) plot.series.push_back({tau, rd, "deterministic speed", "#d62728", true, points == 1});
    if (tau_max > 0.0) {
        if (width <= tau_max) plot.vertical_lines.push_back({width, "4.8/(l w)", "#2ca02c"});
        if (std::isfinite(first_null) && first_null <= tau_max)
            plot.vertical_lines.push_back({first_null, "first null", "#ff7f0e"});
    }
    ctx.out.write("acf.svg", svg::render(plot));

    ctx.results = {{"R0", r.front()},
                   {"dc_level", acf.dc_level},
                   {"truncation_index", acf.truncation},
                   {"n_terms", acf.n_terms},
                   {"mainlobe_width_s", width},
                   {"first_null_s", std::isfinite(first_null) ? json(first_null) : json(nullptr)},
                   {"tau_max_s", tau_max},
                   {"points", points}};
    std::printf("R(0) = %.10g, DC level = %.6g\n", r.front(), acf.dc_level);
    std::printf("main lobe 4.8/(l w) = %.6g s, first null = %.6g s\n", width, first_null);
}

void cmd_psd(Context& ctx) {
    const auto& p = ctx.params();
    const auto support = psd_support(p);
    const double fs = ctx.freq_scale();
    ctx.results["support_rad_s"] = {support.lower, support.upper};
    ctx.results["harmonic_spacing_rad_s"] = p.n_blades * p.mean_speed;
    ctx.results["convention"] = "S(f) = int R(tau) exp(i f tau) dtau, f in rad/s";

    if (p.speed_variance == 0.0) {
        const auto lines = psd_line_spectrum(p);
        std::vector<std::vector<double>> rows;
        std::vector<double> f, w;
        for (const auto& l : lines) {
            rows.push_back({l.frequency, l.weight});
            f.push_back(l.frequency * fs);
            w.push_back(l.weight);
        }
        write_table(ctx, "lines", {"frequency_rad_s", "weight"}, rows);
        svg::LinePlot plot;
        plot.title = "Line spectrum (zero speed spread)";
        plot.x_label = "frequency (" + ctx.freq_unit() + ")";
        plot.y_label = "line weight";
        plot.series.push_back({f, w, "lines", "#1f77b4", false, true});
        plot.vertical_lines = {{support.lower * fs, "support", "#888888"}, {support.upper * fs, "support", "#888888"}};
        ctx.out.write("psd.svg", svg::render(plot));
        ctx.results["kind"] = "line_spectrum";
        ctx.results["component_count"] = line_component_count(lines);
        ctx.results["bandwidth_rad_s"] = line_spectrum_bandwidth(lines);
        ctx.results["dc_weight"] = lines[lines.size() / 2].weight;
        std::printf("%zu lines (DC excluded), bandwidth %.6g %s\n", line_component_count(lines),
                    line_spectrum_bandwidth(lines) * fs, ctx.freq_unit().c_str());
        return;
    }

    const auto psd = build_psd(p);
    const auto points = ctx.inv.options.at("points").get<std::int64_t>();
    std::vector<double> f(static_cast<std::size_t>(points)), s(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
        f[i] = support.lower + support.width() * static_cast<double>(i) / static_cast<double>(points - 1);
        s[i] = psd_eval(psd, f[i]);
    }
    auto curve = make_real_curve(CurveAxis::angular_frequency_rad_per_s, f, s);
    curve.meta = {{"quantity", "psd_analytic"}, {"dc_weight", psd.dc_weight}, {"params_digest", params_digest(p)}};
    write_curve(ctx, "psd", curve);

    std::vector<std::vector<double>> kernels;
    for (std::size_t i = 0; i < psd.kernels.size(); i += 2) {
        const auto& k = psd.kernels[i];
        kernels.push_back({static_cast<double>(i / 2 + 1), k.center, k.std, k.mass});
    }
    write_table(ctx, "kernels", {"n", "center_rad_s", "std_rad_s", "mass"}, kernels);

    svg::LinePlot plot;
    plot.title = "Power spectral density (continuous part)";
    plot.x_label = "frequency (" + ctx.freq_unit() + ")";
    plot.y_label = "S(f)";
    plot.series.push_back({scaled(f, fs), s, "closed form", "#1f77b4"});
    plot.vertical_lines = {{support.lower * fs, "support", "#888888"}, {support.upper * fs, "support", "#888888"}};
    ctx.out.write("psd.svg", svg::render(plot));

    ctx.results["kind"] = "density";
    ctx.results["dc_weight"] = psd.dc_weight;
    ctx.results["convention_constant"] = psd.convention_constant;
    ctx.results["harmonics"] = psd.harmonic_count();
    ctx.results["points"] = points;
    std::printf("support [%.6g, %.6g] %s, DC mass %.6g\n", support.lower * fs, support.upper * fs,
                ctx.freq_unit().c_str(), psd.dc_weight);
}

void cmd_simulate(Context& ctx) {
    const auto& cfg = ctx.inv.config;
    const auto& p = cfg.params;
    const auto n = cfg.estimator.n_realizations;
    const auto seed = cfg.estimator.seed;
    const auto type =
        ctx.inv.options.value("precision", "complex128") == "complex64" ? SampleType::complex64 : SampleType::complex128;

    const std::string name = "ensemble.swde";
    {
        std::ofstream file(ctx.out.path(name), std::ios::binary | std::ios::trunc);
        if (!file) throw std::ios_base::failure("cannot open " + ctx.out.path(name).string() + " for writing");
        write_ensemble_prefix(file, p, cfg.grid, seed, n, type);
        for (std::int64_t first = 0; first < n; first += kSimulateBlock) {
            const auto count = std::min(kSimulateBlock, n - first);
            write_ensemble_rows(file, simulate_rows(p, cfg.grid, first, count, seed, ctx.inv.workers), type);
        }
        file.close();
        if (!file) throw std::ios_base::failure("failed writing " + ctx.out.path(name).string());
    }
    ctx.out.record(name);

    if (ctx.inv.options.value("spectrogram", false)) {
        const auto& st = ctx.inv.options.at("stft");
        StftConfig stft;
        stft.window = st.at("window") == "rectangular" ? WindowKind::rectangular : WindowKind::hann;
        stft.window_length = st.at("window_length");
        stft.hop = st.at("hop");
        stft.fft_length = st.at("fft_length");
        const auto y = realization(p, cfg.grid, seed, 0);
        const auto spec = spectrogram(y, stft, cfg.grid);
        const auto support = psd_support(p);
        const double fs = ctx.freq_scale();
        svg::Heatmap map;
        map.title = "Spectrogram of realization 0";
        map.x_label = "time (s)";
        map.y_label = "frequency (" + ctx.freq_unit() + ")";
        map.x = spec.times;
        map.y = scaled(spec.frequencies, fs);
        map.values = spec.power;
        map.horizontal_lines = {support.lower * fs, support.upper * fs};
        ctx.out.write("spectrogram.svg", svg::render(map));
        ctx.results["spectrogram_out_of_band_fraction"] = out_of_band_fraction(spec, support);
        ctx.results["spectrogram_frames"] = spec.n_frames();
    }
    ctx.results["n_realizations"] = n;
    ctx.results["n_samples"] = cfg.grid.n_samples;
    ctx.results["sample_type"] = type == SampleType::complex64 ? "complex64" : "complex128";
    std::printf("%lld realizations x %lld samples written to %s\n", static_cast<long long>(n),
                static_cast<long long>(cfg.grid.n_samples), ctx.out.path(name).string().c_str());
}

void cmd_validate(Context& ctx) {
    const auto& cfg = ctx.inv.config;
    const auto& p = cfg.params;
    const auto n = cfg.estimator.n_realizations;
    const auto seed = cfg.estimator.seed;
    const auto acf = build_acf(p);
    json report = {{"n_realizations", n}, {"seed", seed}, {"thresholds", {{"acf_nrmse", kAcfThreshold}}}};
    json advisories = json::array();

    AcfEstimatorOptions single;
    single.t_ref_index = cfg.estimator.t_ref_index;
    const auto r_single = estimate_acf_streaming(p, cfg.grid, n, seed, single, ctx.inv.workers);
    const double span = acf_lag_span(p, cfg.grid);
    const auto a = compare_acf(r_single, acf, span + 0.5 * cfg.grid.dt);
    const bool acf_pass = a.nrmse <= kAcfThreshold && a.mainlobe_widths >= 20.0;
    report["acf"] = {{"estimator", "single_reference"}, {"t_ref_index", single.t_ref_index},
                     {"nrmse", a.nrmse},                {"n_lags", a.n_lags},
                     {"lag_span_s", a.lag_span_s},      {"mainlobe_widths", a.mainlobe_widths},
                     {"pass", acf_pass}};
    write_curve(ctx, "acf_estimate", r_single);

    svg::LinePlot acf_plot;
    acf_plot.title = "ACF: Monte Carlo estimate vs closed form";
    acf_plot.x_label = "lag tau (s)";
    acf_plot.y_label = "R(tau)";
    const std::size_t shown = std::min<std::size_t>(r_single.size(), 4 * a.n_lags);
    std::vector<double> lags(r_single.x.begin(), r_single.x.begin() + static_cast<std::ptrdiff_t>(shown));
    std::vector<double> est(shown), ref(shown);
    for (std::size_t j = 0; j < shown; ++j) {
        est[j] = r_single.y[j].real();
        ref[j] = acf_eval(acf, lags[j]);
    }
    std::vector<double> fine_t, fine_r;
    for (int i = 0; i <= 2000; ++i) {
        fine_t.push_back(lags.back() * i / 2000.0);
        fine_r.push_back(acf_eval(acf, fine_t.back()));
    }
    acf_plot.series.push_back({fine_t, fine_r, "closed form", "#1f77b4"});
    acf_plot.series.push_back({lags, est, "estimate", "#d62728", false, true});
    acf_plot.vertical_lines.push_back({a.lag_span_s, "compared range", "#888888"});
    ctx.out.write("acf_overlay.svg", svg::render(acf_plot));

    bool pass = acf_pass;
    if (p.speed_variance > 0.0) {
        AcfEstimatorOptions averaged;
        averaged.mode = EstimatorMode::time_averaged;
        const auto r_avg = estimate_acf_streaming(p, cfg.grid, n, seed, averaged, ctx.inv.workers);
        const auto psd = build_psd(acf);
        const auto support = psd_support(p);
        const auto s_avg = estimate_psd(r_avg);
        const auto b = compare_psd(s_avg, psd, support);
        const auto b_single = compare_psd(estimate_psd(r_single), psd, support);
        const bool psd_pass = b.nrmse <= kPsdThreshold;
        report["thresholds"]["psd_nrmse"] = kPsdThreshold;
        report["psd"] = {{"estimator", "time_averaged"},
                         {"nrmse", b.nrmse},
                         {"n_bins", b.n_bins},
                         {"excluded_harmonics", b.excluded_harmonics},
                         {"bin_width_rad_s", b.bin_width},
                         {"single_reference_nrmse", b_single.nrmse},
                         {"pass", psd_pass}};
        pass = pass && psd_pass;
        write_curve(ctx, "psd_estimate", s_avg);

        const double fs = ctx.freq_scale();
        std::vector<double> f, se, sr;
        for (std::size_t i = 0; i < s_avg.size(); ++i) {
            if (!support.contains(s_avg.x[i])) continue;
            f.push_back(s_avg.x[i] * fs);
            se.push_back(s_avg.y[i].real());
            sr.push_back(psd_eval(psd, s_avg.x[i]));
        }
        svg::LinePlot psd_plot;
        psd_plot.title = "PSD: Monte Carlo estimate vs closed form";
        psd_plot.x_label = "frequency (" + ctx.freq_unit() + ")";
        psd_plot.y_label = "S(f)";
        psd_plot.series.push_back({f, se, "estimate (time-averaged)", "#d62728"});
        psd_plot.series.push_back({f, sr, "closed form", "#1f77b4", true});
        psd_plot.vertical_lines = {{support.lower * fs, "support", "#888888"},
                                   {support.upper * fs, "support", "#888888"}};
        ctx.out.write("psd_overlay.svg", svg::render(psd_plot));
    } else {
        const double worst = sigma0_consistency(p);
        const bool ok = worst <= kConsistencyThreshold;
        report["thresholds"]["series_vs_finite_form"] = kConsistencyThreshold;
        report["series_vs_finite_form"] = {{"max_relative_deviation", worst}, {"pass", ok}};
        advisories.push_back("zero speed spread: the PSD is a line spectrum, density comparison skipped");
        pass = pass && ok;
    }
    if (!pass)
        advisories.push_back("insufficient N: an nRMSE exceeds its threshold at N = " + std::to_string(n) +
                             "; Monte Carlo error falls as 1/sqrt(N)");
    report["advisories"] = advisories;
    report["pass"] = pass;
    ctx.out.write("report.json", report.dump(2) + "\n");
    ctx.results = report;
    ctx.threshold_failed = !pass;

    std::printf("ACF nRMSE %.4f (threshold %.2f) %s\n", a.nrmse, kAcfThreshold, acf_pass ? "PASS" : "FAIL");
    if (report.contains("psd"))
        std::printf("PSD nRMSE %.4f (threshold %.2f) %s\n", report["psd"]["nrmse"].get<double>(), kPsdThreshold,
                    report["psd"]["pass"].get<bool>() ? "PASS" : "FAIL");
    for (const auto& adv : advisories) std::printf("advisory: %s\n", adv.get<std::string>().c_str());
}

void cmd_coeffs(Context& ctx) {
    const auto& p = ctx.params();
    const auto acf = build_acf(p);
    const auto count = ctx.inv.options.at("count").get<int>();
    const auto c = series_coefficients(acf.derived.l, p.n_blades, count);

    std::vector<std::vector<double>> rows;
    std::vector<double> n_pos, c_pos;
    for (int n = 1; n <= count; ++n) {
        rows.push_back({static_cast<double>(n), c[n - 1]});
        // A log axis cannot show coefficients that underflowed to zero.
        if (c[n - 1] > 0.0) {
            n_pos.push_back(n);
            c_pos.push_back(c[n - 1]);
        }
    }
    write_table(ctx, "coeffs", {"n", "c_n"}, rows);

    json series = json::array({acf.c0});
    for (int n = 1; n <= acf.truncation; ++n) series.push_back(acf.coefficient(n));

    std::vector<std::vector<double>> table;
    json sweep = json::array();
    for (double factor : ctx.inv.options.at("l_factors").get<std::vector<double>>()) {
        const double l = factor * acf.derived.l;
        for (double fraction : {0.5, 0.9, 0.95, 0.99}) {
            const int by_mag = coefficient_power_fraction(l, p.n_blades, fraction, CoefficientOrdering::by_magnitude);
            const int by_idx = coefficient_power_fraction(l, p.n_blades, fraction, CoefficientOrdering::by_index);
            table.push_back({l, fraction, static_cast<double>(by_mag), static_cast<double>(by_idx)});
            sweep.push_back({{"l", l}, {"fraction", fraction}, {"by_magnitude", by_mag}, {"by_index", by_idx}});
        }
    }
    write_table(ctx, "power_fraction", {"l", "fraction", "count_by_magnitude", "count_by_index"}, table);

    svg::LinePlot plot;
    plot.title = "Series coefficients c_n = J_{N_b n}^2(l/2)";
    plot.x_label = "n";
    plot.y_label = "c_n";
    plot.log_y = true;
    plot.series.push_back({n_pos, c_pos, "c_n", "#1f77b4"});
    plot.vertical_lines.push_back({static_cast<double>(acf.truncation), "truncation index", "#d62728"});
    ctx.out.write("coeffs.svg", svg::render(plot));

    ctx.results = {{"l", acf.derived.l},
                   {"truncation_index", acf.truncation},
                   {"n_terms", acf.n_terms},
                   {"series", series},
                   {"power_fraction", sweep}};
    std::printf("l = %.10g, truncation index %d, %d terms kept\n", acf.derived.l, acf.truncation, acf.n_terms);
}

}  // namespace

int run(const Invocation& inv) {
    const std::string started = utc_now();
    Context ctx(inv);
    if (inv.command == "acf") cmd_acf(ctx);
    else if (inv.command == "psd") cmd_psd(ctx);
    else if (inv.command == "simulate") cmd_simulate(ctx);
    else if (inv.command == "validate") cmd_validate(ctx);
    else if (inv.command == "coeffs") cmd_coeffs(ctx);
    else throw UsageError("unknown command " + inv.command);

    json warnings = json::array();
    for (const auto& w : regime_warnings(inv.config.params)) warnings.push_back(w);
    if (ctx.results.contains("advisories"))
        for (const auto& adv : ctx.results["advisories"]) warnings.push_back(adv);
    const json manifest = {{"tool", "swarmdoppler"},
                           {"version", SWARMDOPPLER_VERSION},
                           {"command", inv.command},
                           {"config", config_to_json(inv.config)},
                           {"seed", inv.config.estimator.seed},
                           {"options", inv.options},
                           {"started_utc", started},
                           {"finished_utc", utc_now()},
                           {"outputs", ctx.out.files()},
                           {"results", ctx.results},
                           {"warnings", warnings},
                           {"status", ctx.threshold_failed ? "threshold_failed" : "ok"}};
    write_text_file(ctx.out.path("manifest.json"), manifest.dump(2) + "\n");
    return ctx.threshold_failed ? kThresholdFailed : kOk;
}

Invocation from_manifest(const json& manifest, const std::filesystem::path& out_dir) {
    Invocation inv;
    try {
        inv.command = manifest.at("command").get<std::string>();
        inv.config = config_from_json(manifest.at("config"));
        inv.options = manifest.at("options");
    } catch (const json::exception& e) {
        throw ConfigError(std::string("manifest is incomplete: ") + e.what());
    }
    inv.out_dir = out_dir;
    return inv;
}

}  // namespace swarmdoppler::cli
