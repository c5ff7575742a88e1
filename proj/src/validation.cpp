#include "swarmdoppler/validation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "swarmdoppler/errors.hpp"
#include "swarmdoppler/estimate.hpp"

namespace swarmdoppler {

double nrmse(std::span<const double> reference, std::span<const double> estimate) {
    if (reference.size() != estimate.size() || reference.empty())
        throw DomainError("nrmse: inputs must be non-empty and of equal length");
    double err = 0.0, ref = 0.0;
    for (std::size_t i = 0; i < reference.size(); ++i) {
        const double d = estimate[i] - reference[i];
        err += d * d;
        ref += reference[i] * reference[i];
    }
    if (ref == 0.0) throw DomainError("nrmse: reference is identically zero");
    return std::sqrt(err / ref);
}

AcfComparison compare_acf(const Curve& estimate, const AcfAnalytic& acf, double max_lag_s) {
    if (estimate.axis != CurveAxis::lag_s) throw DomainError("compare_acf: estimate must be indexed by lag");
    std::vector<double> ref, est;
    double span = 0.0;
    for (std::size_t j = 0; j < estimate.size() && estimate.x[j] <= max_lag_s; ++j) {
        ref.push_back(acf_eval(acf, estimate.x[j]));
        est.push_back(estimate.y[j].real());
        span = estimate.x[j];
    }
    AcfComparison out;
    out.nrmse = nrmse(ref, est);
    out.n_lags = ref.size();
    out.lag_span_s = span;
    out.mainlobe_widths = span / mainlobe_width(acf.params);
    return out;
}

PsdComparison compare_psd(const Curve& psd_estimate, const PsdAnalytic& psd, const FrequencyInterval& support,
                          int dc_guard_bins, double min_kernel_bins) {
    const double bin = psd_bin_width(psd_estimate);
    std::vector<const GaussianKernel*> narrow;
    for (const auto& k : psd.kernels)
        if (k.std < min_kernel_bins * bin) narrow.push_back(&k);

    std::vector<double> ref, est;
    for (std::size_t i = 0; i < psd_estimate.size(); ++i) {
        const double f = psd_estimate.x[i];
        if (!support.contains(f)) continue;
        if (std::abs(f) <= (dc_guard_bins + 0.5) * bin) continue;
        const bool near_narrow = std::any_of(narrow.begin(), narrow.end(), [&](const GaussianKernel* k) {
            return std::abs(f - k->center) <= 5.0 * k->std + 2.0 * bin;
        });
        if (near_narrow) continue;
        ref.push_back(psd_eval(psd, f));
        est.push_back(psd_estimate.y[i].real());
    }
    PsdComparison out;
    out.nrmse = nrmse(ref, est);
    out.n_bins = ref.size();
    out.excluded_harmonics = narrow.size() / 2;
    out.bin_width = bin;
    return out;
}

Curve analytic_acf_curve(const AcfAnalytic& acf, double dt, std::int64_t n_lags) {
    if (!(dt > 0.0) || n_lags < 1) throw DomainError("analytic_acf_curve: need dt > 0 and n_lags >= 1");
    Curve c;
    c.axis = CurveAxis::lag_s;
    c.x.resize(static_cast<std::size_t>(n_lags));
    c.y.resize(static_cast<std::size_t>(n_lags));
    for (std::int64_t j = 0; j < n_lags; ++j) {
        const double tau = static_cast<double>(j) * dt;
        c.x[static_cast<std::size_t>(j)] = tau;
        c.y[static_cast<std::size_t>(j)] = acf_eval(acf, tau);
    }
    c.meta = {{"quantity", "acf_analytic"}, {"params_digest", params_digest(acf.params)}, {"n_terms", acf.n_terms}};
    return c;
}

ClosureResult wiener_khinchin_closure(const AcfAnalytic& acf, const PsdAnalytic& psd, const FrequencyInterval& support,
                                      int dc_guard_bins, double floor_fraction) {
    const auto& p = acf.params;
    if (!(p.speed_variance > 0.0)) throw DomainError("wiener_khinchin_closure: needs a positive speed variance");
    // Twice the Nyquist rate of the support edge, and enough lags for the
    // slowest Gaussian envelope (harmonic 1) to fall below e^-40.
    const double dt = std::numbers::pi / (2.0 * support.upper);
    const double horizon = std::sqrt(80.0) / (p.speed_std() * p.n_blades);
    const auto n_lags = static_cast<std::int64_t>(std::ceil(horizon / dt)) + 1;
    if (n_lags > (std::int64_t{1} << 23)) throw DomainError("wiener_khinchin_closure: lag horizon too long to sample");

    const Curve spectrum = estimate_psd(analytic_acf_curve(acf, dt, n_lags));
    const double bin = psd_bin_width(spectrum);

    std::vector<double> shape, dft_values;
    double peak = 0.0;
    for (std::size_t i = 0; i < spectrum.size(); ++i) {
        const double f = spectrum.x[i];
        if (!support.contains(f) || std::abs(f) <= (dc_guard_bins + 0.5) * bin) continue;
        const double s = psd_eval(psd, f) / psd.convention_constant;
        peak = std::max(peak, s);
        shape.push_back(s);
        dft_values.push_back(spectrum.y[i].real());
    }
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < shape.size(); ++i) {
        num += shape[i] * dft_values[i];
        den += shape[i] * shape[i];
    }
    ClosureResult out;
    out.fitted_constant = num / den;
    out.dt = dt;
    out.n_lags = n_lags;
    for (std::size_t i = 0; i < shape.size(); ++i) {
        if (shape[i] < floor_fraction * peak) continue;
        const double model = out.fitted_constant * shape[i];
        out.max_relative_error = std::max(out.max_relative_error, std::abs(dft_values[i] - model) / model);
        ++out.n_bins;
    }
    return out;
}

}  // namespace swarmdoppler
