#pragma once

#include <cstdint>
#include <span>

#include "swarmdoppler/analytic.hpp"
#include "swarmdoppler/model.hpp"

namespace swarmdoppler {

/// RMS of (estimate - reference) over the RMS of reference.
double nrmse(std::span<const double> reference, std::span<const double> estimate);

struct AcfComparison {
    double nrmse = 0.0;
    std::size_t n_lags = 0;
    double lag_span_s = 0.0;
    double mainlobe_widths = 0.0;  // lag span in units of mainlobe_width()
};

/// Compares the real part of an estimated ACF against acf_eval on lags
/// 0 <= tau <= max_lag_s.
AcfComparison compare_acf(const Curve& estimate, const AcfAnalytic& acf, double max_lag_s);

struct PsdComparison {
    double nrmse = 0.0;
    std::size_t n_bins = 0;            // bins that entered the comparison
    std::size_t excluded_harmonics = 0;
    double bin_width = 0.0;
};

/// Compares the real part of estimate_psd output against psd_eval inside
/// `support`. Bins within `dc_guard_bins` of DC are skipped, as is the
/// neighborhood (5 std + 2 bins) of every kernel narrower than
/// `min_kernel_bins` frequency bins, which a finite lag window cannot resolve.
PsdComparison compare_psd(const Curve& psd_estimate, const PsdAnalytic& psd, const FrequencyInterval& support,
                          int dc_guard_bins = 3, double min_kernel_bins = 2.0);

/// acf_eval sampled at tau_j = j dt, j = 0..n_lags-1.
Curve analytic_acf_curve(const AcfAnalytic& acf, double dt, std::int64_t n_lags);

struct ClosureResult {
    double fitted_constant = 0.0;     // least-squares multiplier of the PSD shape
    double max_relative_error = 0.0;  // over bins with S >= floor_fraction * max S
    std::size_t n_bins = 0;
    double dt = 0.0;
    std::int64_t n_lags = 0;
};

/// Wiener-Khinchin closure: transforms the densely sampled analytic ACF with
/// estimate_psd, fits one global constant against the PSD shape
/// psd_eval / convention_constant, and reports the worst pointwise relative
/// error over `support` (excluding `dc_guard_bins` bins around DC). Bins where
/// the analytic density is below floor_fraction of its maximum carry no
/// meaningful relative digits and are skipped.
ClosureResult wiener_khinchin_closure(const AcfAnalytic& acf, const PsdAnalytic& psd,
                                      const FrequencyInterval& support, int dc_guard_bins = 3,
                                      double floor_fraction = 1e-6);

}  // namespace swarmdoppler
