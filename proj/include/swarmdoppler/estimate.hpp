#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "swarmdoppler/analytic.hpp"
#include "swarmdoppler/config.hpp"
#include "swarmdoppler/model.hpp"
#include "swarmdoppler/simulate.hpp"

namespace swarmdoppler {

struct AcfEstimatorOptions {
    std::int64_t t_ref_index = 0;
    std::int64_t max_lag = -1;  // in samples; -1 takes every lag the grid allows
    EstimatorMode mode = EstimatorMode::single_reference;
};

/// Realizations are reduced in fixed-size chunks in index order, so results
/// are bit-identical for any worker count.
inline constexpr std::int64_t kReductionChunk = 64;

/// R_hat(tau_j) = (1/N) sum_k y_k(t_ref) conj(y_k(t_ref + tau_j)), j = 0..max_lag.
///
/// In time_averaged mode each realization's product is additionally averaged
/// over every reference time with t + tau_j on the grid (t_ref is ignored).
/// Throws DomainError when the lag range runs off the grid.
Curve estimate_acf(const Ensemble& ensemble, const AcfEstimatorOptions& options = {}, unsigned workers = 0);
Curve estimate_acf(const Ensemble& ensemble, std::int64_t t_ref_index, std::int64_t max_lag = -1);

/// Same estimate without materializing the ensemble: realizations are
/// regenerated from (master_seed, index) and folded in as they are produced.
Curve estimate_acf_streaming(const SwarmParams& params, const SamplingGrid& grid, std::int64_t n_realizations,
                             std::uint64_t master_seed, const AcfEstimatorOptions& options = {},
                             unsigned workers = 0);

/// S_hat(f_k) = dt sum_{|j| < M} R_hat(tau_j) e^{i f_k tau_j} over the
/// Hermitian extension R_hat(-tau) = conj(R_hat(tau)); f in rad/s, ascending.
/// Matches the FourierConvention::angular normalization of the analytic PSD.
/// Requires a lag axis starting at 0 with uniform spacing (DomainError otherwise).
Curve estimate_psd(const Curve& acf_curve);

/// Width of one frequency bin of estimate_psd's output, rad/s.
double psd_bin_width(const Curve& psd_curve);

enum class WindowKind { hann, rectangular };

struct StftConfig {
    WindowKind window = WindowKind::hann;
    std::int64_t window_length = 256;
    std::int64_t hop = 64;
    std::int64_t fft_length = 256;

    void validate() const;
};

/// Magnitude-squared STFT. power is frame-major: power[frame * n_bins + bin].
struct Spectrogram {
    std::vector<double> times;        // s, frame centers
    std::vector<double> frequencies;  // rad/s, ascending
    std::vector<double> power;

    std::size_t n_frames() const { return times.size(); }
    std::size_t n_bins() const { return frequencies.size(); }
    double at(std::size_t frame, std::size_t bin) const { return power[frame * n_bins() + bin]; }
};

Spectrogram spectrogram(std::span<const std::complex<double>> series, const StftConfig& config,
                        const SamplingGrid& grid);

/// Share of spectrogram energy at frequencies outside `band`.
double out_of_band_fraction(const Spectrogram& spec, const FrequencyInterval& band);

}  // namespace swarmdoppler
