#include "swarmdoppler/estimate.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <numbers>
#include <optional>
#include <thread>

#include "swarmdoppler/errors.hpp"
#include "swarmdoppler/fft.hpp"

namespace swarmdoppler {

namespace {

using Complex = std::complex<double>;
using RowSource = std::function<void(std::int64_t, Signal&)>;

std::int64_t resolve_max_lag(const SamplingGrid& grid, const AcfEstimatorOptions& o) {
    const std::int64_t t_ref = o.mode == EstimatorMode::single_reference ? o.t_ref_index : 0;
    if (t_ref < 0 || t_ref >= grid.n_samples) throw DomainError("estimate_acf: t_ref_index outside the grid");
    const std::int64_t available = grid.n_samples - 1 - t_ref;
    if (o.max_lag < 0) return available;
    if (o.max_lag > available)
        throw DomainError("estimate_acf: lag " + std::to_string(o.max_lag) + " runs past the grid (max " +
                          std::to_string(available) + ")");
    return o.max_lag;
}

// Adds one realization's lag products to `acc`.
class LagProducts {
public:
    LagProducts(const SamplingGrid& grid, const AcfEstimatorOptions& options, std::int64_t max_lag)
        : options_(options), max_lag_(max_lag), n_(grid.n_samples) {
        if (options.mode == EstimatorMode::time_averaged) {
            std::size_t p = 1;
            while (p < static_cast<std::size_t>(2 * n_)) p <<= 1;
            forward_.emplace(p, FftSign::negative);
            backward_.emplace(p, FftSign::positive);
            work_.resize(p);
        }
    }

    void add(std::span<const Complex> y, std::span<Complex> acc) {
        if (options_.mode == EstimatorMode::single_reference) {
            const auto t = static_cast<std::size_t>(options_.t_ref_index);
            const Complex ref = y[t];
            for (std::int64_t j = 0; j <= max_lag_; ++j) acc[j] += ref * std::conj(y[t + static_cast<std::size_t>(j)]);
            return;
        }
        // a(j) = sum_t y(t + j) conj(y(t)) via |Y|^2; the estimator wants conj(a(j)).
        std::fill(work_.begin(), work_.end(), Complex{});
        std::copy(y.begin(), y.end(), work_.begin());
        forward_->execute(work_);
        for (auto& v : work_) v = std::norm(v);
        backward_->execute(work_);
        const double p = static_cast<double>(work_.size());
        for (std::int64_t j = 0; j <= max_lag_; ++j)
            acc[j] += std::conj(work_[static_cast<std::size_t>(j)]) / (p * static_cast<double>(n_ - j));
    }

private:
    AcfEstimatorOptions options_;
    std::int64_t max_lag_;
    std::int64_t n_;
    std::optional<FftPlan> forward_, backward_;
    std::vector<Complex> work_;
};

std::vector<Complex> reduce_chunks(const SamplingGrid& grid, std::int64_t n_realizations,
                                   const AcfEstimatorOptions& options, std::int64_t max_lag, unsigned workers,
                                   const RowSource& source) {
    const std::int64_t n_chunks = (n_realizations + kReductionChunk - 1) / kReductionChunk;
    const auto width = static_cast<std::size_t>(max_lag + 1);
    std::vector<std::vector<Complex>> partial(static_cast<std::size_t>(n_chunks));
    std::atomic<std::int64_t> next{0};

    auto work = [&] {
        LagProducts products(grid, options, max_lag);
        Signal row;
        for (std::int64_t c = next++; c < n_chunks; c = next++) {
            std::vector<Complex> acc(width, Complex{});
            const std::int64_t end = std::min(n_realizations, (c + 1) * kReductionChunk);
            for (std::int64_t k = c * kReductionChunk; k < end; ++k) {
                source(k, row);
                products.add(row, acc);
            }
            partial[static_cast<std::size_t>(c)] = std::move(acc);
        }
    };
    const unsigned count = std::min<unsigned>(resolve_workers(workers), static_cast<unsigned>(n_chunks));
    if (count <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned i = 0; i < count; ++i) pool.emplace_back(work);
    }

    std::vector<Complex> total(width, Complex{});
    for (const auto& chunk : partial)
        for (std::size_t j = 0; j < width; ++j) total[j] += chunk[j];
    const double inv_n = 1.0 / static_cast<double>(n_realizations);
    for (auto& v : total) v *= inv_n;
    return total;
}

Curve make_acf_curve(std::vector<Complex> values, const SwarmParams& params, const SamplingGrid& grid,
                     std::int64_t n_realizations, std::uint64_t seed, const AcfEstimatorOptions& options) {
    Curve c;
    c.axis = CurveAxis::lag_s;
    c.complex_valued = true;
    c.x.resize(values.size());
    for (std::size_t j = 0; j < values.size(); ++j) c.x[j] = static_cast<double>(j) * grid.dt;
    c.y = std::move(values);
    c.meta = {{"quantity", "acf_estimate"},
              {"estimator", to_string(options.mode)},
              {"n_realizations", n_realizations},
              {"master_seed", seed},
              {"params_digest", params_digest(params)},
              {"dt_s", grid.dt}};
    if (options.mode == EstimatorMode::single_reference) {
        c.meta["t_ref_index"] = options.t_ref_index;
        c.meta["t_ref_s"] = grid.time(options.t_ref_index);
    }
    return c;
}

}  // namespace

Curve estimate_acf(const Ensemble& ensemble, const AcfEstimatorOptions& options, unsigned workers) {
    if (ensemble.n_realizations < 1) throw DomainError("estimate_acf: empty ensemble");
    const std::int64_t max_lag = resolve_max_lag(ensemble.grid, options);
    auto source = [&](std::int64_t k, Signal& row) {
        const auto r = ensemble.row(k);
        row.assign(r.begin(), r.end());
    };
    auto values = reduce_chunks(ensemble.grid, ensemble.n_realizations, options, max_lag, workers, source);
    return make_acf_curve(std::move(values), ensemble.params, ensemble.grid, ensemble.n_realizations,
                          ensemble.master_seed, options);
}

Curve estimate_acf(const Ensemble& ensemble, std::int64_t t_ref_index, std::int64_t max_lag) {
    AcfEstimatorOptions o;
    o.t_ref_index = t_ref_index;
    o.max_lag = max_lag;
    return estimate_acf(ensemble, o, 1);
}

Curve estimate_acf_streaming(const SwarmParams& params, const SamplingGrid& grid, std::int64_t n_realizations,
                             std::uint64_t master_seed, const AcfEstimatorOptions& options, unsigned workers) {
    params.validate();
    grid.validate();
    if (n_realizations < 1) throw DomainError("estimate_acf_streaming: n_realizations must be >= 1");
    const std::int64_t max_lag = resolve_max_lag(grid, options);
    auto source = [&](std::int64_t k, Signal& row) {
        row = realization(params, grid, master_seed, static_cast<std::uint64_t>(k));
    };
    auto values = reduce_chunks(grid, n_realizations, options, max_lag, workers, source);
    return make_acf_curve(std::move(values), params, grid, n_realizations, master_seed, options);
}

Curve estimate_psd(const Curve& acf_curve) {
    acf_curve.validate();
    if (acf_curve.axis != CurveAxis::lag_s) throw DomainError("estimate_psd: input must be indexed by lag");
    const std::size_t m = acf_curve.size();
    if (m < 2) throw DomainError("estimate_psd: need at least two lags");
    if (acf_curve.x[0] != 0.0) throw DomainError("estimate_psd: lag axis must start at 0");
    const double dt = acf_curve.x[1] - acf_curve.x[0];
    for (std::size_t j = 2; j < m; ++j)
        if (std::abs(acf_curve.x[j] - static_cast<double>(j) * dt) > 1e-6 * dt)
            throw DomainError("estimate_psd: lag grid is not uniform");

    const std::size_t len = 2 * m - 1;
    std::vector<Complex> seq(len);
    seq[0] = acf_curve.y[0];
    for (std::size_t j = 1; j < m; ++j) {
        seq[j] = acf_curve.y[j];
        seq[len - j] = std::conj(acf_curve.y[j]);
    }
    const auto spectrum = dft(seq, FftSign::positive);

    Curve out;
    out.axis = CurveAxis::angular_frequency_rad_per_s;
    out.complex_valued = true;
    out.x.resize(len);
    out.y.resize(len);
    const double bin = 2.0 * std::numbers::pi / (static_cast<double>(len) * dt);
    const std::size_t half = (len - 1) / 2;  // len is odd
    for (std::size_t i = 0; i < len; ++i) {
        const std::size_t k = (i + len - half) % len;  // i = 0 maps to the most negative bin
        const double kk = i < half ? static_cast<double>(i) - static_cast<double>(half)
                                   : static_cast<double>(i - half);
        out.x[i] = kk * bin;
        out.y[i] = spectrum[k] * dt;
    }
    out.meta = acf_curve.meta;
    out.meta["quantity"] = "psd_estimate";
    out.meta["bin_width_rad_s"] = bin;
    out.meta["convention"] = "S(f) = int R(tau) exp(i f tau) dtau";
    return out;
}

double psd_bin_width(const Curve& psd_curve) {
    if (psd_curve.size() < 2) throw DomainError("psd_bin_width: need at least two bins");
    return psd_curve.x[1] - psd_curve.x[0];
}

void StftConfig::validate() const {
    if (window_length < 1) throw DomainError("StftConfig: window_length must be positive");
    if (hop < 1) throw DomainError("StftConfig: hop must be positive");
    if (hop > window_length) throw DomainError("StftConfig: hop must not exceed window_length");
    if (fft_length < window_length) throw DomainError("StftConfig: fft_length must be >= window_length");
}

Spectrogram spectrogram(std::span<const Complex> series, const StftConfig& config, const SamplingGrid& grid) {
    config.validate();
    grid.validate();
    const auto n = static_cast<std::int64_t>(series.size());
    if (config.window_length > n) throw DomainError("spectrogram: window longer than the series");

    std::vector<double> window(static_cast<std::size_t>(config.window_length), 1.0);
    if (config.window == WindowKind::hann)
        for (std::size_t j = 0; j < window.size(); ++j)
            window[j] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(j) /
                                              static_cast<double>(config.window_length));

    const auto f_len = static_cast<std::size_t>(config.fft_length);
    const std::size_t half = f_len / 2;  // output bin i holds frequency (i - half) * bin
    Spectrogram s;
    s.frequencies.resize(f_len);
    const double bin = 2.0 * std::numbers::pi / (static_cast<double>(f_len) * grid.dt);
    for (std::size_t i = 0; i < f_len; ++i) {
        const double k = static_cast<double>(i) - static_cast<double>(half);
        s.frequencies[i] = k * bin;
    }

    FftPlan plan(f_len, FftSign::negative);
    std::vector<Complex> buf(f_len);
    for (std::int64_t start = 0; start + config.window_length <= n; start += config.hop) {
        std::fill(buf.begin(), buf.end(), Complex{});
        for (std::size_t j = 0; j < window.size(); ++j) buf[j] = window[j] * series[static_cast<std::size_t>(start) + j];
        plan.execute(buf);
        s.times.push_back(grid.time(start) + 0.5 * static_cast<double>(config.window_length - 1) * grid.dt);
        for (std::size_t i = 0; i < f_len; ++i) {
            const std::size_t k = (i + f_len - half) % f_len;
            s.power.push_back(std::norm(buf[k]));
        }
    }
    return s;
}

double out_of_band_fraction(const Spectrogram& spec, const FrequencyInterval& band) {
    double total = 0.0, outside = 0.0;
    for (std::size_t m = 0; m < spec.n_frames(); ++m)
        for (std::size_t i = 0; i < spec.n_bins(); ++i) {
            const double p = spec.at(m, i);
            total += p;
            if (!band.contains(spec.frequencies[i])) outside += p;
        }
    return total > 0.0 ? outside / total : 0.0;
}

}  // namespace swarmdoppler
