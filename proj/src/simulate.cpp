#include "swarmdoppler/simulate.hpp"

#include <atomic>
#include <cmath>
#include <new>
#include <numbers>
#include <thread>

#include "swarmdoppler/errors.hpp"

namespace swarmdoppler {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// uniform_real_distribution may return its upper bound after rounding.
double uniform_angle(Rng& rng) {
    std::uniform_real_distribution<double> dist(0.0, kTwoPi);
    double a = dist(rng);
    return a < kTwoPi ? a : 0.0;
}

}  // namespace

void SwarmState::validate(const SwarmParams& params) const {
    const auto total = static_cast<std::size_t>(params.n_drones) * params.n_rotors;
    if (n_drones != params.n_drones || n_rotors != params.n_rotors || initial_angles.size() != total ||
        projection_phases.size() != total || rotor_speeds.size() != total)
        throw DomainError("SwarmState: dimensions do not match the swarm parameters");
}

std::uint64_t realization_seed(std::uint64_t master_seed, std::uint64_t index) {
    return splitmix64(splitmix64(master_seed) ^ splitmix64(index + 0x632be59bd9b4e019ULL));
}

SwarmState sample_state(const SwarmParams& params, Rng& rng) {
    params.validate();
    SwarmState s;
    s.n_drones = params.n_drones;
    s.n_rotors = params.n_rotors;
    const auto total = static_cast<std::size_t>(params.n_drones) * params.n_rotors;
    s.initial_angles.resize(total);
    s.projection_phases.resize(total);
    s.rotor_speeds.resize(total);
    for (auto& a : s.initial_angles) a = uniform_angle(rng);
    for (auto& g : s.projection_phases) g = uniform_angle(rng);
    std::normal_distribution<double> normal(0.0, 1.0);
    const double sd = params.speed_std();
    for (auto& w : s.rotor_speeds) w = params.mean_speed + sd * normal(rng);
    return s;
}

SwarmState sample_state(const SwarmParams& params, std::uint64_t master_seed, std::uint64_t index) {
    Rng rng(realization_seed(master_seed, index));
    return sample_state(params, rng);
}

Signal synthesize(const SwarmState& state, const SwarmParams& params, const SamplingGrid& grid) {
    state.validate(params);
    grid.validate();
    const int nb = params.n_blades;
    const double k_phase = 4.0 * std::numbers::pi * params.blade_length / params.wavelength;
    std::vector<double> blade_cos(nb), blade_sin(nb);
    for (int b = 0; b < nb; ++b) {
        blade_cos[b] = std::cos(kTwoPi * b / nb);
        blade_sin[b] = std::sin(kTwoPi * b / nb);
    }

    Signal y(static_cast<std::size_t>(grid.n_samples), {0.0, 0.0});
    for (std::size_t r = 0; r < state.rotor_total(); ++r) {
        const std::complex<double> h = std::polar(params.gain_magnitude, -state.projection_phases[r]);
        const double theta0 = state.initial_angles[r];
        const double omega = state.rotor_speeds[r];
        for (std::int64_t k = 0; k < grid.n_samples; ++k) {
            const double theta = theta0 + omega * grid.time(k);
            const double c = std::cos(theta);
            const double s = std::sin(theta);
            std::complex<double> blades{0.0, 0.0};
            for (int b = 0; b < nb; ++b) {
                // cos(theta + 2 pi b / N_b) by the angle-addition formula.
                const double cb = c * blade_cos[b] - s * blade_sin[b];
                const double phase = -k_phase * cb;
                blades += std::complex<double>(std::cos(phase), std::sin(phase));
            }
            y[static_cast<std::size_t>(k)] += h * blades;
        }
    }
    return y;
}

Signal realization(const SwarmParams& params, const SamplingGrid& grid, std::uint64_t master_seed,
                   std::uint64_t index) {
    return synthesize(sample_state(params, master_seed, index), params, grid);
}

std::span<const std::complex<double>> Ensemble::row(std::int64_t k) const {
    if (k < 0 || k >= n_realizations) throw DomainError("Ensemble::row: index out of range");
    const auto n = static_cast<std::size_t>(grid.n_samples);
    return {signals.data() + static_cast<std::size_t>(k) * n, n};
}

unsigned resolve_workers(unsigned workers) {
    if (workers != 0) return workers;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

std::vector<std::complex<double>> simulate_rows(const SwarmParams& params, const SamplingGrid& grid,
                                                std::int64_t first_index, std::int64_t count,
                                                std::uint64_t master_seed, unsigned workers) {
    params.validate();
    grid.validate();
    if (count < 1 || first_index < 0) throw DomainError("simulate_rows: need count >= 1 and first_index >= 0");
    const auto n = static_cast<std::size_t>(grid.n_samples);
    std::vector<std::complex<double>> rows;
    try {
        rows.resize(static_cast<std::size_t>(count) * n);
    } catch (const std::bad_alloc&) {
        throw ResourceError("simulate_rows: cannot allocate " + std::to_string(count) + " x " + std::to_string(n) +
                                " samples",
                            0);
    }

    std::atomic<std::int64_t> next{0};
    std::atomic<std::int64_t> completed{0};
    std::atomic<bool> failed{false};
    auto work = [&] {
        try {
            for (std::int64_t k = next++; k < count && !failed; k = next++) {
                const auto y = realization(params, grid, master_seed, static_cast<std::uint64_t>(first_index + k));
                std::copy(y.begin(), y.end(), rows.begin() + static_cast<std::ptrdiff_t>(k * grid.n_samples));
                ++completed;
            }
        } catch (const std::bad_alloc&) {
            failed = true;
        }
    };
    const unsigned pool_size =
        std::min<unsigned>(resolve_workers(workers), static_cast<unsigned>(std::min<std::int64_t>(count, 1024)));
    if (pool_size <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(pool_size);
        for (unsigned i = 0; i < pool_size; ++i) pool.emplace_back(work);
    }
    if (failed)
        throw ResourceError("simulate_rows: out of memory after " + std::to_string(completed.load()) + " realizations",
                            static_cast<std::size_t>(completed.load()));
    return rows;
}

Ensemble simulate_ensemble(const SwarmParams& params, const SamplingGrid& grid, std::int64_t n_realizations,
                           std::uint64_t master_seed, unsigned workers) {
    if (n_realizations < 1) throw DomainError("simulate_ensemble: n_realizations must be >= 1");
    Ensemble e;
    e.params = params;
    e.grid = grid;
    e.master_seed = master_seed;
    e.n_realizations = n_realizations;
    e.signals = simulate_rows(params, grid, 0, n_realizations, master_seed, workers);
    return e;
}

}  // namespace swarmdoppler
