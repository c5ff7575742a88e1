#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "swarmdoppler/model.hpp"

namespace swarmdoppler {

using Rng = std::mt19937_64;
using Signal = std::vector<std::complex<double>>;

/// One realization of the latent rotor variables, stored (drone, rotor)
/// row-major.
struct SwarmState {
    int n_drones = 0;
    int n_rotors = 0;
    std::vector<double> initial_angles;     // U[0, 2pi)
    std::vector<double> projection_phases;  // U[0, 2pi)
    std::vector<double> rotor_speeds;       // N(mean, variance), rad/s; sign unrestricted

    std::size_t rotor_total() const { return initial_angles.size(); }
    void validate(const SwarmParams& params) const;
};

/// Seed of realization `index` derived from the master seed alone.
std::uint64_t realization_seed(std::uint64_t master_seed, std::uint64_t index);

/// Draws angles, then projection phases, then speeds, each block in
/// (drone, rotor) row-major order.
SwarmState sample_state(const SwarmParams& params, Rng& rng);
SwarmState sample_state(const SwarmParams& params, std::uint64_t master_seed, std::uint64_t index);

/// Point-scatterer return
///   y(t) = g sum_{d,r} e^{-i gamma_{d,r}} sum_b e^{-i (4 pi / lambda) L cos(theta_{d,r,b}(t))},
///   theta_{d,r,b}(t) = theta_{d,r} + omega_{d,r} t + 2 pi (b - 1) / N_b.
Signal synthesize(const SwarmState& state, const SwarmParams& params, const SamplingGrid& grid);

/// Realization `index` of the ensemble identified by `master_seed`.
Signal realization(const SwarmParams& params, const SamplingGrid& grid, std::uint64_t master_seed,
                   std::uint64_t index);

struct Ensemble {
    SwarmParams params;
    SamplingGrid grid;
    std::uint64_t master_seed = 0;
    std::int64_t n_realizations = 0;
    std::vector<std::complex<double>> signals;  // n_realizations x n_samples, row-major

    std::span<const std::complex<double>> row(std::int64_t k) const;
};

/// Realizations first_index .. first_index + count - 1 of the ensemble
/// identified by `master_seed`, concatenated row-major. Used to produce large
/// ensembles block by block.
std::vector<std::complex<double>> simulate_rows(const SwarmParams& params, const SamplingGrid& grid,
                                                std::int64_t first_index, std::int64_t count,
                                                std::uint64_t master_seed, unsigned workers = 0);

/// Worker count 0 means std::thread::hardware_concurrency(). Output does not
/// depend on the worker count. Throws ResourceError if memory runs out.
Ensemble simulate_ensemble(const SwarmParams& params, const SamplingGrid& grid, std::int64_t n_realizations,
                           std::uint64_t master_seed, unsigned workers = 0);

unsigned resolve_workers(unsigned workers);

}  // namespace swarmdoppler
