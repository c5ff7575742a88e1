#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace swarmdoppler {

/// Physical and stochastic description of a swarm of identical rotor drones
/// seen by a monostatic radar.
///
/// Only |g| is stored: every second-order quantity depends on |g|^2, so the
/// reflection phase of the gain is inert.
struct SwarmParams {
    int n_drones = 1;
    int n_rotors = 1;   // per drone
    int n_blades = 1;   // per rotor
    double blade_length = 0.0;    // m
    double wavelength = 0.0;      // m
    double mean_speed = 0.0;      // rad/s
    double speed_variance = 0.0;  // rad^2/s^2
    double gain_magnitude = 1.0;

    double speed_std() const;
    double gain_power() const { return gain_magnitude * gain_magnitude; }
    /// N_d * N_r, the number of independent rotors in the swarm.
    double rotor_count() const { return static_cast<double>(n_drones) * n_rotors; }

    /// Throws ValidationError naming the first offending field.
    void validate() const;

    bool operator==(const SwarmParams&) const = default;
};

/// Modeling-regime advisories (not errors), e.g. wavelength not small against
/// the blade length.
std::vector<std::string> regime_warnings(const SwarmParams& params);

struct DerivedParams {
    double l = 0.0;       // 8 pi L / lambda
    double half_l = 0.0;  // l / 2, the argument of every series coefficient
};

DerivedParams derive(const SwarmParams& params);

/// Highest angular frequency (rad/s) the return carries with non-negligible
/// power: (l/2)(mean + 5 std).
double max_angular_frequency(const SwarmParams& params);

/// Uniform time grid t_k = t_start + k dt, k = 0..n_samples-1.
struct SamplingGrid {
    double t_start = 0.0;
    double dt = 0.0;
    std::int64_t n_samples = 0;

    double time(std::int64_t k) const { return t_start + static_cast<double>(k) * dt; }
    void validate() const;

    bool operator==(const SamplingGrid&) const = default;
};

inline constexpr std::int64_t kDefaultSampleCount = 4001;

/// Grid whose step honors (l/2)(mean + 5 std) * dt <= pi / oversample.
SamplingGrid default_grid(const SwarmParams& params, double oversample = 1.0,
                          std::int64_t n_samples = kDefaultSampleCount);

/// True when the grid resolves the whole band of the return without aliasing.
bool satisfies_nyquist(const SwarmParams& params, const SamplingGrid& grid);

/// Throws ValidationError("grid.dt_s") unless the grid satisfies the Nyquist
/// guard or the caller acknowledged undersampling.
void check_grid(const SwarmParams& params, const SamplingGrid& grid, bool allow_undersampled);

enum class CurveAxis { lag_s, angular_frequency_rad_per_s, time_s };

std::string to_string(CurveAxis axis);

/// A sampled function of one variable. Real curves carry zero imaginary parts
/// and `complex_valued == false`.
struct Curve {
    CurveAxis axis = CurveAxis::lag_s;
    std::vector<double> x;
    std::vector<std::complex<double>> y;
    bool complex_valued = false;
    nlohmann::json meta = nlohmann::json::object();

    std::size_t size() const { return x.size(); }
    std::vector<double> real() const;
    /// Throws DomainError when x is not strictly increasing or |x| != |y|.
    void validate() const;
};

Curve make_real_curve(CurveAxis axis, std::vector<double> x, const std::vector<double>& y);

/// Stable 64-bit digest of the canonical parameter serialization; recorded in
/// curve metadata for provenance.
std::string params_digest(const SwarmParams& params);

/// Parameters used in the published numeric study (a DJI-Mavic-like drone):
/// L = 21 cm, lambda = 3 cm, N_b = 2, N_r = 4, N_d = 1, mean 523 rad/s,
/// variance 27 rad^2/s^2.
SwarmParams mavic_like();

}  // namespace swarmdoppler
