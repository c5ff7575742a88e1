#include "swarmdoppler/model.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>

#include "swarmdoppler/config.hpp"
#include "swarmdoppler/errors.hpp"

namespace swarmdoppler {

namespace {

void require_positive_count(int value, const char* field) {
    if (value < 1) throw ValidationError(field, "must be a positive integer, got " + std::to_string(value));
}

void require_positive(double value, const char* field) {
    if (!std::isfinite(value) || value <= 0.0)
        throw ValidationError(field, "must be finite and > 0, got " + std::to_string(value));
}

}  // namespace

double SwarmParams::speed_std() const { return std::sqrt(speed_variance); }

void SwarmParams::validate() const {
    require_positive_count(n_drones, "n_drones");
    require_positive_count(n_rotors, "n_rotors");
    require_positive_count(n_blades, "n_blades");
    require_positive(blade_length, "blade_length_m");
    require_positive(wavelength, "wavelength_m");
    require_positive(mean_speed, "mean_speed_rad_s");
    if (!std::isfinite(speed_variance) || speed_variance < 0.0)
        throw ValidationError("speed_variance", "must be finite and >= 0, got " + std::to_string(speed_variance));
    require_positive(gain_magnitude, "gain_magnitude");
}

std::vector<std::string> regime_warnings(const SwarmParams& params) {
    std::vector<std::string> out;
    if (params.wavelength > 0.5 * params.blade_length)
        out.emplace_back("wavelength is not small compared to blade_length; the point-scatterer model assumes lambda << L");
    if (params.speed_std() > params.mean_speed / 5.0)
        out.emplace_back("speed spread exceeds mean/5; a noticeable share of rotors spins backwards");
    return out;
}

DerivedParams derive(const SwarmParams& params) {
    params.validate();
    DerivedParams d;
    d.l = 8.0 * std::numbers::pi * params.blade_length / params.wavelength;
    d.half_l = d.l / 2.0;
    return d;
}

double max_angular_frequency(const SwarmParams& params) {
    const auto d = derive(params);
    return d.half_l * (params.mean_speed + 5.0 * params.speed_std());
}

void SamplingGrid::validate() const {
    if (!std::isfinite(t_start)) throw ValidationError("grid.t_start_s", "must be finite");
    if (!std::isfinite(dt) || dt <= 0.0) throw ValidationError("grid.dt_s", "must be finite and > 0");
    if (n_samples < 1) throw ValidationError("grid.n_samples", "must be a positive integer");
}

SamplingGrid default_grid(const SwarmParams& params, double oversample, std::int64_t n_samples) {
    if (!(oversample >= 1.0) || !std::isfinite(oversample))
        throw ValidationError("oversample", "must be >= 1");
    if (n_samples < 1) throw ValidationError("grid.n_samples", "must be a positive integer");
    const double f_max = max_angular_frequency(params);
    const double bound = std::numbers::pi / oversample;
    double dt = bound / f_max;
    while (f_max * dt > bound) dt = std::nextafter(dt, 0.0);
    return SamplingGrid{0.0, dt, n_samples};
}

bool satisfies_nyquist(const SwarmParams& params, const SamplingGrid& grid) {
    return max_angular_frequency(params) * grid.dt <= std::numbers::pi;
}

void check_grid(const SwarmParams& params, const SamplingGrid& grid, bool allow_undersampled) {
    grid.validate();
    if (!allow_undersampled && !satisfies_nyquist(params, grid)) {
        const double limit = std::numbers::pi / max_angular_frequency(params);
        throw ValidationError("grid.dt_s", "step " + std::to_string(grid.dt) + " s exceeds the Nyquist bound " +
                                               std::to_string(limit) +
                                               " s; set grid.allow_undersampled to override");
    }
}

std::string to_string(CurveAxis axis) {
    switch (axis) {
        case CurveAxis::lag_s: return "lag_s";
        case CurveAxis::angular_frequency_rad_per_s: return "angular_frequency_rad_per_s";
        case CurveAxis::time_s: return "time_s";
    }
    return "unknown";
}

std::vector<double> Curve::real() const {
    std::vector<double> out(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) out[i] = y[i].real();
    return out;
}

void Curve::validate() const {
    if (x.size() != y.size()) throw DomainError("curve: |x| != |y|");
    for (std::size_t i = 1; i < x.size(); ++i)
        if (!(x[i] > x[i - 1])) throw DomainError("curve: x must be strictly increasing");
}

Curve make_real_curve(CurveAxis axis, std::vector<double> x, const std::vector<double>& y) {
    Curve c;
    c.axis = axis;
    c.x = std::move(x);
    c.y.assign(y.begin(), y.end());
    c.validate();
    return c;
}

std::string params_digest(const SwarmParams& params) {
    // FNV-1a over the canonical JSON dump.
    const std::string text = params_to_json(params).dump();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

SwarmParams mavic_like() {
    SwarmParams p;
    p.n_drones = 1;
    p.n_rotors = 4;
    p.n_blades = 2;
    p.blade_length = 0.21;
    p.wavelength = 0.03;
    p.mean_speed = 523.0;
    p.speed_variance = 27.0;
    p.gain_magnitude = 1.0;
    return p;
}

}  // namespace swarmdoppler
