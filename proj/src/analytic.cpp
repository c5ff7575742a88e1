#include "swarmdoppler/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <numeric>

#include <boost/math/tools/roots.hpp>

#include "swarmdoppler/errors.hpp"
#include "swarmdoppler/special.hpp"

namespace swarmdoppler {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double gaussian(double x, double std) {
    const double z = x / std;
    return std::exp(-0.5 * z * z) / (std * std::sqrt(kTwoPi));
}

}  // namespace

double AcfAnalytic::per_rotor_scale() const {
    const double nb = params.n_blades;
    return params.gain_power() * nb * nb;
}

int truncation_index(double l, int n_blades) {
    if (!(l > 0.0)) throw DomainError("truncation_index: l must be > 0");
    if (n_blades < 1) throw DomainError("truncation_index: n_blades must be >= 1");
    return static_cast<int>(std::ceil(l / (2.0 * n_blades)));
}

int series_margin(int truncation) {
    return std::max(20, static_cast<int>(std::ceil(0.2 * truncation)));
}

std::vector<double> series_coefficients(double l, int n_blades, int count) {
    if (count < 0) throw DomainError("series_coefficients: count must be >= 0");
    const auto j = special::bessel_j_sequence(n_blades * count, 0.5 * l);
    std::vector<double> c(static_cast<std::size_t>(count));
    for (int n = 1; n <= count; ++n) {
        const double v = j[static_cast<std::size_t>(n) * n_blades];
        c[n - 1] = v * v;
    }
    return c;
}

AcfAnalytic build_acf(const SwarmParams& params, std::optional<int> n_terms) {
    AcfAnalytic acf;
    acf.params = params;
    acf.derived = derive(params);
    acf.truncation = truncation_index(acf.derived.l, params.n_blades);
    acf.n_terms = n_terms.value_or(acf.truncation + series_margin(acf.truncation));
    if (acf.n_terms < 0) throw DomainError("build_acf: n_terms must be >= 0");
    const double j0 = special::bessel_j(0, acf.derived.half_l);
    acf.c0 = j0 * j0;
    acf.coefficients = series_coefficients(acf.derived.l, params.n_blades, acf.n_terms);
    acf.dc_level = params.rotor_count() * (acf.per_rotor_scale() * acf.c0);
    return acf;
}

double acf_eval(const AcfAnalytic& acf, double tau) {
    const double t = std::abs(tau);
    const double base = acf.params.n_blades * acf.params.mean_speed * t;
    const double spread = acf.params.speed_variance * t * t * acf.params.n_blades * acf.params.n_blades / 2.0;
    double harmonics = 0.0;
    for (int n = 1; n <= acf.n_terms; ++n) {
        const double decay = std::exp(-spread * n * n);
        if (decay == 0.0) break;
        harmonics += acf.coefficients[n - 1] * std::cos(n * base) * decay;
    }
    return acf.params.rotor_count() * (acf.per_rotor_scale() * (acf.c0 + 2.0 * harmonics));
}

std::vector<double> acf_eval(const AcfAnalytic& acf, std::span<const double> taus) {
    std::vector<double> out(taus.size());
    std::transform(taus.begin(), taus.end(), out.begin(), [&](double t) { return acf_eval(acf, t); });
    return out;
}

double acf_deterministic_eval(const SwarmParams& params, double tau) {
    const auto d = derive(params);
    const int nb = params.n_blades;
    const double half_phase = params.mean_speed * tau / 2.0;
    // Only the blade offset b - b' matters; offset k occurs N_b - |k| times.
    double total = 0.0;
    for (int k = -(nb - 1); k <= nb - 1; ++k) {
        const double arg = d.l * std::sin(half_phase - std::numbers::pi * k / nb);
        total += (nb - std::abs(k)) * special::bessel_j(0, arg);
    }
    return params.rotor_count() * (params.gain_power() * total);
}

double mainlobe_width(const SwarmParams& params) {
    const auto d = derive(params);
    return 4.8 / (d.l * params.mean_speed);
}

double acf_first_null(const SwarmParams& params) {
    const double step = mainlobe_width(params) / 400.0;
    const double period = kTwoPi / params.mean_speed;
    auto f = [&](double t) { return acf_deterministic_eval(params, t); };
    double lo = 0.0;
    double f_lo = f(lo);
    for (double hi = step; hi <= period; hi += step) {
        const double f_hi = f(hi);
        if (f_hi == 0.0) return hi;
        if ((f_lo > 0.0) != (f_hi > 0.0)) {
            boost::uintmax_t iterations = 200;
            const auto [a, b] = boost::math::tools::toms748_solve(
                f, lo, hi, f_lo, f_hi, boost::math::tools::eps_tolerance<double>(50), iterations);
            return 0.5 * (a + b);
        }
        lo = hi;
        f_lo = f_hi;
    }
    throw NumericError("acf_first_null: no sign change within one rotation period", period);
}

FrequencyInterval psd_support(const SwarmParams& params) {
    const auto d = derive(params);
    const double edge = d.half_l * (params.mean_speed + 5.0 * params.speed_std());
    return {-edge, edge};
}

double convention_scale(FourierConvention convention) {
    return convention == FourierConvention::angular ? 1.0 : 1.0 / std::sqrt(kTwoPi);
}

double GaussianKernel::density(double f) const { return mass * gaussian(f - center, std); }

PsdAnalytic build_psd(const AcfAnalytic& acf, FourierConvention convention) {
    const auto& p = acf.params;
    if (!(p.speed_variance > 0.0))
        throw DomainError("build_psd: speed variance is zero, the spectrum is a line spectrum (psd_line_spectrum)");
    PsdAnalytic psd;
    psd.convention = convention;
    psd.convention_constant = convention_scale(convention);
    // Under S(f) = int R e^{ift} dtau a constant maps to 2 pi delta(f) and each
    // 2 c_n cos(...) exp(...) term to two Gaussians of mass 2 pi c_n.
    const double scale = kTwoPi * psd.convention_constant;
    psd.dc_weight = scale * acf.dc_level;
    const double s = p.speed_std();
    psd.kernels.reserve(2 * static_cast<std::size_t>(acf.n_terms));
    for (int n = 1; n <= acf.n_terms; ++n) {
        const double mass = p.rotor_count() * (scale * acf.per_rotor_scale() * acf.coefficients[n - 1]);
        const double center = static_cast<double>(p.n_blades) * n * p.mean_speed;
        const double width = s * n * p.n_blades;
        psd.kernels.push_back({center, width, mass});
        psd.kernels.push_back({-center, width, mass});
    }
    return psd;
}

PsdAnalytic build_psd(const SwarmParams& params, FourierConvention convention) {
    if (!(params.speed_variance > 0.0))
        throw DomainError("build_psd: speed variance is zero, the spectrum is a line spectrum (psd_line_spectrum)");
    return build_psd(build_acf(params), convention);
}

double psd_eval(const PsdAnalytic& psd, double f) {
    const double af = std::abs(f);
    double total = 0.0;
    for (const auto& k : psd.kernels) total += k.density(af);
    return total;
}

std::vector<SpectralLine> psd_line_spectrum(const SwarmParams& params, FourierConvention convention) {
    params.validate();
    if (params.speed_variance != 0.0)
        throw DomainError("psd_line_spectrum: requires zero speed variance; use build_psd");
    const int count = truncation_index(derive(params).l, params.n_blades);
    const auto acf = build_acf(params, count);
    const double scale = kTwoPi * convention_scale(convention);
    std::vector<SpectralLine> lines;
    lines.reserve(2 * static_cast<std::size_t>(count) + 1);
    for (int n = count; n >= 1; --n) {
        const double w = params.rotor_count() * (scale * acf.per_rotor_scale() * acf.coefficients[n - 1]);
        lines.push_back({-static_cast<double>(params.n_blades) * n * params.mean_speed, w});
    }
    lines.push_back({0.0, scale * acf.dc_level});
    for (int n = 1; n <= count; ++n) {
        const double w = params.rotor_count() * (scale * acf.per_rotor_scale() * acf.coefficients[n - 1]);
        lines.push_back({static_cast<double>(params.n_blades) * n * params.mean_speed, w});
    }
    return lines;
}

std::size_t line_component_count(const std::vector<SpectralLine>& lines) {
    return static_cast<std::size_t>(
        std::count_if(lines.begin(), lines.end(), [](const SpectralLine& l) { return l.frequency != 0.0; }));
}

double line_spectrum_bandwidth(const std::vector<SpectralLine>& lines) {
    if (lines.empty()) return 0.0;
    return lines.back().frequency - lines.front().frequency;
}

int coefficient_power_fraction(double l, int n_blades, double fraction, CoefficientOrdering ordering) {
    if (!(fraction > 0.0 && fraction < 1.0))
        throw DomainError("coefficient_power_fraction: fraction must lie in (0, 1)");
    auto c = series_coefficients(l, n_blades, kPowerStudyCoefficients);
    if (ordering == CoefficientOrdering::by_magnitude) std::stable_sort(c.begin(), c.end(), std::greater<>());
    std::vector<double> cumulative(c.size());
    std::partial_sum(c.begin(), c.end(), cumulative.begin());
    const double target = fraction * cumulative.back();
    const auto it = std::lower_bound(cumulative.begin(), cumulative.end(), target);
    return static_cast<int>(it - cumulative.begin()) + 1;
}

}  // namespace swarmdoppler
