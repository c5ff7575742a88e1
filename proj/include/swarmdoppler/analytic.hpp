#pragma once

#include <optional>
#include <span>
#include <vector>

#include "swarmdoppler/model.hpp"

namespace swarmdoppler {

/// Closed-form autocorrelation of the swarm return,
///
///   R(tau) = |g|^2 N_d N_r N_b^2 [ J_0^2(l/2)
///            + 2 sum_{n=1}^{n_terms} c_n cos(N_b n w tau) exp(-s^2 tau^2 n^2 N_b^2 / 2) ],
///
/// with c_n = J_{N_b n}^2(l/2), w the mean rotor speed and s^2 its variance.
struct AcfAnalytic {
    SwarmParams params;
    DerivedParams derived;
    int truncation = 0;  // truncation_index(l, N_b)
    int n_terms = 0;
    double c0 = 0.0;                    // J_0^2(l/2)
    std::vector<double> coefficients;   // c_1 .. c_{n_terms}
    double dc_level = 0.0;              // |g|^2 N_d N_r N_b^2 c0, the limit of R(tau) for large tau

    /// |g|^2 N_b^2; the N_d N_r factor is applied last so that scaling the
    /// rotor count scales every value exactly.
    double per_rotor_scale() const;
    double coefficient(int n) const { return n == 0 ? c0 : coefficients.at(static_cast<std::size_t>(n - 1)); }
};

/// ceil(l / (2 N_b)): the harmonic index past which J_{N_b n}^2(l/2) has
/// collapsed, because J_v(z) is negligible for orders v beyond z.
int truncation_index(double l, int n_blades);

/// Extra series terms kept beyond the truncation index.
int series_margin(int truncation);

/// c_n = J_{N_b n}^2(l/2) for n = 1..count.
std::vector<double> series_coefficients(double l, int n_blades, int count);

AcfAnalytic build_acf(const SwarmParams& params, std::optional<int> n_terms = std::nullopt);

double acf_eval(const AcfAnalytic& acf, double tau);
std::vector<double> acf_eval(const AcfAnalytic& acf, std::span<const double> taus);

/// Exact finite form for a deterministic rotor speed (variance ignored):
/// |g|^2 N_d N_r sum_{b,b'} J_0(l sin(w tau / 2 - pi (b - b') / N_b)).
double acf_deterministic_eval(const SwarmParams& params, double tau);

/// Literal 4.8 / (l w) approximation of the ACF main lobe.
double mainlobe_width(const SwarmParams& params);

/// First positive lag at which the deterministic-speed ACF crosses zero,
/// located by bracketing and root refinement.
double acf_first_null(const SwarmParams& params);

struct FrequencyInterval {
    double lower = 0.0;  // rad/s
    double upper = 0.0;

    bool contains(double f) const { return f >= lower && f <= upper; }
    double width() const { return upper - lower; }
};

/// (l/2)[-w - 5s, w + 5s] in rad/s.
FrequencyInterval psd_support(const SwarmParams& params);

/// Normalization of the transform pair relating R(tau) and S(f).
enum class FourierConvention {
    angular,          // S(f) = int R(tau) e^{i f tau} dtau
    angular_unitary,  // same with a 1/sqrt(2 pi) prefactor
};

double convention_scale(FourierConvention convention);

struct GaussianKernel {
    double center = 0.0;  // rad/s
    double std = 0.0;     // rad/s
    double mass = 0.0;    // integral of the kernel over f

    double density(double f) const;
};

/// PSD as a Dirac mass at DC plus a symmetric mixture of Gaussian kernels:
/// harmonic n contributes kernels at +-N_b n w with standard deviation
/// s n N_b and mass proportional to c_n (its peak height goes as c_n / n).
struct PsdAnalytic {
    double dc_weight = 0.0;
    std::vector<GaussianKernel> kernels;  // (+center, -center) pairs, harmonic order ascending
    double convention_constant = 1.0;
    FourierConvention convention = FourierConvention::angular;

    std::size_t harmonic_count() const { return kernels.size() / 2; }
};

/// Throws DomainError when the speed variance is zero; use psd_line_spectrum.
PsdAnalytic build_psd(const SwarmParams& params, FourierConvention convention = FourierConvention::angular);
PsdAnalytic build_psd(const AcfAnalytic& acf, FourierConvention convention = FourierConvention::angular);

/// Continuous part of the PSD at angular frequency f; the DC mass is not included.
double psd_eval(const PsdAnalytic& psd, double f);

struct SpectralLine {
    double frequency = 0.0;  // rad/s
    double weight = 0.0;
};

/// Zero-variance limit: Dirac lines at 0 and +-N_b n w for n = 1..truncation_index,
/// sorted by frequency. Counting each +- line as its own component and leaving
/// out DC gives 2 * truncation_index components, about l / N_b (see
/// line_component_count). Throws DomainError unless the speed variance is zero.
std::vector<SpectralLine> psd_line_spectrum(const SwarmParams& params,
                                            FourierConvention convention = FourierConvention::angular);

std::size_t line_component_count(const std::vector<SpectralLine>& lines);

/// Span between the outermost lines, which approaches B = l w.
double line_spectrum_bandwidth(const std::vector<SpectralLine>& lines);

enum class CoefficientOrdering { by_magnitude, by_index };

inline constexpr int kPowerStudyCoefficients = 10000;

/// Smallest k whose first k coefficients (c_1..c_10000, taken in the given
/// order) hold at least `fraction` of their total power.
int coefficient_power_fraction(double l, int n_blades, double fraction,
                               CoefficientOrdering ordering = CoefficientOrdering::by_magnitude);

}  // namespace swarmdoppler
