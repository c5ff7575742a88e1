#pragma once

#include <vector>

namespace swarmdoppler::special {

/// Accuracy envelope for bessel_j. Requests outside it are refused.
inline constexpr int kMaxBesselOrder = 3000;
inline constexpr double kMaxBesselArgument = 2000.0;

/// Integer-order Bessel function of the first kind, J_n(x).
///
/// Uses the ascending series for |x| < 1 and Miller's downward recurrence,
/// normalized by J_0^2 + 2 sum J_k^2 = 1, otherwise. Relative error is
/// about 1e-13 away from the zeros of J_n; throws DomainError outside
/// 0 <= n <= kMaxBesselOrder, |x| <= kMaxBesselArgument.
double bessel_j(int n, double x);

/// J_0(x), ..., J_{max_order}(x) from a single downward sweep.
///
/// max_order may exceed kMaxBesselOrder: for |x| within the envelope those
/// orders have magnitudes below 1e-280 and are returned as computed (often 0).
std::vector<double> bessel_j_sequence(int max_order, double x);

/// J_0(z)^2 + 2 sum_{k=1}^{n_terms} J_k(z)^2. Tends to 1 as n_terms grows.
double squared_bessel_sum_check(double z, int n_terms);

/// E[J_n(l sin phi)] for phi ~ U[0, 2pi), computed as the n-th Fourier
/// coefficient (1 / (2 pi i^n)) int_0^{2pi} J_0(l cos t) e^{int} dt by a
/// periodic trapezoid rule refined by doubling until two successive
/// refinements agree to `tolerance`.
///
/// Throws NumericError if refinement stalls or a non-negligible imaginary
/// part survives.
double expected_bessel_over_phase(int n, double l, double tolerance = 1e-11);

/// Closed form of expected_bessel_over_phase for even n: J_{n/2}(l/2)^2.
/// Throws DomainError for odd or negative n.
double appendix_coefficient(int n, double l);

}  // namespace swarmdoppler::special
