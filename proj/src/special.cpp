#include "swarmdoppler/special.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "swarmdoppler/errors.hpp"

namespace swarmdoppler::special {

namespace {

constexpr double kRescaleAbove = 1e140;
constexpr double kRescaleBy = 1e-140;

void check_argument(double x) {
    if (!std::isfinite(x) || std::abs(x) > kMaxBesselArgument)
        throw DomainError("bessel_j: |x| must be <= " + std::to_string(kMaxBesselArgument) + ", got " +
                          std::to_string(x));
}

// First order at which the downward sweep may start so that the neglected
// tail is below double precision. The decay past the turning point order ~ x
// happens over a width ~ x^(1/3).
int start_order(int max_order, double x) {
    const double top = std::max(static_cast<double>(max_order), std::ceil(x));
    int start = static_cast<int>(top + 30.0 + std::ceil(25.0 * std::cbrt(top)));
    return start + (start & 1);
}

// J_n(x) for 0 < x < 1 from the ascending series. The leading (x/2)^n / n!
// is accumulated with a separate binary exponent so it cannot underflow early.
double ascending_series(int n, double x) {
    const double h = 0.5 * x;
    double mant = 1.0;
    int exp2 = 0;
    for (int k = 1; k <= n; ++k) {
        mant *= h / k;
        int e = 0;
        mant = std::frexp(mant, &e);
        exp2 += e;
    }
    const double q = -h * h;
    double term = 1.0, sum = 1.0;
    for (int k = 1; k < 200; ++k) {
        term *= q / (static_cast<double>(k) * (n + k));
        sum += term;
        if (std::abs(term) < 1e-17 * std::abs(sum)) break;
    }
    return std::ldexp(mant * sum, exp2);
}

}  // namespace

double bessel_j(int n, double x) {
    if (n < 0 || n > kMaxBesselOrder)
        throw DomainError("bessel_j: order must be in [0, " + std::to_string(kMaxBesselOrder) + "], got " +
                          std::to_string(n));
    check_argument(x);
    const double sign = (x < 0.0 && (n & 1)) ? -1.0 : 1.0;
    x = std::abs(x);
    if (x == 0.0) return n == 0 ? 1.0 : 0.0;
    if (x < 1.0) return sign * ascending_series(n, x);

    const int start = start_order(n, x);
    const double two_over_x = 2.0 / x;
    double above = 0.0;
    double cur = 1.0;
    double sum = 0.0;
    double wanted = 0.0;
    for (int k = start; k >= 1; --k) {
        if (k == n) wanted = cur;
        sum += 2.0 * cur * cur;
        const double below = k * two_over_x * cur - above;
        above = cur;
        cur = below;
        if (std::abs(cur) > kRescaleAbove) {
            cur *= kRescaleBy;
            above *= kRescaleBy;
            wanted *= kRescaleBy;
            sum *= kRescaleBy * kRescaleBy;
        }
    }
    if (n == 0) wanted = cur;
    sum += cur * cur;
    return sign * wanted / std::sqrt(sum);
}

std::vector<double> bessel_j_sequence(int max_order, double x) {
    if (max_order < 0) throw DomainError("bessel_j_sequence: max_order must be >= 0");
    check_argument(x);
    std::vector<double> out(static_cast<std::size_t>(max_order) + 1, 0.0);
    const bool odd_flip = x < 0.0;
    x = std::abs(x);
    if (x == 0.0) {
        out[0] = 1.0;
        return out;
    }
    if (x < 1.0) {
        for (int k = 0; k <= max_order; ++k) out[k] = ascending_series(k, x);
    } else {
        std::vector<int> epochs(out.size(), 0);
        const int start = start_order(max_order, x);
        const double two_over_x = 2.0 / x;
        double above = 0.0;
        double cur = 1.0;
        double sum = 0.0;
        int epoch = 0;
        for (int k = start; k >= 1; --k) {
            if (k <= max_order) {
                out[k] = cur;
                epochs[k] = epoch;
            }
            sum += 2.0 * cur * cur;
            const double below = k * two_over_x * cur - above;
            above = cur;
            cur = below;
            if (std::abs(cur) > kRescaleAbove) {
                cur *= kRescaleBy;
                above *= kRescaleBy;
                sum *= kRescaleBy * kRescaleBy;
                ++epoch;
            }
        }
        out[0] = cur;
        epochs[0] = epoch;
        sum += cur * cur;
        const double norm = 1.0 / std::sqrt(sum);
        for (std::size_t k = 0; k < out.size(); ++k) {
            double v = out[k] * norm;
            // Bring values stored before later rescalings into the final scale.
            for (int e = epochs[k]; e < epoch && v != 0.0; ++e) v *= kRescaleBy;
            out[k] = v;
        }
    }
    if (odd_flip)
        for (std::size_t k = 1; k < out.size(); k += 2) out[k] = -out[k];
    return out;
}

double squared_bessel_sum_check(double z, int n_terms) {
    if (!(z >= 0.0)) throw DomainError("squared_bessel_sum_check: z must be >= 0");
    if (n_terms < 0) throw DomainError("squared_bessel_sum_check: n_terms must be >= 0");
    // A fixed sweep depth for every n_terms keeps the partial sums nested, so
    // the result is exactly nondecreasing in n_terms. Orders past the sweep
    // start are below 1e-20 relative and cannot change the sum.
    const int depth = std::min(n_terms, start_order(0, z));
    const auto j = bessel_j_sequence(start_order(0, z), z);
    double tail = 0.0;
    for (int k = 1; k <= depth; ++k) tail += j[k] * j[k];
    return j[0] * j[0] + 2.0 * tail;
}

double expected_bessel_over_phase(int n, double l, double tolerance) {
    if (!(l > 0.0) || !std::isfinite(l)) throw DomainError("expected_bessel_over_phase: l must be > 0");
    if (!(tolerance > 0.0)) throw DomainError("expected_bessel_over_phase: tolerance must be > 0");
    constexpr int kMaxLevel = 22;

    // Running sum of J_0(l cos t) e^{int} over the current trapezoid nodes.
    std::complex<double> total{0.0, 0.0};
    auto add_nodes = [&](std::size_t count, std::size_t stride_offset, std::size_t denom) {
        for (std::size_t j = stride_offset; j < denom; j += count) {
            const double t = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(denom);
            const double f = bessel_j(0, l * std::cos(t));
            total += f * std::polar(1.0, static_cast<double>(n) * t);
        }
    };

    std::size_t nodes = 16;
    add_nodes(1, 0, nodes);
    std::complex<double> previous = total / static_cast<double>(nodes);
    int quiet = 0;
    double diff = 0.0;
    for (int level = 5; level <= kMaxLevel; ++level) {
        const std::size_t refined = nodes * 2;
        add_nodes(2, 1, refined);
        nodes = refined;
        const std::complex<double> current = total / static_cast<double>(nodes);
        diff = std::abs(current - previous);
        previous = current;
        quiet = diff <= tolerance ? quiet + 1 : 0;
        if (quiet >= 2) break;
    }
    if (quiet < 2)
        throw NumericError("expected_bessel_over_phase: trapezoid refinement did not converge", diff);

    // Divide by i^n.
    static constexpr std::complex<double> kInversePowersOfI[4] = {{1, 0}, {0, -1}, {-1, 0}, {0, 1}};
    const std::complex<double> value = previous * kInversePowersOfI[((n % 4) + 4) % 4];
    if (std::abs(value.imag()) > std::max(tolerance, 1e-11))
        throw NumericError("expected_bessel_over_phase: imaginary residue " + std::to_string(value.imag()),
                           std::abs(value.imag()));
    return value.real();
}

double appendix_coefficient(int n, double l) {
    if (n < 0 || (n & 1)) throw DomainError("appendix_coefficient: n must be even and >= 0, got " + std::to_string(n));
    if (!(l > 0.0)) throw DomainError("appendix_coefficient: l must be > 0");
    const double j = bessel_j(n / 2, 0.5 * l);
    return j * j;
}

}  // namespace swarmdoppler::special
