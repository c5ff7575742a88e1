#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <vector>

#include "swarmdoppler/analytic.hpp"
#include "swarmdoppler/errors.hpp"
#include "swarmdoppler/special.hpp"

using namespace swarmdoppler;

namespace {

SwarmParams random_params(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> small(1, 4);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    SwarmParams p;
    p.n_drones = small(rng);
    p.n_rotors = small(rng);
    p.n_blades = small(rng);
    p.blade_length = 0.05 + 0.25 * u(rng);
    p.wavelength = 0.01 + 0.03 * u(rng);
    p.mean_speed = 200.0 + 600.0 * u(rng);
    p.speed_variance = 100.0 * u(rng);
    p.gain_magnitude = 0.1 + 2.0 * u(rng);
    return p;
}

bool within_ulps(double a, double b, double ulps) {
    return std::abs(a - b) <= ulps * std::numeric_limits<double>::epsilon() * std::max(std::abs(a), std::abs(b));
}

}  // namespace

TEST_CASE("series layout for the study parameters") {
    const auto acf = build_acf(mavic_like());
    CHECK(acf.truncation == 44);
    CHECK(acf.n_terms == 64);
    CHECK(acf.coefficients.size() == 64);
    CHECK(truncation_index(2.0, 1) == 1);
    CHECK(series_margin(44) == 20);
    CHECK(series_margin(500) == 100);
    CHECK_THROWS_AS(truncation_index(0.0, 2), DomainError);
    CHECK_THROWS_AS(truncation_index(1.0, 0), DomainError);
    CHECK(build_acf(mavic_like(), 5).coefficients.size() == 5);
    CHECK_THROWS_AS(build_acf(mavic_like(), -1), DomainError);
}

TEST_CASE("coefficients match frozen high-precision values") {
    const auto acf = build_acf(mavic_like());
    // mpmath at 40 digits, tests/oracles/freeze_values.py
    CHECK(acf.c0 == doctest::Approx(0.003608271838833803491967).epsilon(1e-11));
    CHECK(acf.dc_level == doctest::Approx(0.05773234942134085587148).epsilon(1e-11));
    CHECK(acf.coefficient(1) == doctest::Approx(0.003773741976176606042284).epsilon(1e-11));
    CHECK(acf.coefficient(10) == doctest::Approx(0.00004083465534679677489615).epsilon(1e-10));
    CHECK(acf.coefficient(44) == doctest::Approx(0.0099668034630535161602).epsilon(1e-11));
    CHECK(acf.coefficient(45) == doctest::Approx(0.003683557027174099813016).epsilon(1e-11));
    CHECK(acf.coefficient(48) == doctest::Approx(0.0000411841614834404888962).epsilon(1e-10));
    CHECK(acf.coefficient(60) == doctest::Approx(5.340380387664161380913e-19).epsilon(1e-9));
}

TEST_CASE("coefficients equal squared Bessel values of order N_b n") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 10; ++trial) {
        const auto p = random_params(rng);
        const auto acf = build_acf(p);
        for (int n = 1; n <= acf.n_terms; ++n) {
            const double j = special::bessel_j(p.n_blades * n, acf.derived.half_l);
            CHECK(acf.coefficient(n) == doctest::Approx(j * j).epsilon(1e-12));
        }
    }
}

TEST_CASE("truncation is sound: half again as many terms changes nothing") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        const auto p = random_params(rng);
        const auto acf = build_acf(p);
        const auto longer = build_acf(p, acf.n_terms + (acf.n_terms + 1) / 2);
        const double r0 = acf_eval(acf, 0.0);
        for (int i = 0; i <= 400; ++i) {
            const double t = i * 0.25 * mainlobe_width(p);
            CHECK(std::abs(acf_eval(longer, t) - acf_eval(acf, t)) <= 1e-9 * r0);
        }
    }
}

TEST_CASE("squared Bessel sum reference points") {
    CHECK(special::squared_bessel_sum_check(0.0, 5) == 1.0);
    CHECK(std::abs(special::squared_bessel_sum_check(87.9646, 200) - 1.0) <= 1e-10);
    CHECK(std::abs(special::squared_bessel_sum_check(1.0, 30) - 1.0) <= 1e-12);
}

TEST_CASE("R(0) closes the Bessel sum rule") {
    // J_0^2 + 2 sum_n J_{N_b n}^2(z) = (1/N_b) sum_k J_0(2 z sin(pi k / N_b)).
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 20; ++trial) {
        const auto p = random_params(rng);
        const auto acf = build_acf(p);
        double ring = 0.0;
        for (int k = 0; k < p.n_blades; ++k)
            ring += special::bessel_j(0, acf.derived.l * std::sin(std::numbers::pi * k / p.n_blades));
        const double want = p.gain_power() * p.rotor_count() * p.n_blades * ring;
        CHECK(acf_eval(acf, 0.0) == doctest::Approx(want).epsilon(1e-12));
    }
    // 8 (1 + J_0(l)) for the study parameters
    CHECK(acf_eval(build_acf(mavic_like()), 0.0) == doctest::Approx(8.340045034754913921533).epsilon(1e-12));
    CHECK(acf_deterministic_eval(mavic_like(), 0.0) == doctest::Approx(8.340045034754913921533).epsilon(1e-12));
}

TEST_CASE("ACF is even, bounded by R(0) and settles to the DC level") {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> lag(-0.05, 0.05);
    for (int trial = 0; trial < 20; ++trial) {
        auto p = random_params(rng);
        p.speed_variance = std::max(p.speed_variance, 1.0);
        const auto acf = build_acf(p);
        const double r0 = acf_eval(acf, 0.0);
        for (int i = 0; i < 200; ++i) {
            const double t = lag(rng);
            CHECK(acf_eval(acf, t) == acf_eval(acf, -t));
            CHECK(std::abs(acf_eval(acf, t)) <= r0 * (1.0 + 1e-12));
        }
        const double far = 40.0 / (p.speed_std() * p.n_blades);
        CHECK(acf_eval(acf, far) == doctest::Approx(acf.dc_level).epsilon(1e-12));
    }
}

TEST_CASE("zero speed spread reproduces the deterministic finite form") {
    std::mt19937_64 rng(33);
    for (int trial = 0; trial < 10; ++trial) {
        auto p = random_params(rng);
        p.speed_variance = 0.0;
        const auto acf = build_acf(p);
        const double r0 = acf_eval(acf, 0.0);
        const double span = 10.0 * mainlobe_width(p);
        for (int i = 0; i <= 200; ++i) {
            const double t = span * i / 200.0;
            CHECK(std::abs(acf_eval(acf, t) - acf_deterministic_eval(p, t)) <= 1e-9 * r0);
        }
    }
}

TEST_CASE("main lobe width and first null") {
    const auto p = mavic_like();
    const double l = derive(p).l;
    CHECK(mainlobe_width(p) == 4.8 / (l * 523.0));
    const double null = acf_first_null(p);
    CHECK(null == doctest::Approx(5.40542e-5).epsilon(1e-5));
    CHECK(std::abs(acf_deterministic_eval(p, null)) <= 1e-9 * acf_deterministic_eval(p, 0.0));
    CHECK(acf_deterministic_eval(p, 0.99 * null) > 0.0);
    CHECK(acf_deterministic_eval(p, 1.01 * null) < 0.0);

    auto q = p;
    q.mean_speed *= 2.0;
    CHECK(acf_first_null(q) == doctest::Approx(null / 2.0).epsilon(1e-9));
}

TEST_CASE("PSD kernels sit at the harmonics with the expected widths and masses") {
    const auto p = mavic_like();
    const auto acf = build_acf(p);
    const auto psd = build_psd(acf);
    REQUIRE(psd.harmonic_count() == 64);
    CHECK(psd.convention == FourierConvention::angular);
    CHECK(psd.convention_constant == 1.0);
    for (int n = 1; n <= 64; ++n) {
        const auto& plus = psd.kernels[2 * (n - 1)];
        const auto& minus = psd.kernels[2 * (n - 1) + 1];
        CHECK(plus.center == doctest::Approx(1046.0 * n).epsilon(1e-15));
        CHECK(minus.center == -plus.center);
        CHECK(plus.std == doctest::Approx(std::sqrt(27.0) * n * 2).epsilon(1e-15));
        CHECK(plus.mass == minus.mass);
        CHECK(plus.mass == doctest::Approx(2.0 * std::numbers::pi * 16.0 * acf.coefficient(n)).epsilon(1e-14));
    }
    CHECK(psd.dc_weight == doctest::Approx(2.0 * std::numbers::pi * acf.dc_level).epsilon(1e-15));
}

TEST_CASE("total spectral mass equals 2 pi R(0)") {
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 20; ++trial) {
        auto p = random_params(rng);
        p.speed_variance = std::max(p.speed_variance, 1.0);
        const auto acf = build_acf(p);
        const auto psd = build_psd(acf);
        double mass = psd.dc_weight;
        for (const auto& k : psd.kernels) mass += k.mass;
        CHECK(mass == doctest::Approx(2.0 * std::numbers::pi * acf_eval(acf, 0.0)).epsilon(1e-12));
    }
}

TEST_CASE("PSD density is even, nonnegative and integrates to the kernel mass") {
    const auto psd = build_psd(mavic_like());
    for (double f : {0.0, 10.0, 1046.0, 5000.5, 48000.0}) {
        CHECK(psd_eval(psd, f) == psd_eval(psd, -f));
        CHECK(psd_eval(psd, f) >= 0.0);
    }
    // Riemann sum around the first harmonic only.
    const auto& k = psd.kernels[0];
    double integral = 0.0;
    const double df = k.std / 50.0;
    for (double f = k.center - 12 * k.std; f <= k.center + 12 * k.std; f += df) integral += k.density(f) * df;
    CHECK(integral == doctest::Approx(k.mass).epsilon(1e-10));
}

TEST_CASE("unitary convention rescales every weight") {
    const auto a = build_psd(mavic_like(), FourierConvention::angular);
    const auto u = build_psd(mavic_like(), FourierConvention::angular_unitary);
    const double s = 1.0 / std::sqrt(2.0 * std::numbers::pi);
    CHECK(u.convention_constant == doctest::Approx(s).epsilon(1e-15));
    CHECK(u.dc_weight == doctest::Approx(a.dc_weight * s).epsilon(1e-15));
    CHECK(psd_eval(u, 2092.0) == doctest::Approx(psd_eval(a, 2092.0) * s).epsilon(1e-14));
}

TEST_CASE("support interval") {
    const auto s = psd_support(mavic_like());
    CHECK(s.upper == -s.lower);
    CHECK(s.upper == doctest::Approx(48285.0).epsilon(2e-4));
    CHECK(s.contains(0.0));
    CHECK_FALSE(s.contains(48300.0));
    CHECK(s.width() == 2.0 * s.upper);
}

TEST_CASE("zero variance has a line spectrum instead of a density") {
    auto p = mavic_like();
    p.speed_variance = 0.0;
    CHECK_THROWS_AS(build_psd(p), DomainError);
    const auto lines = psd_line_spectrum(p);
    CHECK(lines.size() == 89);
    CHECK(line_component_count(lines) == 88);
    const double l = derive(p).l;
    CHECK(std::abs(static_cast<double>(line_component_count(lines)) - l / p.n_blades) <= 1.0);
    CHECK(std::is_sorted(lines.begin(), lines.end(),
                         [](const SpectralLine& a, const SpectralLine& b) { return a.frequency < b.frequency; }));
    CHECK(lines.front().frequency == -44 * 1046.0);
    CHECK(line_spectrum_bandwidth(lines) == doctest::Approx(l * 523.0).epsilon(1e-3));
    CHECK_THROWS_AS(psd_line_spectrum(mavic_like()), DomainError);
}

TEST_CASE("smallest line spectrum: l = 2, one blade") {
    SwarmParams p;
    p.wavelength = 1.0;
    p.blade_length = 1.0 / (4.0 * std::numbers::pi);
    p.mean_speed = 1.0;
    const auto lines = psd_line_spectrum(p);
    REQUIRE(lines.size() == 3);
    CHECK(lines[0].frequency == -1.0);
    CHECK(lines[1].frequency == 0.0);
    CHECK(lines[2].frequency == 1.0);
    CHECK(truncation_index(2.0, 1) == 1);
    CHECK(truncation_index(derive(p).l, 1) == 1);
}

TEST_CASE("power concentration of the coefficients") {
    const double l = derive(mavic_like()).l;
    // Counts fixed by direct evaluation of J_{2n}^2(l/2), n = 1..10000.
    CHECK(coefficient_power_fraction(l, 2, 0.5) == 11);
    CHECK(coefficient_power_fraction(l, 2, 0.9) == 28);
    CHECK(coefficient_power_fraction(l, 2, 0.95) == 32);
    CHECK(coefficient_power_fraction(l, 2, 0.99) == 40);
    CHECK(coefficient_power_fraction(l, 2, 0.5, CoefficientOrdering::by_index) == 31);
    CHECK(coefficient_power_fraction(l, 2, 0.99, CoefficientOrdering::by_index) == 45);
    int previous = 0;
    for (double f : {0.1, 0.3, 0.5, 0.7, 0.9, 0.95, 0.99, 0.999}) {
        const int k = coefficient_power_fraction(l, 2, f);
        CHECK(k >= previous);
        previous = k;
    }
    CHECK_THROWS_AS(coefficient_power_fraction(l, 2, 0.0), DomainError);
    CHECK_THROWS_AS(coefficient_power_fraction(l, 2, 1.0), DomainError);
}

TEST_CASE("ACF and PSD scale with the rotor count and the gain power") {
    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 20; ++trial) {
        auto p = random_params(rng);
        p.speed_variance = std::max(p.speed_variance, 1.0);
        auto q = p;
        q.n_drones *= 3;
        q.n_rotors *= 2;
        auto g = p;
        g.gain_magnitude *= 2.0;
        const auto a = build_acf(p), b = build_acf(q), c = build_acf(g);
        for (double t : {0.0, 1e-5, 3.3e-4, 2e-2}) {
            CHECK(within_ulps(acf_eval(b, t), 6.0 * acf_eval(a, t), 4.0));
            CHECK(within_ulps(acf_eval(c, t), 4.0 * acf_eval(a, t), 4.0));
        }
        const auto pa = build_psd(a), pb = build_psd(b);
        for (double f : {0.0, 700.0, 2000.0}) {
            // Subnormal densities carry fewer than 53 bits and cannot scale exactly.
            if (psd_eval(pa, f) < std::numeric_limits<double>::min()) continue;
            CHECK(within_ulps(psd_eval(pb, f), 6.0 * psd_eval(pa, f), 16.0));
        }
    }
}
