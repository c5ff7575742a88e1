#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "swarmdoppler/errors.hpp"
#include "swarmdoppler/special.hpp"

using namespace swarmdoppler;
using special::bessel_j;

namespace {

// Bessel's integral J_n(x) = (1/2pi) int_0^{2pi} cos(n t - x sin t) dt by the
// periodic trapezoid rule, which converges geometrically once the node count
// exceeds n + x by a margin.
double bessel_integral_oracle(int n, double x) {
    const int nodes = 4096;
    double sum = 0.0;
    for (int k = 0; k < nodes; ++k) {
        const double t = 2.0 * std::numbers::pi * k / nodes;
        sum += std::cos(n * t - x * std::sin(t));
    }
    return sum / nodes;
}

bool close(double got, double want, double rel, double abs_floor) {
    return std::abs(got - want) <= rel * std::abs(want) + abs_floor;
}

}  // namespace

TEST_CASE("bessel_j matches frozen high-precision values") {
    struct Case {
        int n;
        double x;
        double want;
    };
    // mpmath at 40 digits, tests/oracles/freeze_values.py
    const Case cases[] = {
        {0, 1.0, 0.7651976865579665514497},
        {1, 0.5, 0.242268457674873886384},
        {5, 0.25, 2.536516158747241486536e-7},
        {10, 3.0, 0.00001292835164571588377753},
        {44, 500.0, 0.002413975508973812866722},
        {44, 1500.0, -0.005109798593694456094204},
        {44, 2000.0, -0.001334061040053853649049},
        {88, 87.96459430051421, 0.09983387933489062857026},
        {300, 87.96459430051421, 4.741415802925066670414e-125},
        {200, 20.0, 7.705086185922221770973e-176},
    };
    for (const auto& c : cases) {
        CAPTURE(c.n);
        CAPTURE(c.x);
        CHECK(close(bessel_j(c.n, c.x), c.want, 1e-12, 0.0));
    }
}

TEST_CASE("bessel_j agrees with Bessel's integral on random orders and arguments") {
    std::mt19937_64 rng(20240611);
    std::uniform_int_distribution<int> order(0, 300);
    std::uniform_real_distribution<double> arg(-200.0, 200.0);
    for (int i = 0; i < 400; ++i) {
        const int n = order(rng);
        const double x = arg(rng);
        CAPTURE(n);
        CAPTURE(x);
        // Relative 1e-12 away from zeros, absolute 1e-14 next to them.
        CHECK(close(bessel_j(n, x), bessel_integral_oracle(n, x), 1e-12, 1e-14));
    }
}

TEST_CASE("bessel_j special arguments and symmetry") {
    CHECK(bessel_j(0, 0.0) == 1.0);
    CHECK(bessel_j(7, 0.0) == 0.0);
    for (int n = 0; n <= 12; ++n) {
        for (double x : {0.3, 4.2, 55.5, 1234.5}) {
            const double parity = (n % 2 == 0) ? 1.0 : -1.0;
            CHECK(bessel_j(n, -x) == parity * bessel_j(n, x));
        }
    }
}

TEST_CASE("three-term recurrence residual is at rounding level") {
    for (double x : {1.5, 17.0, 87.96459430051421, 640.0, 1999.0}) {
        const auto j = special::bessel_j_sequence(static_cast<int>(x) + 80, x);
        for (std::size_t n = 1; n + 1 < j.size(); ++n) {
            const double lhs = j[n - 1] + j[n + 1];
            const double rhs = 2.0 * static_cast<double>(n) / x * j[n];
            const double scale = std::abs(j[n - 1]) + std::abs(j[n + 1]) + std::abs(rhs);
            CAPTURE(x);
            CAPTURE(n);
            CHECK(std::abs(lhs - rhs) <= 1e-12 * scale + 1e-300);
        }
    }
}

TEST_CASE("bessel_j_sequence agrees with single evaluations") {
    for (double x : {0.7, 9.0, 87.96459430051421, 1500.0}) {
        const auto seq = special::bessel_j_sequence(120, x);
        REQUIRE(seq.size() == 121);
        for (int n = 0; n <= 120; ++n) CHECK(close(seq[n], bessel_j(n, x), 1e-13, 1e-15));
    }
}

TEST_CASE("bessel_j_sequence extends past the order envelope without overflow") {
    const auto seq = special::bessel_j_sequence(10000, 87.96459430051421);
    REQUIRE(seq.size() == 10001);
    for (int n = 1000; n <= 10000; ++n) {
        CHECK(std::isfinite(seq[n]));
        CHECK(std::abs(seq[n]) < 1e-280);
    }
}

TEST_CASE("bessel_j refuses requests outside its envelope") {
    CHECK_THROWS_AS(bessel_j(-1, 1.0), DomainError);
    CHECK_THROWS_AS(bessel_j(special::kMaxBesselOrder + 1, 1.0), DomainError);
    CHECK_THROWS_AS(bessel_j(0, special::kMaxBesselArgument * 1.01), DomainError);
    CHECK_THROWS_AS(bessel_j(0, std::nan("")), DomainError);
    CHECK_NOTHROW(bessel_j(special::kMaxBesselOrder, special::kMaxBesselArgument));
}

TEST_CASE("squared Bessel sum is nondecreasing and closes to one") {
    for (double z : {0.5, 10.0, 87.96459430051421, 900.0}) {
        double previous = 0.0;
        for (int terms = 0; terms <= static_cast<int>(z) + 120; ++terms) {
            const double s = special::squared_bessel_sum_check(z, terms);
            CHECK(s >= previous);
            CHECK(s <= 1.0 + 1e-13);
            previous = s;
        }
        CHECK(previous == doctest::Approx(1.0).epsilon(1e-13));
    }
}

TEST_CASE("phase average of J_n vanishes for odd n and matches the closed form for even n") {
    for (double l : {1.0, 10.0, 175.9292}) {
        for (int n = 0; n <= 12; ++n) {
            CAPTURE(l);
            CAPTURE(n);
            const double v = special::expected_bessel_over_phase(n, l);
            if (n % 2 == 1) {
                CHECK(std::abs(v) <= 1e-11);
                CHECK_THROWS_AS(special::appendix_coefficient(n, l), DomainError);
            } else {
                CHECK(std::abs(v - special::appendix_coefficient(n, l)) <= 1e-9);
            }
        }
    }
}

TEST_CASE("closed-form phase average for n = 2 at the study's l") {
    // J_1(l/2)^2 with l = 8 pi 0.21 / 0.03, mpmath
    const double l = 8.0 * std::numbers::pi * 0.21 / 0.03;
    CHECK(special::appendix_coefficient(2, l) == doctest::Approx(0.0035879368030141612627).epsilon(1e-12));
    CHECK_THROWS_AS(special::appendix_coefficient(-2, l), DomainError);
}
