#include "doctest.h"

#include <cmath>
#include <numbers>

#include "swarmdoppler/errors.hpp"
#include "swarmdoppler/model.hpp"

using namespace swarmdoppler;

namespace {

std::string failing_field(const SwarmParams& p) {
    try {
        p.validate();
    } catch (const ValidationError& e) {
        return e.field();
    }
    return "";
}

}  // namespace

TEST_CASE("mavic-like preset carries the study's parameters") {
    const auto p = mavic_like();
    CHECK(p.n_drones == 1);
    CHECK(p.n_rotors == 4);
    CHECK(p.n_blades == 2);
    CHECK(p.blade_length == 0.21);
    CHECK(p.wavelength == 0.03);
    CHECK(p.mean_speed == 523.0);
    CHECK(p.speed_variance == 27.0);
    CHECK(p.gain_magnitude == 1.0);
    CHECK_NOTHROW(p.validate());
    CHECK(regime_warnings(p).empty());
}

TEST_CASE("derived quantities") {
    const auto d = derive(mavic_like());
    // 8 pi L / lambda = 56 pi
    CHECK(d.l == doctest::Approx(175.9291886010284213539).epsilon(1e-15));
    CHECK(d.half_l == d.l / 2.0);
    CHECK(max_angular_frequency(mavic_like()) ==
          doctest::Approx(d.half_l * (523.0 + 5.0 * std::sqrt(27.0))).epsilon(1e-15));
    CHECK(max_angular_frequency(mavic_like()) == doctest::Approx(48285.0).epsilon(2e-4));
}

TEST_CASE("validation names the offending field") {
    auto p = mavic_like();
    p.n_blades = 0;
    CHECK(failing_field(p) == "n_blades");
    p = mavic_like();
    p.n_drones = -3;
    CHECK(failing_field(p) == "n_drones");
    p = mavic_like();
    p.wavelength = 0.0;
    CHECK(failing_field(p) == "wavelength_m");
    p = mavic_like();
    p.blade_length = std::nan("");
    CHECK(failing_field(p) == "blade_length_m");
    p = mavic_like();
    p.speed_variance = -1.0;
    CHECK(failing_field(p) == "speed_variance");
    p = mavic_like();
    p.mean_speed = -523.0;
    CHECK(failing_field(p) == "mean_speed_rad_s");
    p = mavic_like();
    p.speed_variance = 0.0;
    CHECK(failing_field(p).empty());
    CHECK_THROWS_AS(derive(SwarmParams{}), ValidationError);
}

TEST_CASE("regime warnings flag long wavelengths and wide speed spreads") {
    auto p = mavic_like();
    p.wavelength = 0.2;
    CHECK(regime_warnings(p).size() == 1);
    p = mavic_like();
    p.speed_variance = 523.0 * 523.0;
    CHECK(regime_warnings(p).size() == 1);
}

TEST_CASE("default grid sits at the Nyquist bound") {
    for (double over : {1.0, 2.0, 3.7}) {
        const auto p = mavic_like();
        const auto g = default_grid(p, over);
        CHECK(g.n_samples == kDefaultSampleCount);
        CHECK(g.t_start == 0.0);
        CHECK(max_angular_frequency(p) * g.dt <= std::numbers::pi / over);
        CHECK(max_angular_frequency(p) * g.dt == doctest::Approx(std::numbers::pi / over).epsilon(1e-14));
        CHECK(satisfies_nyquist(p, g));
    }
    CHECK(default_grid(mavic_like()).dt == doctest::Approx(6.50556e-5).epsilon(1e-5));
    CHECK_THROWS_AS(default_grid(mavic_like(), 0.5), ValidationError);
    CHECK_THROWS_AS(default_grid(mavic_like(), 1.0, 0), ValidationError);
}

TEST_CASE("check_grid enforces the Nyquist guard unless overridden") {
    const auto p = mavic_like();
    auto g = default_grid(p);
    CHECK_NOTHROW(check_grid(p, g, false));
    g.dt *= 1.01;
    CHECK_FALSE(satisfies_nyquist(p, g));
    try {
        check_grid(p, g, false);
        FAIL("expected a ValidationError");
    } catch (const ValidationError& e) {
        CHECK(e.field() == "grid.dt_s");
    }
    CHECK_NOTHROW(check_grid(p, g, true));
    g.n_samples = 0;
    CHECK_THROWS_AS(check_grid(p, g, true), ValidationError);
    CHECK(SamplingGrid{1.0, 0.5, 3}.time(2) == 2.0);
}

TEST_CASE("curves validate their abscissa") {
    CHECK_NOTHROW(make_real_curve(CurveAxis::lag_s, {0.0, 1.0, 2.0}, {3.0, 2.0, 1.0}));
    CHECK_THROWS_AS(make_real_curve(CurveAxis::lag_s, {0.0, 0.0}, {1.0, 1.0}), DomainError);
    CHECK_THROWS_AS(make_real_curve(CurveAxis::lag_s, {0.0, 1.0}, {1.0}), DomainError);
    const auto c = make_real_curve(CurveAxis::time_s, {0.0, 1.0}, {4.0, -5.0});
    CHECK(c.real() == std::vector<double>{4.0, -5.0});
    CHECK_FALSE(c.complex_valued);
    CHECK(to_string(CurveAxis::angular_frequency_rad_per_s) == "angular_frequency_rad_per_s");
}

TEST_CASE("parameter digest is stable and sensitive") {
    const auto a = mavic_like();
    auto b = a;
    CHECK(params_digest(a) == params_digest(b));
    CHECK(params_digest(a).size() == 16);
    b.mean_speed = std::nextafter(b.mean_speed, 1e9);
    CHECK(params_digest(a) != params_digest(b));
}
