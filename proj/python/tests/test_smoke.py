import json
import math

import numpy as np
import pytest

import swarmdoppler as sd


@pytest.fixture
def params():
    return sd.mavic_like()


def test_reference_parameters(params):
    assert params.n_rotors == 4 and params.n_blades == 2
    assert params.l == pytest.approx(175.929188601028, rel=1e-13)
    assert sd.truncation_index(params.l, params.n_blades) == 44


def test_acf_at_zero_lag(params):
    r0 = sd.acf(params, np.array([0.0]))[0]
    assert r0 == pytest.approx(8 * (1 + sd.bessel_j(0, params.l)), rel=1e-12)
    summary = sd.acf_summary(params)
    assert summary["n_terms"] == 64
    assert summary["first_null"] == pytest.approx(5.40542e-5, rel=1e-5)


def test_acf_is_even(params):
    tau = np.linspace(0, 1e-3, 50)
    assert np.array_equal(sd.acf(params, tau), sd.acf(params, -tau))


def test_psd_support_and_mass(params):
    lo, hi = sd.psd_support(params)
    assert lo == -hi and hi == pytest.approx(48290.9, abs=1.0)
    k = sd.psd_kernels(params)
    r0 = sd.acf(params, [0.0])[0]
    assert k["dc_weight"] + k["mass"].sum() == pytest.approx(2 * math.pi * r0, rel=1e-10)
    assert np.all(sd.psd(params, np.linspace(lo, hi, 101)) >= 0)


def test_zero_spread_has_lines(params):
    params.speed_variance = 0.0
    f, w = sd.psd_lines(params)
    assert np.count_nonzero(f) == 88 and np.all(w > 0)
    with pytest.raises(sd.DomainError):
        sd.psd(params, [0.0])
    tau = np.linspace(0, 5e-4, 20)
    assert np.allclose(sd.acf(params, tau), sd.acf_deterministic(params, tau), atol=1e-9)


def test_simulation_is_reproducible(params):
    grid = sd.default_grid(params, n_samples=256)
    a = sd.simulate(params, grid, 4, seed=3, workers=1)
    b = sd.simulate(params, grid, 4, seed=3, workers=4)
    assert a.shape == (4, 256) and a.dtype == np.complex128
    assert np.array_equal(a, b)
    assert not np.array_equal(a, sd.simulate(params, grid, 4, seed=4))


def test_estimator_converges(params):
    grid = sd.default_grid(params, n_samples=64)
    est = sd.estimate_acf(params, grid, 2000, seed=1, max_lag=10)
    ref = sd.acf(params, est["x"])
    err = np.sqrt(np.mean((est["y"].real - ref) ** 2)) / ref[0]
    assert err < 0.1


def test_ensemble_round_trip(params, tmp_path):
    grid = sd.default_grid(params, n_samples=32)
    sig = sd.simulate(params, grid, 3, seed=9)
    path = str(tmp_path / "e.swde")
    sd.write_ensemble(path, params, grid, 9, sig)
    back = sd.read_ensemble(path)
    assert back["params"] == params and back["grid"] == grid and back["seed"] == 9
    assert np.array_equal(back["signals"], sig)


def test_config_and_errors():
    cfg = {
        "n_drones": 2, "n_rotors": 4, "n_blades": 2, "blade_length_m": 0.21, "wavelength_m": 0.03,
        "mean_speed_rad_s": 523, "speed_variance": 27, "gain_magnitude": 1,
    }
    out = sd.load_config(json.dumps(cfg))
    assert out["params"].n_drones == 2 and out["grid"].n_samples == 4001
    with pytest.raises(sd.ValidationError, match="wavelength"):
        sd.SwarmParams(n_drones=1, n_rotors=1, n_blades=1, blade_length=0.2, wavelength=-1,
                       mean_speed=100, speed_variance=1)
    with pytest.raises(sd.ConfigError):
        sd.load_config("{")


def test_bessel_values():
    assert sd.bessel_j(44, 500.0) == pytest.approx(0.002413975508973812866722, rel=1e-12)
    seq = sd.bessel_j_sequence(10, 3.0)
    assert seq[3] == pytest.approx(sd.bessel_j(3, 3.0), rel=1e-14)
