"""End-to-end checks of the swarmdoppler executable: outputs, manifests and exit codes."""

import csv
import hashlib
import json
import math
import subprocess
import sys
import tempfile
from pathlib import Path

BIN = sys.argv[1]
FAILURES = []


def run(*args, expect=0):
    proc = subprocess.run([BIN, *map(str, args)], capture_output=True, text=True)
    if proc.returncode != expect:
        raise AssertionError(
            f"{' '.join(map(str, args))}: exit {proc.returncode}, expected {expect}\n{proc.stdout}{proc.stderr}"
        )
    return proc


def manifest(d):
    return json.loads((Path(d) / "manifest.json").read_text())


def rows(path):
    with open(path, newline="") as f:
        return list(csv.DictReader(f))


def sha256(path):
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def check(name):
    def wrap(fn):
        try:
            with tempfile.TemporaryDirectory() as tmp:
                fn(Path(tmp))
            print(f"ok   {name}")
        except Exception as e:  # noqa: BLE001
            FAILURES.append(name)
            print(f"FAIL {name}: {e}")
        return fn

    return wrap


@check("acf outputs and manifest")
def _(tmp):
    run("--preset", "mavic-like", "--out", tmp, "acf")
    m = manifest(tmp)
    r = m["results"]
    assert m["status"] == "ok" and m["command"] == "acf"
    assert r["truncation_index"] == 44 and r["n_terms"] == 64
    assert abs(r["first_null_s"] - 5.40542e-5) < 1e-9
    assert abs(r["R0"] - 8.340045034754914) < 1e-9
    data = rows(tmp / "acf.csv")
    assert len(data) == 1001
    assert abs(float(data[0]["y_re"]) - r["R0"]) < 1e-12
    for out in m["outputs"]:
        assert sha256(tmp / out["path"]) == out["sha256"], out["path"]


@check("acf at a single lag")
def _(tmp):
    run("--preset", "mavic-like", "--out", tmp, "acf", "--tau-max", 0)
    data = rows(tmp / "acf.csv")
    assert len(data) == 1 and float(data[0]["x"]) == 0.0


@check("acf json format")
def _(tmp):
    run("--preset", "mavic-like", "--format", "json", "--out", tmp, "acf", "--points", 3)
    doc = json.loads((tmp / "acf.json").read_text())
    assert len(doc["x"]) == 3 and doc["axis"] == "lag_s"


@check("psd support and kernels")
def _(tmp):
    run("--preset", "mavic-like", "--out", tmp, "psd")
    r = manifest(tmp)["results"]
    lo, hi = r["support_rad_s"]
    assert lo == -hi and abs(hi - 48290.9) < 1.0
    kernels = rows(tmp / "kernels.csv")
    for k in kernels:
        n = int(k["n"])
        assert abs(float(k["center_rad_s"]) - 1046 * n) < 1e-9
        assert abs(float(k["std_rad_s"]) - math.sqrt(27) * 2 * n) < 1e-9
    curve = rows(tmp / "psd.csv")
    assert len(curve) == 4001
    assert abs(float(curve[0]["x"]) - lo) < 1e-6


@check("plots are deterministic")
def _(tmp):
    run("--preset", "mavic-like", "--out", tmp / "a", "psd")
    run("--preset", "mavic-like", "--out", tmp / "b", "psd")
    assert sha256(tmp / "a" / "psd.svg") == sha256(tmp / "b" / "psd.svg")
    assert (tmp / "a" / "psd.svg").read_text().startswith("<svg")


@check("simulate is reproducible and replayable")
def _(tmp):
    run("--preset", "mavic-like", "--seed", 11, "--out", tmp / "a", "simulate", "-n", 2)
    run("--preset", "mavic-like", "--seed", 11, "--out", tmp / "b", "simulate", "-n", 2, "--workers", 1)
    run("--out", tmp / "c", "rerun", tmp / "a" / "manifest.json")
    digest = sha256(tmp / "a" / "ensemble.swde")
    assert digest == sha256(tmp / "b" / "ensemble.swde")
    assert digest == sha256(tmp / "c" / "ensemble.swde")
    recorded = {o["path"]: o["sha256"] for o in manifest(tmp / "a")["outputs"]}
    assert recorded["ensemble.swde"] == digest
    run("--preset", "mavic-like", "--seed", 12, "--out", tmp / "d", "simulate", "-n", 2)
    assert sha256(tmp / "d" / "ensemble.swde") != digest


@check("simulate complex64 and spectrogram")
def _(tmp):
    run("--preset", "mavic-like", "--out", tmp, "simulate", "-n", 1, "--precision", "complex64", "--spectrogram")
    size64 = (tmp / "ensemble.swde").stat().st_size
    run("--preset", "mavic-like", "--out", tmp / "w", "simulate", "-n", 1)
    size128 = (tmp / "w" / "ensemble.swde").stat().st_size
    assert abs(size128 - size64 - 4001 * 8) < 16
    assert (tmp / "spectrogram.svg").exists()


@check("validate below threshold exits 5 with a report")
def _(tmp):
    proc = run("--preset", "mavic-like", "--out", tmp, "validate", "-n", 10, expect=5)
    assert "insufficient N" in proc.stdout
    report = json.loads((tmp / "report.json").read_text())
    assert report["acf"]["nrmse"] > 0.05
    m = manifest(tmp)
    assert m["status"] == "threshold_failed"
    assert any("insufficient N" in w for w in m["warnings"])


@check("coeffs for a small argument")
def _(tmp):
    cfg = {
        "n_drones": 1, "n_rotors": 1, "n_blades": 1, "blade_length_m": 2 * 0.03 / (8 * math.pi),
        "wavelength_m": 0.03, "mean_speed_rad_s": 100, "speed_variance": 1, "gain_magnitude": 1,
    }
    (tmp / "cfg.json").write_text(json.dumps(cfg))
    run("--config", tmp / "cfg.json", "--out", tmp / "o", "coeffs")
    r = manifest(tmp / "o")["results"]
    assert abs(r["l"] - 2.0) < 1e-12
    assert len(r["series"]) == 2


@check("power fractions grow with the target")
def _(tmp):
    run("--preset", "mavic-like", "--out", tmp, "coeffs")
    table = rows(tmp / "power_fraction.csv")
    by_l = {}
    for row in table:
        by_l.setdefault(row["l"], []).append(row)
    assert len(by_l) == 3
    for entries in by_l.values():
        counts = [int(e["count_by_magnitude"]) for e in sorted(entries, key=lambda e: float(e["fraction"]))]
        assert counts == sorted(counts)
        for e in entries:
            assert int(e["count_by_magnitude"]) <= int(e["count_by_index"])


@check("exit codes")
def _(tmp):
    run("--config", tmp / "missing.json", "acf", expect=2)
    (tmp / "bad.json").write_text('{"n_drones": 1')
    run("--config", tmp / "bad.json", "acf", expect=3)
    (tmp / "neg.json").write_text(json.dumps({
        "n_drones": 1, "n_rotors": 4, "n_blades": 2, "blade_length_m": -1, "wavelength_m": 0.03,
        "mean_speed_rad_s": 523, "speed_variance": 27, "gain_magnitude": 1,
    }))
    proc = run("--config", tmp / "neg.json", "acf", expect=3)
    assert "blade_length_m" in proc.stderr
    run("acf", expect=1)
    run("--preset", "mavic-like", "coeffs", "--count", 0, expect=1)
    run("--preset", "mavic-like", "--format", "xml", "acf", expect=1)
    (tmp / "file").write_text("")
    run("--preset", "mavic-like", "--out", tmp / "file" / "sub", "acf", expect=4)
    run("--help")


if FAILURES:
    print(f"{len(FAILURES)} check(s) failed")
    sys.exit(1)
print("all CLI checks passed")
