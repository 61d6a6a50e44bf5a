import math
import os
import subprocess

import numpy as np
import pytest

import pockets


def test_block_coefficients():
    assert pockets.block_coeff(0, 0.3) == pytest.approx(0.3)
    assert abs(pockets.block_coeff(1, 0.5) - (-1j / math.pi)) < 1e-15
    assert pockets.block_coeff(2, 0.5) == 0


def test_forcing_endpoints():
    summer = pockets.SeasonalForcing(lam=1.0)
    winter = pockets.SeasonalForcing(lam=0.0)
    for t in (0.0, 0.3, 0.8):
        assert pockets.eval_forcing(t, summer) == pytest.approx(1.0, abs=1e-10)
        assert abs(pockets.eval_forcing(t, winter)) < 1e-10


def test_invalid_forcing_raises():
    with pytest.raises(ValueError):
        pockets.SeasonalForcing(lam=1.5)
    with pytest.raises(ValueError):
        pockets.OscillatorParams(p=2, q=4)


def test_map_is_a_lift():
    params = pockets.OscillatorParams(eta=0.15, eps=0.1)
    xs = np.linspace(-1.0, 1.0, 9)
    diff = pockets.poincare_map(xs + 1.0, params) - pockets.poincare_map(xs, params)
    assert np.max(np.abs(diff - 1.0)) < 1e-9


def test_rigid_rotation():
    params = pockets.OscillatorParams(eta=0.0, eps=0.0)
    params.omega = 0.37
    assert pockets.rotation_number(params) == pytest.approx(0.37, abs=1e-6)


def test_tongue_prediction_matches_measurement():
    params = pockets.OscillatorParams(eta=0.1, eps=0.1)
    lo, hi = pockets.predicted_boundaries(params, 0.5)
    measured = pockets.measure_width(0.5, params)
    assert measured is not None
    assert abs((measured[1] - measured[0]) - (hi - lo)) / (hi - lo) < 0.05

    params.sigma = 0.5 * (lo + hi)
    result = pockets.entrainment_test(params)
    assert result["entrained"]
    assert result["witness"] is not None


def test_normal_form_drift():
    rf = pockets.seasonal_normal_form(pockets.OscillatorParams(eta=0.1, eps=0.1))
    assert rf.second_order_drift == pytest.approx(-0.005, abs=1e-14)
    assert rf.mean_drift == pytest.approx(0.05, abs=1e-14)
    assert abs(rf.coupling[1]) == pytest.approx(0.01 * math.exp(-math.pi**2 / 50) / (2 * math.pi), abs=1e-14)


def test_custom_nonlinearity_roundtrip():
    params = pockets.OscillatorParams()
    params.nonlinearity = {1: 0.2 - 0.5j, 2: 0.1j}
    coeffs = params.nonlinearity
    assert coeffs[-1] == pytest.approx(0.2 + 0.5j)
    assert coeffs[2] == pytest.approx(0.1j)


def test_pocket_counts():
    plain = pockets.SeasonalForcing()
    assert [pockets.pocket_count(p, plain) for p in (1, 2, 3)] == [1, 2, 3]
    assert pockets.pocket_count(2, pockets.SeasonalForcing(beta=0.3)) == 1


def test_scan_shapes_and_threads():
    params = pockets.OscillatorParams(eta=0.1, eps=0.1)
    one = pockets.scan(params, "omega", 0.9, 1.0, 7, "lambda", 0.0, 1.0, 3, jobs=1)
    many = pockets.scan(params, "omega", 0.9, 1.0, 7, "lambda", 0.0, 1.0, 3, jobs=4)
    assert one["entrained"].shape == (3, 7)
    assert np.array_equal(one["entrained"], many["entrained"])
    assert not one["entrained"][0].any()


def test_cli_in_process():
    status, out, err = pockets.run_cli(["coeffs", "--lambda", "0.3", "--kmax", "4"])
    assert status == 0
    lines = out.decode().splitlines()
    assert lines[0] == "k,re,im,modulus"
    assert len(lines) == 10
    status, _, err = pockets.run_cli(["coeffs", "--lambda", "2"])
    assert status == 2
    assert err.count("\n") == 1


@pytest.mark.skipif("POCKETS_CLI" not in os.environ, reason="CLI binary path not provided")
def test_cli_binary_matches_module():
    exe = os.environ["POCKETS_CLI"]
    args = ["predict", "--lambda", "0:1:5"]
    proc = subprocess.run([exe, *args], capture_output=True, check=True)
    status, out, _ = pockets.run_cli(args)
    assert status == 0
    assert proc.stdout == out
