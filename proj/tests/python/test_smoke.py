import json
import math

import numpy as np
import pytest

import tflab


def test_special_functions():
    assert tflab.reg_lower_gamma(1.0, 2.0) == pytest.approx(1 - math.exp(-2), abs=1e-13)
    assert tflab.erfc(0.0) == pytest.approx(1.0)
    assert tflab.log_factorial(10) == pytest.approx(math.log(3628800), rel=1e-13)


def test_disk_spectrum_against_scipy():
    scipy_special = pytest.importorskip("scipy.special")
    values = tflab.disk_eigenvalues(2.0, 50)
    ks = np.arange(51)
    expected = scipy_special.gammainc(ks + 1, 4 * math.pi)
    assert np.max(np.abs(values - expected)) < 1e-12


def test_galerkin_matches_analytic():
    w = tflab.Window.gaussian()
    dom = tflab.Domain.disk(0.0, 0.0, 1.0)
    matrix = tflab.assemble_galerkin(w, dom, 24)
    values = tflab.eigen_spectrum(matrix)
    expected = tflab.disk_eigenvalues(1.0, 23)
    assert np.max(np.abs(values - expected)) < 1e-10
    trace, trace_sq = tflab.trace_identities(matrix)
    assert trace == pytest.approx(math.pi, abs=1e-9)
    assert trace_sq <= trace


def test_counting_and_bounds():
    values = tflab.disk_eigenvalues(2.0, 200)
    dom = tflab.Domain.disk(0.0, 0.0, 2.0)
    count = tflab.counting(values, 0.5)
    assert count == int(np.sum(values > 0.5))
    assert tflab.a_omega(dom) == 13
    assert tflab.bound_simple(0.5, 4.0, 0.5) == pytest.approx(4.0)
    lhs, rhs, holds = tflab.verify_schatten_bound(values, dom, 0.3, 1.0)
    assert holds and lhs <= rhs + 1e-6
    assert tflab.k_g_constant(tflab.Window.gaussian()) == pytest.approx(1.0, abs=1e-9)


def test_geometry():
    disk = tflab.Domain.disk(0.0, 0.0, 1.0)
    square = tflab.Domain.rect(0.0, 0.0, 1.0, 1.0)
    assert tflab.measure(disk) == pytest.approx(math.pi)
    assert tflab.perimeter(square) == 4.0
    assert tflab.kappa(disk, 1.0) == pytest.approx(1.0, abs=1e-3)
    assert tflab.kappa(square, 0.25) == pytest.approx(2.0, abs=1e-3)
    assert tflab.level_set_measure(square, 0.1) == pytest.approx(7.2 + 0.2 * math.pi)


def test_hypothesis_errors_surface():
    wc = tflab.make_window_constants(tflab.Window.gaussian(), 0.5, 1.0)
    with pytest.raises(tflab.HypothesisError):
        tflab.bound_poly(1.5, 0.5, 4.0, 1.0, 1.0, 0.1)


def test_run_config_determinism(tmp_path):
    config = {
        "command": "verify",
        "window": {"kind": "gaussian"},
        "domain": {"kind": "disk", "center": [0, 0], "radius": 2.0},
        "spectrum_source": {"method": "analytic", "k_max": 200},
        "delta_grid": [0.1, 0.5, 0.9],
        "p_grid": [1.0, 2.0],
        "bounds": ["schatten"],
        "output_prefix": "t",
    }
    a, b = tmp_path / "a", tmp_path / "b"
    tflab.run_config(json.dumps(config), str(a), 1)
    tflab.run_config(json.dumps(config), str(b), 2)
    for name in ["t_counting.csv", "t_bounds.csv", "t_summary.json"]:
        assert (a / name).read_bytes() == (b / name).read_bytes()
    summary = json.loads((a / "t_summary.json").read_text())
    assert summary["failures"] == 0
