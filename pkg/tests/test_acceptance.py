"""Acceptance gate: one test per criterion, each printing a [PASS]/[FAIL] line."""
import numpy as np
import pytest

from selfsim_mhd.acceptance import run_criterion


def _run(k, record_criterion):
    return record_criterion(run_criterion(k))


def test_criterion_01_operator_oracle(record_criterion):
    res = _run(1, record_criterion)
    for name, d in res.detail.items():
        assert all(1.5 <= q <= 2.5 for q in d["orders"]), name
        assert d["error_h1e-4"] < 1e-6, f"{name}: {d['error_h1e-4']:.3g}"


def test_criterion_02_landau_navier_stokes(record_criterion):
    for d in _run(2, record_criterion).detail.values():
        assert d["momentum"] < 1e-10 and d["div_u"] < 1e-12


def test_criterion_03_landau_ode_system(record_criterion):
    for d in _run(3, record_criterion).detail.values():
        assert d["ode"] < 1e-10 and d["boundary"] < 1e-10


def test_criterion_04_force_round_trip(record_criterion):
    d = _run(4, record_criterion).detail
    assert d["round_trip_max"] < 1e-10 and d["beta2_rel_error"] < 1e-12


def test_criterion_05_momentum_flux(record_criterion):
    for d in _run(5, record_criterion).detail.values():
        assert d["relative_error"] <= 1e-6 and d["radius_spread"] <= 1e-6


def test_criterion_06_reduction_chain(record_criterion):
    for d in _run(6, record_criterion).detail.values():
        assert d["chain_gap"] < 1e-12 and d["J_plus_dK"] < 1e-10 and d["H"] < 1e-10


def test_criterion_07_full_space_shooting(record_criterion):
    d = _run(7, record_criterion).detail
    assert len(d["roots"]) == 1
    assert np.linalg.norm(np.subtract(d["roots"][0], [0.0, 4.0])) <= 1e-6
    assert d["deviation"] < 1e-6 and abs(d["a_fit"] - 2.0) <= 1e-6


@pytest.mark.slow
def test_criterion_08_half_space_uniqueness(record_criterion):
    for name, d in _run(8, record_criterion).detail.items():
        assert len(d["distinct_roots"]) == 1, name
        assert np.linalg.norm(d["distinct_roots"][0]) <= 1e-6, name


def test_criterion_09_conserved_quantities(record_criterion):
    d = _run(9, record_criterion).detail
    assert d["max_abs_Bg2sin"] < 10 * 1e-10 and d["h_transport_drift"] < 1e-8


@pytest.mark.slow
def test_criterion_10_grid_convergence(record_criterion):
    d = _run(10, record_criterion).detail
    assert all(1.7 <= q <= 2.3 for q in d["orders"])
    assert d["induction_max"] < 1e-10 and d["div_B_max"] < 1e-10
    assert d["div_u_max"] < 1e-10, f"div u {d['div_u_max']:.3g}"
