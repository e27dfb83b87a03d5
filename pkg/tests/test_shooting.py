import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from selfsim_mhd.errors import BlowUp, TrivialProfile
from selfsim_mhd.landau import landau_profiles
from selfsim_mhd.operators import Profile
from selfsim_mhd.profiles import conserved_q, h_transport, ode_residuals
from selfsim_mhd.shooting import (AxisParams, ScanRange, ShootingConfig, ShootingState, axis_series_init,
                                  fit_landau_a, integrate_profile, mismatch, newton_refine, rhs_array, shoot,
                                  trajectory)


def landau_axis(a):
    pr = landau_profiles(a)
    return AxisParams(f0=float(pr.f(0.0)), P0=float(pr.P(0.0)))


def test_series_examples():
    s = axis_series_init(AxisParams(f0=4.0), 1e-6)
    assert s.y[2] == pytest.approx(-2e-6, rel=1e-12)
    assert np.all(axis_series_init(AxisParams(), 1e-6).y == 0)
    with pytest.raises(ValueError):
        axis_series_init(AxisParams(), 0.0)
    with pytest.raises(ValueError):
        AxisParams(b_mode="other")


@pytest.mark.parametrize("a", [1.5, 2.0, 5.0])
def test_series_matches_landau_taylor(a):
    lan, p = landau_profiles(a), landau_axis(a)
    eps = 1e-3
    y = axis_series_init(p, eps).y
    ref = [lan.f(eps), lan.f(eps, 1), lan.g(eps), 0, 0, 0, lan.P(eps)]
    # the truncated expansion is accurate to O(eps^3)
    assert np.allclose(y, ref, atol=50 * eps**3 * (1 + abs(p.f0)) ** 2)


def test_state_validation():
    with pytest.raises(ValueError):
        ShootingState(np.zeros(6), 0.1)
    with pytest.raises(ValueError):
        ShootingState(np.full(7, np.nan), 0.1)


def test_integrate_from_landau_axis_data():
    pr = integrate_profile(axis_series_init(landau_axis(2.0)), np.pi / 2)
    assert (pr.f(np.pi / 2), pr.g(np.pi / 2)) == pytest.approx((-0.5, -1.0), abs=1e-8)


def test_large_f0_misses_and_blowup_guard():
    # no blow-up at the default guard, but the far end is nowhere near the targets (golden values)
    m = mismatch(AxisParams(f0=50.0), "noslip")
    assert m == pytest.approx([8.93461794, -9.0626025, 0.0], abs=1e-6)
    with pytest.raises(BlowUp) as exc:
        integrate_profile(axis_series_init(AxisParams(f0=50.0)), np.pi / 2, ShootingConfig(blowup=100.0))
    assert exc.value.profile.domain[1] < np.pi / 2
    assert np.all(np.isinf(mismatch(AxisParams(f0=50.0), "noslip", ShootingConfig(blowup=100.0))))


def test_epsilon_study():
    p = landau_axis(2.0)
    vals = [trajectory(p, "noslip", ShootingConfig(epsilon=e)).f(np.pi / 2) for e in (1e-5, 1e-6, 1e-7)]
    assert np.ptp(vals) < 1e-8


def test_tolerance_order():
    p = landau_axis(2.0)
    exact = -0.5
    errs = [abs(trajectory(p, "noslip", ShootingConfig(rtol=r, atol=r * 1e-2)).f(np.pi / 2) - exact)
            for r in (1e-6, 1e-7)]
    assert errs[1] < errs[0] / 4 or errs[1] < 1e-12


@pytest.mark.parametrize("a", [2.0, 5.0])
def test_trajectory_equals_landau(a):
    pr, lan = trajectory(landau_axis(a), "full_space"), landau_profiles(a)
    phi = np.linspace(1e-4, np.pi - 2e-3, 400)
    for ch in "fgP":
        assert np.max(np.abs(getattr(pr, ch)(phi) - getattr(lan, ch)(phi))) < 1e-6
    assert ode_residuals(pr, "full", phi).max_abs() < 1e-9


@pytest.mark.parametrize("f0,a", [(8.0, 1.5), (4.0, 2.0), (1.0, 5.0)])
def test_family_recovery(f0, a):
    lan = landau_profiles(a)
    res = newton_refine(AxisParams(f0=f0, P0=float(lan.P(0.0)) + 0.3), ("P0",), "full_space")
    assert res.converged
    assert res.params.P0 == pytest.approx(float(lan.P(0.0)), abs=1e-6)
    a_fit, rms = fit_landau_a(trajectory(res.params, "full_space"))
    assert a_fit == pytest.approx(a, abs=1e-6) and rms < 1e-6


def test_fit_landau_a_on_closed_form():
    a, rms = fit_landau_a(landau_profiles(2.0))
    assert a == pytest.approx(2.0, abs=1e-10) and rms < 1e-12
    a, _ = fit_landau_a(landau_profiles(-3.0))
    assert a == pytest.approx(-3.0, abs=1e-10)
    with pytest.raises(TrivialProfile):
        fit_landau_a(Profile.zero())


def test_half_space_roots_trivial():
    scan = (ScanRange("f0", -1.0, 1.0, 1.0), ScanRange("P0", -1.0, 1.0, 1.0))
    for bc in ("noslip", "navier_slip"):
        res = shoot(bc, ("f0", "P0"), scan=scan)
        assert len(res.roots) == 1
        params, resid = res.roots[0]
        assert np.linalg.norm(params.vector()) < 1e-6 and resid < 1e-10
        assert res.starts == 9 and res.converged_runs >= 1


def test_root_is_consistent_with_mismatch():
    res = shoot("full_space", ("P0",), base=AxisParams(f0=4.0), scan=(ScanRange("P0", 3.0, 5.0, 1.0),))
    (params, resid), = res.roots
    assert np.linalg.norm(mismatch(params, "full_space")) == pytest.approx(resid, abs=1e-14)


def test_shoot_errors():
    with pytest.raises(ValueError):
        shoot("slip")
    with pytest.raises(ValueError):
        shoot("noslip", ("f0", "q"))
    with pytest.raises(ValueError):
        shoot("full_space", ("f0", "h1", "P0", "f0"))
    with pytest.raises(ValueError):
        ShootingConfig(rtol=0.0)


def test_scan_range_nodes():
    assert np.allclose(ScanRange("f0", -1, 1, 0.5).nodes(), [-1, -0.5, 0, 0.5, 1])
    assert np.allclose(ScanRange("f0", 2, 2, 0).nodes(), [2])


@settings(max_examples=25)
@given(st.floats(-3, 3), st.floats(-3, 3), st.floats(-1, 1))
def test_rhs_matches_residual_form(f0, P0, h1):
    """Along any trajectory the ODE residuals vanish to integration accuracy."""
    try:
        pr = integrate_profile(axis_series_init(AxisParams(f0=f0, h1=h1, P0=P0)), 1.2)
    except BlowUp:
        return
    phi = np.linspace(0.05, pr.domain[1], 30)
    assert ode_residuals(pr, "half", phi).max_abs() < 1e-9


def test_conserved_branch_invariants():
    p = AxisParams(f0=4.0, P0=4.0, h1=0.3, b_mode="conserved", b_seed=1e-3)
    pr = trajectory(p, "noslip", ShootingConfig())
    phi = np.linspace(0.01, np.pi / 2, 100)
    q = conserved_q(pr, phi)
    assert np.max(np.abs(q - q[0])) < 1e-8 * (1 + abs(q[0]))
    T = h_transport(pr, phi)
    assert np.max(np.abs(T - T[0])) < 1e-8


def test_rhs_shape():
    y = np.zeros((7, 5))
    assert rhs_array(np.linspace(0.1, 1, 5), y).shape == (7, 5)
