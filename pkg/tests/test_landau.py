import mpmath
import numpy as np
import pytest
from hypothesis import given, strategies as st

from selfsim_mhd.errors import DomainError, NoBracket, ZeroForce
from selfsim_mhd.geometry import CartesianVec, SphericalPoint, to_cartesian
from selfsim_mhd.landau import (ForceVector, LandauParam, a_from_beta, beta_from_a, force_flux, landau_cartesian,
                                landau_field, landau_profiles, rotate_to_b)
from selfsim_mhd.operators import momentum_residual_frame

SET = (1.5, 2.0, 5.0, -3.0)


def mp_beta(a, dps=50):
    with mpmath.workdps(dps):
        A = mpmath.mpf(a)
        return 16 * mpmath.pi * (A + A * A / 2 * mpmath.log((A - 1) / (A + 1)) + 4 * A / (3 * (A * A - 1)))


def test_beta_reference_value():
    ref = mp_beta(2)
    assert mpmath.nstr(ref, 20) == "34.766840318785735634"
    assert beta_from_a(2.0) == pytest.approx(float(ref), rel=1e-12)
    assert beta_from_a(-2.0) == pytest.approx(-float(ref), rel=1e-12)


def test_beta_large_a():
    # the bracket behaves like 1/a, so beta(1e6) is about 16 pi / 1e6
    b = beta_from_a(1e6)
    assert b == pytest.approx(float(mp_beta(1e6, 60)), rel=1e-12)
    assert b == pytest.approx(16 * np.pi / 1e6, rel=1e-6)


@given(st.floats(1e-9, 12.0), st.sampled_from([1, -1]))
def test_beta_matches_high_precision(log_gap, sign):
    a = sign * (1.0 + 10 ** (log_gap - 9))
    if abs(a) <= 1 + 1e-12:
        return
    assert beta_from_a(a) == pytest.approx(float(mp_beta(a, 80)), rel=1e-12)


@given(st.floats(1.0 + 1e-9, 1e9), st.floats(1.0001, 2.0))
def test_beta_monotone_decreasing(a, ratio):
    assert beta_from_a(a * ratio) < beta_from_a(a)
    assert beta_from_a(-a * ratio) > beta_from_a(-a)


def test_param_domain():
    for bad in (1.0, -1.0, 0.5, 1.0 + 1e-13, np.nan):
        with pytest.raises(DomainError):
            LandauParam(bad)
    with pytest.raises(DomainError):
        beta_from_a(0.5)


def test_inverse_examples():
    assert a_from_beta(beta_from_a(2.0)).a == pytest.approx(2.0, abs=1e-10)
    assert a_from_beta(beta_from_a(1.001)).a == pytest.approx(1.001, abs=1e-8)
    assert a_from_beta(beta_from_a(-7.0)).a == pytest.approx(-7.0, abs=1e-10)
    with pytest.raises(DomainError):
        a_from_beta(0.0)
    with pytest.raises(NoBracket):
        a_from_beta(1e-13)
    with pytest.raises(NoBracket):
        a_from_beta(30.0, branch=-1)


@given(st.floats(np.log(1e-3), np.log(1e3)), st.sampled_from([1, -1]))
def test_inverse_round_trip(s, sign):
    a = sign * (1.0 + np.exp(s))
    assert a_from_beta(beta_from_a(a)).a == pytest.approx(a, abs=1e-10)


def test_field_examples():
    v, p = landau_field(2.0, SphericalPoint(1.0, 0.0, 0.0))
    assert (v.v_rho, v.v_phi) == pytest.approx((4.0, 0.0))
    v, p = landau_field(2.0, SphericalPoint(1.0, 0.0, np.pi / 2))
    assert (v.v_rho, v.v_phi, p) == pytest.approx((-0.5, -1.0, -1.0))


@given(st.sampled_from(SET), st.floats(0.1, 10), st.floats(0, 2 * np.pi, exclude_max=True), st.floats(0, np.pi))
def test_field_matches_profiles(a, rho, theta, phi):
    v, p = landau_field(a, SphericalPoint(rho, theta, phi))
    pr = landau_profiles(a)
    assert v.v_theta == 0.0
    assert v.v_rho == pytest.approx(pr.f(phi) / rho, rel=1e-12, abs=1e-12)
    assert v.v_phi == pytest.approx(pr.g(phi) / rho, rel=1e-12, abs=1e-12)
    assert p == pytest.approx(pr.P(phi) / rho**2, rel=1e-12, abs=1e-12)


def test_profile_values():
    pr = landau_profiles(2.0)
    assert (pr.f(0.0), pr.f(np.pi / 2), pr.f(np.pi)) == pytest.approx((4.0, -0.5, -4 / 3))
    assert (pr.g(np.pi / 2), pr.g(0.0)) == pytest.approx((-1.0, 0.0))
    assert abs(pr.g(np.pi)) < 1e-15
    assert pr.P(np.pi / 2) == pytest.approx(-1.0)
    phi = np.linspace(0, np.pi, 101)
    assert np.allclose(pr.P(phi), pr.f(phi) - pr.g(phi) ** 2 / 2, atol=1e-13)


@pytest.mark.parametrize("a", SET)
def test_navier_stokes_residual(a):
    pr = landau_profiles(a)
    phi = np.linspace(0, np.pi, 1002)[1:-1]
    for rho in (0.5, 1.0, 3.0):
        assert np.max(np.abs(momentum_residual_frame(pr, rho, phi))) < 1e-10


@given(st.sampled_from(SET), st.floats(0.3, 3.0), st.floats(0.05, np.pi - 0.05), st.floats(0, 6.28))
def test_self_similarity(a, rho, phi, theta):
    u, p = landau_cartesian(a)
    x = to_cartesian(SphericalPoint(rho, theta, phi)).as_array()
    for lam in (0.1, 1.0, 10.0):
        assert np.allclose(lam * u(lam * x), u(x), rtol=1e-12, atol=1e-12)
        assert lam**2 * p(lam * x) == pytest.approx(p(x), rel=1e-12, abs=1e-12)


def test_rotate_axis_aligned_is_identity():
    beta = beta_from_a(2.0)
    at = CartesianVec(0.3, -0.4, 0.8)
    vel, p = rotate_to_b(ForceVector((0, 0, beta)), at)
    pt = SphericalPoint(*_sph(at.as_array()))
    ref, p_ref = landau_field(2.0, pt)
    assert np.allclose(vel.as_array(), ref.to_cartesian().as_array(), atol=1e-12)
    assert p == pytest.approx(p_ref, rel=1e-12)
    vel, _ = rotate_to_b(ForceVector((0, 0, -beta)), at)
    ref, _ = landau_field(-2.0, pt)
    assert np.allclose(vel.as_array(), ref.to_cartesian().as_array(), atol=1e-12)


def _sph(x):
    r = np.linalg.norm(x)
    return r, np.mod(np.arctan2(x[1], x[0]), 2 * np.pi), np.arccos(x[2] / r)


def test_rotate_to_x1():
    beta = beta_from_a(2.0)
    vel, p = rotate_to_b(ForceVector((beta, 0, 0)), CartesianVec(1, 0, 0))
    # axis solution at the north pole is 4 e3; the rotation carries e3 to e1
    assert np.allclose(vel.as_array(), (4, 0, 0), atol=1e-12)
    ref_v, ref_p = landau_field(2.0, SphericalPoint(1.0, 0.0, 0.0))
    assert p == pytest.approx(ref_p)
    with pytest.raises(ZeroForce):
        rotate_to_b(ForceVector((0, 0, 0)), CartesianVec(1, 0, 0))


@given(st.tuples(*[st.floats(-50, 50)] * 3), st.tuples(*[st.floats(-2, 2)] * 3))
def test_rotation_preserves_speed(b, x):
    b, x = np.array(b), np.array(x)
    if np.linalg.norm(b) < 1e-3 or np.linalg.norm(x) < 1e-2:
        return
    vel, p = rotate_to_b(ForceVector(tuple(b)), CartesianVec(*x))
    # speed and pressure depend only on |x| and the angle to b
    a = a_from_beta(np.linalg.norm(b)).a
    cos = float(x @ b) / (np.linalg.norm(x) * np.linalg.norm(b))
    u, p_axis = landau_cartesian(a)
    y = np.linalg.norm(x) * np.array([np.sqrt(max(0.0, 1 - cos**2)), 0.0, cos])
    assert vel.norm() == pytest.approx(np.linalg.norm(u(y)), rel=1e-9)
    assert p == pytest.approx(float(p_axis(y)), rel=1e-9, abs=1e-12)


@pytest.mark.parametrize("a", SET + (-2.0,))
def test_flux_equals_force(a):
    beta = beta_from_a(a)
    fluxes = [force_flux(a, r, 64) for r in (0.5, 1.0, 2.0)]
    for F in fluxes:
        assert np.max(np.abs(F[:2])) < 1e-10
        assert abs(F[2] - beta) <= 1e-6 * abs(beta)
    assert max(np.max(np.abs(F - fluxes[0])) for F in fluxes) <= 1e-6 * abs(beta)
    assert np.sign(fluxes[0][2]) == np.sign(a)


def test_flux_converges_with_order():
    beta = beta_from_a(1.5)
    errs = [abs(force_flux(1.5, 1.0, n)[2] - beta) for n in (4, 8, 16)]
    assert errs[0] > errs[1] > errs[2]
    with pytest.raises(ValueError):
        force_flux(2.0, 0.0)
