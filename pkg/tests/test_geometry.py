import numpy as np
import pytest
from hypothesis import given, strategies as st

from selfsim_mhd.errors import AxisSingularity, ZeroVector
from selfsim_mhd.geometry import (CartesianVec, SphericalField, SphericalPoint, SphericalVec, basis_vectors,
                                  covariant_derivative, frame_to_cartesian, spherical_coords, to_cartesian,
                                  to_spherical)

rhos = st.floats(0.05, 50.0)
thetas = st.floats(0.0, 2 * np.pi, exclude_max=True)
off_axis = st.floats(1e-3, np.pi - 1e-3)


@pytest.mark.parametrize("p, expected", [
    ((1, 0, np.pi / 2), (1, 0, 0)),
    ((2, np.pi / 2, np.pi / 2), (0, 2, 0)),
    ((1, 0, np.pi / 3), (np.sqrt(3) / 2, 0, 0.5)),
])
def test_to_cartesian_examples(p, expected):
    assert np.allclose(to_cartesian(SphericalPoint(*p)).as_array(), expected, atol=1e-15)


def test_to_spherical_examples():
    p = to_spherical(CartesianVec(0, 0, 3))
    assert (p.rho, p.theta, p.phi) == (3.0, 0.0, 0.0)
    q = to_spherical(CartesianVec(1, 1, 0))
    assert np.allclose((q.rho, q.theta, q.phi), (np.sqrt(2), np.pi / 4, np.pi / 2), atol=1e-15)
    with pytest.raises(ZeroVector):
        to_spherical(CartesianVec(0, 0, 0))


def test_point_validation():
    with pytest.raises(ValueError):
        SphericalPoint(0.0, 0.0, 1.0)
    with pytest.raises(ValueError):
        SphericalPoint(1.0, 0.0, 4.0)
    assert SphericalPoint(1.0, 2.5, 0.0).theta == 0.0
    with pytest.raises(ValueError):
        CartesianVec(np.nan, 0, 0)


@given(rhos, thetas, off_axis)
def test_round_trip(rho, theta, phi):
    q = to_spherical(to_cartesian(SphericalPoint(rho, theta, phi)))
    assert q.rho == pytest.approx(rho, rel=1e-12)
    assert q.phi == pytest.approx(phi, rel=1e-12, abs=1e-14)
    gap = abs((q.theta - theta + np.pi) % (2 * np.pi) - np.pi)
    assert gap <= 1e-12 * max(1.0, theta) / np.sin(phi)


@given(rhos, thetas, st.floats(0.0, np.pi))
def test_frame_orthonormal_right_handed(rho, theta, phi):
    e_r, e_t, e_p = (v.as_array() for v in basis_vectors(SphericalPoint(rho, theta, phi)))
    M = np.stack([e_r, e_t, e_p])
    assert np.allclose(M @ M.T, np.eye(3), atol=1e-12)
    assert np.allclose(np.cross(e_t, e_r), e_p, atol=1e-15)


def test_basis_examples():
    e_r, e_t, e_p = (v.as_array() for v in basis_vectors(SphericalPoint(1, 0, np.pi / 2)))
    assert np.allclose(e_r, (1, 0, 0)) and np.allclose(e_t, (0, 1, 0)) and np.allclose(e_p, (0, 0, -1))
    e_r, e_t, e_p = (v.as_array() for v in basis_vectors(SphericalPoint(5, 0, 0)))
    assert np.allclose(e_r, (0, 0, 1)) and np.allclose(e_t, (0, 1, 0))
    # e_theta x e_rho at the pole along theta = 0
    assert np.allclose(e_p, (1, 0, 0))


@given(rhos, thetas, off_axis, st.tuples(*[st.floats(-5, 5)] * 3))
def test_spherical_vec_norm_preserved(rho, theta, phi, comps):
    v = SphericalVec(*comps, at=SphericalPoint(rho, theta, phi))
    assert v.to_cartesian().norm() == pytest.approx(np.linalg.norm(comps), rel=1e-12, abs=1e-14)


def test_connection_table():
    e_rho, e_theta = SphericalField.frame_vector("rho"), SphericalField.frame_vector("theta")
    d = covariant_derivative(e_rho, "phi", SphericalPoint(2.0, 0.4, 1.0))
    assert np.allclose(d.as_array(), (0, 0, 0.5))
    d = covariant_derivative(e_theta, "theta", SphericalPoint(1.0, 0.0, np.pi / 4))
    assert np.allclose(d.as_array(), (-1, 0, -1))
    f = SphericalField(lambda r, t, p: (np.sin(p), np.cos(t), p * t))
    assert np.allclose(covariant_derivative(f, "rho", SphericalPoint(1.3, 0.2, 0.7)).as_array(), 0, atol=1e-9)


def test_axis_singularity():
    f = SphericalField.frame_vector("phi")
    with pytest.raises(AxisSingularity):
        covariant_derivative(f, "theta", SphericalPoint(1.0, 0.0, 0.0))
    with pytest.raises(ValueError):
        covariant_derivative(f, "x", SphericalPoint(1.0, 0.0, 1.0))


def _field():
    return SphericalField(lambda r, t, p: (r * np.cos(t) + np.sin(p), np.sin(t) * np.cos(p) / r,
                                           r**2 * np.sin(2 * p) / 4 + 0.3))


def _cartesian(field):
    def Y(x):
        r, t, p = spherical_coords(x)
        c = field(r, t, p)
        return frame_to_cartesian(c[0], c[1], c[2], t, p)
    return Y


@pytest.mark.parametrize("direction", ["rho", "theta", "phi"])
def test_connection_matches_cartesian_directional_derivative(direction):
    """Oracle: componentwise Cartesian derivative along e_direction, O(h^2)."""
    field = _field()
    at = SphericalPoint(1.2, 0.8, 1.1)
    x = to_cartesian(at).as_array()
    e = dict(zip(("rho", "theta", "phi"), basis_vectors(at)))[direction].as_array()
    frame = np.stack([v.as_array() for v in basis_vectors(at)], axis=-1)
    exact = covariant_derivative(field, direction, at).as_array()
    Y = _cartesian(field)
    errs = []
    for h in (4e-3, 2e-3, 1e-3):
        d = (Y(x + h * e) - Y(x - h * e)) / (2 * h)
        errs.append(np.max(np.abs(frame.T @ d - exact)))
    orders = np.log2(np.array(errs[:-1]) / np.array(errs[1:]))
    assert np.all((orders > 1.7) & (orders < 2.3))


@given(thetas, st.floats(0.2, np.pi - 0.2), st.sampled_from(["rho", "theta", "phi"]))
def test_metric_compatibility(theta, phi, direction):
    """X<Y1, Y2> = <nabla_X Y1, Y2> + <Y1, nabla_X Y2>, derivative by central differences."""
    Y1 = _field()
    Y2 = SphericalField(lambda r, t, p: (np.cos(p) * r, 1.0 + np.sin(t), r * np.sin(p)))
    at = SphericalPoint(1.1, theta, phi)
    x = to_cartesian(at).as_array()
    e = dict(zip(("rho", "theta", "phi"), basis_vectors(at)))[direction].as_array()
    A, B = _cartesian(Y1), _cartesian(Y2)
    rhs = (covariant_derivative(Y1, direction, at).as_array() @ Y2(*[at.rho, at.theta, at.phi])
           + Y1(at.rho, at.theta, at.phi) @ covariant_derivative(Y2, direction, at).as_array())

    def inner(pt):
        return float(A(pt) @ B(pt))
    errs = []
    for h in (2e-3, 1e-3):
        lhs = (inner(x + h * e) - inner(x - h * e)) / (2 * h)
        errs.append(abs(lhs - rhs))
    assert errs[1] < 1e-4
    if errs[0] > 1e-9:
        # second-order: halving h divides the error by ~4
        assert 3.0 < errs[0] / errs[1] < 5.0
