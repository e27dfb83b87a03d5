"""Spherical coordinates, the orthonormal frame and its Levi-Civita connection.

Coordinates are ``(rho, theta, phi)`` with ``theta`` the azimuth and ``phi``
the polar angle measured from the positive x3-axis.  The frame is
``(e_rho, e_theta, e_phi)`` with ``e_phi = e_theta x e_rho``.  On the axis
(``sin(phi) == 0``) the azimuth is pinned to 0 and the frame is the limit
along the ``theta = 0`` meridian.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import AxisSingularity, ZeroVector

TWO_PI = 2.0 * np.pi

DIRECTIONS = ("rho", "theta", "phi")


@dataclass(frozen=True)
class SphericalPoint:
    rho: float
    theta: float
    phi: float

    def __post_init__(self):
        if not np.isfinite(self.rho) or self.rho <= 0.0:
            raise ValueError(f"rho must be > 0, got {self.rho!r}")
        if not 0.0 <= self.phi <= np.pi:
            raise ValueError(f"phi must lie in [0, pi], got {self.phi!r}")
        theta = float(self.theta) % TWO_PI
        if np.sin(self.phi) == 0.0:
            theta = 0.0
        object.__setattr__(self, "theta", theta)

    @property
    def on_axis(self) -> bool:
        return np.sin(self.phi) == 0.0


@dataclass(frozen=True)
class CartesianVec:
    x1: float
    x2: float
    x3: float

    def __post_init__(self):
        if not np.all(np.isfinite([self.x1, self.x2, self.x3])):
            raise ValueError("Cartesian components must be finite")

    @classmethod
    def from_array(cls, v) -> "CartesianVec":
        v = np.asarray(v, dtype=float)
        return cls(float(v[0]), float(v[1]), float(v[2]))

    def as_array(self) -> np.ndarray:
        return np.array([self.x1, self.x2, self.x3])

    def norm(self) -> float:
        return float(np.linalg.norm(self.as_array()))


@dataclass(frozen=True)
class SphericalVec:
    v_rho: float
    v_theta: float
    v_phi: float
    at: SphericalPoint

    def as_array(self) -> np.ndarray:
        """Frame components in ``(rho, theta, phi)`` order."""
        return np.array([self.v_rho, self.v_theta, self.v_phi])

    def norm(self) -> float:
        return float(np.linalg.norm(self.as_array()))

    def to_cartesian(self) -> CartesianVec:
        return CartesianVec.from_array(frame_matrix(self.at.theta, self.at.phi) @ self.as_array())


# -- array-level helpers ----------------------------------------------------

def cartesian_coords(rho, theta, phi):
    """Vectorized coordinate map; returns an array of shape ``(..., 3)``."""
    rho, theta, phi = np.broadcast_arrays(*(np.asarray(x, dtype=float) for x in (rho, theta, phi)))
    s = np.sin(phi)
    return np.stack([rho * s * np.cos(theta), rho * s * np.sin(theta), rho * np.cos(phi)], axis=-1)


def spherical_coords(x):
    """Inverse map for an array ``(..., 3)``; returns ``(rho, theta, phi)``."""
    x = np.asarray(x, dtype=float)
    cyl = np.hypot(x[..., 0], x[..., 1])
    rho = np.hypot(cyl, x[..., 2])
    phi = np.arctan2(cyl, x[..., 2])
    theta = np.where(cyl == 0.0, 0.0, np.mod(np.arctan2(x[..., 1], x[..., 0]), TWO_PI))
    return rho, theta, phi


def frame_matrix(theta, phi):
    """Matrix (or stack of matrices) whose columns are ``e_rho, e_theta, e_phi``."""
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    ct, st = np.cos(theta), np.sin(theta)
    cp, sp = np.cos(phi), np.sin(phi)
    zero = np.zeros(np.broadcast(theta, phi).shape)
    e_rho = np.stack(np.broadcast_arrays(sp * ct, sp * st, cp), axis=-1)
    e_theta = np.stack(np.broadcast_arrays(-st + zero, ct + zero, zero), axis=-1)
    e_phi = np.stack(np.broadcast_arrays(cp * ct, cp * st, -sp), axis=-1)
    return np.stack([e_rho, e_theta, e_phi], axis=-1)


def frame_to_cartesian(v_rho, v_theta, v_phi, theta, phi):
    """Map frame components at angles ``(theta, phi)`` to Cartesian, shape ``(..., 3)``."""
    comps = np.stack(np.broadcast_arrays(*(np.asarray(c, dtype=float) for c in (v_rho, v_theta, v_phi))), axis=-1)
    return np.einsum("...ij,...j->...i", frame_matrix(theta, phi), comps)


def cartesian_to_frame(v, theta, phi):
    """Frame components ``(rho, theta, phi)`` of Cartesian vectors ``v``."""
    return np.einsum("...ji,...j->...i", frame_matrix(theta, phi), np.asarray(v, dtype=float))


# -- point-level operations -------------------------------------------------

def to_cartesian(p: SphericalPoint) -> CartesianVec:
    return CartesianVec.from_array(cartesian_coords(p.rho, p.theta, p.phi))


def to_spherical(v: CartesianVec) -> SphericalPoint:
    arr = v.as_array()
    if not np.any(arr):
        raise ZeroVector("the origin has no spherical coordinates")
    rho, theta, phi = spherical_coords(arr)
    return SphericalPoint(float(rho), float(theta), float(phi))


def basis_vectors(p: SphericalPoint) -> tuple[CartesianVec, CartesianVec, CartesianVec]:
    """Return ``(e_rho, e_theta, e_phi)`` at ``p``."""
    m = frame_matrix(p.theta, p.phi)
    return tuple(CartesianVec.from_array(m[:, k]) for k in range(3))


# -- fields and the connection ----------------------------------------------

Components = Callable[[float, float, float], tuple]


def _central_jacobian(components: Components, rho, theta, phi, step):
    """``jac[i, j] = d v^i / d x^j`` with ``x = (rho, theta, phi)``."""
    x = np.array([rho, theta, phi], dtype=float)
    steps = np.array([step * max(1.0, rho), step, step])
    jac = np.empty((3, 3))
    for j in range(3):
        dx = np.zeros(3)
        dx[j] = steps[j]
        plus = np.asarray(components(*(x + dx)), dtype=float)
        minus = np.asarray(components(*(x - dx)), dtype=float)
        jac[:, j] = (plus - minus) / (2.0 * steps[j])
    return jac


@dataclass(frozen=True)
class SphericalField:
    """A vector field given by its frame components ``(v^rho, v^theta, v^phi)``.

    ``jacobian`` optionally returns the 3x3 matrix of partial derivatives
    ``d v^i / d (rho, theta, phi)_j``; otherwise central differences are used.
    """

    components: Components
    jacobian: Callable[[float, float, float], np.ndarray] | None = None
    step: float = 1e-5

    def __call__(self, rho, theta, phi) -> np.ndarray:
        return np.asarray(self.components(rho, theta, phi), dtype=float)

    def partials(self, rho, theta, phi) -> np.ndarray:
        if self.jacobian is not None:
            return np.asarray(self.jacobian(rho, theta, phi), dtype=float)
        return _central_jacobian(self.components, rho, theta, phi, self.step)

    @classmethod
    def frame_vector(cls, which: str) -> "SphericalField":
        """The constant-component field ``e_rho``, ``e_theta`` or ``e_phi``."""
        comps = np.zeros(3)
        comps[DIRECTIONS.index(which)] = 1.0
        return cls(lambda rho, theta, phi: comps, lambda rho, theta, phi: np.zeros((3, 3)))


def covariant_derivative(field: SphericalField, direction: str, at: SphericalPoint) -> SphericalVec:
    """Frame components of ``nabla_{e_direction} field`` at ``at``."""
    if direction not in DIRECTIONS:
        raise ValueError(f"direction must be one of {DIRECTIONS}, got {direction!r}")
    rho, theta, phi = at.rho, at.theta, at.phi
    vr, vt, vp = field(rho, theta, phi)
    jac = field.partials(rho, theta, phi)
    d_rho, d_theta, d_phi = jac[:, 0], jac[:, 1], jac[:, 2]

    if direction == "rho":
        out = d_rho
    elif direction == "phi":
        out = np.array([d_phi[0] - vp, d_phi[1], vr + d_phi[2]]) / rho
    else:
        s = np.sin(phi)
        if s == 0.0:
            raise AxisSingularity("nabla_{e_theta} needs 1/sin(phi) and cot(phi)")
        cot = np.cos(phi) / s
        out = np.array([
            d_theta[0] / s - vt,
            vr + cot * vp + d_theta[1] / s,
            d_theta[2] / s - cot * vt,
        ]) / rho
    return SphericalVec(float(out[0]), float(out[1]), float(out[2]), at)
