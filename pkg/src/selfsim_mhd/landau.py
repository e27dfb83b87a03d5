"""Landau jets: closed-form fields, the force/parameter relation and flux checks.

The axis-aligned solution is indexed by a real ``a`` with ``|a| > 1``; the
point force ``(0, 0, beta)`` it balances is ``beta_from_a(a)``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .errors import DomainError, NoBracket, ZeroForce
from .geometry import CartesianVec, SphericalPoint, SphericalVec, cartesian_to_frame, frame_matrix, spherical_coords
from .operators import Channel, Profile, frame_to_cartesian, velocity_gradient_frame

A_MAX = 1e12
_SERIES_FROM = 3.0


@dataclass(frozen=True)
class LandauParam:
    a: float

    def __post_init__(self):
        if not np.isfinite(self.a) or abs(self.a) <= 1.0 + 1e-12:
            raise DomainError(f"Landau parameter needs |a| > 1, got a={self.a!r}")


@dataclass(frozen=True)
class ForceVector:
    b: tuple[float, float, float]

    def __post_init__(self):
        object.__setattr__(self, "b", tuple(float(x) for x in self.b))

    @property
    def magnitude(self) -> float:
        return float(np.linalg.norm(self.b))

    @property
    def beta(self) -> float:
        """Magnitude signed by the x3-component (the axis-aligned force value)."""
        return float(np.copysign(self.magnitude, self.b[2]))


def _as_a(a) -> float:
    return a.a if isinstance(a, LandauParam) else LandauParam(float(a)).a


def _bracket(a: float) -> float:
    """a + (a^2/2) ln((a-1)/(a+1)) + 4a/(3(a^2-1)), evaluated without cancellation."""
    if abs(a) < _SERIES_FROM:
        return a + 0.5 * a * a * np.log((a - 1.0) / (a + 1.0)) + 4.0 * a / (3.0 * (a - 1.0) * (a + 1.0))
    # sum_{k>=1} a^(1-2k) (4/3 - 1/(2k+1)); ratio 1/a^2 <= 1/9
    inv2 = 1.0 / (a * a)
    term = 1.0 / a
    total = 0.0
    k = 1
    while True:
        piece = term * (4.0 / 3.0 - 1.0 / (2 * k + 1))
        total += piece
        if abs(piece) <= 1e-18 * abs(total):
            return total
        term *= inv2
        k += 1


def beta_from_a(a) -> float:
    return 16.0 * np.pi * _bracket(_as_a(a))


def a_from_beta(beta: float, branch: int | None = None, delta: float = 1e-11) -> LandauParam:
    """Invert ``beta_from_a`` on the branch ``sign(a) = branch`` (default ``sign(beta)``)."""
    beta = float(beta)
    if beta == 0.0 or not np.isfinite(beta):
        raise DomainError("beta must be finite and nonzero")
    sign = int(np.sign(beta)) if branch is None else int(np.sign(branch))
    if sign == 0:
        raise DomainError("branch must be +1 or -1")

    def gap(t):
        return beta_from_a(sign * t) - beta

    # log-spaced candidate brackets on (1 + delta, A_MAX); subdivision keeps us
    # correct even if beta were not monotone
    nodes = 1.0 + np.logspace(np.log10(delta), np.log10(A_MAX), 400)
    values = np.array([gap(t) for t in nodes])
    changes = np.nonzero(np.signbit(values[:-1]) != np.signbit(values[1:]))[0]
    if values[0] == 0.0:
        return LandauParam(sign * nodes[0])
    if changes.size == 0:
        raise NoBracket(f"no a with beta(a) = {beta!r} on branch {sign:+d} up to |a| = {A_MAX:g}")
    lo, hi = nodes[changes[0]], nodes[changes[0] + 1]
    t = brentq(gap, lo, hi, xtol=1e-15 * lo, rtol=4 * np.finfo(float).eps, maxiter=500)
    return LandauParam(sign * t)


# -- closed forms -----------------------------------------------------------

def _landau_channels(a: float):
    a2m1 = (a - 1.0) * (a + 1.0)

    def D(phi):
        return a - np.cos(phi)

    f = Channel(
        lambda phi: 2 * a2m1 / D(phi) ** 2 - 2,
        lambda phi: -4 * a2m1 * np.sin(phi) / D(phi) ** 3,
        lambda phi: -4 * a2m1 * (np.cos(phi) / D(phi) ** 3 - 3 * np.sin(phi) ** 2 / D(phi) ** 4),
    )
    g = Channel(
        lambda phi: -2 * np.sin(phi) / D(phi),
        lambda phi: -2 * (a * np.cos(phi) - 1) / D(phi) ** 2,
        lambda phi: 2 * np.sin(phi) * (a * D(phi) + 2 * (a * np.cos(phi) - 1)) / D(phi) ** 3,
    )
    P = Channel(
        lambda phi: 4 * (a * np.cos(phi) - 1) / D(phi) ** 2,
        lambda phi: -4 * np.sin(phi) * (a * D(phi) + 2 * (a * np.cos(phi) - 1)) / D(phi) ** 3,
    )
    return f, g, P


def landau_profiles(a, domain=(0.0, np.pi)) -> Profile:
    f, g, P = _landau_channels(_as_a(a))
    return Profile(f=f, g=g, P=P, domain=domain)


def landau_field(a, at: SphericalPoint) -> tuple[SphericalVec, float]:
    a = _as_a(a)
    c, s = np.cos(at.phi), np.sin(at.phi)
    d = a - c
    v_rho = 2.0 / at.rho * ((a - 1.0) * (a + 1.0) / d**2 - 1.0)
    v_phi = 2.0 / at.rho * (-s / d)
    pressure = 4.0 * (a * c - 1.0) / (at.rho**2 * d**2)
    return SphericalVec(float(v_rho), 0.0, float(v_phi), at), float(pressure)


def landau_cartesian(a):
    """Vectorized Cartesian closures ``(u, p)`` of the axis-aligned jet."""
    a = _as_a(a)

    def u(x):
        rho, theta, phi = spherical_coords(x)
        d = a - np.cos(phi)
        return frame_to_cartesian(2 / rho * ((a - 1) * (a + 1) / d**2 - 1), 0.0, -2 * np.sin(phi) / (rho * d), theta, phi)

    def p(x):
        rho, _, phi = spherical_coords(x)
        d = a - np.cos(phi)
        return 4 * (a * np.cos(phi) - 1) / (rho**2 * d**2)

    return u, p


# -- general force direction ------------------------------------------------

def _rotation_from_e3(n) -> np.ndarray:
    """Proper rotation taking (0, 0, 1) to the unit vector ``n``."""
    n = np.asarray(n, dtype=float)
    e3 = np.array([0.0, 0.0, 1.0])
    c = float(n @ e3)
    if c > 1.0 - 1e-15:
        return np.eye(3)
    if c < -1.0 + 1e-15:
        return np.diag([1.0, -1.0, -1.0])
    axis = np.cross(e3, n)
    s = np.linalg.norm(axis)
    k = axis / s
    K = np.array([[0, -k[2], k[1]], [k[2], 0, -k[0]], [-k[1], k[0], 0]])
    return np.eye(3) + s * K + (1 - c) * (K @ K)


def rotate_to_b(b: ForceVector, at: CartesianVec) -> tuple[CartesianVec, float]:
    """Velocity and pressure of the jet driven by the point force ``b``."""
    if not isinstance(b, ForceVector):
        b = ForceVector(tuple(b))
    mag = b.magnitude
    if mag == 0.0:
        raise ZeroForce("the point force must be nonzero")
    n = np.asarray(b.b) / mag
    x = at.as_array()
    if abs(n[0]) == 0.0 and abs(n[1]) == 0.0:
        param, R = a_from_beta(b.beta), np.eye(3)
    else:
        param, R = a_from_beta(mag), _rotation_from_e3(n)
    u, p = landau_cartesian(param)
    local = R.T @ x
    return CartesianVec.from_array(R @ u(local)), float(p(local))


# -- momentum flux ----------------------------------------------------------

def force_flux(a, radius: float = 1.0, order: int = 64) -> np.ndarray:
    """Momentum flux ``\\oint (u (u.n) - T n) dS`` through the sphere ``|x| = radius``.

    ``T = -p I + (grad u + grad u^T)``.  Gauss-Legendre in ``cos(phi)`` with
    ``order`` nodes times ``2 * order`` uniform azimuths.
    """
    if radius <= 0:
        raise ValueError("radius must be positive")
    param = LandauParam(_as_a(a))
    t, wt = np.polynomial.legendre.leggauss(order)
    phi = np.arccos(t)
    n_theta = 2 * order
    theta = np.arange(n_theta) * (2 * np.pi / n_theta)
    PH, TH = np.meshgrid(phi, theta, indexing="ij")
    W = np.outer(wt, np.full(n_theta, 2 * np.pi / n_theta)) * radius**2

    pr = landau_profiles(param)
    R = frame_matrix(TH, PH)
    G = velocity_gradient_frame(pr, radius, PH)
    grad = R @ G @ np.swapaxes(R, -1, -2)
    normal = R[..., 0]
    u = frame_to_cartesian(pr.f(PH) / radius, 0.0, pr.g(PH) / radius, TH, PH)
    p = pr.P(PH) / radius**2
    un = np.einsum("...i,...i->...", u, normal)
    strain_n = np.einsum("...ij,...j->...i", grad + np.swapaxes(grad, -1, -2), normal)
    integrand = u * un[..., None] + p[..., None] * normal - strain_n
    return np.einsum("ij,ijk->k", W, integrand)


__all__ = [
    "LandauParam", "ForceVector", "beta_from_a", "a_from_beta", "landau_field",
    "landau_profiles", "landau_cartesian", "rotate_to_b", "force_flux", "cartesian_to_frame",
]
