"""Angular profiles and the differential operators of self-similar fields.

A profile ``(f, g, h, B, P)`` of the polar angle defines

    u = (f e_rho + g e_phi + h e_theta) / rho,   B = (B / rho) e_theta,   p = P / rho**2.

Every operator here returns frame components and scales as ``rho**-3``
(``rho**-2`` for the divergence).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.interpolate import CubicSpline

from .errors import AxisSingularity, StepTooLarge
from .geometry import SphericalPoint, SphericalVec, cartesian_to_frame, frame_to_cartesian, spherical_coords

FULL = (0.0, np.pi)
HALF = (0.0, np.pi / 2)

_D1_STEP = 1e-5
_D2_STEP = 1e-4


def _zero(phi):
    return np.zeros_like(np.asarray(phi, dtype=float))


@dataclass(frozen=True)
class Channel:
    """One profile function with optional analytic first/second derivatives."""

    value: Callable
    d1: Callable | None = None
    d2: Callable | None = None

    def __call__(self, phi, order: int = 0):
        phi = np.asarray(phi, dtype=float)
        if order == 0:
            return np.asarray(self.value(phi), dtype=float) + 0.0 * phi
        if order == 1:
            if self.d1 is not None:
                return np.asarray(self.d1(phi), dtype=float) + 0.0 * phi
            s = _D1_STEP
            return (self.value(phi + s) - self.value(phi - s)) / (2 * s)
        if order == 2:
            if self.d2 is not None:
                return np.asarray(self.d2(phi), dtype=float) + 0.0 * phi
            if self.d1 is not None:
                s = _D1_STEP
                return (self.d1(phi + s) - self.d1(phi - s)) / (2 * s)
            s = _D2_STEP
            return (self.value(phi + s) - 2 * self.value(phi) + self.value(phi - s)) / s**2
        raise ValueError("only derivative orders 0, 1, 2 are available")

    @classmethod
    def zero(cls) -> "Channel":
        return cls(_zero, _zero, _zero)

    @classmethod
    def constant(cls, c: float) -> "Channel":
        return cls(lambda phi: c + _zero(phi), _zero, _zero)

    @classmethod
    def from_samples(cls, phi, values) -> "Channel":
        spline = CubicSpline(phi, values, bc_type="not-a-knot")
        return cls(spline, spline.derivative(1), spline.derivative(2))


@dataclass(frozen=True)
class ProfileValues:
    f: np.ndarray
    df: np.ndarray
    d2f: np.ndarray
    g: np.ndarray
    dg: np.ndarray
    d2g: np.ndarray
    h: np.ndarray
    dh: np.ndarray
    d2h: np.ndarray
    B: np.ndarray
    dB: np.ndarray
    P: np.ndarray
    dP: np.ndarray


@dataclass(frozen=True)
class Profile:
    """The quintuple ``(f, g, h, B, P)`` on ``domain``.

    Channels may be given as :class:`Channel` instances or bare callables
    (derivatives then fall back to central differences).
    """

    f: Channel = field(default_factory=Channel.zero)
    g: Channel = field(default_factory=Channel.zero)
    h: Channel = field(default_factory=Channel.zero)
    B: Channel = field(default_factory=Channel.zero)
    P: Channel = field(default_factory=Channel.zero)
    domain: tuple[float, float] = FULL

    def __post_init__(self):
        for name in ("f", "g", "h", "B", "P"):
            ch = getattr(self, name)
            if not isinstance(ch, Channel):
                object.__setattr__(self, name, Channel(ch))

    @classmethod
    def zero(cls, domain=FULL) -> "Profile":
        return cls(domain=domain)

    @classmethod
    def from_samples(cls, phi, f, g, h, B, P, domain=None) -> "Profile":
        """Cubic-spline (not-a-knot) profile through sampled values."""
        phi = np.asarray(phi, dtype=float)
        chans = [Channel.from_samples(phi, np.asarray(v, dtype=float)) for v in (f, g, h, B, P)]
        return cls(*chans, domain=domain or (float(phi[0]), float(phi[-1])))

    def values(self, phi) -> ProfileValues:
        return ProfileValues(
            f=self.f(phi), df=self.f(phi, 1), d2f=self.f(phi, 2),
            g=self.g(phi), dg=self.g(phi, 1), d2g=self.g(phi, 2),
            h=self.h(phi), dh=self.h(phi, 1), d2h=self.h(phi, 2),
            B=self.B(phi), dB=self.B(phi, 1),
            P=self.P(phi), dP=self.P(phi, 1),
        )

    def sample(self, phi) -> dict[str, np.ndarray]:
        phi = np.asarray(phi, dtype=float)
        return {"phi": phi, "f": self.f(phi), "g": self.g(phi), "h": self.h(phi),
                "B": self.B(phi), "P": self.P(phi)}

    def derivative_consistency(self, phi, step: float = 1e-4) -> float:
        """Max gap between supplied first derivatives and central differences."""
        phi = np.asarray(phi, dtype=float)
        worst = 0.0
        for ch in (self.f, self.g, self.h, self.B, self.P):
            fd = (ch(phi + step) - ch(phi - step)) / (2 * step)
            worst = max(worst, float(np.max(np.abs(fd - ch(phi, 1)))))
        return worst


# -- frame-level cores (vectorized over rho, phi) ---------------------------

def _trig(phi):
    phi = np.asarray(phi, dtype=float)
    if np.any(phi <= 0.0) or np.any(phi >= np.pi):
        raise AxisSingularity("self-similar operators need 0 < phi < pi")
    s = np.sin(phi)
    return np.cos(phi) / s, 1.0 / s**2


def laplacian_frame(pr: Profile, rho, phi):
    """``(rho, theta, phi)`` frame components of the vector Laplacian of u."""
    cot, csc2 = _trig(phi)
    v = pr.values(phi)
    div_part = v.f + v.dg + v.g * cot
    r3 = np.asarray(rho, dtype=float) ** 3
    c_rho = v.d2f + v.df * cot - 2 * div_part
    # (2f + g' + g cot)'
    c_phi = 2 * v.df + v.d2g + v.dg * cot - v.g * csc2
    # (h' + h cot)'
    c_theta = v.d2h + v.dh * cot - v.h * csc2
    return c_rho / r3, c_theta / r3, c_phi / r3


def divergence_frame(pr: Profile, rho, phi):
    cot, _ = _trig(phi)
    v = pr.values(phi)
    return (v.f + v.dg + v.g * cot) / np.asarray(rho, dtype=float) ** 2


def convective_frame(pr: Profile, pair: str, rho, phi):
    cot, _ = _trig(phi)
    v = pr.values(phi)
    r3 = np.asarray(rho, dtype=float) ** 3
    if pair == "uu":
        c_rho = v.df * v.g - v.f**2 - v.g**2 - v.h**2
        c_phi = v.dg * v.g - v.h**2 * cot
        c_theta = v.g * (v.dh + v.h * cot)
    elif pair == "uB":
        c_rho = -v.B * v.h
        c_phi = -v.B * v.h * cot
        c_theta = v.dB * v.g - v.B * v.f
    elif pair == "Bu":
        c_rho = -v.B * v.h
        c_phi = -v.B * v.h * cot
        c_theta = v.B * v.f + v.B * v.g * cot
    elif pair == "BB":
        c_rho = -v.B**2
        c_phi = -v.B**2 * cot
        c_theta = 0.0 * v.B
    else:
        raise ValueError(f"pair must be one of uu, uB, Bu, BB; got {pair!r}")
    return c_rho / r3, c_theta / r3, c_phi / r3


def pressure_gradient_frame(pr: Profile, rho, phi):
    phi = np.asarray(phi, dtype=float)
    r3 = np.asarray(rho, dtype=float) ** 3
    P, dP = pr.P(phi), pr.P(phi, 1)
    return -2 * P / r3, 0.0 * P, dP / r3


def velocity_gradient_frame(pr: Profile, rho, phi):
    """``G[..., i, j]`` = i-th frame component of ``nabla_{e_j} u``, order (rho, theta, phi)."""
    cot, _ = _trig(phi)
    v = pr.values(phi)
    r2 = np.asarray(rho, dtype=float) ** 2
    G = np.empty(np.broadcast(r2, v.f).shape + (3, 3))
    G[..., 0, 0] = -v.f / r2
    G[..., 1, 0] = -v.h / r2
    G[..., 2, 0] = -v.g / r2
    G[..., 0, 1] = -v.h / r2
    G[..., 1, 1] = (v.f + v.g * cot) / r2
    G[..., 2, 1] = -v.h * cot / r2
    G[..., 0, 2] = (v.df - v.g) / r2
    G[..., 1, 2] = v.dh / r2
    G[..., 2, 2] = (v.f + v.dg) / r2
    return G


def momentum_residual_frame(pr: Profile, rho, phi):
    """``-lap u + (u.grad)u - (B.grad)B + grad p`` in frame components."""
    lap = laplacian_frame(pr, rho, phi)
    uu = convective_frame(pr, "uu", rho, phi)
    bb = convective_frame(pr, "BB", rho, phi)
    gp = pressure_gradient_frame(pr, rho, phi)
    return tuple(-l + a - b + p for l, a, b, p in zip(lap, uu, bb, gp))


def induction_residual_frame(pr: Profile, rho, phi):
    """``(u.grad)B - (B.grad)u`` in frame components."""
    ub = convective_frame(pr, "uB", rho, phi)
    bu = convective_frame(pr, "Bu", rho, phi)
    return tuple(x - y for x, y in zip(ub, bu))


# -- point-level API --------------------------------------------------------

def _vec(comps, at: SphericalPoint) -> SphericalVec:
    return SphericalVec(float(comps[0]), float(comps[1]), float(comps[2]), at)


def laplacian_u(pr: Profile, at: SphericalPoint) -> SphericalVec:
    return _vec(laplacian_frame(pr, at.rho, at.phi), at)


def divergence_u(pr: Profile, at: SphericalPoint) -> float:
    return float(divergence_frame(pr, at.rho, at.phi))


def convective(pr: Profile, pair: str, at: SphericalPoint) -> SphericalVec:
    """``(u.grad)u``, ``(u.grad)B`` or ``(B.grad)u`` for ``pair`` in ``uu/uB/Bu``."""
    return _vec(convective_frame(pr, pair, at.rho, at.phi), at)


def pressure_gradient(pr: Profile, at: SphericalPoint) -> SphericalVec:
    return _vec(pressure_gradient_frame(pr, at.rho, at.phi), at)


# -- Cartesian reconstruction ----------------------------------------------

def cartesian_fields(pr: Profile):
    """Cartesian closures ``(u, B, p)`` of the self-similar fields of ``pr``.

    Each closure maps an array of points ``(..., 3)`` to ``(..., 3)`` (or
    ``(...)`` for the pressure).
    """

    def u(x):
        rho, theta, phi = spherical_coords(x)
        return frame_to_cartesian(pr.f(phi) / rho, pr.h(phi) / rho, pr.g(phi) / rho, theta, phi)

    def B(x):
        rho, theta, phi = spherical_coords(x)
        return frame_to_cartesian(0.0, pr.B(phi) / rho, 0.0, theta, phi)

    def p(x):
        rho, _, phi = spherical_coords(x)
        return pr.P(phi) / rho**2

    return u, B, p


# -- finite-difference oracle ----------------------------------------------

_UNIT = np.eye(3)


def _check_step(at, h):
    x = np.atleast_2d(at)
    dist = np.minimum(np.linalg.norm(x, axis=-1), np.hypot(x[:, 0], x[:, 1]))
    if np.any(h >= dist):
        raise StepTooLarge(f"step {h} reaches the axis or origin")


def fd_gradient(F, at, h):
    """Central-difference Jacobian ``J[..., i, j] = d F_i / d x_j`` (``d F / d x_j`` for scalars)."""
    at = np.asarray(at, dtype=float)
    cols = [(np.asarray(F(at + h * e)) - np.asarray(F(at - h * e))) / (2 * h) for e in _UNIT]
    return np.stack(cols, axis=-1)


def fd_laplacian(F, at, h):
    at = np.asarray(at, dtype=float)
    centre = np.asarray(F(at))
    acc = -6.0 * centre
    for e in _UNIT:
        acc = acc + np.asarray(F(at + h * e)) + np.asarray(F(at - h * e))
    return acc / h**2


def cartesian_oracle(F, kind: str, at, h: float, w=None):
    """Second-order central-difference operator applied to a Cartesian closure.

    ``kind`` is ``laplacian``, ``divergence``, ``gradient`` or ``convective``;
    the last computes ``(w.grad) F`` with ``w`` a closure or a fixed vector.
    Works on a single point ``(3,)`` or a batch ``(N, 3)``.
    """
    at = np.asarray(at, dtype=float)
    _check_step(at, h)
    if kind == "laplacian":
        return fd_laplacian(F, at, h)
    if kind == "gradient":
        return fd_gradient(F, at, h)
    if kind == "divergence":
        return np.trace(fd_gradient(F, at, h), axis1=-2, axis2=-1)
    if kind == "convective":
        if w is None:
            raise ValueError("convective oracle needs the advecting field w")
        wv = np.asarray(w(at) if callable(w) else w, dtype=float)
        return np.einsum("...ij,...j->...i", fd_gradient(F, at, h), wv)
    raise ValueError(f"unknown oracle kind {kind!r}")


def fd_strain_half_space(F, at, h):
    """Strain tensor of ``F`` at points on ``x3 = 0``.

    In-plane derivatives are central; the normal derivative is one-sided
    (second order) into ``x3 > 0`` so the stencil stays in the half-space.
    """
    at = np.asarray(at, dtype=float)
    cols = []
    for j in range(2):
        e = h * _UNIT[j]
        cols.append((np.asarray(F(at + e)) - np.asarray(F(at - e))) / (2 * h))
    e3 = h * _UNIT[2]
    cols.append((-3 * np.asarray(F(at)) + 4 * np.asarray(F(at + e3)) - np.asarray(F(at + 2 * e3))) / (2 * h))
    grad = np.stack(cols, axis=-1)
    return 0.5 * (grad + np.swapaxes(grad, -1, -2))


def frame_result_to_cartesian(comps, at_points):
    """Map frame components ``(c_rho, c_theta, c_phi)`` at Cartesian points to Cartesian."""
    _, theta, phi = spherical_coords(at_points)
    return frame_to_cartesian(*comps, theta, phi)


__all__ = [
    "FULL", "HALF", "Channel", "Profile", "ProfileValues",
    "laplacian_u", "divergence_u", "convective", "pressure_gradient",
    "laplacian_frame", "divergence_frame", "convective_frame", "pressure_gradient_frame",
    "velocity_gradient_frame", "momentum_residual_frame", "induction_residual_frame",
    "cartesian_fields", "cartesian_oracle", "fd_gradient", "fd_laplacian", "fd_strain_half_space",
    "frame_result_to_cartesian", "cartesian_to_frame",
]
