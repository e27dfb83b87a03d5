"""Cartesian finite-difference verification of the stationary MHD system.

Residual groups (u, B, p given as vectorized Cartesian closures):

    momentum   -lap u + (u.grad) u - (B.grad) B + grad p
    induction  (u.grad) B - (B.grad) u
    divergence div u, div B
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ExclusionViolation
from .operators import fd_strain_half_space

_UNIT = np.eye(3)
_CHUNK = 100_000


@dataclass(frozen=True)
class GridRegion:
    lo: tuple[float, float, float] = (-2.0, -2.0, -2.0)
    hi: tuple[float, float, float] = (2.0, 2.0, 2.0)
    n: int = 101
    axis_radius: float = 0.1
    origin_radius: float = 0.2

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("need at least two points per axis")
        if min(self.axis_radius, self.origin_radius) <= 2 * self.spacing:
            raise ValueError(
                f"exclusion radii must exceed twice the grid spacing {self.spacing:.4g}"
            )

    @property
    def spacing(self) -> float:
        return float(max(np.subtract(self.hi, self.lo)) / (self.n - 1))

    def nodes(self) -> np.ndarray:
        axes = [np.linspace(a, b, self.n) for a, b in zip(self.lo, self.hi)]
        X = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1)
        return X.reshape(-1, 3)

    def clearance(self, x) -> np.ndarray:
        """Signed distance to the excluded set (positive outside it)."""
        x = np.asarray(x, dtype=float)
        axis = np.hypot(x[..., 0], x[..., 1]) - self.axis_radius
        origin = np.linalg.norm(x, axis=-1) - self.origin_radius
        return np.minimum(axis, origin)

    def admissible(self, h: float) -> np.ndarray:
        """Grid nodes whose whole stencil (reach ``h``) stays outside the exclusions."""
        X = self.nodes()
        return X[self.clearance(X) > h]


@dataclass(frozen=True)
class ResidualReport:
    momentum_residual_max: float
    momentum_residual_rms: float
    induction_residual_max: float
    induction_residual_rms: float
    div_u_max: float
    div_B_max: float
    boundary_residual_max: float
    n_points: int
    h: float
    region: GridRegion | None = None
    extra: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        out = {k: getattr(self, k) for k in (
            "momentum_residual_max", "momentum_residual_rms", "induction_residual_max",
            "induction_residual_rms", "div_u_max", "div_B_max", "boundary_residual_max",
            "n_points", "h",
        )}
        if self.region is not None:
            out["grid"] = {"lo": list(self.region.lo), "hi": list(self.region.hi), "n": self.region.n,
                           "axis_radius": self.region.axis_radius,
                           "origin_radius": self.region.origin_radius}
        return out


def zero_vector(x):
    return np.zeros_like(np.asarray(x, dtype=float))


def zero_scalar(x):
    return np.zeros(np.asarray(x, dtype=float).shape[:-1])


def _stencil(F, x, h):
    """Centre value, Jacobian ``J[..., i, j] = d_j F_i`` and Laplacian of F."""
    c = np.asarray(F(x), dtype=float)
    cols, lap = [], -6.0 * c
    for j in range(3):
        e = h * _UNIT[j]
        fp, fm = np.asarray(F(x + e), dtype=float), np.asarray(F(x - e), dtype=float)
        cols.append((fp - fm) / (2 * h))
        lap = lap + fp + fm
    return c, np.stack(cols, axis=-1), lap / h**2


def _residual_chunk(fields, x, h):
    u, B, p = fields
    uc, Ju, lap_u = _stencil(u, x, h)
    Bc, JB, _ = _stencil(B, x, h)
    _, grad_p, _ = _stencil(p, x, h)
    mom = -lap_u + np.einsum("nij,nj->ni", Ju, uc) - np.einsum("nij,nj->ni", JB, Bc) + grad_p
    ind = np.einsum("nij,nj->ni", JB, uc) - np.einsum("nij,nj->ni", Ju, Bc)
    div_u = np.trace(Ju, axis1=-2, axis2=-1)
    div_B = np.trace(JB, axis1=-2, axis2=-1)
    return (np.linalg.norm(mom, axis=-1), np.linalg.norm(ind, axis=-1),
            np.abs(div_u), np.abs(div_B))


def residual_fields(fields, points, h: float):
    """Pointwise residual magnitudes ``(momentum, induction, |div u|, |div B|)``."""
    points = np.atleast_2d(np.asarray(points, dtype=float))
    parts = [_residual_chunk(fields, points[i:i + _CHUNK], h) for i in range(0, len(points), _CHUNK)]
    return tuple(np.concatenate([p[k] for p in parts]) for k in range(4))


def _rms(v):
    return float(np.sqrt(np.mean(v**2))) if v.size else 0.0


def _max(v):
    return float(np.max(v)) if v.size else 0.0


def mhd_residual_grid(fields, region: GridRegion | None = None, h: float = 1e-3, points=None,
                      bc: str | None = None, boundary_samples=None) -> ResidualReport:
    """Second-order central-difference residuals of ``fields = (u, B, p)``.

    With ``points=None`` the admissible nodes of ``region`` are used; explicit
    ``points`` whose stencils reach into an exclusion zone raise
    :class:`ExclusionViolation`.
    """
    region = region or GridRegion()
    if h <= 0:
        raise ValueError("FD step must be positive")
    if points is None:
        pts = region.admissible(h)
    else:
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        bad = region.clearance(pts) <= h
        if np.any(bad):
            raise ExclusionViolation(f"{int(bad.sum())} stencil(s) touch the excluded axis/origin zone")
    B = fields[1] if fields[1] is not None else zero_vector
    p = fields[2] if fields[2] is not None else zero_scalar
    mom, ind, du, dB = residual_fields((fields[0], B, p), pts, h)
    boundary = 0.0
    if bc is not None:
        boundary = boundary_check((fields[0], B, p), bc, boundary_samples, h=h)
    return ResidualReport(
        momentum_residual_max=_max(mom), momentum_residual_rms=_rms(mom),
        induction_residual_max=_max(ind), induction_residual_rms=_rms(ind),
        div_u_max=_max(du), div_B_max=_max(dB), boundary_residual_max=boundary,
        n_points=int(len(pts)), h=float(h), region=region,
    )


def observed_orders(values, steps) -> list[float]:
    """Successive observed orders ``log(e_k / e_{k+1}) / log(h_k / h_{k+1})``."""
    v, s = np.asarray(values, dtype=float), np.asarray(steps, dtype=float)
    return [float(np.log(v[k] / v[k + 1]) / np.log(s[k] / s[k + 1])) for k in range(len(v) - 1)]


def scaling_invariance_check(field, lambdas, samples, degree: int = 1) -> float:
    """``max |lam^degree F(lam x) - F(x)|`` over ``lambdas`` and ``samples``.

    ``degree`` is 1 for u and B and 2 for the pressure.
    """
    x = np.atleast_2d(np.asarray(samples, dtype=float))
    base = np.asarray(field(x), dtype=float)
    worst = 0.0
    for lam in lambdas:
        scaled = lam**degree * np.asarray(field(lam * x), dtype=float)
        gap = np.abs(scaled - base)
        if gap.ndim > 1:
            gap = np.linalg.norm(gap, axis=-1)
        worst = max(worst, float(np.max(gap)))
    return worst


def default_plane_samples(n: int = 16, radii=(0.5, 1.0, 2.0)) -> np.ndarray:
    th = np.arange(n) * (2 * np.pi / n)
    return np.array([[r * np.cos(t), r * np.sin(t), 0.0] for r in radii for t in th])


def boundary_check(fields, bc: str, samples=None, h: float = 1e-4) -> float:
    """Largest boundary-condition violation on the plane ``x3 = 0``.

    ``noslip``: ``max(|u|, |B.n|)``.  ``navier_slip``: ``max(|u.n|, |tangential
    part of D(u) n|, |B.n|)`` with ``n = -e3`` and D(u) from one-sided FD.
    """
    x = default_plane_samples() if samples is None else np.atleast_2d(np.asarray(samples, dtype=float))
    if np.any(np.abs(x[:, 2]) > 1e-14) or np.any(np.hypot(x[:, 0], x[:, 1]) == 0):
        raise ValueError("boundary samples must lie in the plane x3 = 0, away from the origin")
    u = fields[0]
    B = fields[1] if fields[1] is not None else zero_vector
    n = np.array([0.0, 0.0, -1.0])
    uv, Bv = np.asarray(u(x), dtype=float), np.asarray(B(x), dtype=float)
    b_n = np.abs(Bv @ n)
    if bc == "noslip":
        worst = np.maximum(np.linalg.norm(uv, axis=-1), b_n)
    elif bc in ("navier_slip", "navier"):
        D = fd_strain_half_space(u, x, h)
        traction = D @ n
        tangential = traction[:, :2]
        worst = np.maximum.reduce([np.abs(uv @ n), np.linalg.norm(tangential, axis=-1), b_n])
    else:
        raise ValueError(f"unknown boundary condition {bc!r}")
    return float(np.max(worst))


__all__ = [
    "GridRegion", "ResidualReport", "mhd_residual_grid", "residual_fields", "observed_orders",
    "scaling_invariance_check", "boundary_check", "default_plane_samples", "zero_vector", "zero_scalar",
]
