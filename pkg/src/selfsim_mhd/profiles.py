"""The reduced angular ODE system, its boundary data and conserved quantities.

Residuals are reported as ``LHS - RHS`` of

    (1)  f'' + f' cot = f' g - (f^2 + g^2 + h^2) + B^2 - 2P
    (2)  f' = g' g - h^2 cot + B^2 cot + P'
    (3)  (h' + h cot)' = g (h' + h cot)
    (4)  0 = g B' - g B cot - 2 B f
    (5)  0 = f + g' + g cot
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from .errors import GNotZero, OutOfDomain
from .landau import LandauParam, _as_a
from .operators import FULL, HALF, Channel, Profile, cartesian_fields, fd_strain_half_space

DOMAINS = {"full": FULL, "half": HALF}
RICHARDSON_OFFSETS = (1e-3, 5e-4, 2.5e-4)


@dataclass(frozen=True)
class OdeResidual:
    r1: np.ndarray
    r2: np.ndarray
    r3: np.ndarray
    r4: np.ndarray
    r5: np.ndarray

    def as_array(self) -> np.ndarray:
        return np.stack([np.asarray(r, dtype=float) for r in (self.r1, self.r2, self.r3, self.r4, self.r5)])

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.as_array())))


def _interior(phi, domain: str):
    lo, hi = DOMAINS[domain]
    phi = np.asarray(phi, dtype=float)
    if np.any(phi <= lo) or np.any(phi >= hi):
        raise OutOfDomain(f"phi must lie strictly inside ({lo}, {hi:.6g})")
    return phi


def ode_residuals(pr: Profile, domain: str = "full", phi=None) -> OdeResidual:
    phi = _interior(phi, domain)
    v = pr.values(phi)
    cot = np.cos(phi) / np.sin(phi)
    csc2 = 1.0 / np.sin(phi) ** 2
    H = v.dh + v.h * cot
    dH = v.d2h + v.dh * cot - v.h * csc2
    r1 = v.d2f + v.df * cot - (v.df * v.g - (v.f**2 + v.g**2 + v.h**2) + v.B**2 - 2 * v.P)
    r2 = v.df - (v.dg * v.g - v.h**2 * cot + v.B**2 * cot + v.dP)
    r3 = dH - v.g * H
    r4 = -(v.g * v.dB - v.g * v.B * cot - 2 * v.B * v.f)
    r5 = -(v.f + v.dg + v.g * cot)
    return OdeResidual(r1, r2, r3, r4, r5)


# -- boundary functionals ----------------------------------------------------

def endpoint_limit(fn, end: float, side: int, pr_domain=None, offsets=RICHARDSON_OFFSETS) -> float:
    """Limit of ``fn`` at ``end`` approached from ``end + side * t``, ``t > 0``.

    Evaluates directly when ``end`` lies in ``pr_domain`` and ``fn`` is finite
    there; otherwise quadratic Richardson extrapolation from interior offsets
    (shifted past the domain edge when the profile stops short of ``end``).
    """
    if pr_domain is not None and pr_domain[0] <= end <= pr_domain[1]:
        with np.errstate(all="ignore"):
            direct = float(fn(np.float64(end)))
        if np.isfinite(direct):
            return direct
    gap = 0.0
    if pr_domain is not None:
        gap = max(0.0, pr_domain[0] - end) if side > 0 else max(0.0, end - pr_domain[1])
    t = np.asarray(offsets, dtype=float)
    if gap > 0.0:
        t = 1.01 * gap * t / t.min()
    vals = np.array([float(fn(end + side * tk)) for tk in t])
    # Lagrange extrapolation to t = 0
    total = 0.0
    for i in range(len(t)):
        w = 1.0
        for j in range(len(t)):
            if j != i:
                w *= t[j] / (t[j] - t[i])
        total += w * vals[i]
    return total


@dataclass(frozen=True)
class BoundaryResidual:
    bc: str
    values: dict[str, float]

    def max_abs(self) -> float:
        return max(abs(v) for v in self.values.values()) if self.values else 0.0


def _symmetry_set(pr: Profile, end: float, side: int, tag: str) -> dict[str, float]:
    dom = pr.domain
    return {
        f"f'({tag})": endpoint_limit(lambda p: pr.f(p, 1), end, side, dom),
        f"g({tag})": endpoint_limit(pr.g, end, side, dom),
        f"h({tag})": endpoint_limit(pr.h, end, side, dom),
        f"B({tag})": endpoint_limit(pr.B, end, side, dom),
    }


def boundary_residuals(pr: Profile, bc: str = "full_space") -> BoundaryResidual:
    """Endpoint functionals for ``bc`` in ``full_space``, ``noslip``, ``navier_slip``."""
    values = _symmetry_set(pr, 0.0, +1, "0")
    dom = pr.domain
    half = np.pi / 2
    if bc == "full_space":
        values.update(_symmetry_set(pr, np.pi, -1, "pi"))
    elif bc == "noslip":
        values.update({
            "f(pi/2)": endpoint_limit(pr.f, half, -1, dom),
            "g(pi/2)": endpoint_limit(pr.g, half, -1, dom),
            "h(pi/2)": endpoint_limit(pr.h, half, -1, dom),
        })
    elif bc == "navier_slip":
        values.update({
            "f'(pi/2)": endpoint_limit(lambda p: pr.f(p, 1), half, -1, dom),
            "g(pi/2)": endpoint_limit(pr.g, half, -1, dom),
            "h'(pi/2)": endpoint_limit(lambda p: pr.h(p, 1), half, -1, dom),
        })
    else:
        raise ValueError(f"unknown boundary condition {bc!r}")
    return BoundaryResidual(bc, values)


# -- reduction of the system ---------------------------------------------------

@dataclass(frozen=True)
class ReductionQuantities:
    H: np.ndarray
    J: np.ndarray
    K: np.ndarray
    Q: np.ndarray
    C2: np.ndarray
    C3: np.ndarray


def reduction_quantities(pr: Profile, phi, domain: str = "full") -> ReductionQuantities:
    """``H = h' + h cot``, ``J = f sin``, ``K = g sin``, ``Q = B g^2 sin`` and the
    pointwise values of the integration constants ``C2``, ``C3``."""
    phi = _interior(phi, domain)
    v = pr.values(phi)
    s, c = np.sin(phi), np.cos(phi)
    K = v.g * s
    C2 = v.f - v.g**2 / 2 - v.P
    C3 = v.df * s - K * v.f - 2 * K + 2 * C2 * c
    return ReductionQuantities(
        H=v.dh + v.h * c / s,
        J=v.f * s,
        K=K,
        Q=v.B * v.g**2 * s,
        C2=C2,
        C3=C3,
    )


def pressure_recover(pr: Profile, C2: float = 0.0) -> Channel:
    """``P = f - g^2/2 - C2`` as a channel with its first derivative."""
    f, g = pr.f, pr.g
    return Channel(
        lambda phi: f(phi) - g(phi) ** 2 / 2 - C2,
        lambda phi: f(phi, 1) - g(phi) * g(phi, 1),
    )


def closed_form_chain(a) -> Profile:
    """Rebuild the profile through ``w -> L -> K -> (f, g) -> P``.

    ``w(t) = 2/(t - a)`` solves ``w' = -w^2/2``; derivatives of ``w`` are taken
    from that equation.  ``L = (1 - t^2) w``, ``K(phi) = L(cos phi)``,
    ``f = L'(cos phi)`` and ``g = K / sin(phi) = sin(phi) w(cos phi)``.
    """
    a = _as_a(a)

    def w(t):
        return 2.0 / (t - a)

    def w_derivs(t):
        w0 = w(t)
        w1 = -0.5 * w0**2
        w2 = -w0 * w1
        w3 = -(w1**2 + w0 * w2)
        return w0, w1, w2, w3

    def L_derivs(t):
        w0, w1, w2, w3 = w_derivs(t)
        q = 1.0 - t * t
        L1 = -2 * t * w0 + q * w1
        L2 = -2 * w0 - 4 * t * w1 + q * w2
        L3 = -6 * w1 - 6 * t * w2 + q * w3
        return L1, L2, L3

    def f0(phi):
        return L_derivs(np.cos(phi))[0]

    def f1(phi):
        return -np.sin(phi) * L_derivs(np.cos(phi))[1]

    def f2(phi):
        _, L2, L3 = L_derivs(np.cos(phi))
        return -np.cos(phi) * L2 + np.sin(phi) ** 2 * L3

    def g0(phi):
        return np.sin(phi) * w(np.cos(phi))

    def g1(phi):
        s, c = np.sin(phi), np.cos(phi)
        w0, w1, _, _ = w_derivs(c)
        return c * w0 - s * s * w1

    def g2(phi):
        s, c = np.sin(phi), np.cos(phi)
        w0, w1, w2, _ = w_derivs(c)
        return -s * w0 - 3 * s * c * w1 + s**3 * w2

    base = Profile(f=Channel(f0, f1, f2), g=Channel(g0, g1, g2))
    return Profile(f=base.f, g=base.g, P=pressure_recover(base, 0.0))


def chain_stages(a, phi):
    """Intermediate chain values ``w(t)``, ``L(t)``, ``K(phi)`` at ``t = cos(phi)``."""
    a = LandauParam(_as_a(a)).a
    t = np.cos(np.asarray(phi, dtype=float))
    w = 2.0 / (t - a)
    L = (1 - t * t) * w
    return w, L, L


# -- invariants along solutions ----------------------------------------------

def conserved_q(pr: Profile, phi) -> np.ndarray:
    phi = np.asarray(phi, dtype=float)
    return pr.B(phi) * pr.g(phi) ** 2 * np.sin(phi)


def h_transport(pr: Profile, phi) -> np.ndarray:
    """``H(phi) exp(-int_{phi_0}^{phi} g)`` with ``phi_0 = phi[0]``; constant where r3 = 0."""
    phi = np.asarray(phi, dtype=float)
    H = pr.h(phi, 1) + pr.h(phi) * np.cos(phi) / np.sin(phi)
    integral = np.zeros_like(phi)
    for k in range(1, phi.size):
        seg, _ = quad(lambda t: float(pr.g(t)), phi[k - 1], phi[k], epsabs=1e-14, epsrel=1e-13, limit=200)
        integral[k] = integral[k - 1] + seg
    return H * np.exp(-integral)


# -- Navier slip ------------------------------------------------------------

@dataclass(frozen=True)
class NavierSlipCheck:
    cartesian_tangential_stress: tuple[float, float]
    profile_form: tuple[float, float]
    stress_vanishes: bool
    profile_vanishes: bool

    @property
    def agreement(self) -> bool:
        """Both forms of the slip condition hold."""
        return self.stress_vanishes and self.profile_vanishes

    @property
    def equivalent(self) -> bool:
        """The two forms agree on whether the slip condition holds."""
        return self.stress_vanishes == self.profile_vanishes


def navier_slip_equivalence(pr: Profile, rho: float = 1.0, theta: float = 0.3, h: float = 1e-4,
                            tol: float = 1e-8) -> NavierSlipCheck:
    """Compare ``(D u . n) . tau`` on ``x3 = 0`` with ``(f'(pi/2), h'(pi/2))``."""
    half = np.pi / 2
    g_edge = float(pr.g(half))
    if abs(g_edge) > tol:
        raise GNotZero(f"g(pi/2) = {g_edge:.3g}; the comparison assumes u.n = 0")
    u, _, _ = cartesian_fields(pr)
    x = np.array([rho * np.cos(theta), rho * np.sin(theta), 0.0])
    D = fd_strain_half_space(u, x, h)
    n = np.array([0.0, 0.0, -1.0])
    tau_r = np.array([np.cos(theta), np.sin(theta), 0.0])
    tau_t = np.array([-np.sin(theta), np.cos(theta), 0.0])
    Dn = D @ n
    stress = (float(Dn @ tau_r), float(Dn @ tau_t))
    form = (float(pr.f(half, 1)), float(pr.h(half, 1)))
    return NavierSlipCheck(
        cartesian_tangential_stress=stress,
        profile_form=form,
        stress_vanishes=max(abs(s) for s in stress) <= tol,
        profile_vanishes=max(abs(s) for s in form) <= tol,
    )


__all__ = [
    "OdeResidual", "BoundaryResidual", "ReductionQuantities", "NavierSlipCheck",
    "ode_residuals", "boundary_residuals", "reduction_quantities", "pressure_recover",
    "closed_form_chain", "chain_stages", "conserved_q", "h_transport", "endpoint_limit",
    "navier_slip_equivalence",
]
