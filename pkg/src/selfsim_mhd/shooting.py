"""Shooting from the symmetry axis for the full-space and half-space problems.

Trajectories start at ``phi = epsilon`` from a regular series, are integrated
with an adaptive DOP853 stepper and are matched against the boundary data at
the far end.  The full-space far end sits at ``pi - far_offset``, where the
mismatch is measured against the regular local expansion at ``phi = pi``:
each component is scaled so that it reports the amplitude of the mode that
is singular at ``pi``.
"""
from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.integrate import solve_ivp
from scipy.optimize import least_squares, minimize_scalar

from . import _rk
from .errors import BlowUp, NoConvergence, StiffnessFailure, TrivialProfile
from .operators import Channel, Profile

log = logging.getLogger(__name__)

PARAM_NAMES = ("f0", "h1", "P0")
BC_NAMES = ("full_space", "noslip", "navier_slip")
B_MODES = {"zero": 0, "conserved": 1}


@dataclass(frozen=True)
class AxisParams:
    f0: float = 0.0
    h1: float = 0.0
    P0: float = 0.0
    b_mode: str = "zero"
    # diagnostic branch only: value of B at phi = epsilon
    b_seed: float = 0.0

    def __post_init__(self):
        if self.b_mode not in B_MODES:
            raise ValueError(f"b_mode must be one of {tuple(B_MODES)}")

    def vector(self, names=PARAM_NAMES) -> np.ndarray:
        return np.array([getattr(self, n) for n in names], dtype=float)

    def with_values(self, names, values) -> "AxisParams":
        return replace(self, **{n: float(v) for n, v in zip(names, values)})


@dataclass(frozen=True)
class ShootingState:
    y: np.ndarray
    phi: float

    def __post_init__(self):
        y = np.asarray(self.y, dtype=float)
        if y.shape != (7,) or not np.all(np.isfinite(y)):
            raise ValueError("state must be 7 finite reals (f, f', g, h, h', B, P)")
        object.__setattr__(self, "y", y)

    @property
    def g_prime(self) -> float:
        f, g = self.y[0], self.y[2]
        return float(-f - g * np.cos(self.phi) / np.sin(self.phi))


@dataclass(frozen=True)
class ScanRange:
    name: str
    lo: float
    hi: float
    step: float

    def nodes(self) -> np.ndarray:
        if self.step <= 0 or self.hi < self.lo:
            return np.array([self.lo])
        n = int(round((self.hi - self.lo) / self.step))
        return self.lo + self.step * np.arange(n + 1)


@dataclass(frozen=True)
class ShootingConfig:
    epsilon: float = 1e-6
    far_offset: float = 1e-3
    rtol: float = 1e-10
    atol: float = 1e-12
    max_step: float = np.inf
    blowup: float = 1e8
    g_guard: float = 1e-10
    max_steps: int = 20000
    newton_tol: float = 1e-10
    max_newton_iters: int = 50
    jacobian_step: float = 1e-7
    max_halvings: int = 20
    dedup_distance: float = 1e-6
    scan: tuple[ScanRange, ...] = field(default_factory=lambda: (
        ScanRange("f0", -20.0, 20.0, 0.5), ScanRange("P0", -20.0, 20.0, 0.5)))

    def __post_init__(self):
        if not self.epsilon > 0 or not self.rtol > 0 or not self.atol > 0:
            raise ValueError("epsilon and tolerances must be positive")


# -- series start ---------------------------------------------------------------

def axis_series_init(p: AxisParams, epsilon: float = 1e-6) -> ShootingState:
    """Regular expansion at the axis: ``f = f0 + f2 e^2``, ``g = -(f0/2) e``,
    ``h = h1 e``, ``P = P0 + P2 e^2``."""
    if not 0.0 < epsilon <= 0.01:
        raise ValueError("epsilon must lie in (0, 0.01]")
    e = epsilon
    f2 = -(p.f0**2 + 2.0 * p.P0) / 4.0
    P2 = (2.0 * f2 - p.f0**2 / 4.0 + p.h1**2) / 2.0
    B = p.b_seed if p.b_mode == "conserved" else 0.0
    y = [p.f0 + f2 * e * e, 2.0 * f2 * e, -0.5 * p.f0 * e, p.h1 * e, p.h1, B, p.P0 + P2 * e * e]
    return ShootingState(np.array(y), e)


def rhs_array(phi, y, b_mode: int = 0):
    """NumPy right-hand side; ``y`` has shape ``(7, ...)``."""
    f, fp, g, h, hp, B, P = y
    s = np.sin(phi)
    cot = np.cos(phi) / s
    gp = -f - g * cot
    with np.errstate(divide="ignore", invalid="ignore"):
        dB = np.where(B != 0.0, B * cot + 2.0 * B * f / g, 0.0) if b_mode == 1 else 0.0 * B
    return np.array([
        fp,
        -fp * cot + fp * g - (f * f + g * g + h * h) + B * B - 2.0 * P,
        gp,
        hp,
        -hp * cot + h / s**2 + g * (hp + h * cot),
        dB,
        fp - gp * g + h * h * cot - B * B * cot,
    ])


# -- dense trajectories ---------------------------------------------------------

class TrajectoryProfile(Profile):
    """Profile backed by the dense output of an integrated trajectory.

    ``f'`` and ``h'`` come from their own integrated states; the remaining
    derivatives are read off the right-hand side at the interpolated state.
    """


def _trajectory_profile(sol, b_mode, domain):
    def state(phi):
        return sol.sol(np.asarray(phi, dtype=float))

    def d(phi):
        phi = np.asarray(phi, dtype=float)
        return rhs_array(phi, state(phi), b_mode)

    def g2(phi):
        phi = np.asarray(phi, dtype=float)
        y = state(phi)
        dy = rhs_array(phi, y, b_mode)
        s = np.sin(phi)
        return -y[1] - dy[2] * np.cos(phi) / s + y[2] / s**2

    prof = TrajectoryProfile(
        f=Channel(lambda p: state(p)[0], lambda p: state(p)[1], lambda p: d(p)[1]),
        g=Channel(lambda p: state(p)[2], lambda p: d(p)[2], g2),
        h=Channel(lambda p: state(p)[3], lambda p: state(p)[4], lambda p: d(p)[4]),
        B=Channel(lambda p: state(p)[5], lambda p: d(p)[5]),
        P=Channel(lambda p: state(p)[6], lambda p: d(p)[6]),
        domain=domain,
    )
    object.__setattr__(prof, "solution", sol)
    return prof


def integrate_profile(init: ShootingState, to_phi: float, cfg: ShootingConfig = ShootingConfig(),
                      b_mode: str = "zero") -> TrajectoryProfile:
    """Dense trajectory from ``init`` to ``to_phi``.

    Raises :class:`BlowUp` (with the partial ``profile`` attached) when a state
    component exceeds ``cfg.blowup`` and :class:`StiffnessFailure` when the
    step size collapses.
    """
    mode = B_MODES[b_mode]
    if not init.phi < to_phi < np.pi:
        raise ValueError("to_phi must lie beyond the initial angle and below pi")

    def blow(phi, y):
        return cfg.blowup - np.max(np.abs(y))
    blow.terminal = True

    def guard(phi, y):
        return abs(y[2]) - cfg.g_guard if (mode == 1 and y[5] != 0.0) else 1.0
    guard.terminal = True

    sol = solve_ivp(lambda p, y: rhs_array(p, y, mode), (init.phi, to_phi), init.y, method="DOP853",
                    rtol=cfg.rtol, atol=cfg.atol, max_step=cfg.max_step, dense_output=True,
                    events=[blow, guard])
    if sol.status == -1:
        raise StiffnessFailure(sol.message)
    prof = _trajectory_profile(sol, mode, (init.phi, float(sol.t[-1])))
    if sol.status == 1:
        if sol.t_events[0].size:
            err = BlowUp(float(sol.t[-1]))
        else:
            err = BlowUp(float(sol.t[-1]), f"|g| fell below {cfg.g_guard:g} with B != 0 at phi={sol.t[-1]:.6g}")
        err.profile = prof
        raise err
    return prof


def trajectory(p: AxisParams, bc: str, cfg: ShootingConfig = ShootingConfig()) -> TrajectoryProfile:
    return integrate_profile(axis_series_init(p, cfg.epsilon), far_end(bc, cfg), cfg, p.b_mode)


# -- mismatch -----------------------------------------------------------------

def far_end(bc: str, cfg: ShootingConfig) -> float:
    if bc == "full_space":
        return np.pi - cfg.far_offset
    if bc in ("noslip", "navier_slip"):
        return np.pi / 2
    raise ValueError(f"unknown boundary condition {bc!r}")


def far_mismatch(bc: str, phi: float, y: np.ndarray) -> np.ndarray:
    """Boundary functionals at the far end (zero for an admissible trajectory)."""
    f, fp, g, h, hp, B, P = y
    if bc == "noslip":
        return np.array([f, g, h])
    if bc == "navier_slip":
        return np.array([fp, g, hp])
    # regular expansion at pi in psi = pi - phi:
    #   f = F + F2 psi^2, F2 = -(F^2 + 2 P(pi))/4;  g = (F/2) psi;  h = c psi;  B = 0
    psi = np.pi - phi
    F2 = -(f * f + 2.0 * P) / 4.0
    return np.array([
        psi * (fp + 2.0 * F2 * psi),
        psi * (g - 0.5 * f * psi),
        0.5 * psi * (h + hp * psi),
        psi * B,
    ])


def mismatch(p: AxisParams, bc: str, cfg: ShootingConfig = ShootingConfig()) -> np.ndarray:
    """Far-end mismatch for axis data ``p``; all-``inf`` if the trajectory fails."""
    start = axis_series_init(p, cfg.epsilon)
    end = far_end(bc, cfg)
    status, phi, y, _ = _rk.integrate(start.y, start.phi, end, cfg.rtol, cfg.atol, cfg.max_step,
                                      cfg.blowup, B_MODES[p.b_mode], cfg.g_guard, cfg.max_steps)
    m = far_mismatch(bc, phi, y)
    if bc == "full_space" and p.b_mode == "zero":
        m = m[:3]
    if status != _rk.OK:
        return np.full(m.shape, np.inf)
    return m


@dataclass(frozen=True)
class NewtonResult:
    params: AxisParams
    residual: float
    iterations: int
    converged: bool
    reason: str = ""


def newton_refine(p0: AxisParams, unknowns, bc: str, cfg: ShootingConfig = ShootingConfig()) -> NewtonResult:
    """Damped Gauss-Newton on the far-end mismatch over the ``unknowns``."""
    unknowns = tuple(unknowns)
    x = p0.vector(unknowns)
    p = p0
    m = mismatch(p, bc, cfg)
    norm = float(np.linalg.norm(m))
    if not np.isfinite(norm):
        return NewtonResult(p, norm, 0, False, "start trajectory failed")
    for it in range(cfg.max_newton_iters + 1):
        if norm < cfg.newton_tol:
            return NewtonResult(p, norm, it, True)
        if it == cfg.max_newton_iters:
            break
        J = np.empty((m.size, x.size))
        for k in range(x.size):
            step = cfg.jacobian_step * (1.0 + abs(x[k]))
            xk = x.copy()
            xk[k] += step
            J[:, k] = (mismatch(p0.with_values(unknowns, xk), bc, cfg) - m) / step
        if not np.all(np.isfinite(J)):
            return NewtonResult(p, norm, it, False, "jacobian probe failed")
        delta = np.linalg.lstsq(J, -m, rcond=None)[0]
        lam = 1.0
        for _ in range(cfg.max_halvings + 1):
            trial_x = x + lam * delta
            trial_p = p0.with_values(unknowns, trial_x)
            trial_m = mismatch(trial_p, bc, cfg)
            trial_norm = float(np.linalg.norm(trial_m))
            if np.isfinite(trial_norm) and trial_norm < norm:
                break
            lam *= 0.5
        else:
            return NewtonResult(p, norm, it, False, "line search failed")
        x, p, m, norm = trial_x, trial_p, trial_m, trial_norm
    return NewtonResult(p, norm, cfg.max_newton_iters, False, "iteration limit")


@dataclass
class ShootResult:
    roots: list[tuple[AxisParams, float]]
    failures: list[tuple[AxisParams, str]]
    starts: int

    @property
    def converged_runs(self) -> int:
        return self.starts - len(self.failures)


def _scan_nodes(base: AxisParams, ranges):
    names = [r.name for r in ranges]
    for combo in itertools.product(*(r.nodes() for r in ranges)):
        yield base.with_values(names, combo)


def shoot(bc: str, unknowns=("f0", "P0"), base: AxisParams = AxisParams(), cfg: ShootingConfig = ShootingConfig(),
          scan=None) -> ShootResult:
    """Newton refinement from every scan node; converged roots deduplicated.

    Start points whose refinement fails are collected in ``failures``
    (a :class:`NoConvergence` per start, never raised).
    """
    if bc not in BC_NAMES:
        raise ValueError(f"unknown boundary condition {bc!r}")
    unknowns = tuple(unknowns)
    bad = set(unknowns) - set(PARAM_NAMES)
    if bad:
        raise ValueError(f"unknown parameters {sorted(bad)}")
    n_targets = mismatch(base, bc, cfg).size
    if len(unknowns) > n_targets:
        raise ValueError("more unknowns than boundary targets")
    ranges = tuple(cfg.scan if scan is None else scan)

    roots: list[tuple[AxisParams, float]] = []
    failures: list[tuple[AxisParams, str]] = []
    starts = 0
    for start in _scan_nodes(base, ranges):
        starts += 1
        res = newton_refine(start, unknowns, bc, cfg)
        if not res.converged:
            failures.append((start, str(NoConvergence(res.reason))))
            continue
        roots.append((res.params, res.residual))

    unique: list[tuple[AxisParams, float]] = []
    for params, resid in sorted(roots, key=lambda r: tuple(r[0].vector())):
        v = params.vector()
        for k, (q, qr) in enumerate(unique):
            if np.linalg.norm(q.vector() - v) < cfg.dedup_distance:
                if resid < qr:
                    unique[k] = (params, resid)
                break
        else:
            unique.append((params, resid))
    log.info("shoot %s: %d starts, %d converged, %d distinct roots", bc, starts, starts - len(failures), len(unique))
    return ShootResult(unique, failures, starts)


# -- identifying the Landau parameter -----------------------------------------

def _landau_f(a, phi):
    return 2 * (a - 1) * (a + 1) / (a - np.cos(phi)) ** 2 - 2


def fit_landau_a(pr: Profile, n_samples: int = 1000) -> tuple[float, float]:
    """Least-squares ``a`` for the closed-form jet profile ``f``; returns ``(a, rms)``."""
    lo, hi = pr.domain
    pad = 1e-9 * (hi - lo)
    phi = np.linspace(lo + pad, hi - pad, n_samples)
    f = pr.f(phi)
    if np.max(np.abs(f)) <= 1e-8:
        raise TrivialProfile("f vanishes; the jet parameter is unidentifiable (|a| -> inf)")

    def rms(a):
        return float(np.sqrt(np.mean((_landau_f(a, phi) - f) ** 2)))

    best = None
    for sign in (1.0, -1.0):
        res = minimize_scalar(lambda s: rms(sign * (1.0 + np.exp(s))), bounds=(-25.0, 25.0), method="bounded",
                              options={"xatol": 1e-12})
        cand = sign * (1.0 + np.exp(res.x))
        if best is None or rms(cand) < rms(best):
            best = cand
    sign = np.sign(best)
    polish = least_squares(lambda s: _landau_f(sign * (1.0 + np.exp(s[0])), phi) - f, [np.log(abs(best) - 1.0)],
                           xtol=1e-15, ftol=1e-15, gtol=1e-15)
    a = float(sign * (1.0 + np.exp(polish.x[0])))
    return a, rms(a)


__all__ = [
    "AxisParams", "ShootingState", "ShootingConfig", "ScanRange", "ShootResult", "NewtonResult",
    "TrajectoryProfile", "axis_series_init", "integrate_profile", "trajectory", "mismatch",
    "far_mismatch", "newton_refine", "shoot", "fit_landau_a", "rhs_array",
]
