"""The acceptance battery: ten numbered end-to-end checks with fixed tolerances.

Each check returns a :class:`CriterionResult`; ``run_all`` drives them and
``format_table`` renders the pass/fail lines printed by ``verify suite``.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field

import mpmath
import numpy as np
from scipy.stats import qmc

from .geometry import (DIRECTIONS, SphericalField, SphericalPoint, cartesian_coords, cartesian_to_frame,
                       covariant_derivative, frame_matrix, frame_to_cartesian, spherical_coords)
from .landau import a_from_beta, beta_from_a, force_flux, landau_cartesian, landau_profiles
from .operators import (Channel, Profile, cartesian_fields, cartesian_oracle, convective_frame,
                        divergence_frame, frame_result_to_cartesian, laplacian_frame,
                        momentum_residual_frame, pressure_gradient_frame)
from .profiles import (boundary_residuals, closed_form_chain, conserved_q, h_transport, ode_residuals,
                       reduction_quantities)
from .shooting import AxisParams, ScanRange, ShootingConfig, fit_landau_a, shoot, trajectory
from .verify import GridRegion, observed_orders, residual_fields, zero_vector

LANDAU_SET = (1.5, 2.0, 5.0, -3.0)


@dataclass
class CriterionResult:
    number: int
    title: str
    passed: bool
    detail: dict = field(default_factory=dict)
    seconds: float = 0.0

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.number:2d}. {self.title}"


def smooth_test_profile() -> Profile:
    """A profile with all five channels nonzero and analytic derivatives."""
    s, c = np.sin, np.cos
    return Profile(
        f=Channel(lambda p: 1 + 0.5 * c(p), lambda p: -0.5 * s(p), lambda p: -0.5 * c(p)),
        g=Channel(lambda p: 0.3 * s(p) + 0.2 * s(2 * p), lambda p: 0.3 * c(p) + 0.4 * c(2 * p),
                  lambda p: -0.3 * s(p) - 0.8 * s(2 * p)),
        h=Channel(lambda p: 0.6 * s(p) + 0.1 * s(2 * p), lambda p: 0.6 * c(p) + 0.2 * c(2 * p),
                  lambda p: -0.6 * s(p) - 0.4 * s(2 * p)),
        B=Channel(lambda p: 0.8 * s(p), lambda p: 0.8 * c(p), lambda p: -0.8 * s(p)),
        P=Channel(lambda p: 0.5 + 0.25 * c(p) ** 2, lambda p: -0.5 * s(p) * c(p)),
    )


def quasi_random_points(n: int, rho=(0.5, 2.0), phi=(0.2, np.pi - 0.2)):
    """Halton points mapped to ``(rho, theta, phi)`` boxes; returns spherical and Cartesian arrays."""
    z = qmc.Halton(d=3, scramble=False).random(n + 1)[1:]
    r = rho[0] + (rho[1] - rho[0]) * z[:, 0]
    th = 2 * np.pi * z[:, 1]
    ph = phi[0] + (phi[1] - phi[0]) * z[:, 2]
    return r, th, ph, cartesian_coords(r, th, ph)


# -- 1 ----------------------------------------------------------------------

def _operator_pairs(pr, r, ph, x):
    u, B, p = cartesian_fields(pr)
    to_cart = lambda comps: frame_result_to_cartesian(comps, x)  # noqa: E731
    return {
        "laplacian": (to_cart(laplacian_frame(pr, r, ph)), lambda h: cartesian_oracle(u, "laplacian", x, h)),
        "divergence": (divergence_frame(pr, r, ph), lambda h: cartesian_oracle(u, "divergence", x, h)),
        "convective_uu": (to_cart(convective_frame(pr, "uu", r, ph)),
                          lambda h: cartesian_oracle(u, "convective", x, h, w=u)),
        "convective_uB": (to_cart(convective_frame(pr, "uB", r, ph)),
                          lambda h: cartesian_oracle(B, "convective", x, h, w=u)),
        "convective_Bu": (to_cart(convective_frame(pr, "Bu", r, ph)),
                          lambda h: cartesian_oracle(u, "convective", x, h, w=B)),
        "convective_BB": (to_cart(convective_frame(pr, "BB", r, ph)),
                          lambda h: cartesian_oracle(B, "convective", x, h, w=B)),
        "pressure_gradient": (to_cart(pressure_gradient_frame(pr, r, ph)),
                              lambda h: cartesian_oracle(p, "gradient", x, h)),
    }


def smooth_test_field() -> SphericalField:
    """A theta-dependent frame field with analytic partial derivatives."""
    def comps(rho, th, ph):
        return (rho * np.cos(th) + np.sin(ph), np.sin(th) * np.cos(ph) / rho,
                rho**2 * np.sin(2 * ph) / 4 + 0.3)

    def jac(rho, th, ph):
        return np.array([
            [np.cos(th), -rho * np.sin(th), np.cos(ph)],
            [-np.sin(th) * np.cos(ph) / rho**2, np.cos(th) * np.cos(ph) / rho, -np.sin(th) * np.sin(ph) / rho],
            [rho * np.sin(2 * ph) / 2, 0.0, rho**2 * np.cos(2 * ph) / 2],
        ])

    return SphericalField(comps, jac)


def _connection_pairs(field, r, th, ph, x):
    def Y(pts):
        rr, tt, pp = spherical_coords(pts)
        c = np.array([field(*q) for q in zip(rr, tt, pp)])
        return frame_to_cartesian(c[:, 0], c[:, 1], c[:, 2], tt, pp)

    R = frame_matrix(th, ph)
    pairs = {}
    for j, name in enumerate(DIRECTIONS):
        exact = np.array([covariant_derivative(field, name, SphericalPoint(*q)).as_array()
                          for q in zip(r, th, ph)])
        e = R[:, :, j]

        def oracle(h, e=e):
            d = (Y(x + h * e) - Y(x - h * e)) / (2 * h)
            return cartesian_to_frame(d, th, ph)
        pairs[f"connection_{name}"] = (exact, oracle)
    return pairs


def criterion_1(n_points: int = 100, rho=(0.5, 3.0), phi=(0.1, np.pi - 0.1)) -> CriterionResult:
    r, th, ph, x = quasi_random_points(n_points, rho=rho, phi=phi)
    steps = (4e-3, 2e-3, 1e-3)
    pairs = {f"landau2/{k}": v for k, v in _operator_pairs(landau_profiles(2.0), r, ph, x).items()
             if not k.endswith(("uB", "Bu", "BB"))}
    pairs.update({f"generic/{k}": v for k, v in _operator_pairs(smooth_test_profile(), r, ph, x).items()})
    pairs.update(_connection_pairs(smooth_test_field(), r, th, ph, x))
    detail, ok = {}, True
    for name, (exact, oracle) in pairs.items():
        errs = [float(np.max(np.abs(oracle(h) - exact))) for h in steps]
        orders = observed_orders(errs, steps)
        fine = float(np.max(np.abs(oracle(1e-4) - exact)))
        good = all(1.5 <= q <= 2.5 for q in orders) and fine < 1e-6
        ok &= good
        detail[name] = {"orders": orders, "error_h1e-4": fine, "pass": good}
    return CriterionResult(1, "spherical operators match the Cartesian FD oracle", ok, detail)


# -- 2 ----------------------------------------------------------------------

def criterion_2(n_points: int = 1000) -> CriterionResult:
    r, _, ph, _ = quasi_random_points(n_points, phi=(1e-3, np.pi - 1e-3))
    detail, ok = {}, True
    for a in LANDAU_SET:
        pr = landau_profiles(a)
        mom = float(np.max(np.abs(np.stack(momentum_residual_frame(pr, r, ph)))))
        div = float(np.max(np.abs(divergence_frame(pr, r, ph))))
        ok &= mom < 1e-10 and div < 1e-12
        detail[f"a={a:g}"] = {"momentum": mom, "div_u": div}
    return CriterionResult(2, "Landau jets solve the stationary Navier-Stokes system", ok, detail)


# -- 3 ----------------------------------------------------------------------

def criterion_3(n_points: int = 1000) -> CriterionResult:
    phi = np.linspace(0, np.pi, n_points + 2)[1:-1]
    detail, ok = {}, True
    for a in LANDAU_SET:
        pr = landau_profiles(a)
        ode = ode_residuals(pr, "full", phi).max_abs()
        bnd = boundary_residuals(pr, "full_space").max_abs()
        ok &= ode < 1e-10 and bnd < 1e-10
        detail[f"a={a:g}"] = {"ode": ode, "boundary": bnd}
    return CriterionResult(3, "Landau profiles satisfy the angular ODE system and end conditions", ok, detail)


# -- 4 ----------------------------------------------------------------------

def beta_reference(a: float, digits: int = 40) -> float:
    """High-precision evaluation of the force/parameter relation."""
    with mpmath.workdps(digits):
        A = mpmath.mpf(a)
        val = 16 * mpmath.pi * (A + A**2 / 2 * mpmath.log((A - 1) / (A + 1)) + 4 * A / (3 * (A**2 - 1)))
        return float(val)


def round_trip_grid(n: int = 50, lo: float = 1.0 + 1e-3, hi: float = 1e3):
    mags = np.geomspace(lo, hi, n)
    return np.concatenate([mags, -mags])


def criterion_4() -> CriterionResult:
    worst = 0.0
    for a in round_trip_grid():
        worst = max(worst, abs(a_from_beta(beta_from_a(a)).a - a))
    ref = beta_reference(2.0)
    rel = abs(beta_from_a(2.0) - ref) / abs(ref)
    ok = worst < 1e-10 and rel < 1e-12
    return CriterionResult(4, "force/parameter inverse round trip and reference value", ok,
                           {"round_trip_max": worst, "beta2_rel_error": rel, "beta2": ref})


# -- 5 ----------------------------------------------------------------------

def criterion_5() -> CriterionResult:
    detail, ok = {}, True
    for a in LANDAU_SET:
        beta = beta_from_a(a)
        target = np.array([0.0, 0.0, beta])
        fluxes = [force_flux(a, r, 64) for r in (0.5, 1.0, 2.0)]
        err = max(float(np.max(np.abs(F - target))) for F in fluxes) / abs(beta)
        spread = max(float(np.max(np.abs(F - fluxes[0]))) for F in fluxes) / abs(beta)
        ok &= err <= 1e-6 and spread <= 1e-6
        detail[f"a={a:g}"] = {"relative_error": err, "radius_spread": spread}
    return CriterionResult(5, "momentum flux through spheres equals the point force", ok, detail)


# -- 6 ----------------------------------------------------------------------

def criterion_6(n_samples: int = 1000) -> CriterionResult:
    phi = np.linspace(0, np.pi, n_samples + 2)[1:-1]
    detail, ok = {}, True
    for a in LANDAU_SET:
        chain, ref = closed_form_chain(a), landau_profiles(a)
        gap = max(float(np.max(np.abs(getattr(chain, c)(phi) - getattr(ref, c)(phi)))) for c in "fghBP")
        q = reduction_quantities(chain, phi)
        dK = chain.g(phi, 1) * np.sin(phi) + chain.g(phi) * np.cos(phi)
        jk = float(np.max(np.abs(q.J + dK)))
        hz = float(np.max(np.abs(q.H)))
        ok &= gap < 1e-12 and jk < 1e-10 and hz < 1e-10
        detail[f"a={a:g}"] = {"chain_gap": gap, "J_plus_dK": jk, "H": hz}
    return CriterionResult(6, "reduction chain reproduces the closed form", ok, detail)


# -- 7 ----------------------------------------------------------------------

def criterion_7(cfg: ShootingConfig = ShootingConfig()) -> CriterionResult:
    scan = (ScanRange("h1", -0.5, 0.5, 0.5), ScanRange("P0", 3.0, 5.0, 0.5))
    res = shoot("full_space", ("h1", "P0"), base=AxisParams(f0=4.0), cfg=cfg, scan=scan)
    roots = [p.vector(("h1", "P0")) for p, _ in res.roots]
    detail = {"starts": res.starts, "converged": res.converged_runs,
              "roots": [list(map(float, v)) for v in roots]}
    if len(roots) != 1 or np.linalg.norm(roots[0] - np.array([0.0, 4.0])) > 1e-6:
        return CriterionResult(7, "full-space shooting recovers the a = 2 jet", False, detail)
    pr = trajectory(res.roots[0][0], "full_space", cfg)
    ref = landau_profiles(2.0)
    lo, hi = pr.domain
    phi = np.linspace(lo, hi, 1000)
    dev = max(float(np.max(np.abs(getattr(pr, c)(phi) - getattr(ref, c)(phi)))) for c in "fghBP")
    a_fit, _ = fit_landau_a(pr)
    detail.update({"deviation": dev, "a_fit": a_fit})
    ok = dev < 1e-6 and abs(a_fit - 2.0) <= 1e-6
    return CriterionResult(7, "full-space shooting recovers the a = 2 jet", ok, detail)


# -- 8 ----------------------------------------------------------------------

def half_space_roots_scan(bc: str, cfg: ShootingConfig = ShootingConfig(), step: float = 0.5, bound: float = 20.0):
    """Distinct converged roots of the 2-D ``(f0, P0)`` scan and the 1-D ``h1`` scan."""
    plane = shoot(bc, ("f0", "P0"), cfg=cfg,
                  scan=(ScanRange("f0", -bound, bound, step), ScanRange("P0", -bound, bound, step)))
    line = shoot(bc, ("f0", "h1", "P0"), cfg=cfg, scan=(ScanRange("h1", -bound, bound, step),))
    return plane, line


def criterion_8(cfg: ShootingConfig = ShootingConfig(), step: float = 0.5) -> CriterionResult:
    detail, ok = {}, True
    for bc in ("noslip", "navier_slip"):
        for tag, res in zip(("plane", "h1_line"), half_space_roots_scan(bc, cfg, step)):
            roots = [p.vector() for p, _ in res.roots]
            good = len(roots) == 1 and float(np.linalg.norm(roots[0])) <= 1e-6
            ok &= good
            detail[f"{bc}/{tag}"] = {"starts": res.starts, "converged": res.converged_runs,
                                     "distinct_roots": [list(map(float, v)) for v in roots]}
    return CriterionResult(8, "half-space scans find only the trivial solution", ok, detail)


# -- 9 ----------------------------------------------------------------------

def criterion_9(cfg: ShootingConfig = ShootingConfig()) -> CriterionResult:
    detail, ok = {}, True
    q_worst = 0.0
    for p in (AxisParams(f0=1.0, h1=0.5, P0=0.2, b_mode="conserved", b_seed=0.3),
              AxisParams(f0=-0.5, h1=0.0, P0=-0.3, b_mode="conserved", b_seed=1.0)):
        pr = trajectory(p, "noslip", cfg)
        lo, hi = pr.domain
        q_worst = max(q_worst, float(np.max(np.abs(conserved_q(pr, np.linspace(lo, hi, 2000))))))
    detail["max_abs_Bg2sin"] = q_worst
    ok &= q_worst < 10 * cfg.rtol
    t_worst = 0.0
    for p in (AxisParams(f0=0.5, h1=1.0, P0=0.1), AxisParams(f0=-1.0, h1=-0.7, P0=0.4)):
        pr = trajectory(p, "noslip", cfg)
        lo, hi = pr.domain
        T = h_transport(pr, np.linspace(lo, hi, 200))
        t_worst = max(t_worst, float(np.max(np.abs(T - T[0]))))
    detail["h_transport_drift"] = t_worst
    ok &= t_worst < 1e-8
    return CriterionResult(9, "conserved quantities hold along integrated trajectories", ok, detail)


# -- 10 ---------------------------------------------------------------------

def criterion_10(region: GridRegion = GridRegion(), steps=(4e-3, 2e-3, 1e-3)) -> CriterionResult:
    u, p = landau_cartesian(2.0)
    pts = region.admissible(max(steps))
    rms, ind_max, div_u_max, div_b_max = [], 0.0, 0.0, 0.0
    for h in steps:
        mom, ind, du, dB = residual_fields((u, zero_vector, p), pts, h)
        rms.append(float(np.sqrt(np.mean(mom**2))))
        ind_max = max(ind_max, float(np.max(ind)))
        div_u_max = max(div_u_max, float(np.max(du)))
        div_b_max = max(div_b_max, float(np.max(dB)))
    orders = observed_orders(rms, steps)
    ok = all(1.7 <= q <= 2.3 for q in orders) and max(ind_max, div_u_max, div_b_max) < 1e-10
    detail = {"n_points": int(len(pts)), "momentum_rms": rms, "orders": orders,
              "induction_max": ind_max, "div_u_max": div_u_max, "div_B_max": div_b_max}
    return CriterionResult(10, "grid residuals of the a = 2 jet converge at second order", ok, detail)


CRITERIA = {k: globals()[f"criterion_{k}"] for k in range(1, 11)}


def run_criterion(k: int) -> CriterionResult:
    t0 = time.perf_counter()
    res = CRITERIA[k]()
    res.seconds = time.perf_counter() - t0
    return res


def run_all(selected=None) -> list[CriterionResult]:
    return [run_criterion(k) for k in (selected or sorted(CRITERIA))]


def format_table(results) -> str:
    lines = [f"{r.line()}  ({r.seconds:.1f}s)" for r in results]
    passed = sum(r.passed for r in results)
    lines.append(f"{passed}/{len(results)} criteria passed")
    return "\n".join(lines)


__all__ = ["CriterionResult", "CRITERIA", "run_criterion", "run_all", "format_table",
           "smooth_test_profile", "smooth_test_field", "quasi_random_points", "beta_reference", "half_space_roots_scan"]
