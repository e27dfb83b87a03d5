"""Truncation study for the operator oracle and the Cartesian grid residuals.

Prints observed orders and the fine-step error per operator, broken down by
radial shell, then the grid study for the a = 2 jet including div u.
"""
import argparse

import numpy as np

from selfsim_mhd.acceptance import criterion_1
from selfsim_mhd.landau import landau_cartesian
from selfsim_mhd.verify import GridRegion, observed_orders, residual_fields, zero_vector


def operator_shells(shells):
    for lo, hi in shells:
        res = criterion_1(rho=(lo, hi))
        worst = max(res.detail.items(), key=lambda kv: kv[1]["error_h1e-4"])
        orders = [q for d in res.detail.values() for q in d["orders"]]
        print(f"rho in [{lo:g}, {hi:g}]: orders {min(orders):.4f}..{max(orders):.4f}, "
              f"worst fine error {worst[1]['error_h1e-4']:.3e} ({worst[0]}), {'PASS' if res.passed else 'FAIL'}")


def grid_study(n, steps):
    region = GridRegion(n=n)
    u, p = landau_cartesian(2.0)
    pts = region.admissible(max(steps))
    rms, div = [], []
    for h in steps:
        mom, _, du, _ = residual_fields((u, zero_vector, p), pts, h)
        rms.append(float(np.sqrt(np.mean(mom**2))))
        div.append(float(np.max(du)))
        print(f"h={h:g}: momentum rms {rms[-1]:.6e}, max |div u| {div[-1]:.6e}  ({len(pts)} points)")
    print("momentum orders", ["%.5f" % q for q in observed_orders(rms, steps)])
    print("div u orders   ", ["%.5f" % q for q in observed_orders(div, steps)])


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--grid", type=int, default=101)
    ap.add_argument("--steps", default="4e-3,2e-3,1e-3")
    args = ap.parse_args()
    operator_shells([(0.5, 3.0), (0.5, 1.0), (1.0, 2.0), (2.0, 3.0)])
    grid_study(args.grid, [float(s) for s in args.steps.split(",")])


if __name__ == "__main__":
    main()
