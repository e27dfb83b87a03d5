"""Scan axis data for half-space solutions and report every distinct root.

    python3 scripts/half_space_scan.py --step 0.5 --bound 20 --out scan.json
"""
import argparse
import json
import time

import numpy as np

from selfsim_mhd.acceptance import half_space_roots_scan
from selfsim_mhd.cli import dumps
from selfsim_mhd.shooting import ShootingConfig


def summarize(res):
    return {
        "starts": res.starts,
        "converged": res.converged_runs,
        "roots": [dict(zip(("f0", "h1", "P0"), map(float, p.vector())), residual=r) for p, r in res.roots],
        "max_root_norm": max((float(np.linalg.norm(p.vector())) for p, _ in res.roots), default=None),
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--step", type=float, default=0.5)
    ap.add_argument("--bound", type=float, default=20.0)
    ap.add_argument("--rtol", type=float, default=1e-10)
    ap.add_argument("--out", default=None)
    args = ap.parse_args()

    cfg = ShootingConfig(rtol=args.rtol, atol=args.rtol * 1e-2)
    report = {"step": args.step, "bound": args.bound, "rtol": args.rtol}
    for bc in ("noslip", "navier_slip"):
        t0 = time.perf_counter()
        plane, line = half_space_roots_scan(bc, cfg, args.step, args.bound)
        report[bc] = {"plane": summarize(plane), "h1_line": summarize(line),
                      "seconds": time.perf_counter() - t0}
        print(f"{bc}: plane {plane.converged_runs}/{plane.starts} converged, {len(plane.roots)} distinct; "
              f"h1 line {line.converged_runs}/{line.starts} converged, {len(line.roots)} distinct")
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(dumps(report) + "\n")


if __name__ == "__main__":
    main()
