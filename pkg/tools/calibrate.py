"""Pilot threshold sweeps at reduced trial counts to calibrate windows."""

from __future__ import annotations

import sys
import time

sys.path.insert(0, "src")

from crystalft import threshold


def pilot(name, regime, sizes, lo, hi, trials, seed):
    t0 = time.time()
    pts = threshold.sweep_curves(name, regime, sizes, lo, hi, 8, trials, seed=seed)
    try:
        est = threshold.estimate_threshold(pts, lattice=name, regime=regime, seed=seed)
        msg = (
            f"p_th={est.p_th*100:.3f}% +- {est.uncertainty*100:.3f}%  "
            f"nu={est.params[3]:.2f}"
        )
    except ValueError as exc:
        msg = f"FIT ERROR: {exc}"
    dt = time.time() - t0
    print(f"{name:4s} {regime:4s} L={list(sizes)} [{lo*100:.2f},{hi*100:.2f}]% "
          f"x{trials}: {msg}  ({dt:.0f} s)", flush=True)
    for pt in pts:
        print(f"    L={pt.L} p={pt.p*100:.3f}% rate={pt.rate:.4f}", flush=True)


pilot("pcu", "pz", (4, 6, 8), 0.004, 0.011, 10000, 101)
pilot("dia", "pz", (4, 6), 0.006, 0.014, 10000, 102)
pilot("pcu", "sym", (4, 6, 8), 0.0020, 0.0048, 10000, 103)
pilot("srs", "pz", (4, 6), 0.006, 0.014, 10000, 104)
pilot("bst", "pz", (4, 6), 0.001, 0.005, 10000, 105)
