"""Second-round pilots: recentered srs/bst windows straddling their crossings."""

from __future__ import annotations

import time

from crystalft.threshold import estimate_threshold, sweep_curves


def pilot(name, regime, sizes, lo, hi, trials, seed):
    t0 = time.time()
    curves = sweep_curves(name, regime, sizes, lo, hi, 8, trials, seed=seed)
    est = estimate_threshold(curves, lattice=name, regime=regime, seed=seed)
    dt = time.time() - t0
    print(
        f"{name:4s} {regime:4s} L={list(sizes)} [{lo:.2%},{hi:.2%}] x{trials}: "
        f"p_th={est.p_th:.3%} +- {est.uncertainty:.3%}  nu={est.params[3]:.2f}  ({dt:.0f} s)",
        flush=True,
    )
    for pt in curves:
        print(f"    L={pt.L} p={pt.p:.3%} rate={pt.rate:.4f}", flush=True)
    return est


if __name__ == "__main__":
    pilot("bst", "pz", (4, 6), 0.0025, 0.0050, 4000, seed=305)
    pilot("srs", "pz", (4, 6), 0.0085, 0.0140, 4000, seed=304)
