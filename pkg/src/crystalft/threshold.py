"""Threshold estimation by finite-size scaling of failure-rate curves.

Near the threshold the failure rate of a family of torus sizes L
collapses onto a single curve of the scaled variable
x = (p - p_th) * L^(1/nu).  Fitting a quadratic A + B*x + C*x^2 jointly
to all curves locates the crossing point p_th; the uncertainty comes
from refitting bootstrap resamples of the per-point trial counts.
"""

from __future__ import annotations

import dataclasses

import numpy as np
from scipy.optimize import least_squares

from .decoder import NoiseParams, run_trials, wilson_interval

#: Bootstrap resamples used for the p_th uncertainty.
BOOTSTRAP_RESAMPLES = 200


@dataclasses.dataclass(frozen=True)
class CurvePoint:
    """One Monte Carlo data point of a threshold sweep."""

    L: int
    p: float
    failures: int
    trials: int

    @property
    def rate(self) -> float:
        return self.failures / self.trials if self.trials else 0.0

    @property
    def interval(self) -> tuple[float, float]:
        return wilson_interval(self.failures, self.trials)


@dataclasses.dataclass(frozen=True)
class ThresholdEstimate:
    """Fitted threshold of one lattice and noise regime.

    Attributes:
        p_th: crossing point of the failure-rate curves.
        uncertainty: bootstrap standard deviation of p_th.
        params: fitted scaling parameters (A, B, C, nu).
        lattice: lattice name the curves came from.
        regime: noise regime label.
    """

    p_th: float
    uncertainty: float
    params: tuple[float, float, float, float]
    lattice: str
    regime: str


def _as_points(curves) -> list[CurvePoint]:
    points = []
    for item in curves:
        if isinstance(item, CurvePoint):
            points.append(item)
        else:
            L, p, failures, trials = item
            points.append(CurvePoint(int(L), float(p), int(failures), int(trials)))
    return points


def _check_crossing(points: list[CurvePoint]) -> None:
    """Reject curve families without a crossing in the swept range.

    Two sizes cross when the sign of their rate difference changes
    somewhere along the shared sweep; monotone-ordered curves (for
    example, everything deep below threshold) have no crossing and
    cannot pin p_th.
    """
    by_size: dict[int, dict[float, float]] = {}
    for pt in points:
        by_size.setdefault(pt.L, {})[pt.p] = pt.rate
    sizes = sorted(by_size)
    shared = set.intersection(*(set(c) for c in by_size.values()))
    if len(shared) < 4:
        raise ValueError("need at least 4 sweep values shared by every size")
    grid = sorted(shared)
    for a in range(len(sizes)):
        for b in range(a + 1, len(sizes)):
            signs = set()
            for p in grid:
                diff = by_size[sizes[b]][p] - by_size[sizes[a]][p]
                if diff:
                    signs.add(1 if diff > 0 else -1)
            if len(signs) == 2:
                return
    raise ValueError("no crossing of the failure-rate curves in the swept range")


def _fit_scaling(
    p: np.ndarray, L: np.ndarray, rate: np.ndarray, sigma: np.ndarray
) -> np.ndarray:
    """Weighted least squares of rate = A + B*x + C*x^2, x=(p-p_th)L^(1/nu).

    Returns the parameter vector (A, B, C, p_th, 1/nu).
    """
    p_lo, p_hi = float(p.min()), float(p.max())
    p_th0 = 0.5 * (p_lo + p_hi)
    x0 = (p - p_th0) * L
    design = np.stack([np.ones_like(x0), x0, x0 * x0], axis=1)
    abc0, *_ = np.linalg.lstsq(design / sigma[:, None], rate / sigma, rcond=None)

    def residuals(theta: np.ndarray) -> np.ndarray:
        a, b, c, p_th, inv_nu = theta
        x = (p - p_th) * L**inv_nu
        return (a + b * x + c * x * x - rate) / sigma

    fit = least_squares(
        residuals,
        x0=np.array([abc0[0], abc0[1], abc0[2], p_th0, 1.0]),
        bounds=(
            [-np.inf, -np.inf, -np.inf, p_lo, 0.2],
            [np.inf, np.inf, np.inf, p_hi, 5.0],
        ),
        method="trf",
    )
    return fit.x


def estimate_threshold(
    curves,
    lattice: str = "",
    regime: str = "",
    resamples: int = BOOTSTRAP_RESAMPLES,
    seed: int = 0,
) -> ThresholdEstimate:
    """Fit the threshold of a family of failure-rate curves.

    Args:
        curves: iterable of ``CurvePoint`` or (L, p, failures, trials)
            rows covering at least two sizes and four sweep values.
        lattice: name recorded on the estimate.
        regime: noise regime label recorded on the estimate.
        resamples: bootstrap refits for the uncertainty.
        seed: seed of the bootstrap resampling stream.

    Returns:
        ``ThresholdEstimate`` with p_th inside the swept interval.

    Raises:
        ValueError: fewer than two sizes or four shared sweep values,
            or no crossing of the curves in the swept range.
    """
    points = _as_points(curves)
    sizes = sorted({pt.L for pt in points})
    if len(sizes) < 2:
        raise ValueError("need curves for at least 2 sizes")
    if len({pt.p for pt in points}) < 4:
        raise ValueError("need at least 4 sweep values")
    _check_crossing(points)

    p = np.array([pt.p for pt in points])
    L = np.array([pt.L for pt in points], dtype=np.float64)
    trials = np.array([pt.trials for pt in points], dtype=np.float64)
    failures = np.array([pt.failures for pt in points], dtype=np.float64)
    rate = failures / trials
    # Binomial standard errors with a half-count floor so zero-failure
    # points keep a finite weight.
    smoothed = (failures + 0.5) / (trials + 1.0)
    sigma = np.sqrt(smoothed * (1.0 - smoothed) / trials)

    a, b, c, p_th, inv_nu = _fit_scaling(p, L, rate, sigma)

    rng = np.random.default_rng(seed)
    resampled = np.empty(resamples)
    for r in range(resamples):
        boot_failures = rng.binomial(trials.astype(np.int64), rate)
        boot_rate = boot_failures / trials
        resampled[r] = _fit_scaling(p, L, boot_rate, sigma)[3]
    uncertainty = float(np.std(resampled, ddof=1))

    return ThresholdEstimate(
        p_th=float(p_th),
        uncertainty=uncertainty,
        params=(float(a), float(b), float(c), float(1.0 / inv_nu)),
        lattice=lattice,
        regime=regime,
    )


def point_seed(seed: int, L: int, index: int) -> int:
    """Derive a stable per-point seed for one (size, sweep index) pair."""
    return int(np.random.SeedSequence((seed, L, index)).generate_state(1)[0])


def sweep_curves(
    lattice: str,
    regime: str,
    sizes,
    p_min: float,
    p_max: float,
    n_points: int,
    trials: int,
    seed: int = 0,
    threads: int | None = None,
    engine: str = "auto",
) -> list[CurvePoint]:
    """Run a full threshold sweep: every size at every swept rate.

    Each (size, rate) point draws from its own deterministic seed, so a
    sweep can be reproduced point by point.
    """
    ps = np.linspace(p_min, p_max, n_points)
    points = []
    for L in sizes:
        for i, p in enumerate(ps):
            noise = NoiseParams.from_regime(regime, float(p))
            stats = run_trials(
                lattice,
                int(L),
                noise,
                trials,
                seed=point_seed(seed, int(L), i),
                threads=threads,
                engine=engine,
            )
            points.append(
                CurvePoint(int(L), float(p), stats.failures, stats.trials)
            )
    return points
