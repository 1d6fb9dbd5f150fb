"""Shared fixtures and independent oracles.

The oracles here deliberately avoid the package's own data structures and
algorithms: integer bitsets instead of packed numpy words, triple loops
instead of word-parallel XOR, exhaustive recursion instead of blossom.  Test
expectations are computed through these and frozen, so an implementation bug
cannot hide by agreeing with itself.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction

import numpy as np
import pytest


# --------------------------------------------------------------------------
# GF(2) oracles on int bitsets / dense lists
# --------------------------------------------------------------------------

def rank_oracle(rows: list[int]) -> int:
    """GF(2) rank of rows given as int bitsets (bit c = column c)."""
    rank = 0
    work = list(rows)
    while work:
        pivot_row = work.pop()
        if pivot_row:
            rank += 1
            lsb = pivot_row & -pivot_row
            for index, row in enumerate(work):
                if row & lsb:
                    work[index] = row ^ pivot_row
    return rank


def matmul_oracle(a: list[list[int]], b: list[list[int]]) -> list[list[int]]:
    """Dense GF(2) product by the definition (triple loop)."""
    n, m = len(a), len(b[0]) if b else 0
    k = len(b)
    assert all(len(r) == k for r in a)
    out = [[0] * m for _ in range(n)]
    for i in range(n):
        for j in range(m):
            s = 0
            for t in range(k):
                s ^= a[i][t] & b[t][j]
            out[i][j] = s
    return out


def kernel_oracle(rows: list[int], ncols: int) -> list[int]:
    """Basis of {x : A x = 0} as int bitsets, via exhaustive echelon."""
    # Reduced row echelon over int bitsets.
    work = [r for r in rows]
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(work)) if (work[i] >> c) & 1), None)
        if p is None:
            continue
        work[r], work[p] = work[p], work[r]
        for i in range(len(work)):
            if i != r and (work[i] >> c) & 1:
                work[i] ^= work[r]
        pivots.append(c)
        r += 1
    basis = []
    pivot_set = set(pivots)
    for free in range(ncols):
        if free in pivot_set:
            continue
        vec = 1 << free
        for i, pc in enumerate(pivots):
            if (work[i] >> free) & 1:
                vec |= 1 << pc
        basis.append(vec)
    return basis


def bits_to_lists(rows: list[int], ncols: int) -> list[list[int]]:
    return [[(r >> c) & 1 for c in range(ncols)] for r in rows]


def lists_to_bits(rows: list[list[int]]) -> list[int]:
    return [sum(v << c for c, v in enumerate(r)) for r in rows]


def homology_oracle(boundaries: list[list[int]], dims: list[int], k: int) -> int:
    """dim H_k from int-bitset boundary rows, ranks by rank_oracle.

    ``boundaries[i]`` is the matrix of the map out of the (i+1)-th space in
    the ordered list ``dims`` (same convention as the package: highest
    dimension first), stored as a list of row bitsets.
    """
    ell = len(dims) - 1
    idx = ell - k  # position of dimension k in the top-first ordering
    rank_out = rank_oracle(boundaries[idx]) if idx < len(boundaries) else 0
    rank_in = rank_oracle(boundaries[idx - 1]) if idx - 1 >= 0 else 0
    return dims[idx] - rank_out - rank_in


# --------------------------------------------------------------------------
# Probability oracles
# --------------------------------------------------------------------------

def odd_parity_oracle(probs: list[float]) -> float:
    """P(odd number of independent events) by exhaustive enumeration."""
    total = 0.0
    n = len(probs)
    for mask in range(1 << n):
        if bin(mask).count("1") % 2 == 1:
            term = 1.0
            for i in range(n):
                term *= probs[i] if (mask >> i) & 1 else 1.0 - probs[i]
            total += term
    return total


def wilson_oracle(failures: int, trials: int, z: float = 1.959963984540054) -> tuple[float, float]:
    """Wilson score interval computed straight from the formula."""
    if trials == 0:
        return (0.0, 1.0)
    phat = failures / trials
    denom = 1.0 + z * z / trials
    centre = (phat + z * z / (2 * trials)) / denom
    half = z * math.sqrt(phat * (1 - phat) / trials + z * z / (4 * trials * trials)) / denom
    return (max(0.0, centre - half), min(1.0, centre + half))


# --------------------------------------------------------------------------
# Graph / matching oracles
# --------------------------------------------------------------------------

def bellman_ford_oracle(n: int, edges: list[tuple[int, int, float]], src: int) -> list[float]:
    """Single-source shortest path by |V|-1 rounds of edge relaxation."""
    dist = [math.inf] * n
    dist[src] = 0.0
    for _ in range(max(0, n - 1)):
        changed = False
        for u, v, w in edges:
            if dist[u] + w < dist[v]:
                dist[v] = dist[u] + w
                changed = True
            if dist[v] + w < dist[u]:
                dist[u] = dist[v] + w
                changed = True
        if not changed:
            break
    return dist


def brute_force_min_pairing(weight: list[list[float]]) -> tuple[float, list[tuple[int, int]]]:
    """Exhaustive minimum-weight perfect pairing over (n-1)!! candidates."""
    n = len(weight)
    assert n % 2 == 0
    best_cost = math.inf
    best: list[tuple[int, int]] = []

    def rec(remaining: tuple[int, ...], acc: float, pairs: list[tuple[int, int]]) -> None:
        nonlocal best_cost, best
        if not remaining:
            if acc < best_cost:
                best_cost = acc
                best = list(pairs)
            return
        if acc >= best_cost:
            return
        a = remaining[0]
        rest = remaining[1:]
        for idx, b in enumerate(rest):
            rec(
                rest[:idx] + rest[idx + 1 :],
                acc + weight[a][b],
                pairs + [(a, b)],
            )

    rec(tuple(range(n)), 0.0, [])
    return best_cost, best


def euler_sum_oracle(m01: list[int], m12: list[int]) -> Fraction:
    return sum((Fraction(1, a) + Fraction(1, b) for a, b in zip(m01, m12)), Fraction(0))


# --------------------------------------------------------------------------
# Fixtures
# --------------------------------------------------------------------------

@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(0xC0FFEE)


def random_bitrows(rng: np.random.Generator, rows: int, cols: int, density: float = 0.5) -> list[int]:
    out = []
    for _ in range(rows):
        bits = rng.random(cols) < density
        out.append(sum(1 << c for c in np.nonzero(bits)[0]))
    return out


def pairs_to_mate(pairs: list[tuple[int, int]], n: int) -> list[int]:
    mate = [-1] * n
    for a, b in pairs:
        mate[a] = b
        mate[b] = a
    return mate


def all_perfect_pairings(n: int):
    """Yield every perfect pairing of range(n); n must be even."""
    if n == 0:
        yield []
        return
    items = list(range(n))

    def rec(remaining: list[int]):
        if not remaining:
            yield []
            return
        a = remaining[0]
        for i in range(1, len(remaining)):
            b = remaining[i]
            rest = remaining[1:i] + remaining[i + 1 :]
            for tail in rec(rest):
                yield [(a, b)] + tail

    yield from rec(items)


def parity_of_pairing_classes(classes: list[int], pairs: list[tuple[int, int]]) -> int:
    out = 0
    for a, b in pairs:
        out ^= classes[a] ^ classes[b]
    return out


# Convenience: deterministic seeds for sweep-style tests.
SEEDS = list(itertools.islice(itertools.count(1000, 37), 20))
