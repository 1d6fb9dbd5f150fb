"""Dense blossom matching against brute force and networkx."""

from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from crystalft.blossom import (
    HAVE_NUMBA,
    max_weight_matching_dense,
    min_weight_perfect_matching,
)

from conftest import SEEDS, brute_force_min_pairing

nx = pytest.importorskip("networkx")


def random_symmetric(rng: np.random.Generator, n: int, scale: float = 1.0) -> np.ndarray:
    w = rng.random((n, n)) * scale
    w = (w + w.T) / 2.0
    np.fill_diagonal(w, 0.0)
    return w


def random_integer_costs(rng: np.random.Generator, n: int, hi: int = 5) -> np.ndarray:
    w = rng.integers(1, hi + 1, size=(n, n)).astype(np.float64)
    w = np.triu(w, 1)
    return w + w.T


def matching_cost(w: np.ndarray, pairs: list[tuple[int, int]]) -> float:
    return sum(w[a, b] for a, b in pairs)


def assert_perfect(pairs: list[tuple[int, int]], n: int) -> None:
    seen = [v for pair in pairs for v in pair]
    assert sorted(seen) == list(range(n))
    assert all(a < b for a, b in pairs)
    assert pairs == sorted(pairs)


# --------------------------------------------------------------------------
# Minimum-weight perfect matching vs. exhaustive search
# --------------------------------------------------------------------------

@pytest.mark.parametrize("seed", SEEDS)
def test_min_perfect_matches_brute_force_continuous(seed: int):
    rng = np.random.default_rng(seed)
    for _ in range(15):
        n = int(rng.choice([2, 4, 6, 8, 10]))
        w = random_symmetric(rng, n)
        pairs = min_weight_perfect_matching(w, compiled=False)
        assert_perfect(pairs, n)
        best_cost, best_pairs = brute_force_min_pairing(w.tolist())
        assert matching_cost(w, pairs) == pytest.approx(best_cost, abs=1e-9)
        # Continuous weights make the optimum unique almost surely.
        assert pairs == sorted(tuple(sorted(p)) for p in best_pairs)


@pytest.mark.parametrize("seed", SEEDS)
def test_min_perfect_matches_brute_force_integer_ties(seed: int):
    rng = np.random.default_rng(seed)
    for _ in range(10):
        n = int(rng.choice([4, 6, 8, 10]))
        w = random_integer_costs(rng, n)
        pairs = min_weight_perfect_matching(w, compiled=False)
        assert_perfect(pairs, n)
        best_cost, _ = brute_force_min_pairing(w.tolist())
        assert matching_cost(w, pairs) == pytest.approx(best_cost, abs=1e-9)


def test_collinear_greedy_trap():
    # Points 0..3 on a line: greedy grabs the middle pair (1,2) and is
    # forced into (0,3), total 4; the optimum pairs neighbors for 2.
    pos = np.array([0.0, 1.0, 2.0, 3.0])
    w = np.abs(pos[:, None] - pos[None, :])
    pairs = min_weight_perfect_matching(w, compiled=False)
    assert pairs == [(0, 1), (2, 3)]
    assert matching_cost(w, pairs) == pytest.approx(2.0)


def test_shifting_all_costs_preserves_optimum():
    # Every perfect matching has n/2 edges, so a constant shift cannot
    # change which one is optimal.
    rng = np.random.default_rng(20240817)
    for _ in range(10):
        n = int(rng.choice([6, 8, 10]))
        w = random_symmetric(rng, n)
        shifted = w + 7.5
        np.fill_diagonal(shifted, 0.0)
        assert min_weight_perfect_matching(w, compiled=False) == (
            min_weight_perfect_matching(shifted, compiled=False)
        )


# --------------------------------------------------------------------------
# Maximum-weight matching vs. networkx on identical complete graphs
# --------------------------------------------------------------------------

def complete_graph(w: np.ndarray) -> "nx.Graph":
    g = nx.Graph()
    n = w.shape[0]
    g.add_nodes_from(range(n))
    for i in range(n):
        for j in range(i + 1, n):
            g.add_edge(i, j, weight=w[i, j])
    return g


@pytest.mark.parametrize("seed", SEEDS[:10])
@pytest.mark.parametrize("maxcardinality", [False, True])
def test_max_weight_matches_networkx(seed: int, maxcardinality: bool):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(12, 21))
    w = random_symmetric(rng, n, scale=10.0)
    mate = max_weight_matching_dense(w, maxcardinality=maxcardinality, compiled=False)
    got = sum(w[v, mate[v]] for v in range(n) if mate[v] > v)
    ref = nx.max_weight_matching(complete_graph(w), maxcardinality=maxcardinality)
    want = sum(w[a, b] for a, b in ref)
    assert got == pytest.approx(want, abs=1e-9)
    # Continuous weights: the optimum is unique, so the pair sets agree.
    assert {(min(a, b), max(a, b)) for a, b in ref} == {
        (v, int(mate[v])) for v in range(n) if mate[v] > v
    }


def embed_edges(n: int, edges: list[tuple[int, int, float]]) -> np.ndarray:
    w = np.zeros((n, n))
    for a, b, wt in edges:
        w[a, b] = w[b, a] = wt
    return w


@pytest.mark.parametrize(
    "n, edges",
    [
        # Odd cycle whose best augmentation must shrink it to a blossom.
        (4, [(0, 1, 8.0), (0, 2, 9.0), (1, 2, 10.0), (2, 3, 7.0)]),
        # Nested blossom: inner triangle inside a five-cycle.
        (
            6,
            [
                (0, 1, 9.0), (0, 2, 8.0), (1, 2, 10.0),
                (1, 3, 5.0), (2, 4, 4.0), (3, 4, 3.0), (3, 5, 4.0),
            ],
        ),
        # Blossom that must expand again to reach the optimum.
        (
            8,
            [
                (0, 1, 9.0), (0, 2, 8.0), (1, 2, 10.0), (1, 3, 5.0),
                (2, 4, 4.0), (3, 4, 3.0), (3, 5, 4.0), (4, 6, 4.0),
                (5, 7, 2.0), (6, 7, 2.0),
            ],
        ),
    ],
)
@pytest.mark.parametrize("maxcardinality", [False, True])
def test_blossom_forcing_instances(n: int, edges: list, maxcardinality: bool):
    w = embed_edges(n, edges)
    mate = max_weight_matching_dense(w, maxcardinality=maxcardinality, compiled=False)
    got = sum(w[v, mate[v]] for v in range(n) if mate[v] > v)
    ref = nx.max_weight_matching(complete_graph(w), maxcardinality=maxcardinality)
    want = sum(w[a, b] for a, b in ref)
    assert got == pytest.approx(want, abs=1e-9)


def test_maxcardinality_semantics_with_negative_weights():
    n = 6
    w = -np.ones((n, n))
    np.fill_diagonal(w, 0.0)
    lazy = max_weight_matching_dense(w, maxcardinality=False, compiled=False)
    assert np.all(lazy == -1)
    eager = max_weight_matching_dense(w, maxcardinality=True, compiled=False)
    assert np.all(eager >= 0)


# --------------------------------------------------------------------------
# Matching-shape properties
# --------------------------------------------------------------------------

@settings(max_examples=40, deadline=None)
@given(n=st.integers(1, 14), seed=st.integers(0, 2**31))
def test_mate_is_an_involution(n: int, seed: int):
    w = random_symmetric(np.random.default_rng(seed), n)
    mate = max_weight_matching_dense(w, compiled=False)
    for v in range(n):
        if mate[v] >= 0:
            assert mate[v] != v
            assert mate[mate[v]] == v


def test_determinism_same_input_same_output():
    rng = np.random.default_rng(99)
    w = random_integer_costs(rng, 10)
    first = max_weight_matching_dense(w, maxcardinality=True, compiled=False)
    again = max_weight_matching_dense(w, maxcardinality=True, compiled=False)
    assert np.array_equal(first, again)
    assert min_weight_perfect_matching(w, compiled=False) == (
        min_weight_perfect_matching(w.copy(), compiled=False)
    )


def test_empty_matrix_gives_empty_matching():
    w = np.zeros((0, 0))
    assert min_weight_perfect_matching(w) == []
    assert max_weight_matching_dense(w, compiled=False).shape == (0,)


def test_odd_vertex_count_rejected():
    with pytest.raises(ValueError, match="even"):
        min_weight_perfect_matching(np.zeros((3, 3)))


def test_asymmetric_matrix_rejected():
    w = np.zeros((4, 4))
    w[0, 1] = 1.0
    with pytest.raises(ValueError, match="symmetric"):
        max_weight_matching_dense(w, compiled=False)


def test_nonsquare_matrix_rejected():
    with pytest.raises(ValueError, match="square"):
        max_weight_matching_dense(np.zeros((3, 4)), compiled=False)


# --------------------------------------------------------------------------
# Compiled path agrees with the interpreted path
# --------------------------------------------------------------------------

@pytest.mark.skipif(not HAVE_NUMBA, reason="numba not installed")
@pytest.mark.parametrize("seed", SEEDS[:8])
def test_compiled_path_matches_interpreted(seed: int):
    rng = np.random.default_rng(seed)
    for _ in range(6):
        n = int(rng.choice([2, 5, 8, 11, 14]))
        w = random_symmetric(rng, n)
        jit = max_weight_matching_dense(w, maxcardinality=True, compiled=True)
        ref = max_weight_matching_dense(w, maxcardinality=True, compiled=False)
        assert np.array_equal(jit, ref)


@pytest.mark.skipif(not HAVE_NUMBA, reason="numba not installed")
def test_compiled_path_handles_ties_identically():
    rng = np.random.default_rng(4242)
    for _ in range(20):
        n = int(rng.choice([6, 8, 10]))
        w = random_integer_costs(rng, n, hi=3)
        assert min_weight_perfect_matching(w, compiled=True) == (
            min_weight_perfect_matching(w, compiled=False)
        )
