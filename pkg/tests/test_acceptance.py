"""Desk-scale acceptance suite.

The Monte Carlo tests reproduce reference thresholds for bundled crystal
lattices with scaled-down budgets (5x10^4 trials per sweep point, sizes
up to L = 8); the remaining tests are exact enumeration, duality,
foliation, oracle, and homology checks.  The full module takes about
20 minutes on one core with compiled kernels (hours interpreted);
everything is seeded and deterministic.
"""

from __future__ import annotations

import numpy as np
import pytest

from crystalft.complexes import (
    CSSCode,
    complex_validate,
    foliate,
    homology_dim,
    random_css,
    steane_422_complex,
    toric_complex,
)
from crystalft.decoder import edge_prob_total, edge_prob_z, mwpm
from crystalft.delaney import (
    count_candidates,
    cubic_tiling_symbol,
    dual_symbol,
    enumerate_candidates,
    is_self_dual,
    m12_orbit_vector,
    permute_symbol,
    truncated_square_symbol,
)
from crystalft.lattice import (
    build_lattice,
    bundled_cell_names,
    cycle_class,
    face_boundary_ids,
    wrapping_cycle,
)
from crystalft.threshold import estimate_threshold, sweep_curves

from conftest import brute_force_min_pairing, odd_parity_oracle

# Sweep budgets: reference-value fits use TRIALS per point; the ordinal
# cross-lattice comparison only needs DESK_TRIALS.
TRIALS = 50_000
DESK_TRIALS = 10_000
POINTS = 8


def _fit(lattice, regime, sizes, p_lo, p_hi, trials, seed):
    curves = sweep_curves(
        lattice, regime, sizes, p_lo, p_hi, POINTS, trials, seed=seed
    )
    return estimate_threshold(curves, lattice=lattice, regime=regime, seed=seed)


@pytest.fixture(scope="module")
def pcu_pz_fit():
    return _fit("pcu", "pz", (4, 6, 8), 0.004, 0.011, TRIALS, seed=201)


@pytest.fixture(scope="module")
def dia_pz_fit():
    # dia's crossing sits near 1%, so its sweep window is shifted up
    # relative to pcu's while keeping the same width, point count, and
    # trial budget.
    return _fit("dia", "pz", (4, 6), 0.006, 0.014, TRIALS, seed=202)


@pytest.fixture(scope="module")
def pcu_sym_fit():
    return _fit("pcu", "sym", (4, 6, 8), 0.0020, 0.0048, TRIALS, seed=203)


@pytest.fixture(scope="module")
def srs_pz_fit():
    # Each lattice's sweep window straddles its own curve crossing; far
    # sub-threshold points (rates ~1e-4) carry misleadingly small
    # binomial errors and are outside the scaling ansatz.
    return _fit("srs", "pz", (4, 6), 0.0085, 0.0140, DESK_TRIALS, seed=204)


@pytest.fixture(scope="module")
def bst_pz_fit():
    return _fit("bst", "pz", (4, 6), 0.0025, 0.0050, DESK_TRIALS, seed=205)


# --------------------------------------------------------------------------
# Threshold reproduction
# --------------------------------------------------------------------------

def test_pcu_z_only_threshold(pcu_pz_fit):
    assert pcu_pz_fit.p_th == pytest.approx(0.0076, abs=0.0010)


def test_dia_z_only_threshold(dia_pz_fit):
    assert dia_pz_fit.p_th == pytest.approx(0.0101, abs=0.0015)


def test_pcu_symmetric_noise_threshold(pcu_sym_fit):
    assert pcu_sym_fit.p_th == pytest.approx(0.0032, abs=0.0010)


def test_threshold_ordering_across_lattices(
    bst_pz_fit, pcu_pz_fit, dia_pz_fit, srs_pz_fit
):
    assert bst_pz_fit.p_th < pcu_pz_fit.p_th < dia_pz_fit.p_th
    assert dia_pz_fit.p_th <= srs_pz_fit.p_th


# --------------------------------------------------------------------------
# Candidate enumeration
# --------------------------------------------------------------------------

def test_enumeration_counts():
    expected = {
        (3, 1): 5,
        (3, 3): 125,
        (3, 6): 15625,  # k = 2n closes the grid, so the stream needs "periodic"
        (4, 4): 125,
        (5, 5): 15625,
    }
    for (n, k), count in expected.items():
        boundary = "periodic" if k == 2 * n else "loop"
        assert count_candidates(n, k) == count
        assert sum(1 for _ in enumerate_candidates(n, k, boundary)) == count
    # closed form only; the stream would have ~1e7 members
    assert count_candidates(4, 8) == 9765625


def test_enumeration_stream_contains_reference_label_vectors():
    vectors = {m12_orbit_vector(s) for s in enumerate_candidates(3, 3)}
    assert (6, 4, 4, 2) in vectors
    assert (4, 6, 6, 3) in vectors


# --------------------------------------------------------------------------
# Self-duality
# --------------------------------------------------------------------------

def test_cubic_symbol_self_dual_with_identity_witness():
    symbol = cubic_tiling_symbol()
    assert is_self_dual(symbol) == list(range(symbol.size))


def test_grid_candidates_self_dual_under_diagonal_reflection():
    k = 3
    mirror = [(i % k) * k + (i // k) for i in range(k * k)]
    candidates = list(enumerate_candidates(3, 3))
    assert len(candidates) == 125
    for symbol in candidates:
        assert permute_symbol(symbol, mirror) == dual_symbol(symbol)
        assert is_self_dual(symbol) is not None


def test_truncated_square_tiling_is_not_self_dual():
    assert is_self_dual(truncated_square_symbol()) is None


# --------------------------------------------------------------------------
# Foliation
# --------------------------------------------------------------------------

def test_foliations_of_random_css_codes_are_valid_complexes():
    rng = np.random.default_rng(424242)
    for _ in range(100):
        code = random_css(rng, max_n=12)
        for t in (1, 2, 3):
            sheets = foliate(code, t)
            assert complex_validate(sheets).ok


def test_foliated_four_qubit_code_totals_twenty_qubits():
    code = CSSCode(steane_422_complex())
    assert (code.n, code.k) == (4, 2)
    sheets = foliate(code, 2)
    assert sheets.dims[1] == 10
    assert sheets.dims[2] == 10
    assert sheets.dims[1] + sheets.dims[2] == 20


# --------------------------------------------------------------------------
# Decoder oracles
# --------------------------------------------------------------------------

def test_matching_agrees_with_exhaustive_pairing():
    rng = np.random.default_rng(8801)
    for _ in range(500):
        d = 2 * int(rng.integers(1, 6))
        w = rng.uniform(0.1, 10.0, size=(d, d))
        w = (w + w.T) / 2
        np.fill_diagonal(w, 0.0)
        pairs = mwpm(list(range(d)), w)
        cost = sum(w[i, j] for i, j in pairs)
        best, _ = brute_force_min_pairing(w)
        assert cost == pytest.approx(best, rel=1e-9)


def test_edge_probabilities_match_enumeration_oracles():
    rng = np.random.default_rng(8802)
    for _ in range(1000):
        z = int(rng.integers(0, 13))
        p = float(rng.uniform(0.0, 0.5))
        assert abs(edge_prob_z(z, p) - odd_parity_oracle([p] * z)) < 1e-12
    for _ in range(1000):
        events = int(rng.integers(0, 2))
        p_ez, p_ex, p_m = rng.uniform(0.0, 0.5, size=3)
        expected = odd_parity_oracle([p_ez, p_ex] + [p_m] * events)
        got = edge_prob_total(events, float(p_ez), float(p_ex), float(p_m))
        assert abs(got - expected) < 1e-12


# --------------------------------------------------------------------------
# Homology
# --------------------------------------------------------------------------

@pytest.fixture(scope="module")
def torus_graphs():
    return {name: build_lattice(name, 4) for name in bundled_cell_names()}


@pytest.mark.parametrize("L", [2, 3, 4, 5])
def test_torus_first_homology_is_two_dimensional(L):
    assert homology_dim(toric_complex(L), 1) == 2


def test_random_face_sums_are_null_homologous(torus_graphs):
    rng = np.random.default_rng(9901)
    for name, graph in torus_graphs.items():
        boundaries = [
            np.asarray(face_boundary_ids(graph, f), dtype=np.int64)
            for f in range(len(graph.face_entry_edges))
        ]
        n_faces = len(boundaries)
        for _ in range(1000):
            picks = np.flatnonzero(rng.random(n_faces) < 0.5)
            if picks.size == 0:
                continue
            stacked = np.concatenate([boundaries[f] for f in picks])
            counts = np.bincount(stacked, minlength=graph.n_plain)
            chain = np.flatnonzero(counts & 1)
            assert cycle_class(chain, graph) == (0, 0, 0), name


def test_wrapping_cycles_are_homologically_nontrivial(torus_graphs):
    units = [(1, 0, 0), (0, 1, 0), (0, 0, 1)]
    for name, graph in torus_graphs.items():
        for direction in range(3):
            cycle = np.asarray(wrapping_cycle(graph, direction), dtype=np.int64)
            assert cycle_class(cycle, graph) == units[direction], name
