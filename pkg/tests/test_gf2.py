"""Packed GF(2) matrices against independent int-bitset oracles."""

from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from crystalft.gf2 import BinaryMatrix, kernel_basis, mat_mul, mat_rank, row_space_basis

from conftest import bits_to_lists, kernel_oracle, matmul_oracle, rank_oracle, random_bitrows


def bm_from_bits(bits: list[int], cols: int) -> BinaryMatrix:
    return BinaryMatrix.from_rows(bits_to_lists(bits, cols), cols)


def test_identity_rank_and_entries():
    m = BinaryMatrix.identity(5)
    assert mat_rank(m) == 5
    assert m.get(3, 3) == 1 and m.get(3, 4) == 0


def test_set_get_flip_roundtrip():
    m = BinaryMatrix.zeros(3, 70)  # spans a word boundary
    m.set(1, 64, 1)
    m.set(2, 69, 1)
    assert m.get(1, 64) == 1
    m.flip(1, 64)
    assert m.get(1, 64) == 0
    assert list(m.row_bits(2)) == [69]


def test_rank_known_small():
    rows = [0b101, 0b011, 0b110]  # row3 = row1 + row2
    assert rank_oracle(rows) == 2
    assert mat_rank(bm_from_bits(rows, 3)) == 2


@settings(max_examples=60, deadline=None)
@given(
    rows=st.integers(0, 18),
    cols=st.integers(1, 130),
    seed=st.integers(0, 2**31),
    density=st.sampled_from([0.1, 0.5, 0.9]),
)
def test_rank_matches_oracle(rows, cols, seed, density):
    rng = np.random.default_rng(seed)
    bits = random_bitrows(rng, rows, cols, density)
    assert mat_rank(bm_from_bits(bits, cols)) == rank_oracle(bits)


@settings(max_examples=40, deadline=None)
@given(
    n=st.integers(1, 12),
    k=st.integers(1, 12),
    m=st.integers(1, 12),
    seed=st.integers(0, 2**31),
)
def test_matmul_matches_triple_loop(n, k, m, seed):
    rng = np.random.default_rng(seed)
    a = bits_to_lists(random_bitrows(rng, n, k), k)
    b = bits_to_lists(random_bitrows(rng, k, m), m)
    got = mat_mul(BinaryMatrix.from_rows(a, k), BinaryMatrix.from_rows(b, m))
    assert got.to_dense().tolist() == matmul_oracle(a, b)


def test_matmul_dimension_mismatch():
    with pytest.raises(ValueError):
        mat_mul(BinaryMatrix.zeros(2, 3), BinaryMatrix.zeros(4, 2))


def test_matmul_identity_neutral(rng):
    a = BinaryMatrix.random(7, 7, rng)
    assert mat_mul(a, BinaryMatrix.identity(7)) == a
    assert mat_mul(BinaryMatrix.identity(7), a) == a


@settings(max_examples=40, deadline=None)
@given(rows=st.integers(0, 9), cols=st.integers(0, 80), seed=st.integers(0, 2**31))
def test_transpose_involution_and_rank(rows, cols, seed):
    rng = np.random.default_rng(seed)
    m = BinaryMatrix.random(rows, cols, rng)
    t = m.transpose()
    assert (t.rows, t.cols) == (cols, rows)
    assert t.transpose() == m
    assert mat_rank(t) == mat_rank(m)  # row rank == column rank


@settings(max_examples=40, deadline=None)
@given(rows=st.integers(0, 10), cols=st.integers(0, 100), seed=st.integers(0, 2**31))
def test_base64_roundtrip(rows, cols, seed):
    rng = np.random.default_rng(seed)
    m = BinaryMatrix.random(rows, cols, rng)
    again = BinaryMatrix.from_base64(rows, cols, m.to_base64())
    assert again == m


def test_base64_rejects_wrong_size():
    m = BinaryMatrix.identity(4)
    with pytest.raises(ValueError):
        BinaryMatrix.from_base64(5, 4, m.to_base64())


def test_from_dense_roundtrip(rng):
    arr = (rng.random((6, 67)) < 0.4).astype(np.uint8)
    assert np.array_equal(BinaryMatrix.from_dense(arr).to_dense(), arr)


@settings(max_examples=40, deadline=None)
@given(rows=st.integers(0, 10), cols=st.integers(1, 40), seed=st.integers(0, 2**31))
def test_kernel_basis_annihilates_and_spans(rows, cols, seed):
    rng = np.random.default_rng(seed)
    bits = random_bitrows(rng, rows, cols)
    m = bm_from_bits(bits, cols)
    ker = kernel_basis(m)
    # Every basis vector is killed by m.
    prod = mat_mul(m, ker.transpose())
    assert prod.is_zero()
    # Dimension matches rank-nullity and the independent oracle.
    assert ker.rows == cols - rank_oracle(bits)
    assert ker.rows == len(kernel_oracle(bits, cols))
    assert mat_rank(ker) == ker.rows


def test_row_space_basis_idempotent(rng):
    m = BinaryMatrix.random(9, 15, rng, density=0.3)
    b = row_space_basis(m)
    assert b.rows == mat_rank(m)
    # Basis rows stacked with original rows add no rank.
    stacked = BinaryMatrix.from_rows(
        b.to_dense().tolist() + m.to_dense().tolist(), 15
    )
    assert mat_rank(stacked) == b.rows


def test_zero_dimension_edge_cases():
    z = BinaryMatrix.zeros(0, 5)
    assert mat_rank(z) == 0
    assert z.to_dense().shape == (0, 5)
    z2 = BinaryMatrix.zeros(4, 0)
    assert mat_rank(z2) == 0
    prod = mat_mul(z, BinaryMatrix.zeros(5, 3))
    assert (prod.rows, prod.cols) == (0, 3)
