"""Chain complexes over GF(2), CSS codes, and time-step foliation.

A length-``l`` complex is the diagram ``C_l -> C_{l-1} -> ... -> C_0`` with
boundary maps satisfying the usual composition rule.  ``boundaries[0]`` is the
map out of the highest space, matching the left-to-right arrow order; the
matrix of a map ``C_k -> C_{k-1}`` has ``dim C_{k-1}`` rows and ``dim C_k``
columns (columns are images of basis chains).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .gf2 import BinaryMatrix, kernel_basis, mat_mul, mat_rank

__all__ = [
    "ChainComplex",
    "ComplexReport",
    "CSSCode",
    "complex_validate",
    "homology_dim",
    "dualize",
    "euler_characteristic",
    "foliate",
    "graph_state_edges",
    "toric_complex",
    "repetition_complex",
    "steane_422_complex",
    "random_css",
    "complex_to_json",
    "complex_from_json",
]


@dataclass(frozen=True)
class ChainComplex:
    """Immutable chain complex; ``dims[0]`` is the top dimension ``dim C_l``."""

    dims: tuple[int, ...]
    boundaries: tuple[BinaryMatrix, ...]

    def __init__(self, boundaries: list[BinaryMatrix] | tuple[BinaryMatrix, ...], dims=None):
        boundaries = tuple(boundaries)
        if dims is None:
            if not boundaries:
                raise ValueError("dims required for a complex with no boundary maps")
            dims = (boundaries[0].cols,) + tuple(b.rows for b in boundaries)
        object.__setattr__(self, "dims", tuple(int(d) for d in dims))
        object.__setattr__(self, "boundaries", boundaries)
        if len(self.dims) != len(boundaries) + 1:
            raise ValueError("dims must have one more entry than boundaries")

    @property
    def length(self) -> int:
        return len(self.dims) - 1

    def dim(self, k: int) -> int:
        """Dimension of C_k (k counted from the bottom, C_0 last)."""
        if not 0 <= k <= self.length:
            raise IndexError(f"degree {k} outside 0..{self.length}")
        return self.dims[self.length - k]

    def boundary(self, k: int) -> BinaryMatrix | None:
        """The map out of C_k, or None for k = 0 (and k = length+1)."""
        if k <= 0 or k > self.length:
            return None
        return self.boundaries[self.length - k]


@dataclass(frozen=True)
class ComplexReport:
    """Validation outcome; ``ok`` or the first violated condition."""

    ok: bool
    kind: str | None = None  # "shape" | "composition"
    pair: int | None = None  # index i: boundaries[i] followed by boundaries[i+1]
    witness_col: int | None = None
    detail: str = ""

    def __bool__(self) -> bool:
        return self.ok


def complex_validate(c: ChainComplex) -> ComplexReport:
    """Check shapes compose and consecutive boundaries multiply to zero.

    Shape mismatches and nonzero compositions are reported as distinct kinds;
    for a composition failure the witness is the first offending column of the
    earlier (higher-degree) boundary map.
    """
    for i, b in enumerate(c.boundaries):
        if (b.cols, b.rows) != (c.dims[i], c.dims[i + 1]):
            return ComplexReport(
                False, "shape", i, None,
                f"boundary {i} is {b.rows}x{b.cols}, expected "
                f"{c.dims[i + 1]}x{c.dims[i]}",
            )
    for i in range(len(c.boundaries) - 1):
        prod = mat_mul(c.boundaries[i + 1], c.boundaries[i])
        if not prod.is_zero():
            col = next(
                j for j in range(prod.cols)
                if any(prod.get(r, j) for r in range(prod.rows))
            )
            return ComplexReport(
                False, "composition", i, col,
                f"composite of boundaries {i} and {i + 1} is nonzero "
                f"on basis chain {col}",
            )
    return ComplexReport(True)


def homology_dim(c: ChainComplex, k: int) -> int:
    """dim H_k = dim C_k − rank(map out of C_k) − rank(map into C_k)."""
    if not 0 <= k <= c.length:
        raise IndexError(f"degree {k} outside 0..{c.length}")
    out_map = c.boundary(k)
    in_map = c.boundary(k + 1)
    rank_out = mat_rank(out_map) if out_map is not None else 0
    rank_in = mat_rank(in_map) if in_map is not None else 0
    return c.dim(k) - rank_out - rank_in


def dualize(c: ChainComplex) -> ChainComplex:
    """Cochain complex of ``c``: transposed boundaries in reversed order."""
    boundaries = tuple(b.transpose() for b in reversed(c.boundaries))
    return ChainComplex(boundaries, dims=tuple(reversed(c.dims)))


def euler_characteristic(c: ChainComplex) -> int:
    return sum((-1) ** k * c.dim(k) for k in range(c.length + 1))


# --------------------------------------------------------------------------
# CSS codes
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class CSSCode:
    """A CSS code presented as a length-2 complex (checks = outer spaces)."""

    complex: ChainComplex
    n: int = field(init=False)
    k: int = field(init=False)

    def __post_init__(self):
        c = self.complex
        if c.length != 2:
            raise ValueError("a CSS code needs a length-2 complex")
        report = complex_validate(c)
        if not report:
            raise ValueError(f"invalid complex: {report.detail}")
        object.__setattr__(self, "n", c.dim(1))
        object.__setattr__(self, "k", homology_dim(c, 1))


def steane_422_complex() -> ChainComplex:
    """The [[4,2,2]] code: one weight-4 Z check and one weight-4 X check."""
    d2 = BinaryMatrix.from_rows([[1], [1], [1], [1]], 1)
    d1 = BinaryMatrix.from_rows([[1, 1, 1, 1]], 4)
    return ChainComplex([d2, d1])


def repetition_complex(n: int) -> ChainComplex:
    """Path-graph repetition code: edges C_1 = n-1 links, vertices C_0 = n."""
    if n < 2:
        raise ValueError("need at least two bits")
    d1 = BinaryMatrix.zeros(n, n - 1)
    for e in range(n - 1):
        d1.set(e, e, 1)
        d1.set(e + 1, e, 1)
    d2 = BinaryMatrix.zeros(n - 1, 0)
    return ChainComplex([d2, d1])


def toric_complex(L: int) -> ChainComplex:
    """Toric code on an L x L periodic square lattice.

    C_2 = faces, C_1 = edges (horizontal then vertical, site-major),
    C_0 = vertices.  dim H_1 = 2 for every L >= 2.
    """
    if L < 2:
        raise ValueError("torus needs L >= 2")

    def site(x: int, y: int) -> int:
        return (x % L) * L + (y % L)

    n_sites = L * L
    # Edge indexing: horizontal edge at site s is s; vertical is n_sites + s.
    d1 = BinaryMatrix.zeros(n_sites, 2 * n_sites)
    d2 = BinaryMatrix.zeros(2 * n_sites, n_sites)
    for x in range(L):
        for y in range(L):
            s = site(x, y)
            d1.set(s, s, 1)
            d1.set(site(x + 1, y), s, 1)
            d1.set(s, n_sites + s, 1)
            d1.set(site(x, y + 1), n_sites + s, 1)
            # Face at (x, y): horizontal edges at y and y+1, vertical at x and x+1.
            d2.set(site(x, y), s, 1)
            d2.set(site(x, y + 1), s, 1)
            d2.set(n_sites + site(x, y), s, 1)
            d2.set(n_sites + site(x + 1, y), s, 1)
    return ChainComplex([d2, d1])


def random_css(rng: np.random.Generator, max_n: int = 12) -> CSSCode:
    """Random valid CSS code: random face map, vertex map from its left kernel."""
    n = int(rng.integers(2, max_n + 1))
    m2 = int(rng.integers(1, n + 1))
    while True:
        d2 = BinaryMatrix.random(n, m2, rng, density=float(rng.uniform(0.2, 0.6)))
        left_kernel = kernel_basis(d2.transpose())  # rows x: x @ d2 = 0
        if left_kernel.rows == 0:
            # Face map has full row rank, leaving no room for X checks;
            # shrink it and retry (m2 < n guarantees a nonzero left kernel).
            m2 = max(1, min(m2, n) - 1)
            continue
        n_checks = int(rng.integers(1, left_kernel.rows + 1))
        picks = rng.choice(left_kernel.rows, size=n_checks, replace=False)
        d1 = BinaryMatrix.from_rows(
            [left_kernel.to_dense()[i].tolist() for i in sorted(picks)], n
        )
        return CSSCode(ChainComplex([d2, d1]))


# --------------------------------------------------------------------------
# Foliation
# --------------------------------------------------------------------------

def _blit(dst: BinaryMatrix, r0: int, c0: int, src: BinaryMatrix) -> None:
    for r in range(src.rows):
        for c in src.row_bits(r):
            dst.flip(r0 + r, c0 + c)


def _blit_identity(dst: BinaryMatrix, r0: int, c0: int, n: int) -> None:
    for i in range(n):
        dst.flip(r0 + i, c0 + i)


def foliate(code: CSSCode, t: int) -> ChainComplex:
    """T-time-step foliation of a CSS code as a length-3 complex.

    Spaces (top to bottom): dual ancillas ``C2^T``, dual-layer qubits
    ``(C2 (+) C1)^T``, primal-layer qubits ``(C0 (+) C1)^T``, primal ancillas
    ``C0^T``.  Slices are laid out major-to-minor as slice, then component in
    the order written above (C2 before C1; C0 before C1).  For ``t = 1`` the
    cross-slice terms vanish and only the last-slice blocks remain.
    """
    if t < 1:
        raise ValueError("need at least one time step")
    base = code.complex
    d2, d1 = base.boundary(2), base.boundary(1)
    n2, n1, n0 = base.dim(2), base.dim(1), base.dim(0)

    w_dual = n2 + n1   # one dual slice: [C2 | C1]
    w_prim = n0 + n1   # one primal slice: [C0 | C1]

    delta3 = BinaryMatrix.zeros(t * w_dual, t * n2)
    delta2 = BinaryMatrix.zeros(t * w_prim, t * w_dual)
    delta1 = BinaryMatrix.zeros(t * n0, t * w_prim)

    def dual_c2(i: int) -> int:
        return i * w_dual

    def dual_c1(i: int) -> int:
        return i * w_dual + n2

    def prim_c0(i: int) -> int:
        return i * w_prim

    def prim_c1(i: int) -> int:
        return i * w_prim + n0

    last = t - 1
    # delta3: ancilla slice i hits its own C2 qubits, the next slice's C2
    # qubits, and its own C1 qubits through the face map.
    _blit_identity(delta3, dual_c2(last), last * n2, n2)
    _blit(delta3, dual_c1(last), last * n2, d2)
    for i in range(t - 1):
        _blit_identity(delta3, dual_c2(i), i * n2, n2)
        _blit_identity(delta3, dual_c2(i + 1), i * n2, n2)
        _blit(delta3, dual_c1(i), i * n2, d2)

    # delta2: data chains link C1 slice i to primal C1 slices i and i+1;
    # face map sends C2 to the same-slice primal C1; vertex map sends C1 to
    # the same-slice primal C0.
    _blit_identity(delta2, prim_c1(last), dual_c1(last), n1)
    _blit(delta2, prim_c1(last), dual_c2(last), d2)
    _blit(delta2, prim_c0(last), dual_c1(last), d1)
    for i in range(t - 1):
        _blit_identity(delta2, prim_c1(i), dual_c1(i), n1)
        _blit_identity(delta2, prim_c1(i + 1), dual_c1(i), n1)
        _blit(delta2, prim_c1(i), dual_c2(i), d2)
        _blit(delta2, prim_c0(i), dual_c1(i), d1)

    # delta1: primal C0 qubits of slice i hit ancilla slices i and i+1;
    # primal C1 qubits hit the same-slice ancilla through the vertex map.
    _blit_identity(delta1, last * n0, prim_c0(last), n0)
    _blit(delta1, last * n0, prim_c1(last), d1)
    for i in range(t - 1):
        _blit_identity(delta1, i * n0, prim_c0(i), n0)
        _blit_identity(delta1, (i + 1) * n0, prim_c0(i), n0)
        _blit(delta1, i * n0, prim_c1(i), d1)

    return ChainComplex([delta3, delta2, delta1])


def graph_state_edges(c: ChainComplex) -> list[tuple[int, int]]:
    """Bipartite edges (dual index, primal index) of a length-3 complex.

    The underlying graph state pairs the two middle spaces through the middle
    boundary map; each set bit is one controlled-phase edge.
    """
    if c.length != 3:
        raise ValueError(f"expected a length-3 complex, got length {c.length}")
    mid = c.boundary(2)
    assert mid is not None
    return [(col, row) for row in range(mid.rows) for col in mid.row_bits(row)]


# --------------------------------------------------------------------------
# JSON serialization
# --------------------------------------------------------------------------

def complex_to_json(c: ChainComplex) -> str:
    payload = {
        "dims": list(c.dims),
        "boundaries": [
            {"rows": b.rows, "cols": b.cols, "data": b.to_base64()}
            for b in c.boundaries
        ],
    }
    return json.dumps(payload, separators=(",", ":"), sort_keys=True)


def complex_from_json(text: str) -> ChainComplex:
    try:
        payload = json.loads(text)
        dims = [int(d) for d in payload["dims"]]
        entries = payload["boundaries"]
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"malformed complex payload: {exc}") from exc
    boundaries = [
        BinaryMatrix.from_base64(int(e["rows"]), int(e["cols"]), e["data"])
        for e in entries
    ]
    return ChainComplex(boundaries, dims=dims)
