"""Delaney-Dress symbols (extended Schlafli symbols) for 2D and 3D tilings.

A symbol is a finite set of flags with one involution ``r0..rd`` per
generator (fixed points are self-loops) and a positive branching label
``m_{i,i+1}`` per flag for each consecutive generator pair.  Only *regular*
symbols are handled: labels for non-consecutive pairs are implicitly 2 and
validated, not stored.

The module also implements the grid prescription that enumerates self-dual
3D symbol candidates with ``n``-regular graph states: a ``k x k`` flag grid
with alternating edge colors, ``m01 = m23 = n`` fixed, and ``m12`` free on
each lower-triangle rotation orbit.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Iterator

__all__ = [
    "DelaneySymbol",
    "SymbolReport",
    "parse_symbol",
    "serialize_symbol",
    "validate_symbol",
    "orbits",
    "dual_symbol",
    "find_isomorphism",
    "is_self_dual",
    "euler_flat_2d",
    "enumerate_candidates",
    "count_candidates",
    "m12_orbit_vector",
    "permute_symbol",
    "square_tiling_symbol",
    "icosahedral_symbol",
    "truncated_square_symbol",
    "cubic_tiling_symbol",
]


@dataclass(frozen=True)
class DelaneySymbol:
    """Immutable dressed flag graph.

    Attributes:
        d: dimension, 2 or 3 (d+1 generators).
        size: number of flags ``|S|``.
        adjacency: ``d+1`` involutions, each a length-``size`` image tuple.
        labels: ``d`` label vectors; ``labels[i][s]`` is ``m_{i,i+1}(s)``.
    """

    d: int
    size: int
    adjacency: tuple[tuple[int, ...], ...]
    labels: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.d not in (2, 3):
            raise ValueError("dimension must be 2 or 3")
        if self.size < 1:
            raise ValueError("symbol needs at least one flag")
        if len(self.adjacency) != self.d + 1:
            raise ValueError(f"expected {self.d + 1} involutions")
        if len(self.labels) != self.d:
            raise ValueError(f"expected {self.d} label vectors")
        rng = range(self.size)
        for i, perm in enumerate(self.adjacency):
            if len(perm) != self.size or any(p not in rng for p in perm):
                raise ValueError(f"r{i} is not a map on the flag set")
            if any(perm[perm[s]] != s for s in rng):
                raise ValueError(f"r{i} is not an involution")
        for i, vec in enumerate(self.labels):
            if len(vec) != self.size:
                raise ValueError(f"m{i}{i + 1} must assign a label to every flag")
            if any(v < 1 for v in vec):
                raise ValueError(f"m{i}{i + 1} labels must be positive")


@dataclass(frozen=True)
class SymbolReport:
    """Validation outcome naming the first violated condition."""

    ok: bool
    condition: str | None = None  # "orbit-order" | "orbit-constancy" | "transitivity" | "regularity"
    witness: int | None = None
    detail: str = ""

    def __bool__(self) -> bool:
        return self.ok


# --------------------------------------------------------------------------
# Text format
# --------------------------------------------------------------------------

_TOKEN = re.compile(
    r"d\s*=\s*(?P<d>\d+)"
    r"|(?:size|\|S\|)\s*=\s*(?P<size>\d+)"
    r"|r(?P<ri>\d+)\s*:\s*\((?P<perm>[\d\s]*)\)"
    r"|m(?P<mi>\d)(?P<mj>\d)\s*:\s*\[(?P<vals>[\d\s]*)\]"
    r"|(?P<junk>\S+)"
)


def parse_symbol(text: str) -> DelaneySymbol:
    """Parse the text form (newlines and spaces are interchangeable).

    Grammar: ``d=<2|3> size=<N>`` (``|S|=`` accepted for ``size=``), one
    ``r<i>: (<image list>)`` per generator, one ``m<i><j>: [<labels>]`` per
    consecutive pair.  Raises ``ValueError`` naming the character position of
    the first offending token.
    """
    d = size = None
    perms: dict[int, tuple[int, ...]] = {}
    labels: dict[int, tuple[int, ...]] = {}
    for match in _TOKEN.finditer(text):
        if match.group("junk") is not None:
            raise ValueError(
                f"syntax error at position {match.start()}: "
                f"unrecognized token {match.group('junk')!r}"
            )
        if match.group("d") is not None:
            d = int(match.group("d"))
        elif match.group("size") is not None:
            size = int(match.group("size"))
        elif match.group("ri") is not None:
            idx = int(match.group("ri"))
            if idx in perms:
                raise ValueError(f"syntax error at position {match.start()}: duplicate r{idx}")
            perms[idx] = tuple(int(t) for t in match.group("perm").split())
        else:
            i, j = int(match.group("mi")), int(match.group("mj"))
            if j != i + 1:
                raise ValueError(
                    f"syntax error at position {match.start()}: "
                    f"only consecutive labels m{i}{i + 1} are stored"
                )
            labels[i] = tuple(int(t) for t in match.group("vals").split())
    if d is None or size is None:
        raise ValueError("missing d= or size= header")
    if sorted(perms) != list(range(d + 1)):
        raise ValueError(f"expected involutions r0..r{d}, got {sorted(perms)}")
    if sorted(labels) != list(range(d)):
        raise ValueError(f"expected labels m01..m{d - 1}{d}, got {sorted(labels)}")
    return DelaneySymbol(
        d,
        size,
        tuple(perms[i] for i in range(d + 1)),
        tuple(labels[i] for i in range(d)),
    )


def serialize_symbol(s: DelaneySymbol) -> str:
    lines = [f"d={s.d} size={s.size}"]
    for i, perm in enumerate(s.adjacency):
        lines.append(f"r{i}: (" + " ".join(str(p) for p in perm) + ")")
    for i, vec in enumerate(s.labels):
        lines.append(f"m{i}{i + 1}: [" + " ".join(str(v) for v in vec) + "]")
    return "\n".join(lines) + "\n"


# --------------------------------------------------------------------------
# Validation
# --------------------------------------------------------------------------

def orbits(s: DelaneySymbol, i: int, j: int) -> list[list[int]]:
    """Connected components of the flag set under ``r_i`` and ``r_j``.

    Components are sorted by smallest member, members ascending.
    """
    if i == j:
        raise ValueError("need two distinct generators")
    parent = list(range(s.size))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for perm in (s.adjacency[i], s.adjacency[j]):
        for a, b in enumerate(perm):
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)
    groups: dict[int, list[int]] = {}
    for x in range(s.size):
        groups.setdefault(find(x), []).append(x)
    return [sorted(groups[r]) for r in sorted(groups)]


def _pair_order(s: DelaneySymbol, i: int, j: int, start: int) -> int:
    """Order of the rotation ``r_i r_j`` on the orbit of ``start``."""
    rot = lambda x: s.adjacency[i][s.adjacency[j][x]]
    x, order = rot(start), 1
    while x != start:
        x = rot(x)
        order += 1
    return order


def validate_symbol(s: DelaneySymbol) -> SymbolReport:
    """Check the defining symbol conditions, naming the first failure.

    Conditions: every stored label is constant on its ``<r_i, r_{i+1}>``
    orbit and is a multiple of the rotation order there (so the rotation to
    the labelled power fixes each flag); the generators act transitively;
    and regularity - each non-consecutive generator pair composes to an
    involution (implicit label 2).
    """
    for i in range(s.d):
        vec = s.labels[i]
        for orbit in orbits(s, i, i + 1):
            first = vec[orbit[0]]
            for flag in orbit:
                if vec[flag] != first:
                    return SymbolReport(
                        False, "orbit-constancy", flag,
                        f"m{i}{i + 1} is {vec[flag]} at flag {flag} but "
                        f"{first} elsewhere on its orbit",
                    )
            order = _pair_order(s, i, i + 1, orbit[0])
            if first % order != 0:
                return SymbolReport(
                    False, "orbit-order", orbit[0],
                    f"rotation r{i}r{i + 1} has order {order} on the orbit of "
                    f"flag {orbit[0]}, which does not divide m{i}{i + 1}={first}",
                )
    # Transitivity of the full action.
    seen = {0}
    frontier = [0]
    while frontier:
        x = frontier.pop()
        for perm in s.adjacency:
            y = perm[x]
            if y not in seen:
                seen.add(y)
                frontier.append(y)
    if len(seen) != s.size:
        witness = min(set(range(s.size)) - seen)
        return SymbolReport(
            False, "transitivity", witness,
            f"flag {witness} is unreachable from flag 0",
        )
    # Regularity: non-consecutive rotations must square to the identity.
    for i in range(s.d + 1):
        for j in range(i + 2, s.d + 1):
            for flag in range(s.size):
                y = flag
                for _ in range(2):
                    y = s.adjacency[i][s.adjacency[j][y]]
                if y != flag:
                    return SymbolReport(
                        False, "regularity", flag,
                        f"(r{i}r{j})^2 moves flag {flag}; implicit "
                        f"m{i}{j}=2 violated",
                    )
    return SymbolReport(True)


# --------------------------------------------------------------------------
# Duality and isomorphism
# --------------------------------------------------------------------------

def dual_symbol(s: DelaneySymbol) -> DelaneySymbol:
    """Swap ``r_i <-> r_{d-i}`` (labels follow: the list reverses)."""
    return DelaneySymbol(
        s.d,
        s.size,
        tuple(reversed(s.adjacency)),
        tuple(reversed(s.labels)),
    )


def find_isomorphism(s1: DelaneySymbol, s2: DelaneySymbol) -> list[int] | None:
    """Equivariant, label-preserving bijection ``s1 -> s2``, or ``None``.

    Anchors flag 0 of ``s1`` to each flag of ``s2`` in turn and propagates
    along the (connected) action; returns the first mapping that commutes
    with every generator and preserves every label, as an image list.
    """
    if (s1.d, s1.size) != (s2.d, s2.size):
        return None
    n = s1.size
    for anchor in range(n):
        image = [-1] * n
        image[0] = anchor
        stack = [0]
        ok = True
        while stack and ok:
            x = stack.pop()
            for gen, perm1 in enumerate(s1.adjacency):
                y = perm1[x]
                fy = s2.adjacency[gen][image[x]]
                if image[y] == -1:
                    image[y] = fy
                    stack.append(y)
                elif image[y] != fy:
                    ok = False
                    break
        if not ok or -1 in image or len(set(image)) != n:
            continue
        if all(
            s1.labels[i][x] == s2.labels[i][image[x]]
            for i in range(s1.d)
            for x in range(n)
        ):
            return image
    return None


def is_self_dual(s: DelaneySymbol) -> list[int] | None:
    """Bijection witnessing ``s ~ dual(s)``, or ``None``."""
    return find_isomorphism(s, dual_symbol(s))


def permute_symbol(s: DelaneySymbol, perm: list[int]) -> DelaneySymbol:
    """Relabel flags by ``perm`` (new index of old flag ``x`` is ``perm[x]``)."""
    inv = [0] * s.size
    for old, new in enumerate(perm):
        inv[new] = old
    adjacency = tuple(
        tuple(perm[p[inv[x]]] for x in range(s.size)) for p in s.adjacency
    )
    labels = tuple(tuple(vec[inv[x]] for x in range(s.size)) for vec in s.labels)
    return DelaneySymbol(s.d, s.size, adjacency, labels)


# --------------------------------------------------------------------------
# Flatness (2D)
# --------------------------------------------------------------------------

def euler_flat_2d(s: DelaneySymbol) -> bool:
    """Zero-curvature test for 2D symbols, in exact rational arithmetic.

    A 2D symbol describes a flat (Euclidean) tiling exactly when
    ``sum_s (1/m01(s) + 1/m12(s)) = |S| / 2``; larger sums are spherical,
    smaller hyperbolic.
    """
    if s.d != 2:
        raise ValueError("flatness test applies to 2D symbols only")
    total = sum(
        (Fraction(1, s.labels[0][x]) + Fraction(1, s.labels[1][x])
         for x in range(s.size)),
        Fraction(0),
    )
    return total == Fraction(s.size, 2)


# --------------------------------------------------------------------------
# Fixed symbols
# --------------------------------------------------------------------------

def square_tiling_symbol() -> DelaneySymbol:
    """Regular square tiling {4,4}: one flag, all generators loops."""
    return DelaneySymbol(2, 1, ((0,), (0,), (0,)), ((4,), (4,)))


def icosahedral_symbol() -> DelaneySymbol:
    """Icosahedron {3,5}: spherical, so not flat."""
    return DelaneySymbol(2, 1, ((0,), (0,), (0,)), ((3,), (5,)))


def truncated_square_symbol() -> DelaneySymbol:
    """Truncated square tiling 4.8.8: three flag classes, not self-dual.

    Flag 0 sits in the squares, flags 1 and 2 in the octagons; ``r0`` fixes
    all three classes, ``r1`` swaps the octagon pair, ``r2`` rotates between
    square and octagon.
    """
    return DelaneySymbol(
        2,
        3,
        ((0, 1, 2), (0, 2, 1), (1, 0, 2)),
        ((4, 8, 8), (3, 3, 3)),
    )


def cubic_tiling_symbol() -> DelaneySymbol:
    """Cubic tiling {4,3,4}: one flag; self-dual via the identity."""
    return DelaneySymbol(3, 1, ((0,), (0,), (0,), (0,)), ((4,), (3,), (4,)))


# --------------------------------------------------------------------------
# Grid enumeration of self-dual 3D candidates
# --------------------------------------------------------------------------

_SINGLETON_CHOICES = (1, 2, 3, 4, 6)
_ROTATION_CHOICES = (2, 4, 6, 8, 12)


def _grid_adjacency(k: int, periodic: bool) -> tuple[tuple[int, ...], ...]:
    """Involutions r0..r3 on the k x k flag grid.

    Flags are indexed in reading order from (1,1) bottom-left: index
    ``(y-1)*k + (x-1)``.  Horizontal edges between columns x and x+1 carry
    r0 when x is even and r1 when x is odd; vertical edges between rows y
    and y+1 carry r3 when y is even and r2 when y is odd.  Missing boundary
    edges become self-loops; with periodic closure (k even) the wrap edges
    carry r0 / r3 (x = k and y = k are even).
    """
    size = k * k
    maps = [list(range(size)) for _ in range(4)]

    def idx(x: int, y: int) -> int:
        return (y - 1) * k + (x - 1)

    for y in range(1, k + 1):
        for x in range(1, k):
            gen = 0 if x % 2 == 0 else 1
            a, b = idx(x, y), idx(x + 1, y)
            maps[gen][a], maps[gen][b] = b, a
        if periodic:
            a, b = idx(k, y), idx(1, y)
            maps[0][a], maps[0][b] = b, a
    for x in range(1, k + 1):
        for y in range(1, k):
            gen = 3 if y % 2 == 0 else 2
            a, b = idx(x, y), idx(x, y + 1)
            maps[gen][a], maps[gen][b] = b, a
        if periodic:
            a, b = idx(x, k), idx(x, 1)
            maps[3][a], maps[3][b] = b, a
    return tuple(tuple(m) for m in maps)


def _check_grid_params(n: int, k: int, boundary: str) -> bool:
    """Validate parameters; returns the periodic flag."""
    if n < 1 or k < 1:
        raise ValueError("n and k must be positive")
    if boundary not in ("loop", "periodic"):
        raise ValueError(f"boundary must be 'loop' or 'periodic', not {boundary!r}")
    if n % k != 0 and k != 2 * n:
        raise ValueError(f"need k | n or k = 2n, got n={n}, k={k}")
    periodic = boundary == "periodic"
    if periodic and k % 2 != 0:
        raise ValueError("periodic closure needs even k")
    if k == 2 * n and not periodic:
        raise ValueError("k = 2n forces periodic closure")
    return periodic


def count_candidates(n: int, k: int, boundary: str = "loop") -> int:
    """Closed-form candidate count 5^C(ceil(k/2)+1, 2)."""
    if boundary == "loop" and k == 2 * n:
        boundary = "periodic"  # the only legal completion at k = 2n
    _check_grid_params(n, k, boundary)
    half = (k + 1) // 2
    return 5 ** comb(half + 1, 2)


def enumerate_candidates(
    n: int, k: int, boundary: str = "loop"
) -> Iterator[DelaneySymbol]:
    """Yield every self-dual grid candidate for an n-regular graph state.

    The flag set and action are fixed by (n, k, boundary); ``m01 = m23 = n``
    everywhere, and each ``<r1, r2>`` orbit meeting the lower triangle
    (x >= y) freely picks ``m12`` from {2,4,6,8,12} (orbit size > 1) or
    {1,2,3,4,6} (singletons), mirrored to the reflected orbit.  Flatness of
    the resulting symbols is *not* decided here.
    """
    periodic = _check_grid_params(n, k, boundary)
    adjacency = _grid_adjacency(k, periodic)
    size = k * k
    base = DelaneySymbol(
        3, size, adjacency,
        ((n,) * size, (1,) * size, (n,) * size),
    )
    rot_orbits = orbits(base, 1, 2)  # sorted by first (reading-order) member

    def mirror(flag: int) -> int:
        y, x = divmod(flag, k)
        return x * k + y

    orbit_of = [0] * size
    for o_idx, orbit in enumerate(rot_orbits):
        for flag in orbit:
            orbit_of[flag] = o_idx

    free: list[int] = []          # orbit indices meeting x >= y
    mirrored_to: dict[int, int] = {}
    for o_idx, orbit in enumerate(rot_orbits):
        if any(flag % k >= flag // k for flag in orbit):  # x-1 >= y-1
            free.append(o_idx)
            mirrored_to[o_idx] = orbit_of[mirror(orbit[0])]

    choice_sets = [
        _ROTATION_CHOICES if len(rot_orbits[o]) > 1 else _SINGLETON_CHOICES
        for o in free
    ]
    for picks in itertools.product(*choice_sets):
        m12 = [0] * size
        for o_idx, value in zip(free, picks):
            for flag in rot_orbits[o_idx]:
                m12[flag] = value
            for flag in rot_orbits[mirrored_to[o_idx]]:
                m12[flag] = value
        yield DelaneySymbol(
            3, size, adjacency,
            ((n,) * size, tuple(m12), (n,) * size),
        )


def m12_orbit_vector(s: DelaneySymbol) -> tuple[int, ...]:
    """Per-orbit m12 values, orbits ordered by first flag in reading order."""
    return tuple(s.labels[1][orbit[0]] for orbit in orbits(s, 1, 2))
