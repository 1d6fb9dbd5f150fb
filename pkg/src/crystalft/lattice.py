"""Crystal unit cells, torus instantiation, and decoder-graph compilation.

A unit cell describes one translational repeat of a 3D cell complex:
vertices, edges with integer cell offsets, and faces as closed edge walks.
``build_torus`` instantiates the cell on an ``L x L x L`` torus (tracking
seam crossings for homology bookkeeping), and ``compile_error_channels``
walks every face's entangling-gate schedule to derive the error channels of
measurement-based state construction: ``z_e`` counts gate failures exciting
a single edge, while correlated failures excite a *suffix* of a face walk
and appear as augmented edges between the suffix endpoints.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

from .complexes import ChainComplex, complex_validate
from .gf2 import BinaryMatrix

__all__ = [
    "UnitCell",
    "DecoderGraph",
    "load_unit_cell",
    "loads_unit_cell",
    "bundled_cell_names",
    "load_bundled_cell",
    "build_torus",
    "compile_error_channels",
    "build_lattice",
    "cycle_class",
    "degree_stats",
    "face_boundary_ids",
    "wrapping_cycle",
]

Vec3 = tuple[int, int, int]


@dataclass(frozen=True)
class UnitCell:
    """One translational repeat of a periodic cell complex.

    Attributes:
        name: lattice identifier.
        vertices: number of vertices in the cell.
        edges: (tail, head, offset) triples; the head sits ``offset`` cells away.
        faces: closed walks of (edge index, cell offset, orientation) entries;
            orientation 1 traverses the edge head-to-tail.
        gate_order: per face, (start entry, direction) for the gate schedule.
        meta: free-form documentation (coordinates, provenance); never used
            for construction.
    """

    name: str
    vertices: int
    edges: tuple[tuple[int, int, Vec3], ...]
    faces: tuple[tuple[tuple[int, Vec3, int], ...], ...]
    gate_order: tuple[tuple[int, int], ...]
    meta: dict = field(default_factory=dict, compare=False)

    def face_walk(self, f: int) -> list[tuple[int, Vec3, int]]:
        """Face entries in scheduled gate order.

        A direction of -1 walks the stored cycle backwards, which flips each
        entry's orientation bit so the walk stays head-to-tail continuous.
        """
        entries = self.faces[f]
        start, direction = self.gate_order[f]
        g = len(entries)
        if direction == 1:
            return [entries[(start + t) % g] for t in range(g)]
        out = []
        for t in range(g):
            e, off, orient = entries[(start - t) % g]
            out.append((e, off, orient ^ 1))
        return out


def _entry_endpoints(
    cell: UnitCell, entry: tuple[int, Vec3, int]
) -> tuple[tuple[int, Vec3], tuple[int, Vec3]]:
    """(start, end) of one face entry as (vertex, cell offset) pairs."""
    e, off, orient = entry
    tail, head, eoff = cell.edges[e]
    a = (tail, off)
    b = (head, (off[0] + eoff[0], off[1] + eoff[1], off[2] + eoff[2]))
    return (b, a) if orient else (a, b)


def _check_faces_close(cell: UnitCell) -> None:
    for f in range(len(cell.faces)):
        entries = cell.faces[f]
        if not entries:
            raise ValueError(f"face {f} of {cell.name!r} is empty")
        for i, entry in enumerate(entries):
            _, end = _entry_endpoints(cell, entry)
            start_next, _ = _entry_endpoints(cell, entries[(i + 1) % len(entries)])
            if end != start_next:
                raise ValueError(
                    f"face {f} of {cell.name!r} does not close: entry {i} ends at "
                    f"{end} but entry {(i + 1) % len(entries)} starts at {start_next}"
                )


def _validate_cell(cell: UnitCell) -> None:
    n_e = len(cell.edges)
    for i, (tail, head, off) in enumerate(cell.edges):
        if not (0 <= tail < cell.vertices and 0 <= head < cell.vertices):
            raise ValueError(f"edge {i} of {cell.name!r} references a missing vertex")
        if len(off) != 3:
            raise ValueError(f"edge {i} of {cell.name!r} has a non-3D offset")
    for f, entries in enumerate(cell.faces):
        for e, off, orient in entries:
            if not 0 <= e < n_e:
                raise ValueError(f"face {f} of {cell.name!r} references a missing edge")
            if orient not in (0, 1):
                raise ValueError(f"face {f} of {cell.name!r} has a bad orientation bit")
    if len(cell.gate_order) != len(cell.faces):
        raise ValueError(f"{cell.name!r} needs one gate_order entry per face")
    for f, (start, direction) in enumerate(cell.gate_order):
        if direction not in (1, -1) or not 0 <= start < len(cell.faces[f]):
            raise ValueError(f"gate_order for face {f} of {cell.name!r} is out of range")
    _check_faces_close(cell)
    # The boundary-of-boundary condition, checked on a small torus where no
    # two distinct cell offsets can alias (all our offsets are within +-1).
    graph = build_torus(cell, 3, _skip_validation=True)
    report = complex_validate(graph.complex)
    if not report:
        raise ValueError(
            f"cell {cell.name!r} violates the boundary condition: {report.detail}"
        )


def loads_unit_cell(text: str) -> UnitCell:
    """Parse and fully validate a unit-cell JSON document."""
    try:
        payload = json.loads(text)
        cell = UnitCell(
            name=str(payload["name"]),
            vertices=int(payload["vertices"]),
            edges=tuple(
                (int(t), int(h), (int(o[0]), int(o[1]), int(o[2])))
                for t, h, o in payload["edges"]
            ),
            faces=tuple(
                tuple(
                    (int(e), (int(o[0]), int(o[1]), int(o[2])), int(b))
                    for e, o, b in face
                )
                for face in payload["faces"]
            ),
            gate_order=tuple((int(s), int(d)) for s, d in payload["gate_order"]),
            meta={
                k: v
                for k, v in payload.items()
                if k not in ("name", "vertices", "edges", "faces", "gate_order")
            },
        )
    except (json.JSONDecodeError, KeyError, TypeError, ValueError, IndexError) as exc:
        raise ValueError(f"malformed unit-cell document: {exc}") from exc
    _validate_cell(cell)
    return cell


def load_unit_cell(path: str | Path) -> UnitCell:
    return loads_unit_cell(Path(path).read_text())


def bundled_cell_names() -> list[str]:
    root = resources.files("crystalft") / "cells"
    return sorted(p.name[: -len(".json")] for p in root.iterdir() if p.name.endswith(".json"))


def load_bundled_cell(name: str) -> UnitCell:
    path = resources.files("crystalft") / "cells" / f"{name}.json"
    if not path.is_file():
        raise ValueError(
            f"no bundled lattice {name!r}; available: {', '.join(bundled_cell_names())}"
        )
    return loads_unit_cell(path.read_text())


# --------------------------------------------------------------------------
# Torus instantiation
# --------------------------------------------------------------------------

@dataclass
class DecoderGraph:
    """Torus instantiation of a unit cell with compiled error channels.

    Plain edges are the edge qubits (measurement flag 1 each); augmented
    edges summarize correlated gate-failure strings between a pair of
    syndrome vertices.  Edge ids run ``0..E-1`` (plain) then ``E..E+A-1``
    (augmented).  Seam vectors are 3 bits packed little-endian (x=1, y=2,
    z=4) counting wrap parity between cell coordinate L-1 and 0.
    """

    name: str
    L: int
    cell: UnitCell
    n_vertices: int
    eu: np.ndarray
    ev: np.ndarray
    ez: np.ndarray
    eseam: np.ndarray
    au: np.ndarray
    av: np.ndarray
    ax: np.ndarray
    aseam: np.ndarray
    complex: ChainComplex
    face_entry_edges: tuple[tuple[int, ...], ...]
    compiled: bool = False

    # -- decoder-facing views --------------------------------------------

    @property
    def vertices(self) -> list[tuple[int, Vec3]]:
        """(cell-vertex index, cell coordinate) per torus vertex."""
        V, L = self.cell.vertices, self.L
        out = []
        for idx in range(self.n_vertices):
            cell_idx, v = divmod(idx, V)
            xy, z = divmod(cell_idx, L)
            x, y = divmod(xy, L)
            out.append((v, (x, y, z)))
        return out

    @property
    def edges(self) -> list[tuple[int, int, int, int, Vec3]]:
        """Plain edges as (u, v, z_count, measurement flag, seam bits)."""
        return [
            (int(u), int(v), int(z), 1, _unpack_seam(s))
            for u, v, z, s in zip(self.eu, self.ev, self.ez, self.eseam)
        ]

    @property
    def augmented_edges(self) -> list[tuple[int, int, int, Vec3]]:
        """Augmented edges as (u, v, x_count, seam bits)."""
        return [
            (int(u), int(v), int(x), _unpack_seam(s))
            for u, v, x, s in zip(self.au, self.av, self.ax, self.aseam)
        ]

    @property
    def n_plain(self) -> int:
        return len(self.eu)

    @property
    def n_augmented(self) -> int:
        return len(self.au)

    def endpoints(self, edge_id: int) -> tuple[int, int]:
        if edge_id < self.n_plain:
            return int(self.eu[edge_id]), int(self.ev[edge_id])
        j = edge_id - self.n_plain
        return int(self.au[j]), int(self.av[j])

    def seam_bits(self, edge_id: int) -> int:
        if edge_id < self.n_plain:
            return int(self.eseam[edge_id])
        return int(self.aseam[edge_id - self.n_plain])


def _unpack_seam(bits: int) -> Vec3:
    bits = int(bits)
    return (bits & 1, (bits >> 1) & 1, (bits >> 2) & 1)


def _seam_parity(coord: int, off: int, L: int) -> int:
    return ((coord + off) // L) & 1


def build_torus(cell: UnitCell, L: int, _skip_validation: bool = False) -> DecoderGraph:
    """Instantiate ``cell`` on the 3-torus of linear size ``L``.

    Returns the (uncompiled) decoder graph together with the instantiated
    length-2 chain complex; error-channel counts are filled in by
    ``compile_error_channels``.
    """
    if L < 2:
        raise ValueError("torus needs L >= 2")
    V, E_c, F_c = cell.vertices, len(cell.edges), len(cell.faces)
    n_cells = L ** 3

    def cell_index(x: int, y: int, z: int) -> int:
        return (x * L + y) * L + z

    def vid(v: int, x: int, y: int, z: int) -> int:
        return cell_index(x % L, y % L, z % L) * V + v

    def eid(e: int, x: int, y: int, z: int) -> int:
        return cell_index(x % L, y % L, z % L) * E_c + e

    n_edges = n_cells * E_c
    eu = np.zeros(n_edges, dtype=np.int64)
    ev = np.zeros(n_edges, dtype=np.int64)
    eseam = np.zeros(n_edges, dtype=np.uint8)
    for x in range(L):
        for y in range(L):
            for z in range(L):
                base = cell_index(x, y, z) * E_c
                for e, (tail, head, off) in enumerate(cell.edges):
                    eu[base + e] = vid(tail, x, y, z)
                    ev[base + e] = vid(head, x + off[0], y + off[1], z + off[2])
                    seam = (
                        _seam_parity(x, off[0], L)
                        | _seam_parity(y, off[1], L) << 1
                        | _seam_parity(z, off[2], L) << 2
                    )
                    eseam[base + e] = seam

    face_entry_edges: list[tuple[int, ...]] = []
    d2 = BinaryMatrix.zeros(n_edges, n_cells * F_c)
    for x in range(L):
        for y in range(L):
            for z in range(L):
                fbase = cell_index(x, y, z) * F_c
                for f, entries in enumerate(cell.faces):
                    ids = tuple(
                        eid(e, x + off[0], y + off[1], z + off[2])
                        for e, off, _ in entries
                    )
                    face_entry_edges.append(ids)
                    for edge_id in ids:
                        d2.flip(edge_id, fbase + f)

    d1 = BinaryMatrix.zeros(n_cells * V, n_edges)
    for edge_id in range(n_edges):
        d1.flip(int(eu[edge_id]), edge_id)
        d1.flip(int(ev[edge_id]), edge_id)

    graph = DecoderGraph(
        name=cell.name,
        L=L,
        cell=cell,
        n_vertices=n_cells * V,
        eu=eu,
        ev=ev,
        ez=np.zeros(n_edges, dtype=np.int64),
        eseam=eseam,
        au=np.zeros(0, dtype=np.int64),
        av=np.zeros(0, dtype=np.int64),
        ax=np.zeros(0, dtype=np.int64),
        aseam=np.zeros(0, dtype=np.uint8),
        complex=ChainComplex([d2, d1]),
        face_entry_edges=tuple(face_entry_edges),
    )
    if not _skip_validation:
        report = complex_validate(graph.complex)
        if not report:
            raise ValueError(f"instantiated complex invalid: {report.detail}")
    return graph


# --------------------------------------------------------------------------
# Error-channel compilation
# --------------------------------------------------------------------------

def compile_error_channels(graph: DecoderGraph, cell: UnitCell | None = None) -> DecoderGraph:
    """Fill ``z_e`` and the augmented edge table by walking gate schedules.

    For each face of ``g`` gates, in scheduled order: a single-qubit failure
    after gate ``t`` excites the edge of gate ``t`` (one ``z_e`` increment);
    a correlated failure after gate ``t < g`` flips the rest of the walk,
    whose boundary is the vertex pair (walk position t, walk start) - that
    pair becomes an augmented edge entry with seam equal to the XOR of the
    suffix edges' seams.  Suffixes with empty boundary, and the failure
    after the final gate, contribute nothing.  Entries with equal endpoint
    pairs and equal seams merge by summing ``x_e``.
    """
    cell = cell if cell is not None else graph.cell
    if len(cell.gate_order) != len(cell.faces):
        raise ValueError(f"{cell.name!r} is missing gate schedules")
    F_c = len(cell.faces)
    ez = np.zeros(graph.n_plain, dtype=np.int64)
    aug: dict[tuple[int, int, int], int] = {}

    # Scheduled entry order within the stored cycle, one per cell face.
    scheduled_positions: list[list[int]] = []
    scheduled_flip: list[int] = []
    for f in range(F_c):
        start, direction = cell.gate_order[f]
        g = len(cell.faces[f])
        if direction == 1:
            scheduled_positions.append([(start + t) % g for t in range(g)])
            scheduled_flip.append(0)
        else:
            scheduled_positions.append([(start - t) % g for t in range(g)])
            scheduled_flip.append(1)

    for face_idx, entry_ids in enumerate(graph.face_entry_edges):
        f = face_idx % F_c
        positions = scheduled_positions[f]
        flip = scheduled_flip[f]
        g = len(positions)
        # Walk endpoints: for each scheduled gate, its oriented edge instance.
        walk_edges = []
        for pos in positions:
            edge_id = entry_ids[pos]
            orient = cell.faces[f][pos][2] ^ flip
            u, v = int(graph.eu[edge_id]), int(graph.ev[edge_id])
            if orient:
                u, v = v, u
            walk_edges.append((edge_id, u, v))
        w0 = walk_edges[0][1]
        # z failures: one per gate, exciting that gate's edge.
        for edge_id, _, _ in walk_edges:
            ez[edge_id] += 1
        # Correlated failures: suffix after gate t, boundary {w_t, w0}.
        suffix_seam = 0
        pairs: list[tuple[int, int, int]] = []
        for t in range(g - 1, 0, -1):
            suffix_seam ^= int(graph.eseam[walk_edges[t][0]])
            w_t = walk_edges[t][1]  # walk vertex after gate t = start of gate t+1
            if w_t != w0:
                a, b = (w_t, w0) if w_t < w0 else (w0, w_t)
                pairs.append((a, b, suffix_seam))
        for key in pairs:
            aug[key] = aug.get(key, 0) + 1

    keys = sorted(aug)
    graph.ez = ez
    graph.au = np.array([k[0] for k in keys], dtype=np.int64)
    graph.av = np.array([k[1] for k in keys], dtype=np.int64)
    graph.ax = np.array([aug[k] for k in keys], dtype=np.int64)
    graph.aseam = np.array([k[2] for k in keys], dtype=np.uint8)
    graph.compiled = True
    return graph


def build_lattice(name: str, L: int) -> DecoderGraph:
    """Load a bundled cell, instantiate it at size L, and compile channels."""
    cell = load_bundled_cell(name)
    return compile_error_channels(build_torus(cell, L), cell)


# --------------------------------------------------------------------------
# Homology bookkeeping
# --------------------------------------------------------------------------

def cycle_class(edge_ids, graph: DecoderGraph) -> Vec3:
    """Winding parity (3 bits) of an even-degree edge set.

    Raises ``ValueError`` when the set has a nonempty boundary.  Accepts
    plain and augmented edge ids; augmented edges count through their
    endpoint pair.
    """
    degree: dict[int, int] = {}
    seam = 0
    for edge_id in edge_ids:
        u, v = graph.endpoints(int(edge_id))
        degree[u] = degree.get(u, 0) ^ 1
        degree[v] = degree.get(v, 0) ^ 1
        seam ^= graph.seam_bits(int(edge_id))
    odd = [v for v, parity in degree.items() if parity]
    if odd:
        raise ValueError(f"edge set has nonempty boundary at vertices {sorted(odd)[:8]}")
    return _unpack_seam(seam)


def face_boundary_ids(graph: DecoderGraph, face_idx: int) -> list[int]:
    """Plain-edge ids of one instantiated face, with doubled edges cancelled."""
    counts: dict[int, int] = {}
    for edge_id in graph.face_entry_edges[face_idx]:
        counts[edge_id] = counts.get(edge_id, 0) ^ 1
    return sorted(e for e, parity in counts.items() if parity)


def wrapping_cycle(graph: DecoderGraph, direction: int) -> list[int]:
    """Shortest plain-edge cycle with odd winding in one direction (0,1,2).

    BFS over (vertex, seam-parity) states from vertex 0 back to itself with
    the target seam bit flipped; returns the edge set (walk edges mod 2).
    """
    if direction not in (0, 1, 2):
        raise ValueError("direction must be 0, 1, or 2")
    # Adjacency over plain edges.
    adj: list[list[tuple[int, int, int]]] = [[] for _ in range(graph.n_vertices)]
    for e in range(graph.n_plain):
        u, v, s = int(graph.eu[e]), int(graph.ev[e]), int(graph.eseam[e])
        adj[u].append((v, e, s))
        adj[v].append((u, e, s))
    target = (0, 1 << direction)
    start = (0, 0)
    prev: dict[tuple[int, int], tuple[tuple[int, int], int]] = {start: (start, -1)}
    frontier = [start]
    while frontier and target not in prev:
        nxt = []
        for state in frontier:
            vtx, parity = state
            for other, e, s in adj[vtx]:
                new = (other, parity ^ s)
                if new not in prev:
                    prev[new] = (state, e)
                    nxt.append(new)
        frontier = nxt
    if target not in prev:
        raise ValueError(f"no wrapping cycle in direction {direction}")
    edges: dict[int, int] = {}
    state = target
    while state != start:
        state, e = prev[state]
        edges[e] = edges.get(e, 0) ^ 1
    return sorted(e for e, parity in edges.items() if parity)


# --------------------------------------------------------------------------
# Statistics
# --------------------------------------------------------------------------

def degree_stats(cell: UnitCell) -> tuple[float, float]:
    """(average decoder-graph degree, average graph-state degree).

    Decoder degree is 2E/V of the 1-skeleton; graph-state degree is the
    mean number of face-gate incidences per edge qubit.
    """
    total_gates = sum(len(face) for face in cell.faces)
    return (
        2 * len(cell.edges) / cell.vertices,
        total_gates / len(cell.edges),
    )
