"""Noise channels, syndrome decoding, and Monte Carlo trials.

Errors on a compiled decoder graph are sampled edge-by-edge: every edge
carries the probability that its syndrome pair is excited, combining
entangling-gate failures accumulated along the schedule walk with a
measurement-error channel on plain edges.  A trial draws an error set,
matches the resulting defects with an exact minimum-weight perfect
matching on shortest-path distances, applies the matched paths as a
recovery, and classifies the surviving cycle by its winding parity.

Two interchangeable engines produce the statistics.  The reference
engine runs the full pipeline per trial in plain Python (Dijkstra paths,
explicit recovery sets) and exists to be read and cross-checked.  The
fast engine precomputes all-pairs shortest paths once per noise point
and decodes whole chunks of trials in a compiled kernel; it never
materializes paths, only their winding classes.  Both consume identical
counter-based random streams, so they see the same error realizations.
"""

from __future__ import annotations

import dataclasses
import heapq
import math
import os
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .blossom import _mwm_jit, min_weight_perfect_matching
from .lattice import DecoderGraph, build_lattice, cycle_class

try:  # pragma: no cover - exercised implicitly by which path runs
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]

        def wrap(fn):
            return fn

        return wrap


Vec3 = tuple[int, int, int]

#: Monte Carlo trials are processed in chunks of this many draws; each
#: chunk owns a disjoint slice of the counter-based random stream, so
#: results do not depend on how chunks are distributed over workers.
CHUNK = 512

#: Counter stride between chunks; far larger than any chunk consumes.
_CHUNK_STRIDE = 1 << 40

#: Relative size of the deterministic tie-breaking perturbation.
_TIE_SCALE = 1e-9

#: Named noise regimes; ``p`` is always the largest individual rate.
REGIMES = ("pz", "pz10", "sym", "px10")

_Z95 = 1.959963984540054


# --------------------------------------------------------------------------
# Noise parameters and edge probabilities
# --------------------------------------------------------------------------

@dataclasses.dataclass(frozen=True)
class NoiseParams:
    """Independent error rates of the circuit-level noise model.

    Attributes:
        p_z: probability of a Z-type failure per entangling gate.
        p_x: probability of an X-type failure per entangling gate.
        p_m: probability of a measurement error per plain edge.
    """

    p_z: float
    p_x: float
    p_m: float

    def __post_init__(self) -> None:
        for name in ("p_z", "p_x", "p_m"):
            value = getattr(self, name)
            if not 0.0 <= value < 0.5:
                raise ValueError(f"{name} must lie in [0, 1/2), got {value}")

    @classmethod
    def from_regime(cls, regime: str, p: float) -> "NoiseParams":
        """Build parameters for a named regime at total error rate ``p``.

        The total rate is the largest individual rate: ``pz`` is a
        Z-only channel, ``pz10`` sets p_Z = 10 p_X = 10 p_m, ``sym``
        sets all three equal, and ``px10`` sets p_X = 10 p_Z = 10 p_m.
        """
        if regime == "pz":
            return cls(p, 0.0, 0.0)
        if regime == "pz10":
            return cls(p, p / 10.0, p / 10.0)
        if regime == "sym":
            return cls(p, p, p)
        if regime == "px10":
            return cls(p / 10.0, p, p / 10.0)
        raise ValueError(f"unknown noise regime {regime!r}; expected one of {REGIMES}")


def edge_prob_z(z_e: int, p_z: float) -> float:
    """Probability that an odd number of ``z_e`` independent faults fire.

    Closed form (1 - (1 - 2p)^z) / 2, equal to the odd-weight binomial
    sum; used for the Z channel of plain edges (with the gate count of
    the edge) and the X channel of augmented edges (with the pair
    multiplicity).
    """
    if z_e < 0:
        raise ValueError("event count must be nonnegative")
    return 0.5 * (1.0 - (1.0 - 2.0 * p_z) ** z_e)


def edge_prob_total(p_m_events: int, p_ez: float, p_ex: float, p_m: float) -> float:
    """Total excitation probability of an edge with three channels.

    Combines the Z channel, the X channel, and (when ``p_m_events`` is
    1) the measurement channel by odd parity: the edge is excited when
    an odd number of the independent channels fire.  The closed form is
    (1 - (1-2a)(1-2b)(1-2c)) / 2, symmetric in the three channels.
    """
    if p_m_events not in (0, 1):
        raise ValueError("p_m_events must be 0 or 1")
    c = p_m if p_m_events else 0.0
    return 0.5 * (1.0 - (1.0 - 2.0 * p_ez) * (1.0 - 2.0 * p_ex) * (1.0 - 2.0 * c))


@dataclasses.dataclass(frozen=True)
class EdgeProbabilities:
    """Per-edge excitation probabilities for one decoder graph.

    Attributes:
        p_plain: probability per plain edge, aligned with the graph's
            plain edge ids.
        p_aug: probability per augmented edge, aligned with the ids
            ``n_plain + j``.
    """

    p_plain: np.ndarray
    p_aug: np.ndarray

    @property
    def probs(self) -> np.ndarray:
        """All edge probabilities in global edge-id order."""
        return np.concatenate([self.p_plain, self.p_aug])

    def weights(self, log_odds: bool = False) -> np.ndarray:
        """Matching weights per edge: -ln(P_e), or -ln(P_e/(1-P_e)).

        Edges with P_e = 0 get weight infinity and are excluded from
        path graphs.  The plain -ln(P_e) form is the default; the
        log-odds variant is available for comparison only.
        """
        p = self.probs
        with np.errstate(divide="ignore"):
            if log_odds:
                return -np.log(p / (1.0 - p))
            return -np.log(p)


def compile_edge_probs(graph: DecoderGraph, noise: NoiseParams) -> EdgeProbabilities:
    """Evaluate the noise model on every edge of a compiled graph.

    Plain edges combine the Z channel of their accumulated gate count
    with one measurement channel; augmented edges carry only the X
    channel of their pair multiplicity.
    """
    one_minus_2pz = 1.0 - 2.0 * noise.p_z
    p_ez = 0.5 * (1.0 - one_minus_2pz ** graph.ez.astype(np.float64))
    p_plain = 0.5 * (1.0 - (1.0 - 2.0 * p_ez) * (1.0 - 2.0 * noise.p_m))
    one_minus_2px = 1.0 - 2.0 * noise.p_x
    p_aug = 0.5 * (1.0 - one_minus_2px ** graph.ax.astype(np.float64))
    return EdgeProbabilities(p_plain=p_plain, p_aug=p_aug)


# --------------------------------------------------------------------------
# Reference decoding pipeline
# --------------------------------------------------------------------------

def sample_errors(
    graph: DecoderGraph, probs: EdgeProbabilities, rng: np.random.Generator
) -> np.ndarray:
    """Draw one error set: each edge independently with probability P_e.

    Returns the sorted global edge ids of the excited edges (plain ids
    first, augmented ids offset by ``n_plain``).
    """
    p = probs.probs
    return np.flatnonzero(rng.random(p.shape[0]) < p)


def syndrome(edge_ids, graph: DecoderGraph) -> np.ndarray:
    """Defect vertices of an error set: odd incident edge count.

    Augmented edges contribute at their two stored endpoints.  The
    result is sorted and always has even size.
    """
    parity = np.zeros(graph.n_vertices, dtype=np.uint8)
    for edge_id in edge_ids:
        u, v = graph.endpoints(int(edge_id))
        parity[u] ^= 1
        parity[v] ^= 1
    return np.flatnonzero(parity)


def _adjacency(
    graph: DecoderGraph, probs: EdgeProbabilities
) -> list[list[tuple[int, float, int]]]:
    """Adjacency lists (neighbor, weight, edge id) of positive-probability edges."""
    adj: list[list[tuple[int, float, int]]] = [[] for _ in range(graph.n_vertices)]
    weights = probs.weights()
    for edge_id in range(graph.n_plain + graph.n_augmented):
        w = weights[edge_id]
        if not math.isfinite(w):
            continue
        u, v = graph.endpoints(edge_id)
        adj[u].append((v, w, edge_id))
        adj[v].append((u, w, edge_id))
    return adj


def _dijkstra(
    adj: list[list[tuple[int, float, int]]], n: int, src: int
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Shortest paths from ``src``: distances, predecessor vertex, and edge."""
    dist = np.full(n, np.inf)
    pred_vtx = np.full(n, -1, dtype=np.int64)
    pred_edge = np.full(n, -1, dtype=np.int64)
    dist[src] = 0.0
    heap = [(0.0, src)]
    while heap:
        d, v = heapq.heappop(heap)
        if d > dist[v]:
            continue
        for w, weight, edge_id in adj[v]:
            nd = d + weight
            if nd < dist[w]:
                dist[w] = nd
                pred_vtx[w] = v
                pred_edge[w] = edge_id
                heapq.heappush(heap, (nd, w))
    return dist, pred_vtx, pred_edge


def defect_distances(
    defects, graph: DecoderGraph, probs: EdgeProbabilities
) -> tuple[np.ndarray, dict[tuple[int, int], list[int]]]:
    """Pairwise matching weights and realizing paths between defects.

    Runs Dijkstra from every defect over all positive-probability edges
    (plain and augmented).  Returns the symmetric (d, d) weight matrix
    and, for each local index pair i < j, the edge-id list of one
    shortest path.

    Raises:
        RuntimeError: a defect pair is unreachable; this cannot happen
            on a compiled torus and indicates a broken probability set.
    """
    adj = _adjacency(graph, probs)
    return _distances_on_adjacency(adj, graph.n_vertices, list(map(int, defects)))


def _distances_on_adjacency(
    adj: list[list[tuple[int, float, int]]], n: int, defects: list[int]
) -> tuple[np.ndarray, dict[tuple[int, int], list[int]]]:
    d = len(defects)
    dist_matrix = np.zeros((d, d))
    paths: dict[tuple[int, int], list[int]] = {}
    for i, src in enumerate(defects):
        dist, pred_vtx, pred_edge = _dijkstra(adj, n, src)
        for j in range(i + 1, d):
            target = defects[j]
            if not math.isfinite(dist[target]):
                raise RuntimeError(
                    f"defect pair ({src}, {target}) is unreachable on the decoder graph"
                )
            dist_matrix[i, j] = dist_matrix[j, i] = dist[target]
            path = []
            v = target
            while v != src:
                path.append(int(pred_edge[v]))
                v = int(pred_vtx[v])
            paths[(i, j)] = path
    return dist_matrix, paths


def _tie_broken(distances: np.ndarray) -> np.ndarray:
    """Apply the deterministic lexicographic tie-breaking perturbation.

    Pair (i, j) with i < j receives a bonus tau * 2^-rank by its
    lexicographic rank, scaled far below the weight resolution.  The
    dyadic decay makes low-rank pairs dominate all later ones combined,
    so among equal-weight matchings the lexicographically smallest pair
    set wins (up to float resolution of the decay) and repeated runs
    return identical pairings.
    """
    d = distances.shape[0]
    if d == 0:
        return distances.astype(np.float64, copy=True)
    tau = _TIE_SCALE * float(np.max(distances))
    out = distances.astype(np.float64, copy=True)
    bonus = tau
    for i in range(d):
        for j in range(i + 1, d):
            out[i, j] -= bonus
            out[j, i] = out[i, j]
            bonus *= 0.5
    return out


def mwpm(defects, distances: np.ndarray) -> list[tuple[int, int]]:
    """Exact minimum-weight perfect pairing of the defects.

    Args:
        defects: the defect vertices; only their count is used here.
        distances: symmetric (d, d) matrix of pairwise matching weights.

    Returns:
        Local index pairs (i, j), i < j, sorted; ties between optimal
        matchings are broken deterministically by lexicographic pair
        order.

    Raises:
        ValueError: odd defect count (indicates an upstream bug).
    """
    d = len(defects)
    if d % 2:
        raise ValueError(f"odd defect count {d} cannot be paired")
    if d == 0:
        return []
    w = np.asarray(distances, dtype=np.float64)
    if w.shape != (d, d):
        raise ValueError("distance matrix shape does not match the defect count")
    if not np.all(np.isfinite(w)):
        raise ValueError("distances must be finite")
    return min_weight_perfect_matching(_tie_broken(w))


def recovery(
    pairing: list[tuple[int, int]], paths: dict[tuple[int, int], list[int]]
) -> np.ndarray:
    """Recovery chain: XOR of the realized paths of all matched pairs."""
    chain: set[int] = set()
    for i, j in pairing:
        chain.symmetric_difference_update(paths[(min(i, j), max(i, j))])
    return np.array(sorted(chain), dtype=np.int64)


def run_trial(
    graph: DecoderGraph, probs: EdgeProbabilities, rng: np.random.Generator
) -> Vec3:
    """One sample-decode-classify round; returns the failure class.

    The trial succeeds exactly when the class is (0, 0, 0): the error
    plus the recovery is then a homologically trivial cycle.
    """
    error = sample_errors(graph, probs, rng)
    return _decode_error(graph, probs, _adjacency(graph, probs), error)


def _decode_error(
    graph: DecoderGraph,
    probs: EdgeProbabilities,
    adj: list[list[tuple[int, float, int]]],
    error: np.ndarray,
) -> Vec3:
    """Decode one explicit error set using the reference pipeline."""
    defects = syndrome(error, graph)
    if defects.shape[0] == 0:
        return cycle_class(error, graph)
    dist_matrix, paths = _distances_on_adjacency(
        adj, graph.n_vertices, [int(v) for v in defects]
    )
    pairing = mwpm(defects, dist_matrix)
    rec = recovery(pairing, paths)
    chain = np.setxor1d(np.asarray(error, dtype=np.int64), rec)
    return cycle_class(chain, graph)


# --------------------------------------------------------------------------
# Fast engine: all-pairs shortest paths + compiled chunk kernel
# --------------------------------------------------------------------------

@njit(cache=True, nogil=True)
def _floyd_warshall(dist: np.ndarray, pclass: np.ndarray) -> None:
    """In-place APSP with winding-class propagation, strict-less updates."""
    n = dist.shape[0]
    for k in range(n):
        dk = dist[k]
        ck = pclass[k]
        for i in range(n):
            dik = dist[i, k]
            if dik == np.inf:
                continue
            cik = pclass[i, k]
            di = dist[i]
            ci = pclass[i]
            for j in range(n):
                nd = dik + dk[j]
                if nd < di[j]:
                    di[j] = nd
                    ci[j] = cik ^ ck[j]


def _all_pairs_paths(
    graph: DecoderGraph, probs: EdgeProbabilities
) -> tuple[np.ndarray, np.ndarray]:
    """Distance and winding-class matrices over all vertex pairs.

    Parallel edges collapse to their minimum weight (first edge wins a
    tie, matching the deterministic edge-id order of the reference
    engine's Dijkstra relaxation).
    """
    n = graph.n_vertices
    dist = np.full((n, n), np.inf)
    np.fill_diagonal(dist, 0.0)
    pclass = np.zeros((n, n), dtype=np.uint8)
    weights = probs.weights()
    for edge_id in range(graph.n_plain + graph.n_augmented):
        w = weights[edge_id]
        if not math.isfinite(w):
            continue
        u, v = graph.endpoints(edge_id)
        if w < dist[u, v]:
            dist[u, v] = dist[v, u] = w
            s = graph.seam_bits(edge_id)
            pclass[u, v] = pclass[v, u] = s
    _floyd_warshall(dist, pclass)
    return dist, pclass


@njit(cache=True, nogil=True)
def _decode_chunk(
    pmask: np.ndarray,
    amask: np.ndarray,
    eu: np.ndarray,
    ev: np.ndarray,
    ecls: np.ndarray,
    au: np.ndarray,
    av: np.ndarray,
    acls: np.ndarray,
    dist: np.ndarray,
    pclass: np.ndarray,
) -> tuple[np.ndarray, int]:
    """Decode one chunk of sampled trials; returns (class histogram, flag).

    Flag 1 marks an odd defect count, flag 2 an unreachable defect
    pair; both indicate broken inputs and abort the chunk.
    """
    trials = pmask.shape[0]
    n = dist.shape[0]
    hist = np.zeros(8, dtype=np.int64)
    parity = np.zeros(n, dtype=np.uint8)
    defects = np.empty(n, dtype=np.int64)
    for t in range(trials):
        err_cls = 0
        for e in range(eu.shape[0]):
            if pmask[t, e]:
                parity[eu[e]] ^= 1
                parity[ev[e]] ^= 1
                err_cls ^= ecls[e]
        for e in range(au.shape[0]):
            if amask[t, e]:
                parity[au[e]] ^= 1
                parity[av[e]] ^= 1
                err_cls ^= acls[e]
        d = 0
        for v in range(n):
            if parity[v]:
                defects[d] = v
                d += 1
                parity[v] = 0
        if d == 0:
            hist[err_cls] += 1
            continue
        if d & 1:
            return hist, 1
        w = np.empty((d, d))
        wmax = 0.0
        reachable = True
        for a in range(d):
            w[a, a] = 0.0
            for b in range(a + 1, d):
                dab = dist[defects[a], defects[b]]
                if dab == np.inf:
                    reachable = False
                elif dab > wmax:
                    wmax = dab
                w[a, b] = dab
                w[b, a] = dab
        if not reachable:
            return hist, 2
        bonus = _TIE_SCALE * wmax
        gmax = 0.0
        for a in range(d):
            for b in range(a + 1, d):
                w[a, b] -= bonus
                w[b, a] = w[a, b]
                if w[a, b] > gmax:
                    gmax = w[a, b]
                bonus *= 0.5
        gain = np.empty((d, d))
        for a in range(d):
            for b in range(d):
                gain[a, b] = (gmax - w[a, b]) + 1.0
            gain[a, a] = 0.0
        mate = _mwm_jit(gain, True)
        cls = err_cls
        for a in range(d):
            if mate[a] > a:
                cls ^= pclass[defects[a], defects[mate[a]]]
        hist[cls] += 1
    return hist, 0


# --------------------------------------------------------------------------
# Monte Carlo orchestration
# --------------------------------------------------------------------------

def wilson_interval(failures: int, trials: int, z: float = _Z95) -> tuple[float, float]:
    """Wilson score confidence interval for a binomial proportion."""
    if trials == 0:
        return (0.0, 1.0)
    phat = failures / trials
    denom = 1.0 + z * z / trials
    centre = (phat + z * z / (2.0 * trials)) / denom
    half = (
        z
        * math.sqrt(phat * (1.0 - phat) / trials + z * z / (4.0 * trials * trials))
        / denom
    )
    return (max(0.0, centre - half), min(1.0, centre + half))


@dataclasses.dataclass(frozen=True)
class TrialStats:
    """Aggregated Monte Carlo outcome of one noise point.

    Attributes:
        trials: number of decoded trials.
        failures: trials whose surviving cycle was nontrivial.
        rate: failures / trials.
        ci_lo: lower 95% Wilson bound on the failure rate.
        ci_hi: upper 95% Wilson bound on the failure rate.
        class_counts: failure count per nontrivial winding class.
    """

    trials: int
    failures: int
    rate: float
    ci_lo: float
    ci_hi: float
    class_counts: dict[Vec3, int]

    @classmethod
    def from_histogram(cls, hist: np.ndarray) -> "TrialStats":
        """Build stats from an 8-bin winding-class histogram."""
        trials = int(hist.sum())
        failures = trials - int(hist[0])
        rate = failures / trials if trials else 0.0
        lo, hi = wilson_interval(failures, trials)
        counts = {
            (bits & 1, (bits >> 1) & 1, (bits >> 2) & 1): int(hist[bits])
            for bits in range(1, 8)
        }
        return cls(
            trials=trials,
            failures=failures,
            rate=rate,
            ci_lo=lo,
            ci_hi=hi,
            class_counts=counts,
        )


def _resolve_threads(threads: int | None) -> int:
    if threads is None:
        threads = int(os.environ.get("CRYSTALFT_THREADS", "1"))
    if threads < 1:
        raise ValueError("thread count must be positive")
    return threads


def _chunk_masks(
    seed: int, chunk_idx: int, size: int, probs: EdgeProbabilities
) -> tuple[np.ndarray, np.ndarray]:
    """Sample one chunk of error masks from its own counter slice."""
    bitgen = np.random.Philox(key=seed)
    bitgen.advance(chunk_idx * _CHUNK_STRIDE)
    rng = np.random.Generator(bitgen)
    pmask = rng.random((size, probs.p_plain.shape[0])) < probs.p_plain
    amask = rng.random((size, probs.p_aug.shape[0])) < probs.p_aug
    return pmask, amask


def _chunk_sizes(trials: int) -> list[int]:
    sizes = [CHUNK] * (trials // CHUNK)
    if trials % CHUNK:
        sizes.append(trials % CHUNK)
    return sizes


def run_trials(
    lattice: str | DecoderGraph,
    L: int,
    noise: NoiseParams,
    trials: int,
    seed: int = 0,
    threads: int | None = None,
    engine: str = "auto",
) -> TrialStats:
    """Monte Carlo failure statistics for one lattice and noise point.

    Args:
        lattice: bundled lattice name, or an already compiled graph.
        L: linear torus size (used when ``lattice`` is a name).
        noise: channel probabilities.
        trials: number of trials, at least 1.
        seed: master seed of the counter-based stream; results are
            identical for any worker count.
        threads: worker threads; defaults to the CRYSTALFT_THREADS
            environment variable, then 1.
        engine: "fast", "reference", or "auto" (fast when available).

    Returns:
        Aggregated ``TrialStats`` over all trials.
    """
    if trials < 1:
        raise ValueError("trials must be at least 1")
    if engine not in ("auto", "fast", "reference"):
        raise ValueError(f"unknown engine {engine!r}")
    graph = build_lattice(lattice, L) if isinstance(lattice, str) else lattice
    probs = compile_edge_probs(graph, noise)
    threads = _resolve_threads(threads)
    if engine == "auto":
        engine = "fast"

    if engine == "fast":
        dist, pclass = _all_pairs_paths(graph, probs)
        ecls = graph.eseam.astype(np.uint8)
        acls = graph.aseam.astype(np.uint8)

        def decode_chunk(args: tuple[int, int]) -> np.ndarray:
            chunk_idx, size = args
            pmask, amask = _chunk_masks(seed, chunk_idx, size, probs)
            hist, flag = _decode_chunk(
                pmask, amask,
                graph.eu, graph.ev, ecls,
                graph.au, graph.av, acls,
                dist, pclass,
            )
            if flag == 1:
                raise RuntimeError("odd defect count in a sampled trial")
            if flag == 2:
                raise RuntimeError("defect pair unreachable on the decoder graph")
            return hist

    else:
        adj = _adjacency(graph, probs)

        def decode_chunk(args: tuple[int, int]) -> np.ndarray:
            chunk_idx, size = args
            pmask, amask = _chunk_masks(seed, chunk_idx, size, probs)
            hist = np.zeros(8, dtype=np.int64)
            for t in range(size):
                error = np.concatenate(
                    [
                        np.flatnonzero(pmask[t]),
                        np.flatnonzero(amask[t]) + graph.n_plain,
                    ]
                )
                cx, cy, cz = _decode_error(graph, probs, adj, error)
                hist[cx | (cy << 1) | (cz << 2)] += 1
            return hist

    work = list(enumerate(_chunk_sizes(trials)))
    if threads == 1:
        histograms = [decode_chunk(item) for item in work]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            histograms = list(pool.map(decode_chunk, work))
    total = np.sum(histograms, axis=0)
    return TrialStats.from_histogram(total)
