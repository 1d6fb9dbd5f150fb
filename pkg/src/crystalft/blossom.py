"""Exact maximum/minimum weight matching on dense complete graphs.

An array-based formulation of Edmonds' blossom algorithm with the
primal-dual weight handling described by Galil (ACM Computing Surveys,
1986).  The control flow follows the widely used O(V^3) reference
implementation of that survey closely; all state lives in flat numpy
arrays so the routine compiles under numba when it is installed and runs
as plain Python otherwise.

Only dense inputs are supported: the graph is the complete graph on
``n`` vertices with a symmetric float weight matrix.  That is the shape
of matching problems produced by syndrome decoding, where every defect
pair has a finite path weight.
"""

from __future__ import annotations

import numpy as np

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


def _mwm_core(weight: np.ndarray, maxcardinality: bool) -> np.ndarray:
    """Maximum-weight matching on the complete graph with matrix ``weight``.

    Returns ``mate`` where ``mate[v]`` is v's partner or -1.  Diagonal
    entries are ignored.  Vertex duals start at max(weight)/2 (stored
    doubled, so slacks stay integral for integral weights); node ids
    ``0..n-1`` are vertices and ``n..2n-1`` are blossom slots.
    """
    n = weight.shape[0]
    mate = np.full(n, -1, dtype=np.int32)
    if n == 0:
        return mate
    nb = 2 * n

    maxweight = 0.0
    for i in range(n):
        for j in range(n):
            if i != j and weight[i, j] > maxweight:
                maxweight = weight[i, j]

    # Labels: 0 free, 1 S, 2 T, 5 breadcrumb while scanning.
    label = np.zeros(nb, dtype=np.int8)
    # labeledge[b] = (ledge_v[b], ledge_w[b]), -1 for none.
    ledge_v = np.full(nb, -1, dtype=np.int32)
    ledge_w = np.full(nb, -1, dtype=np.int32)
    inblossom = np.arange(n, dtype=np.int32)
    blossomparent = np.full(nb, -1, dtype=np.int32)
    blossombase = np.concatenate(
        (np.arange(n, dtype=np.int32), np.full(n, -1, dtype=np.int32))
    )
    # bestedge[b]: least-slack edge code v * n + w, -1 for none.
    bestedge = np.full(nb, -1, dtype=np.int64)
    # Vertex duals (doubled) followed by blossom duals.
    dualvar = np.concatenate(
        (np.full(n, maxweight, dtype=np.float64), np.zeros(n, dtype=np.float64))
    )
    allowedge = np.zeros((n, n), dtype=np.bool_)
    queue = np.zeros(2 * n * n + 4 * n + 16, dtype=np.int32)
    qbox = np.zeros(1, dtype=np.int64)  # queue length

    # Ring structure of allocated blossoms (row b - n): children (node
    # ids), connecting edge endpoints, and the cached least-slack edge
    # list to neighbouring S-blossoms (edge codes; length -1 = unknown).
    childs = np.full((n, n + 1), -1, dtype=np.int32)
    childslen = np.zeros(n, dtype=np.int32)
    cedge_v = np.full((n, n + 1), -1, dtype=np.int32)
    cedge_w = np.full((n, n + 1), -1, dtype=np.int32)
    mbe = np.full((n, nb), -1, dtype=np.int64)
    mbe_len = np.full(n, -1, dtype=np.int32)

    unused = np.arange(n, nb, dtype=np.int32)
    ubox = np.zeros(1, dtype=np.int64)  # free-blossom stack size
    ubox[0] = n

    leafbuf = np.zeros(n, dtype=np.int32)
    leafstack = np.zeros(nb, dtype=np.int32)
    stackbuf = np.zeros(nb, dtype=np.int32)
    pathbuf = np.zeros(nb, dtype=np.int32)
    edgebuf_v = np.zeros(nb, dtype=np.int32)
    edgebuf_w = np.zeros(nb, dtype=np.int32)
    bestedgeto = np.full(nb, -1, dtype=np.int64)
    taskbuf_b = np.zeros(nb, dtype=np.int32)
    taskbuf_v = np.zeros(nb, dtype=np.int32)

    def collect_leaves(b):
        # Fill leafbuf with the leaf vertices of b; return the count.
        if b < n:
            leafbuf[0] = b
            return 1
        cnt = 0
        top = 0
        leafstack[top] = b
        top += 1
        while top > 0:
            top -= 1
            t = leafstack[top]
            if t < n:
                leafbuf[cnt] = t
                cnt += 1
            else:
                row = t - n
                for k in range(childslen[row]):
                    leafstack[top] = childs[row, k]
                    top += 1
        return cnt

    def slack_code(code):
        v = np.int32(code // n)
        w = np.int32(code % n)
        return dualvar[v] + dualvar[w] - 2.0 * weight[v, w]

    def assign_label(w0, t0, v0):
        # Label w0's blossom t0 through vertex v0 (-1: base is single);
        # a T label immediately relabels the base's mate with S.
        w, t, v = w0, t0, v0
        while True:
            b = inblossom[w]
            label[w] = t
            label[b] = t
            ledge_v[w] = v
            ledge_w[w] = -1 if v < 0 else w
            ledge_v[b] = v
            ledge_w[b] = -1 if v < 0 else w
            bestedge[w] = -1
            bestedge[b] = -1
            if t == 1:
                cnt = collect_leaves(b)
                for k in range(cnt):
                    queue[qbox[0]] = leafbuf[k]
                    qbox[0] += 1
                return
            base = blossombase[b]
            w, t, v = mate[base], 1, base

    def scan_blossom(v0, w0):
        # Trace back from both endpoints; return a common base vertex or
        # -1 when the paths end in two distinct single vertices.
        v, w = v0, w0
        npath = 0
        base = -1
        while v >= 0:
            b = inblossom[v]
            if label[b] & 4:
                base = blossombase[b]
                break
            pathbuf[npath] = b
            npath += 1
            label[b] = 5
            if ledge_v[b] < 0:
                v = -1
            else:
                v = ledge_v[b]
                b = inblossom[v]
                v = ledge_v[b]
            if w >= 0:
                v, w = w, v
        for k in range(npath):
            label[pathbuf[k]] = 1
        return base

    def add_blossom(base, v0, w0):
        # Wrap the cycle through v0-w0 and their back-paths to the base
        # into a fresh S-blossom.
        v, w = v0, w0
        bb = inblossom[base]
        bv = inblossom[v]
        bw = inblossom[w]
        ubox[0] -= 1
        b = unused[ubox[0]]
        row = b - n
        blossombase[b] = base
        blossomparent[b] = -1
        blossomparent[bb] = b
        npath = 0
        nedge = 0
        edgebuf_v[nedge] = v
        edgebuf_w[nedge] = w
        nedge += 1
        while bv != bb:
            blossomparent[bv] = b
            pathbuf[npath] = bv
            npath += 1
            edgebuf_v[nedge] = ledge_v[bv]
            edgebuf_w[nedge] = ledge_w[bv]
            nedge += 1
            v = ledge_v[bv]
            bv = inblossom[v]
        pathbuf[npath] = bb
        npath += 1
        # Reverse path and edges so they run base -> v side.
        for k in range(npath // 2):
            tmp = pathbuf[k]
            pathbuf[k] = pathbuf[npath - 1 - k]
            pathbuf[npath - 1 - k] = tmp
        for k in range(nedge // 2):
            tv = edgebuf_v[k]
            tw = edgebuf_w[k]
            edgebuf_v[k] = edgebuf_v[nedge - 1 - k]
            edgebuf_w[k] = edgebuf_w[nedge - 1 - k]
            edgebuf_v[nedge - 1 - k] = tv
            edgebuf_w[nedge - 1 - k] = tw
        while bw != bb:
            blossomparent[bw] = b
            pathbuf[npath] = bw
            npath += 1
            edgebuf_v[nedge] = ledge_w[bw]  # reversed orientation
            edgebuf_w[nedge] = ledge_v[bw]
            nedge += 1
            w = ledge_v[bw]
            bw = inblossom[w]
        label[b] = 1
        ledge_v[b] = ledge_v[bb]
        ledge_w[b] = ledge_w[bb]
        dualvar[b] = 0.0
        childslen[row] = npath
        for k in range(npath):
            childs[row, k] = pathbuf[k]
            cedge_v[row, k] = edgebuf_v[k]
            cedge_w[row, k] = edgebuf_w[k]
        cnt = collect_leaves(b)
        for k in range(cnt):
            lv = leafbuf[k]
            if label[inblossom[lv]] == 2:
                queue[qbox[0]] = lv
                qbox[0] += 1
            inblossom[lv] = b
        # Merge least-slack edge lists of the children.
        for k in range(nb):
            bestedgeto[k] = -1
        for pk in range(npath):
            bv2 = pathbuf[pk]
            if bv2 >= n and mbe_len[bv2 - n] >= 0:
                r2 = bv2 - n
                for q in range(mbe_len[r2]):
                    code = mbe[r2, q]
                    i = np.int32(code // n)
                    j = np.int32(code % n)
                    if inblossom[j] == b:
                        i, j = j, i
                    bj = inblossom[j]
                    if bj != b and label[bj] == 1:
                        c2 = np.int64(i) * n + j
                        if (
                            bestedgeto[bj] < 0
                            or slack_code(c2) < slack_code(bestedgeto[bj])
                        ):
                            bestedgeto[bj] = c2
                mbe_len[r2] = -1
            else:
                lcnt = collect_leaves(bv2)
                for lk in range(lcnt):
                    i = leafbuf[lk]
                    for j in range(n):
                        if j == i:
                            continue
                        bj = inblossom[j]
                        if bj != b and label[bj] == 1:
                            c2 = np.int64(i) * n + j
                            if (
                                bestedgeto[bj] < 0
                                or slack_code(c2) < slack_code(bestedgeto[bj])
                            ):
                                bestedgeto[bj] = c2
            bestedge[bv2] = -1
        cnt2 = 0
        for k in range(nb):
            if bestedgeto[k] >= 0:
                mbe[row, cnt2] = bestedgeto[k]
                cnt2 += 1
        mbe_len[row] = cnt2
        best = np.int64(-1)
        bestsl = 0.0
        for k in range(cnt2):
            sl = slack_code(mbe[row, k])
            if best < 0 or sl < bestsl:
                best = mbe[row, k]
                bestsl = sl
        bestedge[b] = best

    def free_blossom(b):
        label[b] = 0
        ledge_v[b] = -1
        ledge_w[b] = -1
        bestedge[b] = -1
        blossomparent[b] = -1
        blossombase[b] = -1
        dualvar[b] = 0.0
        mbe_len[b - n] = -1
        unused[ubox[0]] = b
        ubox[0] += 1

    def expand_blossom(b0, endstage):
        # Dissolve b0 into its children; outside the final sweep a
        # T-blossom's children inherit alternating labels along the ring.
        top = 0
        stackbuf[top] = b0
        top += 1
        while top > 0:
            top -= 1
            b = stackbuf[top]
            row = b - n
            m = childslen[row]
            for k in range(m):
                s = childs[row, k]
                blossomparent[s] = -1
                if s < n:
                    inblossom[s] = s
                elif endstage and dualvar[s] == 0.0:
                    stackbuf[top] = s
                    top += 1
                else:
                    cnt = collect_leaves(s)
                    for lk in range(cnt):
                        inblossom[leafbuf[lk]] = s
            if (not endstage) and label[b] == 2:
                entrychild = inblossom[ledge_w[b]]
                j = 0
                for k in range(m):
                    if childs[row, k] == entrychild:
                        j = k
                        break
                if j & 1:
                    j -= m
                    jstep = 1
                else:
                    jstep = -1
                v = ledge_v[b]
                w = ledge_w[b]
                while j != 0:
                    if jstep == 1:
                        p = cedge_v[row, j % m]
                        q = cedge_w[row, j % m]
                    else:
                        q = cedge_v[row, (j - 1) % m]
                        p = cedge_w[row, (j - 1) % m]
                    label[w] = 0
                    label[q] = 0
                    assign_label(w, 2, v)
                    allowedge[p, q] = True
                    allowedge[q, p] = True
                    j += jstep
                    if jstep == 1:
                        v = cedge_v[row, j % m]
                        w = cedge_w[row, j % m]
                    else:
                        w = cedge_v[row, (j - 1) % m]
                        v = cedge_w[row, (j - 1) % m]
                    allowedge[v, w] = True
                    allowedge[w, v] = True
                    j += jstep
                bw = childs[row, 0]
                label[w] = 2
                label[bw] = 2
                ledge_v[w] = v
                ledge_w[w] = w
                ledge_v[bw] = v
                ledge_w[bw] = w
                bestedge[bw] = -1
                j += jstep
                while childs[row, j % m] != entrychild:
                    bv = childs[row, j % m]
                    if label[bv] == 1:
                        j += jstep
                        continue
                    lv = -1
                    if bv >= n:
                        cnt = collect_leaves(bv)
                        for lk in range(cnt):
                            if label[leafbuf[lk]] != 0:
                                lv = leafbuf[lk]
                                break
                    else:
                        lv = bv
                    if lv >= 0 and label[lv] != 0:
                        label[lv] = 0
                        label[mate[blossombase[bv]]] = 0
                        assign_label(lv, 2, ledge_v[lv])
                    j += jstep
            free_blossom(b)

    def augment_blossom(b0, v0):
        # Re-thread the matching inside b0 so v0 becomes its base.  Tasks
        # are order-independent; see the final base assignment.
        ntask = 0
        taskbuf_b[ntask] = b0
        taskbuf_v[ntask] = v0
        ntask += 1
        while ntask > 0:
            ntask -= 1
            b = taskbuf_b[ntask]
            v = taskbuf_v[ntask]
            row = b - n
            m = childslen[row]
            t = v
            while blossomparent[t] != b:
                t = blossomparent[t]
            if t >= n:
                taskbuf_b[ntask] = t
                taskbuf_v[ntask] = v
                ntask += 1
            i = 0
            for k in range(m):
                if childs[row, k] == t:
                    i = k
                    break
            j = i
            if i & 1:
                j -= m
                jstep = 1
            else:
                jstep = -1
            while j != 0:
                j += jstep
                t2 = childs[row, j % m]
                if jstep == 1:
                    w = cedge_v[row, j % m]
                    x = cedge_w[row, j % m]
                else:
                    x = cedge_v[row, (j - 1) % m]
                    w = cedge_w[row, (j - 1) % m]
                if t2 >= n:
                    taskbuf_b[ntask] = t2
                    taskbuf_v[ntask] = w
                    ntask += 1
                j += jstep
                t2 = childs[row, j % m]
                if t2 >= n:
                    taskbuf_b[ntask] = t2
                    taskbuf_v[ntask] = x
                    ntask += 1
                mate[w] = x
                mate[x] = w
            # Rotate children so the child containing v leads.
            if i > 0:
                for k in range(m):
                    pathbuf[k] = childs[row, (i + k) % m]
                    edgebuf_v[k] = cedge_v[row, (i + k) % m]
                    edgebuf_w[k] = cedge_w[row, (i + k) % m]
                for k in range(m):
                    childs[row, k] = pathbuf[k]
                    cedge_v[row, k] = edgebuf_v[k]
                    cedge_w[row, k] = edgebuf_w[k]
            blossombase[b] = v

    def augment_matching(v0, w0):
        for side in range(2):
            if side == 0:
                s, j = v0, w0
            else:
                s, j = w0, v0
            while True:
                bs = inblossom[s]
                if bs >= n:
                    augment_blossom(bs, s)
                mate[s] = j
                if ledge_v[bs] < 0:
                    break
                t = ledge_v[bs]
                bt = inblossom[t]
                s = ledge_v[bt]
                j = ledge_w[bt]
                if bt >= n:
                    augment_blossom(bt, j)
                mate[j] = s

    # ---------------- main loop: one stage per augmentation ----------------
    while True:
        for k in range(nb):
            label[k] = 0
            ledge_v[k] = -1
            ledge_w[k] = -1
            bestedge[k] = -1
        for k in range(n):
            mbe_len[k] = -1
        for i in range(n):
            for j in range(n):
                allowedge[i, j] = False
        qbox[0] = 0
        for v in range(n):
            if mate[v] < 0 and label[inblossom[v]] == 0:
                assign_label(v, 1, -1)

        augmented = False
        while True:
            while qbox[0] > 0 and not augmented:
                qbox[0] -= 1
                v = queue[qbox[0]]
                for w in range(n):
                    if w == v:
                        continue
                    bv = inblossom[v]
                    bw = inblossom[w]
                    if bv == bw:
                        continue
                    kslack = 0.0
                    if not allowedge[v, w]:
                        kslack = dualvar[v] + dualvar[w] - 2.0 * weight[v, w]
                        if kslack <= 0.0:
                            allowedge[v, w] = True
                            allowedge[w, v] = True
                    if allowedge[v, w]:
                        if label[bw] == 0:
                            assign_label(w, 2, v)
                        elif label[bw] == 1:
                            base = scan_blossom(v, w)
                            if base >= 0:
                                add_blossom(base, v, w)
                            else:
                                augment_matching(v, w)
                                augmented = True
                                break
                        elif label[w] == 0:
                            label[w] = 2
                            ledge_v[w] = v
                            ledge_w[w] = w
                    elif label[bw] == 1:
                        if bestedge[bv] < 0 or kslack < slack_code(bestedge[bv]):
                            bestedge[bv] = np.int64(v) * n + w
                    elif label[w] == 0:
                        if bestedge[w] < 0 or kslack < slack_code(bestedge[w]):
                            bestedge[w] = np.int64(v) * n + w

            if augmented:
                break

            # Dual update: smallest of the four delta types.
            deltatype = -1
            delta = 0.0
            deltaedge = np.int64(-1)
            deltablossom = -1
            if not maxcardinality:
                deltatype = 1
                delta = dualvar[0]
                for v in range(n):
                    if dualvar[v] < delta:
                        delta = dualvar[v]
            for v in range(n):
                if label[inblossom[v]] == 0 and bestedge[v] >= 0:
                    d = slack_code(bestedge[v])
                    if deltatype == -1 or d < delta:
                        delta = d
                        deltatype = 2
                        deltaedge = bestedge[v]
            for b in range(nb):
                if (
                    blossomparent[b] == -1
                    and blossombase[b] >= 0
                    and label[b] == 1
                    and bestedge[b] >= 0
                ):
                    d = slack_code(bestedge[b]) / 2.0
                    if deltatype == -1 or d < delta:
                        delta = d
                        deltatype = 3
                        deltaedge = bestedge[b]
            for b in range(n, nb):
                if (
                    blossombase[b] >= 0
                    and blossomparent[b] == -1
                    and label[b] == 2
                    and (deltatype == -1 or dualvar[b] < delta)
                ):
                    delta = dualvar[b]
                    deltatype = 4
                    deltablossom = b
            if deltatype == -1:
                # Max-cardinality optimum: one final (possibly zero) update.
                deltatype = 1
                delta = dualvar[0]
                for v in range(n):
                    if dualvar[v] < delta:
                        delta = dualvar[v]
                if delta < 0.0:
                    delta = 0.0

            for v in range(n):
                lab = label[inblossom[v]]
                if lab == 1:
                    dualvar[v] -= delta
                elif lab == 2:
                    dualvar[v] += delta
            for b in range(n, nb):
                if blossombase[b] >= 0 and blossomparent[b] == -1:
                    if label[b] == 1:
                        dualvar[b] += delta
                    elif label[b] == 2:
                        dualvar[b] -= delta

            if deltatype == 1:
                break
            elif deltatype == 2:
                v = np.int32(deltaedge // n)
                w = np.int32(deltaedge % n)
                allowedge[v, w] = True
                allowedge[w, v] = True
                queue[qbox[0]] = v
                qbox[0] += 1
            elif deltatype == 3:
                v = np.int32(deltaedge // n)
                w = np.int32(deltaedge % n)
                allowedge[v, w] = True
                allowedge[w, v] = True
                queue[qbox[0]] = v
                qbox[0] += 1
            else:
                expand_blossom(deltablossom, False)

        if not augmented:
            break

        for b in range(n, nb):
            if (
                blossombase[b] >= 0
                and blossomparent[b] == -1
                and label[b] == 1
                and dualvar[b] == 0.0
            ):
                expand_blossom(b, True)

    return mate


if HAVE_NUMBA:  # pragma: no cover - plain path tested when numba is absent
    _mwm_jit = njit(cache=True)(_mwm_core)
else:
    _mwm_jit = _mwm_core


def max_weight_matching_dense(
    weight: np.ndarray, maxcardinality: bool = False, compiled: bool = True
) -> np.ndarray:
    """Maximum-weight matching of the complete graph on ``weight``.

    Args:
        weight: symmetric (n, n) float64 matrix; the diagonal is ignored.
        maxcardinality: maximize the matching size first, weight second.
        compiled: use the jit-compiled core when numba is available.

    Returns:
        int32 array ``mate`` with ``mate[v]`` = partner of v, or -1.
    """
    w = np.ascontiguousarray(weight, dtype=np.float64)
    if w.ndim != 2 or w.shape[0] != w.shape[1]:
        raise ValueError("weight must be a square matrix")
    if w.shape[0] and not np.allclose(w, w.T, atol=1e-12, rtol=0.0):
        raise ValueError("weight matrix must be symmetric")
    core = _mwm_jit if compiled else _mwm_core
    return core(w, maxcardinality)


def min_weight_perfect_matching(
    weight: np.ndarray, compiled: bool = True
) -> list[tuple[int, int]]:
    """Minimum-weight perfect matching of an even complete graph.

    Args:
        weight: symmetric (n, n) float64 cost matrix, n even.
        compiled: use the jit-compiled core when numba is available.

    Returns:
        n/2 disjoint pairs (u, v) with u < v, sorted, of minimum total cost.
    """
    w = np.ascontiguousarray(weight, dtype=np.float64)
    n = w.shape[0]
    if n % 2:
        raise ValueError("perfect matching needs an even number of vertices")
    if n == 0:
        return []
    # Flip costs into positive gains: every edge then improves the
    # matching, so the maximum-weight matching is perfect and minimizes
    # the original total cost among perfect matchings.
    gain = (w.max() - w) + 1.0
    mate = max_weight_matching_dense(gain, maxcardinality=True, compiled=compiled)
    if np.any(mate < 0):
        raise RuntimeError("failed to find a perfect matching")
    return sorted((int(v), int(mate[v])) for v in range(n) if v < mate[v])
