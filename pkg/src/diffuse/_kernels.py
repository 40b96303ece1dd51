"""Inner loops: hk-relax, ppr push and the incremental sweep.

Everything here takes raw CSR arrays and returns raw arrays so the same
source compiles under numba or runs as plain Python (see ``_jit``).
Sparse vectors are hash maps keyed by int64; hk residual keys pack
``(node, step)`` as ``node * (N + 1) + step``.
"""

import numpy as np

from ._jit import float_map, int_map, njit


@njit
def _enqueue(queue, tail, key):
    if tail == queue.shape[0]:
        grown = np.empty(2 * queue.shape[0], dtype=np.int64)
        grown[:tail] = queue[:tail]
        queue = grown
    queue[tail] = key
    return queue, tail + 1


@njit
def _unpack(m):
    keys = np.empty(len(m), dtype=np.int64)
    vals = np.empty(len(m), dtype=np.float64)
    i = 0
    for k, v in m.items():
        keys[i] = k
        vals[i] = v
        i += 1
    return keys, vals


@njit
def hk_relax_kernel(row_offsets, neighbors, degrees, seeds, t, N, thresh_mult, volume_cap):
    """FIFO coordinate relaxation of the Taylor block system.

    ``thresh_mult[j] * d_i`` is the enqueue threshold for entry (i, j).
    Returns the unscaled solution y, the leftover residual, step count,
    work (sum of relaxed degrees) and an early-termination flag.
    """
    width = N + 1
    y = float_map()
    r = float_map()
    queue = np.empty(max(16, 2 * seeds.shape[0]), dtype=np.int64)
    head = 0
    tail = 0

    seed_mass = 1.0 / seeds.shape[0]
    for s in seeds:
        key = s * width
        r[key] = seed_mass
        if seed_mass >= thresh_mult[0] * degrees[s]:
            queue, tail = _enqueue(queue, tail, key)

    steps = 0
    work = 0
    early = False
    while head < tail:
        key = queue[head]
        head += 1
        v = key // width
        j = key - v * width
        rvj = r[key]
        r[key] = 0.0
        y[v] = y.get(v, 0.0) + rvj
        dv = degrees[v]
        steps += 1
        work += dv

        mass = t * rvj / (j + 1) / dv
        start = row_offsets[v]
        stop = row_offsets[v + 1]
        if j + 1 == N:
            # block N is never relaxed: its mass goes straight to y
            for idx in range(start, stop):
                u = neighbors[idx]
                y[u] = y.get(u, 0.0) + mass
        else:
            mult = thresh_mult[j + 1]
            for idx in range(start, stop):
                u = neighbors[idx]
                nkey = u * width + j + 1
                old = r.get(nkey, 0.0)
                new = old + mass
                thresh = mult * degrees[u]
                if old < thresh and new >= thresh:
                    queue, tail = _enqueue(queue, tail, nkey)
                r[nkey] = new

        if work > volume_cap:
            early = True
            break

    yk, yv = _unpack(y)
    rk, rv = _unpack(r)
    return yk, yv, rk, rv, steps, work, early


@njit
def ppr_push_kernel(row_offsets, neighbors, degrees, seeds, alpha, eps):
    """Andersen-Chung-Lang push with a FIFO of nodes holding r_u >= eps*d_u."""
    p = float_map()
    r = float_map()
    queue = np.empty(max(16, 2 * seeds.shape[0]), dtype=np.int64)
    head = 0
    tail = 0

    seed_mass = 1.0 / seeds.shape[0]
    for s in seeds:
        r[s] = seed_mass
        if seed_mass >= eps * degrees[s]:
            queue, tail = _enqueue(queue, tail, s)

    steps = 0
    work = 0
    pushed = 0.0
    while head < tail:
        u = queue[head]
        head += 1
        ru = r[u]
        r[u] = 0.0
        p[u] = p.get(u, 0.0) + (1.0 - alpha) * ru
        pushed += ru
        du = degrees[u]
        steps += 1
        work += du

        mass = alpha * ru / du
        for idx in range(row_offsets[u], row_offsets[u + 1]):
            v = neighbors[idx]
            old = r.get(v, 0.0)
            new = old + mass
            thresh = eps * degrees[v]
            if old < thresh and new >= thresh:
                queue, tail = _enqueue(queue, tail, v)
            r[v] = new

    pk, pv = _unpack(p)
    rk, rv = _unpack(r)
    return pk, pv, rk, rv, steps, work, pushed


@njit
def sweep_kernel(row_offsets, neighbors, degrees, order, total_volume):
    """Conductance of every prefix of ``order``, with vol/boundary kept incrementally.

    Returns (conductance, volume, boundary) arrays, one entry per prefix; the
    prefix equal to the whole vertex set, if reached, is dropped.
    """
    k = order.shape[0]
    rank = int_map()
    for i in range(k):
        rank[order[i]] = i

    cond = np.empty(k, dtype=np.float64)
    vols = np.empty(k, dtype=np.int64)
    bnds = np.empty(k, dtype=np.int64)
    vol = 0
    boundary = 0
    count = 0
    for i in range(k):
        v = order[i]
        dv = degrees[v]
        inside = 0
        for idx in range(row_offsets[v], row_offsets[v + 1]):
            if rank.get(neighbors[idx], k) < i:
                inside += 1
        vol += dv
        boundary += dv - 2 * inside
        denom = min(vol, total_volume - vol)
        if denom == 0:
            break
        cond[i] = boundary / denom
        vols[i] = vol
        bnds[i] = boundary
        count += 1
    return cond[:count], vols[:count], bnds[:count]
