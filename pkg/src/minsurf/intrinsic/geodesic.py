"""Single/multi-source shortest paths on the log-polar stencil graph.

The graph is implicit: vertex (i, j) on ring i is joined to (i + di, j + dj)
for every primitive offset with max(|di|, |dj|) <= stencil order, angular
index taken mod n_theta.  Edge weights are the trapezoidal metric length
(lam_u + lam_v) / 2 * |z_u - z_v| of the parameter chord.  A disk mesh adds a
centre vertex joined to every vertex of the innermost ring.
"""
from __future__ import annotations

import heapq
import math
from functools import lru_cache

import numba
import numpy as np


@lru_cache(maxsize=None)
def stencil_offsets(order: int) -> np.ndarray:
    """Primitive integer offsets (di, dj) with max(|di|, |dj|) <= order."""
    if order < 1:
        raise ValueError("stencil order must be >= 1")
    out = [
        (di, dj)
        for di in range(-order, order + 1)
        for dj in range(-order, order + 1)
        if (di, dj) != (0, 0) and math.gcd(di, dj) == 1
    ]
    return np.array(out, dtype=np.int64)


def stencil_distortion(order: int, aspect: float = 1.0) -> float:
    """Worst-case relative overestimate of straight-line distance on a uniform grid.

    ``aspect`` is the ratio of the radial to the angular cell size in log-polar
    coordinates (1 for square cells).  A direction lying between two adjacent
    stencil directions separated by angle gap is approximated with relative
    excess 1/cos(gap/2) - 1.
    """
    off = stencil_offsets(order).astype(float)
    ang = np.sort(np.arctan2(off[:, 0] * aspect, off[:, 1]))
    gaps = np.diff(np.append(ang, ang[0] + 2 * math.pi))
    return float(1.0 / math.cos(0.5 * gaps.max()) - 1.0)


@numba.njit(cache=True)
def _vid(i, j, n_t, off):
    return off + i * n_t + j


@numba.njit(cache=True)
def _segment_clear(i, j, di, dj, n_t, off, mask):
    # intermediate lattice points along the stencil edge must be admissible,
    # so long edges cannot jump across a thin excluded region
    g = max(abs(di), abs(dj))
    for t in range(1, g):
        ii = i + int(round(t * di / g))
        jj = (j + int(round(t * dj / g))) % n_t
        if not mask[off + ii * n_t + jj]:
            return False
    return True


@numba.njit(cache=True)
def _dijkstra(n_r, n_t, has_center, zr, zi, lam, offsets, mask, sources, cutoff):
    n = lam.shape[0]
    off = 1 if has_center else 0
    dist = np.full(n, np.inf)
    done = np.zeros(n, dtype=np.bool_)
    heap = [(0.0, np.int64(0))]
    heap.pop()
    for s in sources:
        if mask[s] and dist[s] > 0.0:
            dist[s] = 0.0
            heapq.heappush(heap, (0.0, np.int64(s)))
    n_off = offsets.shape[0]
    while len(heap) > 0:
        d, u = heapq.heappop(heap)
        if done[u] or d > dist[u]:
            continue
        done[u] = True
        if d > cutoff:
            break
        if has_center and u == 0:
            for j in range(n_t):
                v = off + j
                if mask[v] and not done[v]:
                    w = 0.5 * (lam[u] + lam[v]) * math.hypot(zr[v] - zr[u], zi[v] - zi[u])
                    nd = d + w
                    if nd < dist[v]:
                        dist[v] = nd
                        heapq.heappush(heap, (nd, np.int64(v)))
            continue
        i = (u - off) // n_t
        j = (u - off) % n_t
        if has_center and i == 0 and mask[0] and not done[0]:
            w = 0.5 * (lam[u] + lam[0]) * math.hypot(zr[u] - zr[0], zi[u] - zi[0])
            nd = d + w
            if nd < dist[0]:
                dist[0] = nd
                heapq.heappush(heap, (nd, np.int64(0)))
        for k in range(n_off):
            di = offsets[k, 0]
            dj = offsets[k, 1]
            ii = i + di
            if ii < 0 or ii >= n_r:
                continue
            jj = (j + dj) % n_t
            v = off + ii * n_t + jj
            if done[v] or not mask[v]:
                continue
            if (abs(di) > 1 or abs(dj) > 1) and not _segment_clear(i, j, di, dj, n_t, off, mask):
                continue
            w = 0.5 * (lam[u] + lam[v]) * math.hypot(zr[v] - zr[u], zi[v] - zi[u])
            nd = d + w
            if nd < dist[v]:
                dist[v] = nd
                heapq.heappush(heap, (nd, np.int64(v)))
    return dist


def shortest_paths(mesh, sources, stencil_order: int | None = None, mask=None, cutoff: float = math.inf) -> np.ndarray:
    """Graph distances from the set ``sources`` to every vertex (inf if unreachable).

    ``mask`` restricts the graph to a vertex subset; ``cutoff`` stops the
    search once all vertices closer than it are settled (farther ones may hold
    upper estimates or inf).
    """
    order = mesh.stencil_order if stencil_order is None else stencil_order
    if mask is None:
        mask = np.ones(mesh.n_vertices, dtype=np.bool_)
    sources = np.atleast_1d(np.asarray(sources, dtype=np.int64))
    return _dijkstra(
        mesh.n_r,
        mesh.n_theta,
        mesh.has_center,
        mesh.zr,
        mesh.zi,
        mesh.lam,
        stencil_offsets(order),
        np.ascontiguousarray(mask, dtype=np.bool_),
        sources,
        float(cutoff),
    )
