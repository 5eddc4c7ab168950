"""Log-polar discretisation of a Weierstrass surface."""
from __future__ import annotations

import functools
import math

import numpy as np
import scipy.sparse as sp

from ..weierstrass import (
    DegenerateDomainError,
    WeierstrassData,
    branch_points,
    conformal_factor,
    evaluate,
)
from .geodesic import stencil_distortion

MAX_STENCIL_ORDER = 8


class IntrinsicMesh:
    """Polar grid of ``n_r`` rings by ``n_theta`` angles with the induced metric.

    Vertex ``(i, j)`` sits at ``radii[i] * exp(i * theta[j])`` and has flat
    index ``offset + i * n_theta + j``; disk domains add a centre vertex with
    index 0 (``offset = 1``).  Rings are log-spaced; on a disk the spacing is
    chosen so that cells are square in log-polar coordinates.
    """

    def __init__(self, data: WeierstrassData, n_r: int, n_theta: int, stencil_order: int = 2):
        if n_r < 16 or n_theta < 32:
            raise ValueError(f"mesh too coarse: need n_r >= 16, n_theta >= 32 (got {n_r}, {n_theta})")
        if not 1 <= stencil_order <= MAX_STENCIL_ORDER:
            raise ValueError(f"stencil order must be in 1..{MAX_STENCIL_ORDER}")
        if data.r_min == 0 and data.has_pole_at_zero:
            raise DegenerateDomainError("domain contains the puncture z=0")
        self.data = data
        self.n_r = n_r
        self.n_theta = n_theta
        self.stencil_order = stencil_order
        self.has_center = data.r_min == 0
        self.offset = 1 if self.has_center else 0

        h_theta = 2 * math.pi / n_theta
        if self.has_center:
            log_hi = math.log(data.r_max)
            log_lo = log_hi - (n_r - 1) * h_theta
        else:
            log_lo, log_hi = math.log(data.r_min), math.log(data.r_max)
        self.radii = np.exp(np.linspace(log_lo, log_hi, n_r))
        self.theta = h_theta * np.arange(n_theta)
        self.h_log = (log_hi - log_lo) / (n_r - 1)
        self.h_theta = h_theta

        ring = (self.radii[:, None] * np.exp(1j * self.theta)[None, :]).ravel()
        self.z = np.concatenate([[0j], ring]) if self.has_center else ring
        self.zr = np.ascontiguousarray(self.z.real)
        self.zi = np.ascontiguousarray(self.z.imag)
        self.pos = evaluate(data, self.z)
        self.lam = np.ascontiguousarray(conformal_factor(data, self.z), dtype=float)
        self.cell_area = self.lam**2 * self._parameter_cell_areas()

        self.boundary = np.zeros(self.n_vertices, dtype=bool)
        self.boundary[self.vid(n_r - 1, np.arange(n_theta))] = True
        if not self.has_center:
            self.boundary[self.vid(0, np.arange(n_theta))] = True

    # -- indexing -----------------------------------------------------------
    @property
    def n_vertices(self) -> int:
        return self.offset + self.n_r * self.n_theta

    def vid(self, i, j):
        return self.offset + np.asarray(i) * self.n_theta + np.mod(j, self.n_theta)

    def ring_index(self, v):
        v = np.asarray(v) - self.offset
        return v // self.n_theta, v % self.n_theta

    def nearest_vertex(self, z: complex) -> int:
        z = complex(z)
        if self.has_center and abs(z) < self.radii[0] * math.exp(-0.5 * self.h_log):
            return 0
        i = int(np.clip(np.round((math.log(abs(z)) - math.log(self.radii[0])) / self.h_log), 0, self.n_r - 1))
        j = int(np.round(math.atan2(z.imag, z.real) / self.h_theta)) % self.n_theta
        return int(self.vid(i, j))

    @property
    def aspect(self) -> float:
        """Radial over angular cell size in log-polar coordinates."""
        return self.h_log / self.h_theta

    @property
    def distortion(self) -> float:
        return stencil_distortion(self.stencil_order, self.aspect)

    # -- geometry -----------------------------------------------------------
    def _parameter_cell_areas(self) -> np.ndarray:
        r = self.radii
        edges = np.sqrt(r[1:] * r[:-1])
        inner = np.concatenate([[r[0] if not self.has_center else 0.5 * r[0]], edges])
        outer = np.concatenate([edges, [r[-1]]])
        ring_area = 0.5 * self.h_theta * (outer**2 - inner**2)
        cells = np.repeat(ring_area, self.n_theta)
        if self.has_center:
            cells = np.concatenate([[math.pi * (0.5 * r[0]) ** 2], cells])
        return cells

    @functools.cached_property
    def triangles(self) -> np.ndarray:
        """Triangles (CCW in the parameter plane); quads split along the shorter 3D diagonal."""
        n_r, n_t = self.n_r, self.n_theta
        i, j = np.meshgrid(np.arange(n_r - 1), np.arange(n_t), indexing="ij")
        a = self.vid(i, j).ravel()
        b = self.vid(i + 1, j).ravel()
        c = self.vid(i + 1, j + 1).ravel()
        d = self.vid(i, j + 1).ravel()
        p = self.pos
        ac = np.linalg.norm(p[a] - p[c], axis=1)
        bd = np.linalg.norm(p[b] - p[d], axis=1)
        use_ac = ac <= bd
        t1 = np.where(use_ac[:, None], np.stack([a, b, c], 1), np.stack([a, b, d], 1))
        t2 = np.where(use_ac[:, None], np.stack([a, c, d], 1), np.stack([b, c, d], 1))
        tris = [t1, t2]
        if self.has_center:
            jj = np.arange(n_t)
            ring0 = self.vid(0, jj)
            tris.insert(0, np.stack([np.zeros(n_t, dtype=ring0.dtype), ring0, self.vid(0, jj + 1)], 1))
        return np.concatenate(tris).astype(np.int64)

    @functools.cached_property
    def triangle_area(self) -> np.ndarray:
        p = self.pos
        t = self.triangles
        return 0.5 * np.linalg.norm(np.cross(p[t[:, 1]] - p[t[:, 0]], p[t[:, 2]] - p[t[:, 0]]), axis=1)

    @property
    def total_area(self) -> float:
        return float(self.cell_area.sum())

    @functools.cached_property
    def grid_adjacency(self) -> sp.csr_matrix:
        """4-neighbour adjacency (rings, spokes and centre links) as a symmetric CSR matrix."""
        return self._adjacency(diagonals=False)

    @functools.cached_property
    def grid_adjacency8(self) -> sp.csr_matrix:
        return self._adjacency(diagonals=True)

    def _adjacency(self, diagonals: bool) -> sp.csr_matrix:
        n_r, n_t = self.n_r, self.n_theta
        i, j = np.meshgrid(np.arange(n_r), np.arange(n_t), indexing="ij")
        rows = [self.vid(i, j).ravel()]
        cols = [self.vid(i, j + 1).ravel()]
        i2, j2 = np.meshgrid(np.arange(n_r - 1), np.arange(n_t), indexing="ij")
        rows.append(self.vid(i2, j2).ravel())
        cols.append(self.vid(i2 + 1, j2).ravel())
        if diagonals:
            rows += [self.vid(i2, j2).ravel(), self.vid(i2, j2 + 1).ravel()]
            cols += [self.vid(i2 + 1, j2 + 1).ravel(), self.vid(i2 + 1, j2).ravel()]
        if self.has_center:
            rows.append(np.zeros(n_t, dtype=np.int64))
            cols.append(self.vid(0, np.arange(n_t)))
        r = np.concatenate(rows)
        c = np.concatenate(cols)
        n = self.n_vertices
        A = sp.coo_matrix((np.ones(r.size, dtype=np.int8), (r, c)), shape=(n, n)).tocsr()
        return (A + A.T).tocsr()

    @functools.cached_property
    def edge_length_max(self) -> np.ndarray:
        """Per-vertex longest incident 3D edge of the 8-neighbourhood (local cell diameter)."""
        A = self.grid_adjacency8.tocoo()
        lengths = np.linalg.norm(self.pos[A.row] - self.pos[A.col], axis=1)
        out = np.zeros(self.n_vertices)
        np.maximum.at(out, A.row, lengths)
        return out

    @functools.cached_property
    def antipode(self) -> np.ndarray | None:
        """Vertex permutation of the deck map z -> -1/conj(z), or None if not a quotient.

        Requires a grid symmetric under it (r_min * r_max = 1, n_theta even).
        """
        if not self.data.quotient:
            return None
        if self.has_center or self.n_theta % 2:
            raise ValueError("quotient meshes need an annulus and an even n_theta")
        if abs(math.log(self.data.r_min) + math.log(self.data.r_max)) > 1e-9:
            raise ValueError("quotient meshes need r_min * r_max = 1")
        i, j = self.ring_index(np.arange(self.n_vertices))
        return np.asarray(self.vid(self.n_r - 1 - i, j + self.n_theta // 2), dtype=np.int64)

    @functools.cached_property
    def branch_vertices(self) -> np.ndarray:
        """Vertices nearest to the branch points in the domain (both lifts on quotients)."""
        zs = []
        for bp in branch_points(self.data):
            zs.append(bp.z)
            if self.data.quotient:
                zs.append(complex(self.data.antipode(bp.z)))
        return np.array(sorted({self.nearest_vertex(z) for z in zs}), dtype=np.int64)

    @property
    def area_factor(self) -> float:
        """Conversion from areas on the mesh (the cover) to areas on the surface."""
        return 0.5 if self.data.quotient else 1.0

    def resolution(self) -> dict:
        return {
            "n_r": self.n_r,
            "n_theta": self.n_theta,
            "stencil_order": self.stencil_order,
            "r_min": self.data.r_min,
            "r_max": self.data.r_max,
            "stencil_distortion": self.distortion,
        }


def build_mesh(data: WeierstrassData, n_r: int, n_theta: int, stencil_order: int = 2) -> IntrinsicMesh:
    return IntrinsicMesh(data, n_r, n_theta, stencil_order)
