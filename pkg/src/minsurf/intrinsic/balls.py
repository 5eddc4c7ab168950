"""Intrinsic distance fields, geodesic balls and extrinsic-ball components."""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import connected_components

from .geodesic import shortest_paths
from .mesh import IntrinsicMesh


class BoundaryContactWarning(RuntimeWarning):
    """A ball or component reached the truncation boundary of the mesh."""


class OmegaNotCompactError(ValueError):
    pass


class TransversalityError(ValueError):
    pass


@dataclass
class DistanceField:
    source: int
    distance: np.ndarray
    sources: tuple[int, ...]
    cutoff: float = math.inf

    def __getitem__(self, v):
        return self.distance[v]


def geodesic_distances(
    mesh: IntrinsicMesh,
    source: int,
    *,
    stencil_order: int | None = None,
    mask: np.ndarray | None = None,
    cutoff: float = math.inf,
    lift: bool = True,
) -> DistanceField:
    """Distances on the surface from ``source``.

    On quotient meshes both lifts of the source are used, so the field is the
    distance on the non-orientable surface pulled back to the cover.
    """
    sources = [int(source)]
    if lift and mesh.antipode is not None:
        sources.append(int(mesh.antipode[source]))
    d = shortest_paths(mesh, sources, stencil_order, mask, cutoff)
    return DistanceField(int(source), d, tuple(sources), cutoff)


def _clipped_fraction(d: np.ndarray, r: float) -> np.ndarray:
    """Fraction of each triangle where the linear interpolant of ``d`` is <= r."""
    a, b, c = np.sort(d, axis=1).T
    frac = np.zeros(len(d))
    frac[c <= r] = 1.0
    with np.errstate(divide="ignore", invalid="ignore"):
        lo = (a <= r) & (r < b)
        frac[lo] = ((r - a[lo]) / (b[lo] - a[lo])) * ((r - a[lo]) / (c[lo] - a[lo]))
        hi = (b <= r) & (r < c)
        frac[hi] = 1.0 - ((c[hi] - r) / (c[hi] - a[hi])) * ((c[hi] - r) / (c[hi] - b[hi]))
    return np.nan_to_num(frac, nan=0.0, posinf=0.0, neginf=0.0)


def ball_area(mesh: IntrinsicMesh, field: DistanceField, r: float, method: str = "clipped") -> float:
    """Area of the intrinsic ball {d <= r}.

    ``"clipped"`` integrates the sub-level set of the piecewise-linear
    distance over the polyhedral triangles; ``"vertex"`` sums the vertex
    cells with d <= r.  Both are lower estimates when the distance is
    overestimated.
    """
    if r < 0:
        raise ValueError("radius must be nonnegative")
    if r > field.cutoff:
        raise ValueError(f"radius {r} beyond the cutoff {field.cutoff} of the distance field")
    d = field.distance
    if np.any(d[mesh.boundary] <= r):
        warnings.warn(
            f"ball of radius {r} touches the mesh boundary; area is truncated",
            BoundaryContactWarning,
            stacklevel=2,
        )
    if method == "vertex":
        area = float(mesh.cell_area[d <= r].sum())
    elif method == "clipped":
        frac = _clipped_fraction(d[mesh.triangles], r)
        area = float(np.dot(frac, mesh.triangle_area))
    else:
        raise ValueError(f"unknown method {method!r}")
    return area * mesh.area_factor


@dataclass
class OmegaComponent:
    R: float
    vertices: np.ndarray
    mask: np.ndarray
    boundary_vertices: np.ndarray
    b: int
    boundary_length: float
    lift_connected: bool
    requested_R: float

    @property
    def nudged(self) -> bool:
        return self.R != self.requested_R


def _labels(mesh: IntrinsicMesh, mask: np.ndarray, adjacency: sp.csr_matrix) -> np.ndarray:
    idx = np.flatnonzero(mask)
    sub = adjacency[idx][:, idx]
    _, lab = connected_components(sub, directed=False)
    labels = np.full(mesh.n_vertices, -1, dtype=np.int64)
    labels[idx] = lab
    return labels


def _check_transversal(mesh: IntrinsicMesh, R: float) -> float | None:
    """Offending branch-image radius if the sphere of radius R passes within a cell of it."""
    radius = np.linalg.norm(mesh.pos, axis=1)
    for v in mesh.branch_vertices:
        if abs(radius[v] - R) <= mesh.edge_length_max[v]:
            return float(radius[v])
    return None


def _boundary_length(mesh: IntrinsicMesh, inside: np.ndarray, radius: np.ndarray, R: float) -> float:
    """Length of the polygonal level curve |f| = R on triangles straddling the component."""
    t = mesh.triangles
    ins = inside[t]
    out = radius[t] > R
    cut = ins.any(axis=1) & out.any(axis=1)
    total = 0.0
    for tri in t[cut]:
        pts = []
        for k in range(3):
            u, v = tri[k], tri[(k + 1) % 3]
            ru, rv = radius[u], radius[v]
            if (ru <= R) != (rv <= R):
                s = (R - ru) / (rv - ru)
                pts.append(mesh.pos[u] + s * (mesh.pos[v] - mesh.pos[u]))
        if len(pts) == 2:
            total += float(np.linalg.norm(pts[1] - pts[0]))
    return total


def omega_component(mesh: IntrinsicMesh, p0: int, R: float, *, nudge: bool = False, max_nudges: int = 20) -> OmegaComponent:
    """Component of f^{-1}(closed ball of radius R about 0) containing the vertex p0.

    Raises :class:`TransversalityError` when R is within one cell of the
    radius of a branch image, unless ``nudge`` is set, in which case R is
    increased by half a cell until clear.
    """
    radius = np.linalg.norm(mesh.pos, axis=1)
    if radius[p0] > R:
        raise ValueError(f"|f(p0)| = {radius[p0]:.6g} exceeds R = {R}")
    requested = R
    for _ in range(max_nudges + 1):
        hit = _check_transversal(mesh, R)
        if hit is None:
            break
        if not nudge:
            raise TransversalityError(f"R={R} is within one cell of the branch-image radius {hit:.6g}")
        R += 0.5 * float(mesh.edge_length_max[mesh.branch_vertices].max())
    else:
        raise TransversalityError(f"could not find a transverse radius near {requested}")

    inball = radius <= R
    labels = _labels(mesh, inball, mesh.grid_adjacency)
    lab0 = labels[p0]
    comp = labels == lab0
    lift_connected = True
    if mesh.antipode is not None:
        lab1 = labels[mesh.antipode[p0]]
        lift_connected = lab1 == lab0
    if np.any(comp & mesh.boundary):
        raise OmegaNotCompactError(
            f"Omega_R for R={R} reaches the mesh truncation boundary; enlarge the domain"
        )
    if lift_connected and mesh.antipode is not None:
        comp = comp | comp[mesh.antipode]

    A4 = mesh.grid_adjacency
    outside = (~inball).astype(np.int8)
    touches_out = (A4 @ outside) > 0
    bverts = np.flatnonzero(comp & touches_out)

    comp_labels = _labels(mesh, ~comp, mesh.grid_adjacency8)
    n_holes = int(comp_labels.max()) + 1 if np.any(~comp) else 0
    if mesh.antipode is not None and lift_connected and n_holes:
        # count orbits of complementary regions under the deck map
        first = np.full(n_holes, -1, dtype=np.int64)
        idx = np.flatnonzero(~comp)
        first[comp_labels[idx][::-1]] = idx[::-1]
        partner = comp_labels[mesh.antipode[first]]
        b = len({tuple(sorted((k, int(p)))) for k, p in enumerate(partner)})
    else:
        b = n_holes

    length = _boundary_length(mesh, comp, radius, R)
    if mesh.antipode is not None and lift_connected:
        length *= 0.5
    return OmegaComponent(
        R=R,
        vertices=np.flatnonzero(comp),
        mask=comp,
        boundary_vertices=bverts,
        b=b,
        boundary_length=length,
        lift_connected=bool(lift_connected),
        requested_R=requested,
    )
