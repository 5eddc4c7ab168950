"""Deterministic text exports of meshes (PLY, OBJ, CSV).

Floats are written with ``%.17g`` so that parsing the file recovers the
stored positions bit for bit.
"""
from __future__ import annotations

import io
from pathlib import Path

import numpy as np

from ..report import atomic_write_text
from .mesh import IntrinsicMesh


def _fmt(x: float) -> str:
    return "%.17g" % x


def ply_text(mesh: IntrinsicMesh, distance: np.ndarray | None = None) -> str:
    tris = mesh.triangles
    buf = io.StringIO()
    buf.write("ply\nformat ascii 1.0\n")
    buf.write(f"comment surface {mesh.data.name}\n")
    buf.write(f"element vertex {mesh.n_vertices}\n")
    buf.write("property double x\nproperty double y\nproperty double z\nproperty double lambda\n")
    if distance is not None:
        buf.write("property double dist\n")
    buf.write(f"element face {len(tris)}\nproperty list uchar int vertex_indices\nend_header\n")
    cols = [mesh.pos[:, 0], mesh.pos[:, 1], mesh.pos[:, 2], mesh.lam]
    if distance is not None:
        cols.append(np.asarray(distance, dtype=float))
    for row in zip(*cols):
        buf.write(" ".join(_fmt(v) for v in row) + "\n")
    for a, b, c in tris:
        buf.write(f"3 {a} {b} {c}\n")
    return buf.getvalue()


def obj_text(mesh: IntrinsicMesh) -> str:
    buf = io.StringIO()
    buf.write(f"# surface {mesh.data.name}\n")
    for x, y, z in mesh.pos:
        buf.write(f"v {_fmt(x)} {_fmt(y)} {_fmt(z)}\n")
    for a, b, c in mesh.triangles + 1:
        buf.write(f"f {a} {b} {c}\n")
    return buf.getvalue()


def csv_text(mesh: IntrinsicMesh) -> str:
    buf = io.StringIO()
    buf.write("index,z_re,z_im,x,y,z,lambda,cell_area,boundary\n")
    for v in range(mesh.n_vertices):
        vals = [mesh.zr[v], mesh.zi[v], *mesh.pos[v], mesh.lam[v], mesh.cell_area[v]]
        buf.write(f"{v}," + ",".join(_fmt(x) for x in vals) + f",{int(mesh.boundary[v])}\n")
    return buf.getvalue()


def write_mesh(mesh: IntrinsicMesh, path: str | Path, fmt: str, distance: np.ndarray | None = None) -> None:
    if fmt == "ply":
        text = ply_text(mesh, distance)
    elif fmt == "obj":
        text = obj_text(mesh)
    elif fmt == "csv":
        text = csv_text(mesh)
    else:
        raise ValueError(f"unknown mesh format {fmt!r}")
    atomic_write_text(path, text)


def read_ply_vertices(path: str | Path) -> np.ndarray:
    """Vertex rows of an ASCII PLY written by :func:`write_mesh`."""
    lines = Path(path).read_text().splitlines()
    n = next(int(l.split()[2]) for l in lines if l.startswith("element vertex"))
    start = lines.index("end_header") + 1
    return np.array([[float(t) for t in l.split()] for l in lines[start : start + n]])
