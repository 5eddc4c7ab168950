"""Generalised Henneberg surfaces H_m (m odd).

H_m is the quotient of the surface with Weierstrass data g(z) = z,
omega = z^-(3+m) (z^(2m+2) - 1) dz on C* by z -> -1/conj(z).  It is a
stable, non-orientable complete minimal surface with m+1 branch points of
order 1 and one end of multiplicity m+2.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.spatial import cKDTree

from . import bounds
from .laurent import LaurentPoly, polynomial_roots
from .report import VerificationReport, upper_bound_report
from .weierstrass import (
    WeierstrassData,
    differential,
    evaluate,
    gauss_map_degree,
    topology_profile,
)
MAX_M = 99

# default annulus is symmetric under z -> 1/z so the deck map preserves it
DEFAULT_DOMAIN = (math.exp(-math.pi / 2), math.exp(math.pi / 2))


@dataclass(frozen=True)
class HennebergSurface:
    m: int
    data: WeierstrassData

    @property
    def base_parameter(self) -> complex:
        return complex(np.exp(1j * math.pi / (2 * (self.m + 1))))


def make(m: int, domain: tuple[float, float] = DEFAULT_DOMAIN) -> HennebergSurface:
    if int(m) != m or m < 1 or m % 2 == 0:
        raise ValueError(f"m must be an odd positive integer, got {m!r}")
    m = int(m)
    z = LaurentPoly.monomial(1)
    omega = LaurentPoly({-(3 + m): -1.0, m - 1: 1.0})
    data = WeierstrassData(
        g=z,
        omega=omega,
        r_min=domain[0],
        r_max=domain[1],
        quotient=True,
        base_point=complex(np.exp(1j * math.pi / (2 * (m + 1)))),
        name=f"henneberg:{m}",
    )
    return HennebergSurface(m, data)


def closed_form(m: int, r, theta) -> np.ndarray:
    """Polar parameterisation of H_m, normalised so that f(e^{i pi/(2(m+1))}) = 0."""
    r = np.asarray(r, dtype=float)
    t = np.asarray(theta, dtype=float)
    a, b, c = m, m + 2, m + 1
    x1 = 0.5 * (r**a * np.cos(a * t) / a + np.cos(b * t) / (b * r**b)) - 0.5 * (
        r**b * np.cos(b * t) / b + np.cos(a * t) / (a * r**a)
    )
    x2 = 0.5 * (np.sin(b * t) / (b * r**b) - r**a * np.sin(a * t) / a) - 0.5 * (
        r**b * np.sin(b * t) / b - np.sin(a * t) / (a * r**a)
    )
    x3 = (r**c + r ** (-c)) * np.cos(c * t) / c
    return np.stack(np.broadcast_arrays(x1, x2, x3), axis=-1)


def _sample_params(rng: np.random.Generator, n: int, r_lo: float, r_hi: float):
    r = np.exp(rng.uniform(math.log(r_lo), math.log(r_hi), n))
    t = rng.uniform(0.0, 2 * math.pi, n)
    return r, t


def oracle_match(
    surface: HennebergSurface, sample_count: int = 1000, seed: int = 0, tol: float = 1e-8
) -> VerificationReport:
    """Compare the Weierstrass integral against the closed-form parameterisation.

    The measured value is the error relative to max(1, |f|): at r = 10 the
    coordinates of H_m grow like 10^(m+2), so for m >= 7 an absolute 1e-8 is
    below double-precision resolution.  The absolute maximum is kept in
    ``details["max_abs_error"]``.
    """
    if sample_count < 100:
        raise ValueError("sample_count must be >= 100")
    rng = np.random.default_rng(seed)
    r, t = _sample_params(rng, sample_count, 0.1, 10.0)
    numeric = evaluate(surface.data, r * np.exp(1j * t))
    exact = closed_form(surface.m, r, t)
    diff = np.linalg.norm(numeric - exact, axis=1)
    scaled = diff / np.maximum(1.0, np.linalg.norm(exact, axis=1))
    return upper_bound_report(
        "oracle",
        surface.data.name,
        float(scaled.max()),
        tol,
        params={"m": surface.m, "seed": seed},
        resolution={"samples": sample_count},
        details={"max_abs_error": float(diff.max())},
    )


def line_directions(surface: HennebergSurface) -> np.ndarray:
    """Unit horizontal directions of the m+1 straight lines contained in H_m."""
    m = surface.m
    dirs = []
    for j in range(1, 2 * m + 2, 2):
        p = evaluate(surface.data, 2.0 * np.exp(1j * math.pi * j / (2 * (m + 1))))
        dirs.append(p / np.linalg.norm(p))
    return np.array(dirs)


def _bisector_normals(dirs: np.ndarray) -> np.ndarray:
    ang = np.sort(np.mod(np.arctan2(dirs[:, 1], dirs[:, 0]), math.pi))
    nxt = np.append(ang[1:], ang[0] + math.pi)
    mid = 0.5 * (ang + nxt)
    # a vertical plane containing the horizontal bisector direction
    return np.stack([-np.sin(mid), np.cos(mid), np.zeros_like(mid)], axis=1)


class _SurfaceProjector:
    """Distance from points of R^3 to the sampled surface, refined by Gauss-Newton."""

    def __init__(self, data: WeierstrassData, r_lo: float, r_hi: float, n_r: int = 192, n_t: int = 768):
        rho = np.exp(np.linspace(math.log(r_lo), math.log(r_hi), n_r))
        th = np.linspace(0, 2 * math.pi, n_t, endpoint=False)
        self.data = data
        self.params = (rho[:, None] * np.exp(1j * th)[None, :]).ravel()
        self.tree = cKDTree(evaluate(data, self.params))

    def distance(self, targets: np.ndarray, iters: int = 25, starts: int = 8) -> np.ndarray:
        # several starts: near self-intersections the closest sample may lie on another sheet
        _, idx = self.tree.query(targets, k=starts)
        best = np.full(len(targets), np.inf)
        for col in range(starts):
            z = self.params[idx[:, col]].copy()
            for _ in range(iters):
                res = evaluate(self.data, z) - targets
                J = differential(self.data, z)
                step = _gn_step(J, res)
                z = z + step[:, 0] + 1j * step[:, 1]
            best = np.minimum(best, np.linalg.norm(evaluate(self.data, z) - targets, axis=1))
        return best


def _gn_step(J: np.ndarray, res: np.ndarray) -> np.ndarray:
    # batched 3x2 least squares via normal equations, damped so that
    # branch points (where J vanishes) do not make the system singular
    JT = np.swapaxes(J, 1, 2)
    A = JT @ J
    A = A + (1e-14 * np.trace(A, axis1=1, axis2=2) + 1e-300)[:, None, None] * np.eye(2)
    b = -(JT @ res[:, :, None])
    return np.linalg.solve(A, b)[:, :, 0]


def symmetry_check(
    surface: HennebergSurface, sample_count: int = 200, seed: int = 0, tol: float = 1e-9
) -> list[VerificationReport]:
    """Check the straight lines, the vertical mirror planes and the pi-rotations."""
    if sample_count < 100:
        raise ValueError("sample_count must be >= 100")
    m, data = surface.m, surface.data
    name = data.name
    rng = np.random.default_rng(seed)
    reports = []

    dirs = line_directions(surface)
    rs = np.exp(rng.uniform(math.log(0.2), math.log(5.0), sample_count))
    worst = 0.0
    for j, u in zip(range(1, 2 * m + 2, 2), dirs):
        for sign in (1, -1):
            pts = evaluate(data, sign * rs * np.exp(1j * math.pi * j / (2 * (m + 1))))
            scale = 1.0 + np.linalg.norm(pts, axis=1)
            off_line = np.linalg.norm(np.cross(pts, u), axis=1) / scale
            worst = max(worst, float(np.max(off_line)), float(np.max(np.abs(pts[:, 2]) / scale)))
    reports.append(
        upper_bound_report(
            "symmetry:lines", name, worst, tol,
            params={"m": m, "lines": len(dirs)}, resolution={"samples": sample_count},
        )
    )

    proj = _SurfaceProjector(data, 0.25, 4.0)
    r, t = _sample_params(rng, sample_count, 0.5, 2.0)
    pts = evaluate(data, r * np.exp(1j * t))
    scale = 1.0 + np.linalg.norm(pts, axis=1)

    worst = 0.0
    for n in _bisector_normals(dirs):
        mirrored = pts - 2.0 * (pts @ n)[:, None] * n[None, :]
        worst = max(worst, float(np.max(proj.distance(mirrored) / scale)))
    reports.append(
        upper_bound_report(
            "symmetry:reflections", name, worst, tol,
            params={"m": m, "planes": len(dirs)}, resolution={"samples": sample_count},
        )
    )

    worst = 0.0
    for u in dirs:
        rotated = 2.0 * (pts @ u)[:, None] * u[None, :] - pts
        worst = max(worst, float(np.max(proj.distance(rotated) / scale)))
    reports.append(
        upper_bound_report(
            "symmetry:rotations", name, worst, tol,
            params={"m": m, "axes": len(dirs)}, resolution={"samples": sample_count},
        )
    )
    return reports


def stability_certificate(data: WeierstrassData | HennebergSurface) -> VerificationReport:
    """Certify stability when the extended unoriented Gauss map is a diffeomorphism of P^2.

    The hypothesis is checked on the double cover: the surface must be a
    quotient, g must have degree 1 as a map of the sphere and g' must have no
    zeros on C*.
    """
    if isinstance(data, HennebergSurface):
        data = data.data
    deg = gauss_map_degree(data.g)
    dg = data.g.derivative()
    critical = 0
    if not dg.is_zero():
        coeffs, _ = dg.shifted_coefficients()
        if coeffs.size > 1:
            critical = int(np.count_nonzero(polynomial_roots(coeffs)))
    applies = data.quotient and deg == 1 and critical == 0 and not dg.is_zero()
    details = {"gauss_degree": deg, "critical_points": critical, "quotient": data.quotient}
    if applies:
        details["index_lower_bound"] = bounds.index_lower_bound(topology_profile(data))
    details["stable"] = applies
    return VerificationReport(
        check="stability",
        surface=data.name,
        measured=float(deg),
        bound=1.0,
        margin=0.0 if applies else float("nan"),
        passed=applies,
        vacuous=not applies,
        details=details,
    )
