"""Branched minimal surfaces in R^3 from Laurent-polynomial Weierstrass data.

The surface is f(z) = Re int_{z0}^z (phi1, phi2, phi3) with

    phi1 = (1 - g^2) omega / 2,  phi2 = i (1 + g^2) omega / 2,  phi3 = g omega,

on an annulus r_min <= |z| <= r_max of C* (r_min = 0 for a disk when the
data is holomorphic at 0).  With Laurent-polynomial data the integral is
exact: every term integrates termwise and a z^-1 term contributes
Re(c) ln|z| once its coefficient is real.

Non-orientable surfaces are represented by their oriented double cover with
``quotient=True``; the deck transformation is z -> -1/conj(z).
"""
from __future__ import annotations

import functools
import json
import math
import warnings
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .bounds import TopologyProfile
from .laurent import LaurentPoly, polynomial_roots

RESIDUE_TOL = 1e-12


class PeriodError(ValueError):
    """Raised when a coordinate form has a non-real residue (Re int is multivalued)."""


class DegenerateDomainError(ValueError):
    pass


@dataclass(frozen=True)
class WeierstrassData:
    g: LaurentPoly
    omega: LaurentPoly
    r_min: float = 0.0
    r_max: float = 10.0
    quotient: bool = False
    base_point: complex = 1.0
    name: str = field(default="custom", compare=False)

    def __post_init__(self):
        if not 0 <= self.r_min < self.r_max < math.inf:
            raise ValueError(f"invalid domain r_min={self.r_min}, r_max={self.r_max}")
        if self.omega.is_zero():
            raise ValueError("omega must be nonzero")
        if self.r_min == 0 and self.has_pole_at_zero:
            raise DegenerateDomainError("data has a pole at z=0; the domain needs r_min > 0")
        for k, phi in enumerate(self.phi, start=1):
            res = phi.residue()
            if abs(res.imag) >= RESIDUE_TOL:
                raise PeriodError(f"phi{k} has residue {res} at 0; surface not well defined")
        if self.base_point == 0 and self.has_pole_at_zero:
            raise ValueError("base point 0 is a puncture of this data")

    @functools.cached_property
    def phi(self) -> tuple[LaurentPoly, LaurentPoly, LaurentPoly]:
        g2 = self.g * self.g
        w = self.omega
        return (0.5 * (1 - g2) * w, 0.5j * (1 + g2) * w, self.g * w)

    @functools.cached_property
    def _primitives(self):
        return tuple(phi.antiderivative() for phi in self.phi)

    @functools.cached_property
    def _dg(self) -> LaurentPoly:
        return self.g.derivative()

    @property
    def has_pole_at_zero(self) -> bool:
        return any(p.pole_order_at_zero() > 0 for p in self.phi)

    @property
    def is_disk(self) -> bool:
        return self.r_min == 0

    def antipode(self, z):
        return -1.0 / np.conj(z)

    def scaled(self, c: float) -> WeierstrassData:
        """Data for the homothetic surface c * f (same base point)."""
        if not c > 0:
            raise ValueError("scale factor must be positive")
        return replace(self, omega=self.omega * c, name=f"{self.name}*{c:g}")

    def with_domain(self, r_min: float, r_max: float) -> WeierstrassData:
        return replace(self, r_min=r_min, r_max=r_max)

    def with_base_point(self, z0: complex) -> WeierstrassData:
        return replace(self, base_point=complex(z0))

    def to_dict(self) -> dict:
        bp = complex(self.base_point)
        return {
            "g": self.g.to_triples(),
            "omega": self.omega.to_triples(),
            "domain": {"r_min": self.r_min, "r_max": self.r_max},
            "quotient": self.quotient,
            "base_point": [bp.real, bp.imag],
        }

    @classmethod
    def from_dict(cls, d: dict, name: str = "custom") -> WeierstrassData:
        try:
            dom = d["domain"]
            bp = d.get("base_point", [1.0, 0.0])
            return cls(
                g=LaurentPoly.from_triples(d["g"]),
                omega=LaurentPoly.from_triples(d["omega"]),
                r_min=float(dom["r_min"]),
                r_max=float(dom["r_max"]),
                quotient=bool(d.get("quotient", False)),
                base_point=complex(bp[0], bp[1]),
                name=name,
            )
        except (KeyError, TypeError, IndexError) as exc:
            raise ValueError(f"malformed surface definition: {exc!r}") from exc


def load_surface(path: str | Path) -> WeierstrassData:
    path = Path(path)
    with path.open() as fh:
        return WeierstrassData.from_dict(json.load(fh), name=path.stem)


def save_surface(data: WeierstrassData, path: str | Path) -> None:
    Path(path).write_text(json.dumps(data.to_dict(), indent=2) + "\n")


def phi_forms(data: WeierstrassData) -> tuple[LaurentPoly, LaurentPoly, LaurentPoly]:
    return data.phi


def _primitive_values(data: WeierstrassData, z: np.ndarray) -> np.ndarray:
    out = np.empty(z.shape + (3,))
    logabs = None
    for k, (F, res) in enumerate(data._primitives):
        val = F(z).real
        if res != 0:
            if logabs is None:
                with np.errstate(divide="ignore"):
                    logabs = np.log(np.abs(z))
            val = val + res.real * logabs
        out[..., k] = val
    return out


def evaluate(data: WeierstrassData, z, base_point: complex | None = None) -> np.ndarray:
    """Surface point(s) f(z) with f(base_point) = 0; z may be an array."""
    z = np.asarray(z, dtype=complex)
    z0 = np.asarray(data.base_point if base_point is None else base_point, dtype=complex)
    if data.has_pole_at_zero and np.any(z == 0):
        raise ValueError("cannot evaluate at the puncture z=0")
    return _primitive_values(data, z) - _primitive_values(data, z0)


def differential(data: WeierstrassData, z) -> np.ndarray:
    """Jacobian of f w.r.t. (x, y), z = x + iy; shape (..., 3, 2)."""
    z = np.asarray(z, dtype=complex)
    phis = np.stack([p(z) for p in data.phi], axis=-1)
    return np.stack([phis.real, -phis.imag], axis=-1)


def conformal_factor(data: WeierstrassData, z):
    z = np.asarray(z, dtype=complex)
    lam = 0.5 * (1 + np.abs(data.g(z)) ** 2) * np.abs(data.omega(z))
    return lam[()] if lam.ndim == 0 else lam


def gauss_curvature(data: WeierstrassData, z):
    """K = -(4|g'| / ((1+|g|^2)^2 |omega|))^2; raises at branch points."""
    z = np.asarray(z, dtype=complex)
    w = np.abs(data.omega(z))
    if np.any(w == 0):
        raise ValueError("Gauss curvature is unbounded at a branch point")
    K = -((4 * np.abs(data._dg(z))) / ((1 + np.abs(data.g(z)) ** 2) ** 2 * w)) ** 2
    return K[()] if K.ndim == 0 else K


def _curvature_density(data: WeierstrassData, z: np.ndarray) -> np.ndarray:
    # K * lambda^2, which is the pulled-back area form of the Gauss map and
    # stays bounded at branch points.
    with np.errstate(over="ignore", invalid="ignore"):
        ratio = np.abs(data._dg(z)) / (1 + np.abs(data.g(z)) ** 2)
    # inf/inf only happens far out where the density has decayed to 0
    return -4 * np.nan_to_num(ratio, nan=0.0, posinf=0.0) ** 2


def _log_polar_integral(data, s_lo, s_hi, n_s, n_t):
    ds = (s_hi - s_lo) / n_s
    s = s_lo + ds * (np.arange(n_s) + 0.5)
    t = (2 * np.pi / n_t) * (np.arange(n_t) + 0.5)
    total = 0.0
    # row blocks keep the working set small at high resolution
    for rows in np.array_split(np.arange(n_s), max(1, n_s // 128)):
        rho = np.exp(s[rows])[:, None]
        z = rho * np.exp(1j * t)[None, :]
        total += float(np.sum(_curvature_density(data, z) * rho**2))
    return total * ds * (2 * np.pi / n_t)


def _disk_integral(data, r_hi, n_r, n_t):
    dr = r_hi / n_r
    r = dr * (np.arange(n_r) + 0.5)
    t = (2 * np.pi / n_t) * (np.arange(n_t) + 0.5)
    z = r[:, None] * np.exp(1j * t)[None, :]
    return float(np.sum(_curvature_density(data, z) * r[:, None])) * dr * (2 * np.pi / n_t)


def total_curvature(
    data: WeierstrassData,
    quad_resolution: int = 1024,
    domain: tuple[float, float] | None = None,
    tail_warn: float = 0.01,
) -> float:
    """Integral of K dA over the parameter domain, halved for quotient surfaces.

    Midpoint rule in (log r, theta) on annuli, in (r, theta) on disks.  A
    warning is emitted when the curvature outside the domain exceeds
    ``tail_warn`` of the computed total.
    """
    if quad_resolution < 64:
        raise ValueError("quad_resolution must be >= 64")
    r_min, r_max = domain if domain is not None else (data.r_min, data.r_max)
    n = quad_resolution
    if r_min == 0:
        if data.has_pole_at_zero:
            raise DegenerateDomainError("disk domain around a pole")
        total = _disk_integral(data, r_max, n, n)
        tail_in = 0.0
    else:
        total = _log_polar_integral(data, math.log(r_min), math.log(r_max), n, n)
        tail_in = _log_polar_integral(data, math.log(r_min) - 30.0, math.log(r_min), 256, 256)
    tail_out = _log_polar_integral(data, math.log(r_max), math.log(r_max) + 30.0, 256, 256)
    tail = abs(tail_in) + abs(tail_out)
    if total != 0 and tail > tail_warn * abs(total):
        warnings.warn(
            f"curvature outside the domain is {tail:.3g} ({tail / abs(total):.1%} of total); "
            "enlarge the domain",
            RuntimeWarning,
            stacklevel=2,
        )
    return 0.5 * total if data.quotient else total


def gauss_map_degree(g: LaurentPoly) -> int:
    """Degree of g as a map of the Riemann sphere."""
    if g.is_zero() or g.is_constant():
        return 0
    return max(g.max_exp, 0) - min(g.min_exp, 0)


@dataclass(frozen=True)
class BranchPoint:
    z: complex
    order: int
    image: tuple[float, float, float]


def _zeros_in_domain(data: WeierstrassData, cluster_tol: float = 1e-4):
    """Zeros of omega in the domain as (z, multiplicity), sorted by argument then modulus."""
    coeffs, _shift = data.omega.shifted_coefficients()
    if coeffs.size <= 1:
        return []
    roots = polynomial_roots(coeffs)
    roots = roots[roots != 0]
    # cluster numerically split multiple roots
    clusters: list[list[complex]] = []
    for r in roots:
        for cl in clusters:
            if abs(cl[0] - r) < cluster_tol * max(1.0, abs(r)):
                cl.append(r)
                break
        else:
            clusters.append([r])
    out = []
    for cl in clusters:
        z = complex(np.mean(cl))
        rad = abs(z)
        on_edge = [abs(rad - b) <= 1e-9 * max(1.0, b) for b in (data.r_min, data.r_max) if b > 0]
        if any(on_edge):
            raise DegenerateDomainError(f"branch point {z} lies on the domain boundary; enlarge the domain")
        if data.r_min < rad < data.r_max:
            out.append((z, len(cl)))
    out.sort(key=lambda p: (round(math.atan2(p[0].imag, p[0].real) % (2 * math.pi), 12), abs(p[0])))
    return out


def branch_points(data: WeierstrassData) -> list[BranchPoint]:
    """Branch points with their orders; one representative per antipodal pair on quotients."""
    zeros = _zeros_in_domain(data)
    kept: list[tuple[complex, int]] = []
    for z, order in zeros:
        if data.quotient:
            anti = complex(data.antipode(z))
            if any(abs(anti - k) < 1e-8 * max(1.0, abs(k)) for k, _ in kept):
                continue
        kept.append((z, order))
    if not kept:
        return []
    pts = evaluate(data, np.array([z for z, _ in kept]))
    return [BranchPoint(z, order, tuple(map(float, p))) for (z, order), p in zip(kept, pts)]


def total_branching_order(data: WeierstrassData) -> int:
    return sum(bp.order for bp in branch_points(data))


@dataclass(frozen=True)
class EndProfile:
    location: str
    multiplicity: int

    @property
    def spinning(self) -> int:
        return self.multiplicity


def end_profiles(data: WeierstrassData) -> list[EndProfile]:
    """Ends at the punctures 0 and/or infinity with multiplicity (pole order - 1)."""
    p0 = max(p.pole_order_at_zero() for p in data.phi)
    pinf = max(p.pole_order_at_infinity() for p in data.phi)
    for where, p in (("0", p0), ("inf", pinf)):
        if p == 1:
            raise ValueError(f"simple pole at z={where}: the surface is not complete there")
    ends = []
    if p0 >= 2:
        ends.append(EndProfile("0", p0 - 1))
    if pinf >= 2:
        ends.append(EndProfile("inf", pinf - 1))
    if data.quotient:
        if len(ends) != 2 or ends[0].multiplicity != ends[1].multiplicity:
            raise ValueError("quotient data must have matching ends at 0 and infinity")
        return [EndProfile("{0,inf}", ends[0].multiplicity)]
    return ends


def topology_profile(data: WeierstrassData) -> TopologyProfile:
    """Topology of the surface: genus 0 (of the cover for quotients), ends, branching."""
    return TopologyProfile(
        orientable=not data.quotient,
        genus=0,
        ends=tuple(e.multiplicity for e in end_profiles(data)),
        B=total_branching_order(data),
    )
