"""Comparison functions for submanifolds of spaces with sectional curvature <= a.

``s_a`` solves x'' + a x = 0 with x(0) = 0, x'(0) = 1, and ``f_a`` is the
normalised log-derivative defect used in the Hessian comparison for the
extrinsic distance.  The remaining helpers turn these into the radius budget
``r1``, the intrinsic area lower bound for geodesic balls and the constants
used in the Yau-type area estimates for surfaces.
"""
from __future__ import annotations

import functools
import math
from dataclasses import dataclass

# Coefficients c_k of f_a(t) = a * sum_k c_k (a t^2)^(k-1), c_k = 4^k |B_2k| / (2k)!.
# These are the Taylor coefficients of (1 - x cot x) / x^2.
_FA_SERIES = (
    1.0 / 3.0,
    1.0 / 45.0,
    2.0 / 945.0,
    1.0 / 4725.0,
    2.0 / 93555.0,
    1382.0 / 638512875.0,
    4.0 / 18243225.0,
    3617.0 / 162820783125.0,
    87734.0 / 38979295480125.0,
    349222.0 / 1531329465290625.0,
)

# |sqrt(|a|) t| below which the series replaces the closed form.
FA_SERIES_THRESHOLD = 0.1


@functools.total_ordering
@dataclass(frozen=True)
class ExtendedRadius:
    """A radius in (0, +inf].  ``value is None`` encodes +inf."""

    value: float | None

    @classmethod
    def infinite(cls) -> "ExtendedRadius":
        return cls(None)

    @classmethod
    def of(cls, x: "float | ExtendedRadius") -> "ExtendedRadius":
        if isinstance(x, ExtendedRadius):
            return x
        return cls(None) if math.isinf(x) else cls(float(x))

    @property
    def is_finite(self) -> bool:
        return self.value is not None

    def __float__(self) -> float:
        return math.inf if self.value is None else self.value

    def __eq__(self, other) -> bool:
        if isinstance(other, (ExtendedRadius, int, float)):
            return float(self) == float(other)
        return NotImplemented

    def __lt__(self, other) -> bool:
        if isinstance(other, (ExtendedRadius, int, float)):
            return float(self) < float(other)
        return NotImplemented

    def __hash__(self) -> int:
        return hash(float(self))

    def __repr__(self) -> str:
        return "ExtendedRadius(inf)" if self.value is None else f"ExtendedRadius({self.value!r})"


@dataclass(frozen=True)
class ComparisonParams:
    a: float
    H0: float = 0.0
    R1: float = math.inf
    n: int = 2
    m: int = 3

    def __post_init__(self):
        if not self.H0 >= 0:
            raise ValueError(f"H0 must be >= 0, got {self.H0}")
        if not self.R1 > 0:
            raise ValueError(f"R1 must be > 0, got {self.R1}")
        if not 1 <= self.n < self.m:
            raise ValueError(f"need 1 <= n < m, got n={self.n}, m={self.m}")


def _check_domain(a: float, t: float) -> None:
    if t < 0:
        raise ValueError(f"t must be nonnegative, got {t}")
    if a > 0 and t >= math.pi / math.sqrt(a):
        raise ValueError(f"t={t} outside I_a=[0, pi/sqrt(a)) for a={a}")


def s_a(a: float, t: float) -> float:
    _check_domain(a, t)
    if a > 0:
        k = math.sqrt(a)
        return math.sin(k * t) / k
    if a < 0:
        k = math.sqrt(-a)
        return math.sinh(k * t) / k
    return float(t)


def f_a(a: float, t: float) -> float:
    """(1 - t s_a'(t)/s_a(t)) / t^2, extended smoothly by f_a(0) = a/3."""
    _check_domain(a, t)
    if a == 0:
        return 0.0
    if t == 0:
        return a / 3
    x = math.sqrt(abs(a)) * t
    if x < FA_SERIES_THRESHOLD:
        u = a * t * t
        acc = 0.0
        for c in reversed(_FA_SERIES):
            acc = acc * u + c
        return a * acc
    if a > 0:
        return (1.0 - x / math.tan(x)) / (t * t)
    return (1.0 - x / math.tanh(x)) / (t * t)


def unit_ball_volume(n: int) -> float:
    if n == 2:
        return math.pi
    return math.pi ** (n / 2) / math.gamma(n / 2 + 1)


def mean_curvature_radius(a: float, H0: float) -> ExtendedRadius:
    """Radius R_0(a, H0) of the geodesic sphere of mean curvature H0 in the model space.

    For a < 0 the sphere only exists when H0 > sqrt(-a); otherwise the
    radius is infinite.
    """
    if not H0 >= 0:
        raise ValueError(f"H0 must be >= 0, got {H0}")
    if a > 0:
        k = math.sqrt(a)
        return ExtendedRadius((0.5 * math.pi - math.atan(H0 / k)) / k)
    if a == 0:
        return ExtendedRadius.infinite() if H0 == 0 else ExtendedRadius(1.0 / H0)
    k = math.sqrt(-a)
    if H0 <= k:
        return ExtendedRadius.infinite()
    return ExtendedRadius(math.atanh(k / H0) / k)


def r1(params: ComparisonParams) -> ExtendedRadius:
    return min(ExtendedRadius.of(params.R1), mean_curvature_radius(params.a, params.H0))


def area_lower_bound(
    params: ComparisonParams, r: float, *, pointwise_fa: bool = False, density: int = 1
) -> float:
    """Lower bound for the volume of the intrinsic ball B_M(x0, r).

    With ``pointwise_fa`` and a > 0, f_a(r) is used instead of f_a(r1), which
    gives the sharper bound valid because f_a is increasing.  ``density`` is
    the local density of M at the centre (an integer multiplicity).
    """
    if not r > 0:
        raise ValueError(f"r must be > 0, got {r}")
    rad = r1(params)
    if rad.is_finite and r > rad.value * (1 + 1e-12):
        raise ValueError(f"r={r} exceeds r1={rad.value}")
    n = params.n
    if params.a <= 0:
        exponent = n * params.H0 * r
    else:
        fa = f_a(params.a, min(r, rad.value) if pointwise_fa else rad.value)
        exponent = n * r * (params.H0 + 0.5 * fa * r)
    return density * unit_ball_volume(n) * r**n * math.exp(-exponent)


def _phi(params: ComparisonParams, r: float) -> float:
    return area_lower_bound(params, r) / (r * r)


def yau_r2(params: ComparisonParams, rtol: float = 1e-12, max_iter: int = 200) -> ExtendedRadius:
    """Largest r2 in (0, r1] with Area[B(p, r)] >= 3 r^2 guaranteed for r <= r2."""
    if params.n != 2:
        raise ValueError("yau_r2 is defined for surfaces (n=2)")
    rad = r1(params)
    if rad.is_finite:
        hi = rad.value
        if _phi(params, hi) >= 3.0:
            return rad
    else:
        if params.H0 == 0 and params.a <= 0:
            return rad
        hi = 1.0
        while _phi(params, hi) >= 3.0:
            hi *= 2.0
            if math.isinf(hi):
                return rad
    lo = 0.0
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        if _phi(params, mid) >= 3.0:
            lo = mid
        else:
            hi = mid
        if hi - lo <= rtol * hi:
            break
    return ExtendedRadius(lo)


def chord_area_constant(eps0: float, r2: "ExtendedRadius | float") -> float:
    if not eps0 > 0:
        raise ValueError(f"eps0 must be > 0, got {eps0}")
    r2 = ExtendedRadius.of(r2)
    if not r2.is_finite:
        return float(eps0)
    return min(eps0, r2.value**2 / eps0)
