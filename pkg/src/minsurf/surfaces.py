"""Built-in surfaces and surface lookup by name."""
from __future__ import annotations

import math
from pathlib import Path

from .laurent import LaurentPoly
from .weierstrass import WeierstrassData, load_surface

_Z = LaurentPoly.monomial(1)
# log(r_max/r_min) = pi makes cells square for n_theta = 2 n_r
_HALF_PI_ANNULUS = (math.exp(-math.pi / 2), math.exp(math.pi / 2))


def plane(r_max: float = 5.0) -> WeierstrassData:
    """The flat plane (g = 0, omega = dz) on a disk; lambda = 1/2."""
    return WeierstrassData(LaurentPoly(), LaurentPoly.constant(1.0), 0.0, r_max, base_point=0j, name="plane")


def enneper(r_max: float = 3.0) -> WeierstrassData:
    return WeierstrassData(_Z, LaurentPoly.constant(1.0), 0.0, r_max, base_point=0j, name="enneper")


def catenoid(domain: tuple[float, float] = _HALF_PI_ANNULUS) -> WeierstrassData:
    """Catenoid with unit neck; z = e^(t + i theta) has height t and f(1) = 0."""
    return WeierstrassData(_Z, _Z**-2, domain[0], domain[1], base_point=1.0 + 0j, name="catenoid")


BUILTIN_NAMES = ("plane", "enneper", "catenoid", "henneberg:<m>")


def get_surface(source: str) -> WeierstrassData:
    """Resolve ``plane``, ``enneper``, ``catenoid``, ``henneberg:<m>`` or a JSON path."""
    if source == "plane":
        return plane()
    if source == "enneper":
        return enneper()
    if source == "catenoid":
        return catenoid()
    if source.startswith("henneberg"):
        from . import henneberg

        _, _, m = source.partition(":")
        try:
            m = int(m) if m else 1
        except ValueError as exc:
            raise ValueError(f"bad Henneberg parameter in {source!r}") from exc
        if m > henneberg.MAX_M:
            raise ValueError(f"m is capped at {henneberg.MAX_M}")
        return henneberg.make(m).data
    path = Path(source)
    if not path.exists():
        raise ValueError(f"unknown surface {source!r}: not a built-in name ({', '.join(BUILTIN_NAMES)}) or a file")
    return load_surface(path)
