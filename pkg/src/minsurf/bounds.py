"""Index, spinning, boundary-count and chord-arc bounds for branched minimal surfaces of finite index."""
from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class TopologyProfile:
    """Topological data of a complete finitely branched minimal surface.

    ``genus`` is the genus of the surface when orientable and the genus of
    its oriented double cover otherwise.  ``ends`` lists the multiplicity of
    each end as a multi-graph over its limiting tangent plane.
    """

    orientable: bool
    genus: int
    ends: tuple[int, ...]
    B: int = 0

    def __post_init__(self):
        object.__setattr__(self, "ends", tuple(int(d) for d in self.ends))
        if self.genus < 0:
            raise ValueError("genus must be >= 0")
        if self.B < 0:
            raise ValueError("total branching order must be >= 0")
        if not self.ends:
            raise ValueError("a complete non-compact surface has at least one end")
        if any(d < 1 for d in self.ends):
            raise ValueError(f"end multiplicities must be >= 1, got {self.ends}")

    @property
    def e(self) -> int:
        return len(self.ends)

    @classmethod
    def from_dict(cls, d: dict) -> TopologyProfile:
        return cls(
            orientable=bool(d["orientable"]),
            genus=int(d.get("genus", 0)),
            ends=tuple(d["ends"]),
            B=int(d.get("B", 0)),
        )


def index_lower_bound(profile: TopologyProfile) -> int:
    """Smallest index compatible with 3I >= (topological count), clamped at 0."""
    ends_term = 2 * sum(d + 1 for d in profile.ends)
    if profile.orientable:
        rhs = 2 * profile.genus + ends_term - 2 * profile.B - 5
    else:
        rhs = profile.genus + ends_term - 2 * profile.B - 4
    return max(0, -((-rhs) // 3))


def total_spinning(profile: TopologyProfile) -> int:
    return sum(profile.ends)


def spinning_bound(I: int, e: int, B: int) -> int:
    """Upper bound for twice the total spinning: 2S <= 3I - 2e + 2B + 5."""
    if I < 0 or B < 0 or e < 1:
        raise ValueError("need I >= 0, B >= 0, e >= 1")
    return 3 * I - 2 * e + 2 * B + 5


def chord_arc_L(I: int, B: int) -> float:
    if I < 0 or B < 0:
        raise ValueError("need I, B >= 0")
    return math.sqrt(0.5 * (3 * I + 2 * B + 3))


def chord_arc_C(I: int, B: int) -> float:
    # can be negative for (0, 0); the bound is then vacuous
    L = chord_arc_L(I, B)
    return 8 * L**3 + 2 * math.pi * L**2 - 20 * L - 0.5 * math.pi


def boundary_count_bound(I: int, B: int) -> int:
    if I < 0 or B < 0:
        raise ValueError("need I, B >= 0")
    return 3 * I + 2 * B - 1


def pair_distance_bound(I: int, B: int, R: float, boundary_length: float) -> float:
    """Intrinsic diameter bound for Omega_R from its boundary length."""
    return 2 * chord_arc_L(I, B) * (3 * I + 2 * B - 1) * R + 0.5 * boundary_length


@dataclass(frozen=True)
class BoundSet:
    I: int
    B: int
    L_hat: float
    C_hat: float
    b_max: int
    spinning_2S_ub: int | None = None
    index_lb: int | None = None

    @property
    def C_vacuous(self) -> bool:
        return self.C_hat <= 0

    @property
    def b_vacuous(self) -> bool:
        return self.b_max < 0

    def to_dict(self) -> dict:
        return {
            "I": self.I,
            "B": self.B,
            "L_hat": self.L_hat,
            "C_hat": self.C_hat,
            "C_hat_vacuous": self.C_vacuous,
            "b_max": self.b_max,
            "b_max_vacuous": self.b_vacuous,
            "spinning_2S_ub": self.spinning_2S_ub,
            "index_lb": self.index_lb,
        }


def bound_set(I: int, B: int, profile: TopologyProfile | None = None) -> BoundSet:
    e = profile.e if profile is not None else 1
    return BoundSet(
        I=I,
        B=B,
        L_hat=chord_arc_L(I, B),
        C_hat=chord_arc_C(I, B),
        b_max=boundary_count_bound(I, B),
        spinning_2S_ub=spinning_bound(I, e, B),
        index_lb=index_lower_bound(profile) if profile is not None else None,
    )
