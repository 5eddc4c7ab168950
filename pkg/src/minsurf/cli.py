"""Command-line front end: ``minsurf bounds | verify | export``.

Exit codes: 0 all non-vacuous checks pass, 1 a check failed, 2 usage or
configuration error, 3 numerical or domain error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import warnings
from dataclasses import dataclass, field

from . import bounds, henneberg
from .report import VerificationReport, all_passed, atomic_write_text, reports_document, upper_bound_report
from .surfaces import get_surface
from .weierstrass import (
    DegenerateDomainError,
    PeriodError,
    WeierstrassData,
    gauss_map_degree,
    total_branching_order,
    total_curvature,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3

CHECKS = ("monotonicity", "chord-arc", "laplacian", "oracle", "symmetry", "curvature")
DEFAULT_RADII = (0.25, 0.5, 1.0, 2.0)
# order 2 overestimates distances enough to lose A(r) >= pi r^2 near a
# catenoid waist at small r; order 6 keeps the distortion below 0.35%
MONOTONICITY_STENCIL = 6
# Morse index of the built-in surfaces (the chord-arc bounds need I itself)
KNOWN_INDEX = {"plane": 0, "catenoid": 1, "enneper": 1}


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    surface: str
    checks: list[str]
    n_r: int = 256
    n_theta: int = 512
    stencil: int | None = None
    radii: list[float] = field(default_factory=lambda: list(DEFAULT_RADII))
    R: float = 1.0
    index: int | None = None
    domain: tuple[float, float] | None = None
    output: str | None = None
    fmt: str = "json"
    timestamp: bool = True

    def __post_init__(self):
        if self.n_r < 16 or self.n_theta < 32:
            raise UsageError("resolution too coarse: need --nr >= 16 and --ntheta >= 32")
        if self.n_r * self.n_theta > 4_200_000:
            raise UsageError("resolution above 2048 x 2048 is not supported")
        if any(r <= 0 for r in self.radii):
            raise UsageError("radii must be positive")
        self.radii = sorted(self.radii)
        if not self.R > 0:
            raise UsageError("--R must be positive")
        if self.stencil is not None and not 1 <= self.stencil <= 8:
            raise UsageError("--stencil must be in 1..8")


def _float_list(text: str) -> list[float]:
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from exc


def _domain(text: str) -> tuple[float, float]:
    vals = _float_list(text)
    if len(vals) != 2 or not 0 <= vals[0] < vals[1]:
        raise argparse.ArgumentTypeError("--domain expects r_min,r_max with 0 <= r_min < r_max")
    return vals[0], vals[1]


def _nonneg_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from exc
    if v < 0:
        raise argparse.ArgumentTypeError("must be >= 0")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="minsurf", description="Numerical checks of minimal-surface estimates.")
    sub = p.add_subparsers(dest="command", required=True)

    b = sub.add_parser("bounds", help="print the explicit constants for given index and branching")
    b.add_argument("--index", type=_nonneg_int, default=None, help="Morse index I")
    b.add_argument("--branch", type=_nonneg_int, default=0, help="total branching order B")
    b.add_argument("--profile", help="JSON topology profile (orientable, genus, ends, B)")
    b.add_argument("-o", "--output")

    def mesh_args(q):
        q.add_argument("--surface", required=True, help="plane, enneper, catenoid, henneberg:<m> or a JSON file")
        q.add_argument("--nr", type=int, default=256)
        q.add_argument("--ntheta", type=int, default=512)
        q.add_argument("--stencil", type=int, default=None)
        q.add_argument("--domain", type=_domain, default=None, help="override r_min,r_max")

    v = sub.add_parser("verify", help="run verification checks and write a report")
    mesh_args(v)
    v.add_argument("--check", action="append", choices=CHECKS, required=True)
    v.add_argument("--radii", type=_float_list, default=list(DEFAULT_RADII))
    v.add_argument("--R", type=float, default=1.0)
    v.add_argument("--index", type=_nonneg_int, default=None, help="Morse index (needed for JSON surfaces)")
    v.add_argument("--format", choices=("json", "csv"), default="json")
    v.add_argument("--no-timestamp", action="store_true")
    v.add_argument("-o", "--output")

    e = sub.add_parser("export", help="write the meshed surface")
    mesh_args(e)
    e.add_argument("--format", choices=("ply", "obj", "json", "csv"), default="ply")
    e.add_argument("-o", "--output", required=True)
    return p


# -- bounds -------------------------------------------------------------------
def cmd_bounds(args) -> int:
    profile = None
    if args.profile:
        try:
            with open(args.profile) as fh:
                profile = bounds.TopologyProfile.from_dict(json.load(fh))
        except (OSError, KeyError, ValueError, TypeError) as exc:
            raise UsageError(f"cannot read profile {args.profile}: {exc}") from exc
    I = args.index
    if I is None:
        if profile is None:
            raise UsageError("give --index or --profile")
        I = bounds.index_lower_bound(profile)
    B = args.branch if profile is None else profile.B
    bset = bounds.bound_set(I, B, profile)
    doc = bset.to_dict()
    text = json.dumps(doc, indent=2) + "\n"
    if args.output:
        atomic_write_text(args.output, text)
    print(text, end="")
    return EXIT_OK


# -- verify -------------------------------------------------------------------
def _load(source: str, domain) -> WeierstrassData:
    try:
        data = get_surface(source)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot load surface {source!r}: {exc}") from exc
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    if domain is not None:
        data = WeierstrassData(
            data.g, data.omega, domain[0], domain[1], data.quotient, data.base_point, data.name
        )
    return data


def _henneberg_m(data: WeierstrassData) -> int:
    if not data.name.startswith("henneberg:"):
        raise UsageError(f"check only applies to henneberg:<m> surfaces, not {data.name}")
    return int(data.name.partition(":")[2])


def _index_for(cfg: RunConfig, data: WeierstrassData) -> int:
    if cfg.index is not None:
        return cfg.index
    if data.name in KNOWN_INDEX:
        return KNOWN_INDEX[data.name]
    if data.name.startswith("henneberg:"):
        return 0  # stable: the unoriented Gauss map is a diffeomorphism onto P^2
    raise UsageError(f"--index is required for surface {data.name}")


def run_checks(cfg: RunConfig) -> list[VerificationReport]:
    from .intrinsic import checks as ich
    from .intrinsic.mesh import build_mesh

    data = _load(cfg.surface, cfg.domain)
    reports: list[VerificationReport] = []
    mesh = None

    def get_mesh():
        nonlocal mesh
        if mesh is None:
            mesh = build_mesh(data, cfg.n_r, cfg.n_theta, min(cfg.stencil or 2, 8))
        return mesh

    for check in cfg.checks:
        if check == "monotonicity":
            m = get_mesh()
            reports.append(
                ich.verify_monotonicity(
                    m, m.nearest_vertex(data.base_point), cfg.radii,
                    stencil_order=cfg.stencil or MONOTONICITY_STENCIL,
                )
            )
        elif check == "chord-arc":
            m = get_mesh()
            I = _index_for(cfg, data)
            B = total_branching_order(data)
            reports.extend(ich.verify_chord_arc(m, m.nearest_vertex(data.base_point), cfg.R, I, B, stencil_order=cfg.stencil))
        elif check == "laplacian":
            reports.append(ich.laplacian_identity_check(get_mesh()))
        elif check == "oracle":
            m_ = _henneberg_m(data)
            reports.append(henneberg.oracle_match(henneberg.HennebergSurface(m_, data)))
        elif check == "symmetry":
            m_ = _henneberg_m(data)
            reports.extend(henneberg.symmetry_check(henneberg.HennebergSurface(m_, data)))
        elif check == "curvature":
            reports.append(curvature_report(data, max(cfg.n_r, cfg.n_theta)))
    return reports


def curvature_report(data: WeierstrassData, resolution: int = 1024, rtol: float = 0.02) -> VerificationReport:
    """Compare the integrated curvature with -4 pi deg(g) (halved on quotients)."""
    expected = -4 * math.pi * gauss_map_degree(data.g) * (0.5 if data.quotient else 1.0)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", RuntimeWarning)
        total = total_curvature(data, resolution)
    err = abs(total - expected) / abs(expected) if expected else abs(total)
    rep = upper_bound_report(
        "curvature", data.name, err, rtol,
        params={"expected": expected, "rtol": rtol},
        resolution={"quad_resolution": resolution, "r_min": data.r_min, "r_max": data.r_max},
        details={"total_curvature": total, "warnings": [str(w.message) for w in caught]},
    )
    rep.passed = err <= rtol
    return rep


def _csv_reports(reports: list[VerificationReport]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["check", "surface", "measured", "bound", "margin", "pass", "vacuous"])
    for r in reports:
        d = r.to_dict()
        w.writerow([d["check"], d["surface"], repr(d["measured"]), repr(d["bound"]), repr(d["margin"]), d["pass"], d["vacuous"]])
    return buf.getvalue()


def cmd_verify(args) -> int:
    cfg = RunConfig(
        surface=args.surface, checks=args.check, n_r=args.nr, n_theta=args.ntheta, stencil=args.stencil,
        radii=args.radii, R=args.R, index=args.index, domain=args.domain, output=args.output,
        fmt=args.format, timestamp=not args.no_timestamp,
    )
    reports = run_checks(cfg)
    for r in reports:
        print(r.summary())
    if cfg.output:
        if cfg.fmt == "csv":
            atomic_write_text(cfg.output, _csv_reports(reports))
        else:
            atomic_write_text(cfg.output, json.dumps(reports_document(reports, cfg.timestamp), indent=2) + "\n")
    return EXIT_OK if all_passed(reports) else EXIT_FAIL


# -- export -------------------------------------------------------------------
def cmd_export(args) -> int:
    from .intrinsic.export import write_mesh
    from .intrinsic.mesh import build_mesh

    data = _load(args.surface, args.domain)
    if args.format == "json":
        atomic_write_text(args.output, json.dumps(data.to_dict(), indent=2) + "\n")
        return EXIT_OK
    mesh = build_mesh(data, args.nr, args.ntheta, args.stencil or 2)
    write_mesh(mesh, args.output, args.format)
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    handlers = {"bounds": cmd_bounds, "verify": cmd_verify, "export": cmd_export}
    try:
        return handlers[args.command](args)
    except UsageError as exc:
        print(f"minsurf: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"minsurf: I/O error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, ArithmeticError, DegenerateDomainError, PeriodError) as exc:
        print(f"minsurf: numerical/domain error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
