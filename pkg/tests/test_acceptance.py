"""Acceptance suite: one printed PASS/FAIL line per criterion.

Run with ``pytest tests/test_acceptance.py -v`` (lines appear even without -s).
"""
import json
import math
import warnings

import numpy as np
import pytest

from minsurf import bounds, henneberg
from minsurf.cli import RunConfig, run_checks
from minsurf.comparison import FA_SERIES_THRESHOLD, ComparisonParams, f_a, mean_curvature_radius, yau_r2
from minsurf.intrinsic.checks import laplacian_identity_check, verify_chord_arc, verify_monotonicity
from minsurf.intrinsic.mesh import build_mesh
from minsurf.report import reports_document
from minsurf.surfaces import catenoid, enneper, plane
from minsurf.weierstrass import branch_points, topology_profile, total_curvature

RADII = (0.25, 0.5, 1.0, 2.0)
MONO_STENCIL = 6
CHORD_ARC_DOMAIN = (math.exp(-3), math.exp(3))


@pytest.fixture
def say(capsys):
    def emit(n, ok, msg):
        with capsys.disabled():
            print(f"\n[{'PASS' if ok else 'FAIL'}] criterion {n}: {msg}")

    return emit


def test_criterion_01_henneberg_oracle(say):
    errs = {m: henneberg.oracle_match(henneberg.make(m), 1000, seed=0).details["max_abs_error"] for m in (1, 3, 5)}
    ok = all(e < 1e-8 for e in errs.values())
    say(1, ok, "max |numeric - closed form| " + ", ".join(f"m={m}: {e:.2e}" for m, e in errs.items()) + " (< 1e-8)")
    assert ok


def test_criterion_02_branch_images(say):
    worst = 0.0
    for m, height in ((1, 1.0), (3, 0.5)):
        for bp in branch_points(henneberg.make(m).data):
            img = np.array(bp.image)
            worst = max(worst, min(np.linalg.norm(img - [0, 0, s * height]) for s in (1, -1)))
    ok = worst < 1e-8
    say(2, ok, f"branch images of H_1, H_3 within {worst:.2e} of (0,0,+-2/(m+1)) (< 1e-8)")
    assert ok


def test_criterion_03_total_curvature(say):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        h1 = total_curvature(henneberg.make(1, (1 / 50, 50)).data, 1024)
        cat = total_curvature(catenoid((1 / 50, 50)), 1024)
    e1 = abs(h1 / (-2 * math.pi) - 1)
    e2 = abs(cat / (-4 * math.pi) - 1)
    ok = e1 < 0.02 and e2 < 0.02
    say(3, ok, f"H_1 quotient {h1:.5f} vs -2pi (rel {e1:.2%}); catenoid cover {cat:.5f} vs -4pi (rel {e2:.2%}) (< 2%)")
    assert ok


def test_criterion_04_monotonicity(say):
    ratios = {}
    for name, data, z0 in (("catenoid", catenoid(), 1.0), ("enneper", enneper(), 0.0)):
        m = build_mesh(data, 512, 1024)
        rep = verify_monotonicity(m, m.nearest_vertex(z0), RADII, stencil_order=MONO_STENCIL)
        assert not rep.details["touches_boundary"]
        ratios[name] = [p["ratio"] for p in rep.details["per_radius"]]
    flat = {}
    for n in (512, 1024):
        m = build_mesh(plane(), n, 2 * n)
        rep = verify_monotonicity(m, 0, RADII)
        flat[n] = [p["ratio"] for p in rep.details["per_radius"]]
    curved_ok = all(r >= 1.0 for rs in ratios.values() for r in rs)
    flat_ok = all(0.97 <= r <= 1.0 for r in flat[512]) and all(0.995 <= r <= 1.0 for r in flat[1024])
    ok = curved_ok and flat_ok
    say(
        4,
        ok,
        "A(r)/(pi r^2) at r=0.25..2: "
        + "; ".join(f"{k} min {min(v):.5f}" for k, v in ratios.items())
        + f"; plane 512x1024 [{min(flat[512]):.6f}, {max(flat[512]):.6f}]"
        + f", 1024x2048 [{min(flat[1024]):.6f}, {max(flat[1024]):.6f}]",
    )
    assert ok


def test_criterion_05_laplacian_identity(say):
    res = {}
    for name, data in (("catenoid", catenoid()), ("enneper", enneper())):
        res[name] = [laplacian_identity_check(build_mesh(data, n, 2 * n)).measured for n in (256, 512)]
    ok = all(v[1] < 0.05 and v[1] < v[0] for v in res.values())
    say(5, ok, "max |Delta|f|^2 - 4| at 256x512 -> 512x1024: " + "; ".join(f"{k} {v[0]:.2e} -> {v[1]:.2e}" for k, v in res.items()))
    assert ok


def _chord_arc(c: float):
    data = catenoid(CHORD_ARC_DOMAIN)
    if c != 1.0:
        data = data.scaled(c)
    m = build_mesh(data, 129, 256)
    return verify_chord_arc(m, m.nearest_vertex(1.0), c * 1.0, 1, 0)


def test_criterion_06_chord_arc(say):
    reps = {r.check: r for r in _chord_arc(1.0)}
    d_bdry = reps["chord-arc:boundary-distance"].measured
    diam = reps["chord-arc:diameter"].measured
    b = reps["chord-arc:boundary-count"].measured
    C = bounds.chord_arc_C(1, 0)
    ok = d_bdry < math.sqrt(3) and diam < 4 * math.pi and diam < C and b <= 2
    say(6, ok, f"catenoid R=1: d(p,bdry) {d_bdry:.4f} < sqrt3; pair dist {diam:.4f} < 4pi and < C_hat={C:.3f}; b={b} <= 2")
    assert ok


def test_criterion_07_index_bounds(say):
    cat = bounds.index_lower_bound(topology_profile(catenoid()))
    enn = bounds.index_lower_bound(topology_profile(enneper()))
    hm = {}
    for m in (1, 3, 5, 7, 9):
        prof = topology_profile(henneberg.make(m).data)
        S = bounds.total_spinning(prof)
        margin = bounds.spinning_bound(0, prof.e, prof.B) - 2 * S
        hm[m] = (bounds.index_lower_bound(prof), S, margin)
    ok = cat == 1 and enn == 1 and all(lb == 0 and S == m + 2 and margin == 1 for m, (lb, S, margin) in hm.items())
    say(7, ok, f"index lb catenoid {cat}, enneper {enn}, H_m {[v[0] for v in hm.values()]}; spinning S=m+2 with margin {[v[2] for v in hm.values()]}")
    assert ok


def test_criterion_08_comparison(say):
    gap = 0.0
    for a in (-4.0, -1.0, 1.0, 4.0):
        t0 = FA_SERIES_THRESHOLD / math.sqrt(abs(a))
        gap = max(gap, abs(f_a(a, t0 * (1 - 1e-12)) - f_a(a, t0 * (1 + 1e-12))))
    zero_ok = all(f_a(a, 0.0) == a / 3 for a in (-4.0, -1.0, 1.0, 4.0))
    r0_ok = float(mean_curvature_radius(1, 0)) == pytest.approx(math.pi / 2, rel=1e-15) and not mean_curvature_radius(0, 0).is_finite
    r2_err = abs(float(yau_r2(ComparisonParams(a=0, H0=1))) - 0.5 * math.log(math.pi / 3))
    ok = gap < 1e-10 and zero_ok and r0_ok and r2_err < 1e-9
    say(8, ok, f"f_a switch gap {gap:.1e}; f_a(0)=a/3 {zero_ok}; R_0(1,0)=pi/2, R_0(0,0)=inf {r0_ok}; r_2 error {r2_err:.1e}")
    assert ok


def test_criterion_09_scale_invariance(say):
    outcomes = {}
    for c in (1.0, 0.5, 3.0):
        outcomes[c] = tuple((r.check, r.passed, r.vacuous) for r in _chord_arc(c))
    ok = outcomes[0.5] == outcomes[1.0] == outcomes[3.0]
    say(9, ok, f"chord-arc pass/fail under c in {{0.5, 3}} identical to c=1: {[p for _, p, _ in outcomes[1.0]]}")
    assert ok


def test_criterion_10_determinism(say):
    def suite():
        reports = []
        for surface, checks, extra in (
            ("henneberg:3", ["oracle", "symmetry"], {}),
            ("plane", ["chord-arc", "laplacian"], {"n_r": 64, "n_theta": 128}),
            ("catenoid", ["monotonicity", "curvature"], {"n_r": 128, "n_theta": 256}),
        ):
            reports += run_checks(RunConfig(surface=surface, checks=checks, **extra))
        return json.dumps(reports_document(reports, timestamp=False), indent=2).encode()

    first, second = suite(), suite()
    ok = first == second
    say(10, ok, f"two runs produce byte-identical reports ({len(first)} bytes)")
    assert ok
