import math

import numpy as np
import pytest

from minsurf import henneberg
from minsurf.intrinsic.checks import (
    cotan_laplacian,
    is_flat_plane,
    laplacian_identity_check,
    verify_chord_arc,
    verify_monotonicity,
)
from minsurf.intrinsic.mesh import build_mesh
from minsurf.surfaces import catenoid, enneper, plane

WIDE_CATENOID = (math.exp(-3), math.exp(3))


def by_check(reports):
    return {r.check: r for r in reports}


def test_cotan_laplacian_flat_linear_functions_harmonic():
    m = build_mesh(plane(), 32, 64)
    rows, cols, w, area = cotan_laplacian(m.pos, m.triangles)
    import scipy.sparse as sp

    W = sp.coo_matrix((w, (rows, cols)), shape=(m.n_vertices,) * 2).tocsr()
    inner = ~m.boundary
    for k in range(2):
        u = m.pos[:, k]
        lap = W @ u - np.asarray(W.sum(axis=1)).ravel() * u
        assert np.max(np.abs(lap[inner])) < 1e-12


def test_laplacian_identity_plane_exact():
    rep = laplacian_identity_check(build_mesh(plane(), 64, 128))
    assert rep.passed and rep.measured < 1e-8


@pytest.mark.parametrize("surface", [catenoid(), enneper()])
def test_laplacian_identity_converges(surface):
    errs = [laplacian_identity_check(build_mesh(surface, n, 2 * n)).measured for n in (64, 128)]
    assert errs[1] < errs[0] < 0.05


def test_laplacian_identity_near_branch_points():
    coarse, fine = (laplacian_identity_check(build_mesh(henneberg.make(1).data, n, 2 * n)) for n in (65, 129))
    # grid-scale floor next to the branch points, convergence elsewhere
    assert math.isfinite(coarse.measured) and coarse.measured == pytest.approx(fine.measured, rel=0.05)
    assert fine.details["mean_residual"] < 0.5 * coarse.details["mean_residual"]
    wide = laplacian_identity_check(build_mesh(henneberg.make(1).data, 65, 128), branch_rings=6)
    assert wide.passed and wide.measured < coarse.measured


def test_monotonicity_plane_near_equality():
    m = build_mesh(plane(), 128, 256)
    rep = verify_monotonicity(m, 0, [0.25, 0.5, 1.0])
    assert rep.passed
    ratios = [p["ratio"] for p in rep.details["per_radius"]]
    assert all(0.99 <= r <= 1.0 + 1e-9 for r in ratios)


def test_monotonicity_catenoid_pass():
    m = build_mesh(catenoid(WIDE_CATENOID), 193, 384)
    rep = verify_monotonicity(m, m.nearest_vertex(1.0), [0.5, 1.0], stencil_order=6)
    assert rep.passed, rep.summary()
    assert rep.measured >= 1.0


def test_monotonicity_boundary_contact_fails():
    m = build_mesh(plane(1.0), 64, 128)
    rep = verify_monotonicity(m, 0, [0.2, 1.0])
    assert not rep.passed and rep.details["touches_boundary"]


def test_is_flat_plane():
    assert is_flat_plane(build_mesh(plane(), 32, 64))
    assert not is_flat_plane(build_mesh(enneper(), 32, 64))


def test_chord_arc_catenoid():
    m = build_mesh(catenoid(WIDE_CATENOID), 97, 192)
    reps = by_check(verify_chord_arc(m, m.nearest_vertex(1.0), 1.0, 1, 0, n_samples=32))
    assert reps["chord-arc:boundary-distance"].measured < math.sqrt(3)
    assert reps["chord-arc:diameter"].measured < 4 * math.pi
    assert reps["chord-arc:boundary-count"].measured <= 2
    assert all(r.passed for r in reps.values())


def test_chord_arc_plane_uses_equality_clause():
    m = build_mesh(plane(), 64, 128)
    reps = by_check(verify_chord_arc(m, 0, 1.0, 0, 0, n_samples=32))
    diam = reps["chord-arc:diameter"]
    assert diam.params["clause"] == "plane"
    assert diam.passed and not diam.vacuous
    assert reps["chord-arc:boundary-count"].vacuous


def test_chord_arc_henneberg_quotient():
    data = henneberg.make(1, (math.exp(-1.5), math.exp(1.5))).data
    m = build_mesh(data, 65, 192)
    reps = verify_chord_arc(m, m.nearest_vertex(data.base_point), 1.0, 0, 2, n_samples=16)
    by = by_check(reps)
    assert by["chord-arc:boundary-distance"].bound == pytest.approx(math.sqrt(3.5) * by["chord-arc:boundary-distance"].params["R_used"])
    assert all(r.passed for r in reps), [r.summary() for r in reps]


def test_chord_arc_requires_base_on_origin():
    m = build_mesh(plane(), 32, 64)
    with pytest.raises(ValueError):
        verify_chord_arc(m, m.nearest_vertex(2.0), 1.0, 0, 0)
