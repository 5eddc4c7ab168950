import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from minsurf import henneberg
from minsurf.intrinsic.balls import (
    BoundaryContactWarning,
    OmegaNotCompactError,
    TransversalityError,
    ball_area,
    geodesic_distances,
    omega_component,
)
from minsurf.intrinsic.geodesic import shortest_paths, stencil_distortion, stencil_offsets
from minsurf.intrinsic.mesh import build_mesh
from minsurf.surfaces import catenoid, plane
from minsurf.weierstrass import evaluate


@pytest.fixture(scope="module")
def plane_mesh():
    return build_mesh(plane(), 128, 256, 2)


@pytest.fixture(scope="module")
def cat_mesh():
    return build_mesh(catenoid((math.exp(-2), math.exp(2))), 129, 256, 2)


# -- mesh --------------------------------------------------------------------------
def test_resolution_limits():
    with pytest.raises(ValueError):
        build_mesh(plane(), 8, 64)
    with pytest.raises(ValueError):
        build_mesh(plane(), 32, 16)
    with pytest.raises(ValueError):
        build_mesh(plane(), 32, 64, stencil_order=0)


def test_plane_area_exact(plane_mesh):
    assert plane_mesh.total_area == pytest.approx(math.pi * 25 / 4, rel=1e-12)
    assert plane_mesh.n_vertices == 1 + 128 * 256


def test_catenoid_area_oracle():
    exact = 2 * math.pi * (1 + math.sinh(2) / 2)
    areas = [build_mesh(catenoid((math.exp(-1), math.e)), n, 2 * n).total_area for n in (32, 64, 128)]
    errs = [abs(a - exact) / exact for a in areas]
    assert errs[-1] < 2e-4
    assert errs[0] > errs[1] > errs[2]


def test_cell_areas_nonnegative_and_zero_at_branch_vertices():
    data = henneberg.make(1).data
    m = build_mesh(data, 65, 128)
    assert np.all(m.cell_area >= 0)
    v = m.nearest_vertex(1.0)
    assert m.z[v] == pytest.approx(1.0, abs=1e-12)
    assert m.cell_area[v] == 0.0
    assert set(m.branch_vertices) >= {v}


def test_boundary_flags(cat_mesh, plane_mesh):
    assert cat_mesh.boundary.sum() == 2 * 256
    assert plane_mesh.boundary.sum() == 256
    assert not plane_mesh.boundary[0]


def test_positions_match_evaluate(cat_mesh):
    idx = np.array([0, 17, 5000, cat_mesh.n_vertices - 1])
    np.testing.assert_array_equal(cat_mesh.pos[idx], evaluate(cat_mesh.data, cat_mesh.z[idx]))


def test_antipode_is_an_isometric_involution():
    m = build_mesh(henneberg.make(3).data, 64, 128)
    a = m.antipode
    np.testing.assert_array_equal(a[a], np.arange(m.n_vertices))
    np.testing.assert_allclose(m.pos[a], m.pos, atol=1e-10)
    np.testing.assert_allclose(m.lam[a] * np.abs(m.z[a]), m.lam * np.abs(m.z), rtol=1e-10)
    assert m.area_factor == 0.5


def test_triangles_cover_parameter_domain(plane_mesh):
    t = plane_mesh.triangles
    assert t.min() == 0 and t.max() == plane_mesh.n_vertices - 1
    z = plane_mesh.z[t]
    signed = 0.5 * np.imag(np.conj(z[:, 1] - z[:, 0]) * (z[:, 2] - z[:, 0]))
    assert np.all(signed > 0)


# -- stencils and distances ----------------------------------------------------------------
def test_stencil_offsets_primitive():
    assert len(stencil_offsets(1)) == 8
    assert len(stencil_offsets(2)) == 16
    for di, dj in stencil_offsets(3):
        assert math.gcd(di, dj) == 1


def test_stencil_distortion_values():
    assert stencil_distortion(1) == pytest.approx(1 / math.cos(math.pi / 8) - 1)
    assert stencil_distortion(2) < 0.028
    assert stencil_distortion(3) < stencil_distortion(2) < stencil_distortion(1)


def test_flat_distances_from_centre(plane_mesh):
    d = geodesic_distances(plane_mesh, 0).distance
    assert d[0] == 0
    exact = np.abs(plane_mesh.z) / 2
    inner = ~plane_mesh.boundary
    delta = plane_mesh.distortion
    assert np.all(d[inner] >= exact[inner] * (1 - 1e-12))
    assert np.all(d[inner] <= exact[inner] * (1 + delta) + 1e-12)


def test_flat_distances_off_centre(plane_mesh):
    s = plane_mesh.nearest_vertex(1.0 + 0.5j)
    d = geodesic_distances(plane_mesh, s).distance
    exact = np.abs(plane_mesh.z - plane_mesh.z[s]) / 2
    near = exact < 1.0
    # graph paths are polygonal chords, each no shorter than the straight segment
    assert np.all(d[near] >= exact[near] * (1 - 1e-9))
    assert np.all(d[near] <= exact[near] * (1 + 0.03) + 0.02)


def test_catenoid_meridian_length(cat_mesh):
    m = cat_mesh
    s = m.nearest_vertex(1.0)
    d = geodesic_distances(m, s).distance
    for t in (0.5, 1.0, 1.5, -1.2):
        v = m.nearest_vertex(math.exp(t))
        t_v = math.log(abs(m.z[v]))
        exact = math.sinh(abs(t_v))
        assert exact * (1 - 1e-9) <= d[v] <= exact * (1 + 1e-3)


def test_distance_symmetry_and_edge_lipschitz(cat_mesh):
    m = cat_mesh
    p, q = m.nearest_vertex(0.8 + 0.3j), m.nearest_vertex(-1.5 + 1j)
    dp = shortest_paths(m, [p])
    dq = shortest_paths(m, [q])
    # same path, summed in opposite order
    assert dp[q] == pytest.approx(dq[p], rel=1e-13)
    A = m.grid_adjacency.tocoo()
    w = 0.5 * (m.lam[A.row] + m.lam[A.col]) * np.abs(m.z[A.row] - m.z[A.col])
    w_rev = 0.5 * (m.lam[A.col] + m.lam[A.row]) * np.abs(m.z[A.col] - m.z[A.row])
    np.testing.assert_array_equal(w, w_rev)
    assert np.all(np.abs(dp[A.row] - dp[A.col]) <= w * (1 + 1e-12))


def test_masked_distances_are_longer(cat_mesh):
    m = cat_mesh
    s = m.nearest_vertex(1.0)
    full = shortest_paths(m, [s])
    mask = np.abs(np.angle(m.z) - math.pi / 2) > 0.3
    restricted = shortest_paths(m, [s], mask=mask)
    assert np.all(restricted[mask] >= full[mask] - 1e-12)
    assert np.all(np.isinf(restricted[~mask]))


# -- balls ---------------------------------------------------------------------------
def test_ball_area_flat(plane_mesh):
    f = geodesic_distances(plane_mesh, 0)
    for r in (0.25, 0.5, 1.0):
        clipped = ball_area(plane_mesh, f, r)
        vertex = ball_area(plane_mesh, f, r, method="vertex")
        assert clipped == pytest.approx(math.pi * r * r, rel=1e-3)
        assert vertex == pytest.approx(math.pi * r * r, rel=0.03)
    assert ball_area(plane_mesh, f, 0.0) == 0.0


@given(st.lists(st.floats(0.0, 2.0), min_size=2, max_size=6))
@settings(max_examples=25, deadline=None)
def test_ball_area_monotone(radii):
    m = _small_cat()
    f = geodesic_distances(m, m.nearest_vertex(1.0))
    radii = sorted(radii)
    areas = [ball_area(m, f, r) for r in radii]
    assert all(b >= a for a, b in zip(areas, areas[1:]))


_cache = {}


def _small_cat():
    if "cat" not in _cache:
        _cache["cat"] = build_mesh(catenoid((math.exp(-3), math.exp(3))), 97, 192)
    return _cache["cat"]


def test_ball_area_warns_on_boundary(plane_mesh):
    f = geodesic_distances(plane_mesh, 0)
    with pytest.warns(BoundaryContactWarning):
        ball_area(plane_mesh, f, 2.6)
    with pytest.raises(ValueError):
        ball_area(plane_mesh, f, -1.0)


def test_ball_area_quotient_halved():
    data = henneberg.make(1).data
    m = build_mesh(data, 64, 128)
    f = geodesic_distances(m, m.nearest_vertex(data.base_point))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", BoundaryContactWarning)
        a = ball_area(m, f, 0.2)
    assert a == pytest.approx(math.pi * 0.04, rel=0.05)


# -- Omega_R --------------------------------------------------------------------------------
def test_omega_flat(plane_mesh):
    om = omega_component(plane_mesh, 0, 1.0)
    assert om.b == 1
    assert om.boundary_length == pytest.approx(2 * math.pi, rel=1e-3)
    radius = np.linalg.norm(plane_mesh.pos, axis=1)
    assert np.all(np.abs(radius[om.boundary_vertices] - 1.0) <= plane_mesh.edge_length_max[om.boundary_vertices])
    assert om.mask[0]


def test_omega_catenoid_counts_and_nesting():
    m = _small_cat()
    p0 = m.nearest_vertex(1.0)
    prev = None
    for R in (0.5, 1.0, 2.0, 4.0):
        om = omega_component(m, p0, R)
        assert 1 <= om.b <= 2
        if prev is not None:
            assert np.all(om.mask[prev.mask])
        prev = om


def test_omega_not_compact(plane_mesh):
    with pytest.raises(OmegaNotCompactError):
        omega_component(plane_mesh, 0, 10.0)
    with pytest.raises(ValueError):
        omega_component(plane_mesh, plane_mesh.nearest_vertex(4.0), 1.0)


def test_omega_transversality():
    data = henneberg.make(1, (math.exp(-1.5), math.exp(1.5))).data
    m = build_mesh(data, 97, 256)
    p0 = m.nearest_vertex(data.base_point)
    with pytest.raises(TransversalityError):
        omega_component(m, p0, 1.0)
    om = omega_component(m, p0, 1.0, nudge=True)
    assert om.R > 1.0 and om.nudged
    assert om.lift_connected
