"""Mesh construction, invariants, refinement, and the dump format."""

import numpy as np
import pytest

from liouville_lab import (ConformalMap, disjoint_union, dump_mesh, fill_holes,
                           mesh_annulus, mesh_disk, mesh_mapped_disk, refine,
                           translate)
from liouville_lab.mesh import _loop_signed_area

import oracles as O

SQRT8 = np.sqrt(8.0)


def test_disk_area_unit():
    m = mesh_disk(1.0, 0.05)
    assert abs(m.area() - np.pi) / np.pi < 1e-2


def test_disk_area_sqrt8():
    m = mesh_disk(SQRT8, 0.05)
    assert abs(m.area() - 8 * np.pi) / (8 * np.pi) < 1e-2


def test_disk_euler_characteristic():
    for h in (0.2, 0.1):
        m = mesh_disk(1.0, h)
        assert m.euler_characteristic() == 1


def test_disk_resolution_below_target():
    for h in (0.2, 0.1, 0.05):
        assert mesh_disk(1.0, h).resolution_h <= h


def test_disk_invariants_validate():
    mesh_disk(1.0, 0.1).validate()
    mesh_annulus(1.0, 2.0, 0.1).validate()


def test_disk_rejects_bad_inputs():
    with pytest.raises(ValueError):
        mesh_disk(-1.0, 0.1)
    with pytest.raises(ValueError):
        mesh_disk(1.0, -0.1)
    with pytest.raises(ValueError):
        mesh_disk(1.0, 2.0)


def test_annulus_area_and_loops():
    m = mesh_annulus(1.0, 2.0, 0.05)
    assert abs(m.area() - 3 * np.pi) / (3 * np.pi) < 1e-2
    assert len(m.boundary_loops) == 2
    assert m.euler_characteristic() == 0
    assert m.hole_count() == 1


def test_annulus_rejects_swapped_radii():
    with pytest.raises(ValueError):
        mesh_annulus(2.0, 1.0, 0.1)


def test_loop_orientation():
    m = mesh_annulus(1.0, 2.0, 0.15)
    areas = [_loop_signed_area(m.vertices, lp) for lp in m.boundary_loops]
    assert areas[0] > 0       # outer loop counterclockwise
    assert areas[1] < 0       # hole loop clockwise
    d = mesh_disk(1.0, 0.15)
    assert _loop_signed_area(d.vertices, d.boundary_loops[0]) > 0


def test_mapped_disk_identity_matches_disk():
    ident = ConformalMap.scaled_rotation(1.0)
    m = mesh_mapped_disk(ident, 0.1)
    d = mesh_disk(1.0, 0.1)
    assert abs(m.area() - d.area()) < 1e-12
    assert m.num_triangles == d.num_triangles


def test_mapped_disk_scaling_area():
    m = mesh_mapped_disk(ConformalMap.scaled_rotation(2.0), 0.1)
    assert abs(m.area() - 4 * np.pi) / (4 * np.pi) < 1e-2


def test_mapped_disk_quadratic_area_vs_oracle():
    # area of the image of z + 0.3 z^2, oracle = dense quadrature of |Phi'|^2
    target = O.mapped_area_gauss([1.0, 0.3])
    assert abs(target - 1.18 * np.pi) < 1e-9
    m = mesh_mapped_disk(ConformalMap.polynomial([1.0, 0.3]), 0.05)
    assert abs(m.area() - target) / target < 1e-2
    m.validate()


def test_refine_splits_and_preserves_topology():
    m = mesh_disk(1.0, 0.2)
    r = refine(m)
    assert r.num_triangles == 4 * m.num_triangles
    assert r.euler_characteristic() == m.euler_characteristic()
    r.validate()
    a = mesh_annulus(1.0, 2.0, 0.2)
    ra = refine(a)
    assert ra.euler_characteristic() == 0
    ra.validate()


def test_refine_area_error_drops_quadratically():
    m = mesh_disk(1.0, 0.1)
    e0 = abs(m.area() - np.pi)
    e1 = abs(refine(m).area() - np.pi)
    e2 = abs(refine(refine(m)).area() - np.pi)
    assert e0 / e1 > 3.0
    assert e1 / e2 > 3.0


def test_refine_projects_boundary_nodes():
    m = refine(mesh_disk(1.0, 0.2))
    r = np.hypot(*m.vertices[m.boundary_nodes()].T)
    assert np.abs(r - 1.0).max() < 1e-12
    a = refine(mesh_annulus(1.0, 2.0, 0.2))
    inner = a.boundary_loops[1]
    r_in = np.hypot(*a.vertices[inner].T)
    assert np.abs(r_in - 1.0).max() < 1e-12


def test_refine_mapped_mesh_stays_exact_image():
    cmap = ConformalMap.polynomial([1.0, 0.3])
    m = refine(mesh_mapped_disk(cmap, 0.2))
    z = m.preimage[:, 0] + 1j * m.preimage[:, 1]
    img = np.asarray(cmap.evaluate(z))
    assert np.abs(img - (m.vertices[:, 0] + 1j * m.vertices[:, 1])).max() < 1e-13
    # boundary preimages stay on the unit circle
    bnd = m.boundary_nodes()
    assert np.abs(np.abs(z[bnd]) - 1.0).max() < 1e-13


def test_fill_holes_produces_simply_connected_ambient():
    a = mesh_annulus(1.0, 2.0, 0.15)
    amb = fill_holes(a)
    amb.validate()
    assert amb.euler_characteristic() == 1
    assert amb.hole_count() == 0
    assert np.array_equal(amb.vertices[:a.num_vertices], a.vertices)
    assert abs(amb.area() - 4 * np.pi) / (4 * np.pi) < 1e-2
    assert len(amb.hole_fills) == 1


def test_translate_and_disjoint_union():
    d1 = translate(mesh_disk(0.35, 0.1), -0.5, 0.0)
    d2 = translate(mesh_disk(0.35, 0.1), 0.5, 0.0)
    u = disjoint_union(d1, d2)
    u.validate()
    assert len(u.boundary_loops) == 2
    assert abs(u.area() - 2 * np.pi * 0.35 ** 2) / (2 * np.pi * 0.35 ** 2) < 1e-2


def test_dump_mesh_format(tmp_path):
    m = mesh_annulus(1.0, 2.0, 0.3)
    path = tmp_path / "mesh.txt"
    dump_mesh(m, path)
    lines = path.read_text().strip().splitlines()
    v, e, f, k = (int(x) for x in lines[0].split())
    assert (v, f, k) == (m.num_vertices, m.num_triangles, 1)
    assert e == len(m.edges())
    coords = np.array([[float(t) for t in ln.split()] for ln in lines[1:1 + v]])
    assert np.allclose(coords, m.vertices)
    tris = np.array([[int(t) for t in ln.split()] for ln in lines[1 + v:1 + v + f]])
    assert np.array_equal(tris, m.triangles)
    loops = [np.array([int(t) for t in ln.split()]) for ln in lines[1 + v + f:]]
    assert len(loops) == 2
