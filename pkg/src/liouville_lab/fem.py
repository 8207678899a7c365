"""P1 finite-element plumbing shared by the field, spectral, and level-set code.

Everything here operates on :class:`~liouville_lab.mesh.Mesh` plus plain nodal
value arrays.  One discretization is used throughout: linear elements, the
cotangent stiffness form, an area/3 lumped mass for pointwise Laplacians, and
a degree-4 triangle rule for integrals of exponentials of P1 fields.
"""

from __future__ import annotations

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .mesh import Mesh

__all__ = [
    "triangle_geometry",
    "stiffness_matrix",
    "lumped_mass",
    "weighted_mass_matrix",
    "integrate_exp",
    "boundary_exp_half",
    "boundary_length",
    "p1_gradients",
    "dirichlet_energy",
    "weighted_l2",
    "solve_dirichlet",
    "interpolator",
]

# Degree-2 rule (edge midpoints) and degree-4 Dunavant rule; barycentric rows.
QUAD3_POINTS = np.array([[0.5, 0.5, 0.0], [0.0, 0.5, 0.5], [0.5, 0.0, 0.5]])
QUAD3_WEIGHTS = np.full(3, 1.0 / 3.0)
QUAD4_POINTS = np.array([
    [0.816847572980459, 0.091576213509771, 0.091576213509771],
    [0.091576213509771, 0.816847572980459, 0.091576213509771],
    [0.091576213509771, 0.091576213509771, 0.816847572980459],
    [0.108103018168070, 0.445948490915965, 0.445948490915965],
    [0.445948490915965, 0.108103018168070, 0.445948490915965],
    [0.445948490915965, 0.445948490915965, 0.108103018168070],
])
QUAD4_WEIGHTS = np.array([0.109951743655322] * 3 + [0.223381589678011] * 3)

# 2-point Gauss on [0, 1], used along boundary and contour segments
GAUSS2 = np.array([0.5 - 0.5 / np.sqrt(3.0), 0.5 + 0.5 / np.sqrt(3.0)])


def triangle_geometry(mesh: Mesh):
    """Areas and P1 basis gradients: returns (areas (nt,), grads (3, nt, 2))."""
    p0 = mesh.vertices[mesh.triangles[:, 0]]
    p1 = mesh.vertices[mesh.triangles[:, 1]]
    p2 = mesh.vertices[mesh.triangles[:, 2]]
    d1, d2 = p1 - p0, p2 - p0
    area = 0.5 * (d1[:, 0] * d2[:, 1] - d1[:, 1] * d2[:, 0])
    if area.min() <= 0:
        raise ValueError(f"degenerate triangle (area {area.min():g}) in assembly")
    inv2a = 1.0 / (2.0 * area)
    g0 = np.stack([(p1[:, 1] - p2[:, 1]) * inv2a, (p2[:, 0] - p1[:, 0]) * inv2a], axis=1)
    g1 = np.stack([(p2[:, 1] - p0[:, 1]) * inv2a, (p0[:, 0] - p2[:, 0]) * inv2a], axis=1)
    g2 = np.stack([(p0[:, 1] - p1[:, 1]) * inv2a, (p1[:, 0] - p0[:, 0]) * inv2a], axis=1)
    return area, np.stack([g0, g1, g2])


def stiffness_matrix(mesh: Mesh) -> sp.csr_matrix:
    """Full (pre-elimination) P1 stiffness; rows sum to zero."""
    area, grads = triangle_geometry(mesh)
    t = mesh.triangles
    nv = mesh.num_vertices
    rows, cols, data = [], [], []
    for a in range(3):
        for b in range(3):
            rows.append(t[:, a])
            cols.append(t[:, b])
            data.append(area * (grads[a][:, 0] * grads[b][:, 0]
                                + grads[a][:, 1] * grads[b][:, 1]))
    K = sp.csr_matrix((np.concatenate(data),
                       (np.concatenate(rows), np.concatenate(cols))),
                      shape=(nv, nv))
    return K


def lumped_mass(mesh: Mesh) -> np.ndarray:
    """Area/3 nodal weights."""
    area = mesh.triangle_areas()
    ml = np.zeros(mesh.num_vertices)
    for a in range(3):
        np.add.at(ml, mesh.triangles[:, a], area / 3.0)
    return ml


def weighted_mass_matrix(mesh: Mesh, wvals: np.ndarray) -> sp.csr_matrix:
    """Consistent mass with weight e^w, w interpolated to quadrature points."""
    area, _ = triangle_geometry(mesh)
    t = mesh.triangles
    nv = mesh.num_vertices
    eq = np.exp(wvals[t] @ QUAD4_POINTS.T)  # (nt, nq)
    rows, cols, data = [], [], []
    for a in range(3):
        for b in range(3):
            rows.append(t[:, a])
            cols.append(t[:, b])
            coeff = QUAD4_WEIGHTS * QUAD4_POINTS[:, a] * QUAD4_POINTS[:, b]
            data.append(area * (eq @ coeff))
    return sp.csr_matrix((np.concatenate(data),
                          (np.concatenate(rows), np.concatenate(cols))),
                         shape=(nv, nv))


def integrate_exp(mesh: Mesh, wvals: np.ndarray) -> float:
    """Integral of e^w over the mesh (same rule as the weighted mass)."""
    area, _ = triangle_geometry(mesh)
    eq = np.exp(wvals[mesh.triangles] @ QUAD4_POINTS.T)
    return float((area * (eq @ QUAD4_WEIGHTS)).sum())


def _loop_segments(mesh: Mesh, loop) -> tuple[np.ndarray, np.ndarray]:
    lp = np.asarray(loop)
    a = mesh.vertices[lp]
    b = mesh.vertices[np.roll(lp, -1)]
    return a, b


def boundary_exp_half(mesh: Mesh, wvals: np.ndarray, loops=None) -> float:
    """Integral of e^{w/2} along the boundary loops (2-point Gauss per edge)."""
    if loops is None:
        loops = range(len(mesh.boundary_loops))
    total = 0.0
    for li in loops:
        lp = np.asarray(mesh.boundary_loops[li])
        nxt = np.roll(lp, -1)
        seg = mesh.vertices[nxt] - mesh.vertices[lp]
        length = np.hypot(seg[:, 0], seg[:, 1])
        wa, wb = wvals[lp], wvals[nxt]
        for g in GAUSS2:
            total += float((0.5 * length * np.exp(0.5 * ((1 - g) * wa + g * wb))).sum())
    return total


def boundary_length(mesh: Mesh, loops=None) -> float:
    if loops is None:
        loops = range(len(mesh.boundary_loops))
    total = 0.0
    for li in loops:
        a, b = _loop_segments(mesh, mesh.boundary_loops[li])
        total += float(np.hypot(*(b - a).T).sum())
    return total


def p1_gradients(mesh: Mesh, vals: np.ndarray) -> np.ndarray:
    """Per-triangle constant gradient of a P1 field, shape (nt, 2)."""
    _, grads = triangle_geometry(mesh)
    t = mesh.triangles
    gx = sum(grads[a][:, 0] * vals[t[:, a]] for a in range(3))
    gy = sum(grads[a][:, 1] * vals[t[:, a]] for a in range(3))
    return np.column_stack([gx, gy])


def dirichlet_energy(mesh: Mesh, vals: np.ndarray) -> float:
    area = mesh.triangle_areas()
    g = p1_gradients(mesh, vals)
    return float((area * (g[:, 0] ** 2 + g[:, 1] ** 2)).sum())


def weighted_l2(mesh: Mesh, wvals: np.ndarray, vals: np.ndarray) -> float:
    """Integral of e^w * vals^2 with both fields P1-interpolated."""
    area, _ = triangle_geometry(mesh)
    t = mesh.triangles
    eq = np.exp(wvals[t] @ QUAD4_POINTS.T)
    vq = vals[t] @ QUAD4_POINTS.T
    return float((area * ((eq * vq * vq) @ QUAD4_WEIGHTS)).sum())


def solve_dirichlet(mesh: Mesh, interior_rhs: np.ndarray,
                    boundary_values: np.ndarray,
                    K: sp.csr_matrix | None = None) -> np.ndarray:
    """Solve K u = rhs on interior nodes with pinned boundary values.

    ``interior_rhs`` is indexed by interior node (in interior_nodes() order);
    returns the full nodal vector.
    """
    if K is None:
        K = stiffness_matrix(mesh)
    interior = mesh.interior_nodes()
    boundary = mesh.boundary_nodes()
    u = np.zeros(mesh.num_vertices)
    u[boundary] = boundary_values
    kib = K[interior][:, boundary]
    kii = K[interior][:, interior].tocsc()
    u[interior] = spla.spsolve(kii, interior_rhs - kib @ u[boundary])
    return u


def interpolator(mesh: Mesh, vals: np.ndarray):
    """P1 point evaluator on the mesh triangulation.

    Returns a callable mapping (n, 2) points to values; points outside the
    mesh yield NaN.
    """
    from matplotlib.tri import LinearTriInterpolator, Triangulation

    tri = Triangulation(mesh.vertices[:, 0], mesh.vertices[:, 1], mesh.triangles)
    lin = LinearTriInterpolator(tri, vals)

    def evaluate(points: np.ndarray) -> np.ndarray:
        pts = np.atleast_2d(points)
        out = lin(pts[:, 0], pts[:, 1])
        return np.ma.filled(out, np.nan)

    return evaluate
