"""Scalar fields on meshes: the explicit radial family, residual checks for
Liouville subsolutions, the damped-Newton Dirichlet solver, and the scaling
gauge.

A field is one real per vertex, read piecewise-linearly.  The discrete
Laplacian used everywhere is the P1 stiffness action divided by the lumped
(area/3) mass weights, so residual checks agree with the operator assembly
used for eigenvalue runs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from . import fem
from .mesh import (AnnulusGeometry, DiskGeometry, MappedGeometry, Mesh,
                   mesh_checksum)

__all__ = [
    "ScalarField",
    "SubsolutionReport",
    "WeakFormReport",
    "NewtonDiverged",
    "u_lambda",
    "u_lambda_field",
    "constant_field",
    "liouville_residual",
    "weak_subsolution_check",
    "solve_liouville_dirichlet",
    "normalize_gauge",
    "total_mass",
    "boundary_weight",
    "dump_field",
]

EIGHT_PI = 8.0 * np.pi


class NewtonDiverged(RuntimeError):
    """The damped Newton iteration left the minimal solution branch."""


@dataclass(frozen=True, eq=False)
class ScalarField:
    """Nodal values over a mesh, interpreted piecewise-linearly."""

    mesh: Mesh
    values: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "values", vals)
        if len(vals) != self.mesh.num_vertices:
            raise ValueError("value count does not match vertex count")
        if not np.all(np.isfinite(vals)):
            raise ValueError("field contains non-finite values")

    def __repr__(self) -> str:
        return (f"ScalarField({self.mesh!r}, min={self.values.min():.4g}, "
                f"max={self.values.max():.4g})")


@dataclass(frozen=True, eq=False)
class SubsolutionReport:
    """Interior residual f = -Lap_h w - e^w and the subsolution verdict."""

    residual: np.ndarray        # per interior node, mesh interior order
    interior_nodes: np.ndarray
    max_residual: float         # signed max over interior nodes
    tolerance: float
    is_subsolution: bool
    total_mass: float


@dataclass(frozen=True, eq=False)
class WeakFormReport:
    """Row-wise weak residual of -Lap w <= e^w against nonnegative hats."""

    max_violation: float
    tolerance: float
    ok: bool
    violations: np.ndarray      # per interior node


def u_lambda(lam: float, points) -> np.ndarray:
    """The explicit radial Liouville solution at the given points:
    2 ln(lam) - 2 ln(1 + lam^2 |x|^2 / 8)."""
    if lam <= 0:
        raise ValueError(f"lam must be positive, got {lam}")
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    r2 = pts[:, 0] ** 2 + pts[:, 1] ** 2
    return 2.0 * np.log(lam) - 2.0 * np.log1p(lam ** 2 * r2 / 8.0)


def u_lambda_field(mesh: Mesh, lam: float) -> ScalarField:
    return ScalarField(mesh=mesh, values=u_lambda(lam, mesh.vertices))


def constant_field(mesh: Mesh, value: float) -> ScalarField:
    return ScalarField(mesh=mesh, values=np.full(mesh.num_vertices, float(value)))


def default_tolerance(w: ScalarField) -> float:
    """10 h^2 scaled by max(e^w), the discretization-consistency budget."""
    return 10.0 * w.mesh.resolution_h ** 2 * float(np.exp(w.values.max()))


def liouville_residual(w: ScalarField, tolerance: float | None = None) -> SubsolutionReport:
    """Discrete residual of -Lap w <= e^w over interior nodes."""
    if tolerance is not None and tolerance < 0:
        raise ValueError("tolerance must be nonnegative")
    mesh = w.mesh
    tol = default_tolerance(w) if tolerance is None else float(tolerance)
    K = fem.stiffness_matrix(mesh)
    ml = fem.lumped_mass(mesh)
    interior = mesh.interior_nodes()
    lap = (K @ w.values)[interior] / ml[interior]  # ~ -Lap w
    f = lap - np.exp(w.values[interior])
    fmax = float(f.max())
    return SubsolutionReport(residual=f, interior_nodes=interior,
                             max_residual=fmax, tolerance=tol,
                             is_subsolution=bool(fmax <= tol),
                             total_mass=fem.integrate_exp(mesh, w.values))


def weak_subsolution_check(w: ScalarField, tolerance: float | None = None) -> WeakFormReport:
    """Distributional check of -Lap w <= e^w: for every interior hat v,
    int grad(w).grad(v) - int e^w v <= tol.

    Works for merely Lipschitz fields (extensions across interfaces) where
    the pointwise residual is meaningless.
    """
    mesh = w.mesh
    tol = default_tolerance(w) if tolerance is None else float(tolerance)
    K = fem.stiffness_matrix(mesh)
    M = fem.weighted_mass_matrix(mesh, w.values)
    rows = K @ w.values - np.asarray(M.sum(axis=1)).ravel()
    interior = mesh.interior_nodes()
    viol = rows[interior]
    vmax = float(viol.max())
    return WeakFormReport(max_violation=vmax, tolerance=tol,
                          ok=bool(vmax <= tol), violations=viol)


def solve_liouville_dirichlet(mesh: Mesh, boundary_values,
                              max_iter: int = 50,
                              newton_tol: float = 1e-10) -> ScalarField:
    """Minimal-branch solution of -Lap u = e^u with Dirichlet data.

    Starts from the harmonic lifting of the data and damps Newton steps by
    halving until the residual decreases (30 halvings at most).  Raises
    :class:`NewtonDiverged` when the iteration cap or a step blow-up signals
    data beyond the minimal-branch fold.
    """
    boundary = mesh.boundary_nodes()
    interior = mesh.interior_nodes()
    g = np.broadcast_to(np.asarray(boundary_values, dtype=float), boundary.shape).copy()
    K = fem.stiffness_matrix(mesh)
    ml = fem.lumped_mass(mesh)
    kii = K[interior][:, interior].tocsc()
    kib = K[interior][:, boundary]
    lu = spla.splu(kii)

    u = np.zeros(mesh.num_vertices)
    u[boundary] = g
    u[interior] = lu.solve(-(kib @ g))  # harmonic lifting

    def residual(vec_int):
        return kii @ vec_int + kib @ g - ml[interior] * np.exp(vec_int)

    scale = ml[interior]
    r = residual(u[interior])
    rnorm = np.max(np.abs(r / scale))
    for _ in range(max_iter):
        if rnorm <= newton_tol:
            sol = u.copy()
            sol[boundary] = g
            return ScalarField(mesh=mesh, values=sol)
        jac = kii - sp.diags(ml[interior] * np.exp(u[interior]))
        try:
            step = spla.splu(jac.tocsc()).solve(-r)
        except RuntimeError as exc:  # singular Jacobian at/beyond the fold
            raise NewtonDiverged(f"singular Newton system: {exc}") from exc
        if not np.all(np.isfinite(step)):
            raise NewtonDiverged("Newton step is not finite")
        t = 1.0
        for _ in range(30):
            cand = u[interior] + t * step
            if cand.max() < 50.0:  # e^u overflow guard doubles as fold detector
                rc = residual(cand)
                rcnorm = np.max(np.abs(rc / scale))
                if rcnorm < rnorm:
                    break
            t *= 0.5
        else:
            raise NewtonDiverged("damping exhausted: no descent direction")
        u[interior] = cand
        r, rnorm = rc, rcnorm
    raise NewtonDiverged(f"no convergence in {max_iter} iterations "
                         f"(residual {rnorm:.3e})")


def normalize_gauge(w: ScalarField, c: float) -> ScalarField:
    """Gauge transform w_c(x) = w(e^{-c/2} x) - c on the scaled mesh.

    Node-for-node: vertices scale by e^{c/2} and values drop by c, which
    leaves the mass and weighted boundary length bitwise-stable up to
    rounding.  A constant boundary value c becomes 0.
    """
    s = float(np.exp(0.5 * c))
    mesh = w.mesh
    geom = mesh.geometry
    if isinstance(geom, DiskGeometry):
        geom = DiskGeometry(radius=s * geom.radius,
                            center=(s * geom.center[0], s * geom.center[1]))
    elif isinstance(geom, AnnulusGeometry):
        geom = AnnulusGeometry(r_in=s * geom.r_in, r_out=s * geom.r_out,
                               center=(s * geom.center[0], s * geom.center[1]))
    elif isinstance(geom, MappedGeometry):
        geom = MappedGeometry(map=geom.map.scaled(s))
    scaled = Mesh(vertices=s * mesh.vertices, triangles=mesh.triangles,
                  boundary_loops=mesh.boundary_loops,
                  resolution_h=s * mesh.resolution_h,
                  geometry=geom, preimage=mesh.preimage,
                  hole_fills=mesh.hole_fills)
    return ScalarField(mesh=scaled, values=w.values - c)


def total_mass(w: ScalarField) -> float:
    """Integral of e^w over the field's mesh."""
    return fem.integrate_exp(w.mesh, w.values)


def boundary_weight(w: ScalarField, loops=None) -> float:
    """Integral of e^{w/2} along the mesh boundary."""
    return fem.boundary_exp_half(w.mesh, w.values, loops=loops)


def dump_field(w: ScalarField, path) -> None:
    """Text dump: mesh checksum line, then one nodal value per line."""
    with open(path, "w") as fh:
        fh.write(f"# mesh {mesh_checksum(w.mesh)}\n")
        for v in w.values:
            fh.write(f"{v:.17g}\n")
