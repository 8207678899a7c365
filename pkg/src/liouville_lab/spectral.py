"""Discrete operators and the first eigenpair of -Lap(phi) = nu e^w phi.

The reported quantity is nu_hat = nu_1 - 1, the first eigenvalue of the
shifted problem -Lap(phi) - e^w phi = nu_hat e^w phi with Dirichlet boundary.
The solver is plain shift-invert (fixed shift 0) inverse iteration: the inner
solves K y = M x run preconditioned conjugate gradients with a Jacobi
preconditioner and warm starts, the start vector is all-ones on the interior,
and the sign is fixed to a positive interior mean.  Everything is
deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from . import fem
from .fields import ScalarField
from .mesh import Mesh

__all__ = [
    "AssembledOperator",
    "EigenPair",
    "IterationStalled",
    "assemble_stiffness",
    "assemble_weighted_mass",
    "first_eigenpair",
]


class IterationStalled(RuntimeError):
    """Eigen residual failed to reach tolerance within the iteration cap."""


@dataclass(frozen=True, eq=False)
class AssembledOperator:
    """Sparse operator plus the mesh bookkeeping needed for Dirichlet solves.

    ``matrix`` is the full nv x nv assembly (stiffness rows sum to zero);
    ``interior()`` gives the Dirichlet-eliminated block, which for the
    stiffness is symmetric positive definite.
    """

    matrix: sp.csr_matrix
    mesh: Mesh
    kind: str                      # "stiffness" | "mass"
    weight: ScalarField | None = None

    def interior(self) -> sp.csr_matrix:
        idx = self.mesh.interior_nodes()
        return self.matrix[idx][:, idx].tocsr()

    def __repr__(self) -> str:
        return f"AssembledOperator({self.kind}, n={self.matrix.shape[0]})"


@dataclass(frozen=True, eq=False)
class EigenPair:
    """First eigenpair of the weighted problem.

    ``nu_hat`` is nu_1 - 1; the eigenfunction is zero on the boundary,
    normalized to int e^w phi^2 = 1, and positive in the interior.
    """

    nu_hat: float
    eigenfunction: ScalarField
    residual_norm: float
    iterations: int

    @property
    def nu1(self) -> float:
        return self.nu_hat + 1.0


def assemble_stiffness(mesh: Mesh) -> AssembledOperator:
    """P1 stiffness; aborts on degenerate triangles."""
    return AssembledOperator(matrix=fem.stiffness_matrix(mesh), mesh=mesh,
                             kind="stiffness")


def assemble_weighted_mass(mesh: Mesh, w: ScalarField) -> AssembledOperator:
    """Consistent e^w-weighted mass; 1^T M 1 is the quadrature of int e^w."""
    if w.mesh is not mesh and not np.array_equal(w.mesh.vertices, mesh.vertices):
        raise ValueError("weight field lives on a different mesh")
    return AssembledOperator(matrix=fem.weighted_mass_matrix(mesh, w.values),
                             mesh=mesh, kind="mass", weight=w)


def _pcg(A: sp.csr_matrix, b: np.ndarray, x0: np.ndarray, diag: np.ndarray,
         rtol: float, max_iter: int = 20000) -> np.ndarray:
    """Jacobi-preconditioned CG, deterministic, warm-startable."""
    x = x0.copy()
    r = b - A @ x
    z = r / diag
    p = z.copy()
    rz = float(r @ z)
    stop = rtol * float(np.linalg.norm(b))
    if stop == 0.0:
        return np.zeros_like(b)
    for _ in range(max_iter):
        if np.linalg.norm(r) <= stop:
            break
        Ap = A @ p
        alpha = rz / float(p @ Ap)
        x += alpha * p
        r -= alpha * Ap
        z = r / diag
        rz_new = float(r @ z)
        p = z + (rz_new / rz) * p
        rz = rz_new
    return x


def first_eigenpair(K: AssembledOperator, M: AssembledOperator,
                    tol: float = 1e-10, max_outer: int = 200) -> EigenPair:
    """Smallest eigenvalue nu_1 of K phi = nu M phi and its eigenfunction."""
    if K.mesh is not M.mesh and not np.array_equal(K.mesh.vertices, M.mesh.vertices):
        raise ValueError("operators assembled on different meshes")
    mesh = K.mesh
    interior = mesh.interior_nodes()
    Ki = K.interior()
    Mi = M.interior()
    diag = Ki.diagonal()
    if diag.min() <= 0:
        raise IterationStalled("stiffness diagonal not positive: bad mesh")

    x = np.ones(len(interior))
    x /= np.sqrt(float(x @ (Mi @ x)))
    y = x.copy()
    inner_rtol = min(1e-12, 0.01 * tol)
    nu = 0.0
    res = np.inf
    for it in range(1, max_outer + 1):
        b = Mi @ x
        y = _pcg(Ki, b, y, diag, inner_rtol)
        x = y / np.sqrt(float(y @ (Mi @ y)))
        Kx = Ki @ x
        Mx = Mi @ x
        nu = float(x @ Kx) / float(x @ Mx)
        res = float(np.linalg.norm(Kx - nu * Mx) / np.linalg.norm(Mx))
        if res <= tol:
            break
    else:
        raise IterationStalled(
            f"eigen residual {res:.3e} above tol {tol:.1e} after {max_outer} iterations")

    full = np.zeros(mesh.num_vertices)
    full[interior] = x
    if full[interior].mean() < 0:
        full = -full
    # normalize int e^w phi^2 = 1 (boundary values vanish)
    nrm = float(full[interior] @ (Mi @ full[interior]))
    full /= np.sqrt(nrm)
    phi = ScalarField(mesh=mesh, values=full)
    return EigenPair(nu_hat=nu - 1.0, eigenfunction=phi,
                     residual_norm=res, iterations=it)
