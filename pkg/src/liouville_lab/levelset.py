"""Level-set statistics and the isoperimetric machinery.

For a piecewise-linear field u with weight w this module extracts the
superlevel regions {u > t} by marching triangles, integrates e^w over the
clipped regions (mass m(t)), integrates e^{w/2} along the level curves
(boundary weight l(t)), and counts components and holes per level.  On top of
that sit the defect functionals (Bol, Huber, classical isoperimetric), the
harmonic/subharmonic/zero-trace decomposition w = h0 + h- + u, the
Lipschitz extension of a zero-trace field across domain holes, and the
case-by-case audit of the multiply-connected strictness argument.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse.linalg as spla

from . import fem
from .fields import EIGHT_PI, ScalarField
from .mesh import Mesh, mesh_disk, translate

__all__ = [
    "LevelSetProfile",
    "Decomposition",
    "AppendixSplit",
    "InequalityRow",
    "AuditReport",
    "level_profile",
    "bol_defect",
    "huber_defect",
    "isoperimetric_defect",
    "decompose",
    "extend_hat",
    "appendix_audit",
]

_LEVEL_NUDGE = 1e-6  # times resolution_h times field range, per the Sard-style rule


@dataclass(frozen=True, eq=False)
class LevelSetProfile:
    """Sampled t -> (m, mu, l) statistics of a field's superlevel sets."""

    levels: np.ndarray            # requested levels (pre-perturbation)
    mass: np.ndarray              # m(t) = int_{u>t} e^w
    boundary_weight: np.ndarray   # l(t) = int_{u=t} e^{w/2}
    component_count: np.ndarray
    hole_count: np.ndarray
    t_plus: float
    base_mass: np.ndarray | None = None  # mu(t) = int_{u>t} e^h when supplied


@dataclass(frozen=True, eq=False)
class Decomposition:
    """w = h0 + h_minus + u with u >= 0 and zero trace."""

    h0: ScalarField        # harmonic lifting of the boundary trace
    h_minus: ScalarField   # -Lap h_minus = f, zero boundary
    h: ScalarField         # h0 + h_minus
    u: ScalarField         # w - h, zero boundary trace
    residual: np.ndarray   # f = -Lap_h w - e^w at interior nodes


@dataclass(frozen=True, eq=False)
class InequalityRow:
    name: str
    lhs: float
    rhs: float
    strict: bool = False

    @property
    def margin(self) -> float:
        return self.lhs - self.rhs

    @property
    def ok(self) -> bool:
        if self.strict:
            return self.lhs > self.rhs
        # non-strict rows can be continuum equalities (circles); allow
        # discretization-level slack relative to the row's scale
        slack = 1e-4 * max(1.0, abs(self.lhs), abs(self.rhs))
        return self.lhs >= self.rhs - slack


@dataclass(frozen=True, eq=False)
class AppendixSplit:
    """Regions and boundary parts of the multiply-connected split."""

    omega_star: list            # region meshes between omega's holes and the domain holes
    omega_zero_mass: float      # weighted mass of the enclosed domain holes
    boundary_0: list            # hole-loop polylines of omega (point arrays)
    boundary_1: list            # outer-loop polylines of omega
    mass_omega: float
    mass_omega_star: float
    ell_0: float
    ell_1: float


@dataclass(frozen=True, eq=False)
class AuditReport:
    case_label: str
    split: AppendixSplit | None
    rows: list
    final_defect: float

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.rows) and self.final_defect > 0


# ---------------------------------------------------------------------------
# marching-triangles extraction
# ---------------------------------------------------------------------------

def _perturb_levels(levels: np.ndarray, fvals: np.ndarray, h: float) -> np.ndarray:
    """Nudge any level that lands exactly on a nodal value."""
    rng = float(fvals.max() - fvals.min())
    if rng == 0.0:
        rng = 1.0
    nudge = h * _LEVEL_NUDGE * rng
    uniq = np.unique(fvals)
    out = levels.astype(float).copy()
    for i, t in enumerate(out):
        while np.any(uniq == out[i]):
            out[i] += nudge
    return out


def _tri_exp_integral(w0, w1, w2, doubled_area) -> np.ndarray:
    """Edge-midpoint (degree-2) rule for int e^w over triangles, vectorized;
    w linear with the given corner values, doubled_area = 2*area."""
    q = (np.exp(0.5 * (w0 + w1)) + np.exp(0.5 * (w1 + w2)) + np.exp(0.5 * (w2 + w0)))
    return doubled_area * q / 6.0


def _cross(ax, ay, bx, by):
    return ax * by - ay * bx


def _extract_level(mesh: Mesh, f: np.ndarray, w: np.ndarray, t: float,
                   base: np.ndarray | None = None):
    """One marching pass: returns (m, ell, loops, mu).

    ``loops`` is a list of (points (n,2), closed bool) with the region
    {f > t} on the left of the traversal direction.
    """
    tri = mesh.triangles
    pts = mesh.vertices
    fv = f[tri]                       # (nt, 3)
    wv = w[tri]
    bv = base[tri] if base is not None else None
    above = fv > t
    nab = above.sum(axis=1)

    p0, p1, p2 = pts[tri[:, 0]], pts[tri[:, 1]], pts[tri[:, 2]]
    dbl = _cross(*(p1 - p0).T, *(p2 - p0).T)  # 2*area, positive

    m = float(_tri_exp_integral(wv[:, 0], wv[:, 1], wv[:, 2], dbl)[nab == 3].sum())
    mu = 0.0
    if base is not None:
        mu = float(_tri_exp_integral(bv[:, 0], bv[:, 1], bv[:, 2], dbl)[nab == 3].sum())

    segments = []   # (start_key, end_key, pa, pb, wa, wb)

    def crossing(ti, i, j):
        """Crossing point of edge (local i->j) of triangle ti with the level."""
        a, b = tri[ti, i], tri[ti, j]
        s = (t - f[a]) / (f[b] - f[a])
        p = pts[a] + s * (pts[b] - pts[a])
        wc = w[a] + s * (w[b] - w[a])
        bc = base[a] + s * (base[b] - base[a]) if base is not None else 0.0
        return (min(a, b), max(a, b)), p, wc, bc

    def sub_tri_mass(pa, pb, pc, wa, wb, wc):
        d = _cross(pb[0] - pa[0], pb[1] - pa[1], pc[0] - pa[0], pc[1] - pa[1])
        return _tri_exp_integral(np.asarray(wa), np.asarray(wb), np.asarray(wc), abs(d))

    mixed = np.flatnonzero((nab == 1) | (nab == 2))
    for ti in mixed:
        ab = above[ti]
        if nab[ti] == 1:
            apex = int(np.argmax(ab))
        else:
            apex = int(np.argmin(ab))
        nxt, prv = (apex + 1) % 3, (apex + 2) % 3
        key1, q1, wq1, bq1 = crossing(ti, apex, nxt)
        key2, q2, wq2, bq2 = crossing(ti, apex, prv)
        va = tri[ti, apex]
        if nab[ti] == 1:
            # region = apex corner triangle (apex, q1, q2)
            m += float(sub_tri_mass(pts[va], q1, q2, w[va], wq1, wq2))
            if base is not None:
                mu += float(sub_tri_mass(pts[va], q1, q2, base[va], bq1, bq2))
        else:
            # region = quad (q1, nxt, prv, q2)
            vb, vc = tri[ti, nxt], tri[ti, prv]
            m += float(sub_tri_mass(q1, pts[vb], pts[vc], wq1, w[vb], w[vc]))
            m += float(sub_tri_mass(q1, pts[vc], q2, wq1, w[vc], wq2))
            if base is not None:
                mu += float(sub_tri_mass(q1, pts[vb], pts[vc], bq1, base[vb], base[vc]))
                mu += float(sub_tri_mass(q1, pts[vc], q2, bq1, base[vc], bq2))
        # orient the contour segment with the region {f > t} on its left:
        # keep q1 -> q2 iff cross(d, grad f) > 0
        grad = _tri_gradient(pts, tri[ti], f)
        d = q2 - q1
        if d[0] * grad[1] - d[1] * grad[0] > 0:
            segments.append((key1, key2, q1, q2, wq1, wq2))
        else:
            segments.append((key2, key1, q2, q1, wq2, wq1))

    ell = 0.0
    for _, _, pa, pb, wa, wb in segments:
        length = float(np.hypot(*(pb - pa)))
        for g in fem.GAUSS2:
            ell += 0.5 * length * float(np.exp(0.5 * ((1 - g) * wa + g * wb)))

    loops = _chain_segments(segments)
    return m, ell, loops, mu


def _tri_gradient(pts, tri_nodes, f):
    pa, pb, pc = pts[tri_nodes[0]], pts[tri_nodes[1]], pts[tri_nodes[2]]
    d = _cross(pb[0] - pa[0], pb[1] - pa[1], pc[0] - pa[0], pc[1] - pa[1])
    ga = np.array([pb[1] - pc[1], pc[0] - pb[0]]) / d
    gb = np.array([pc[1] - pa[1], pa[0] - pc[0]]) / d
    gc = np.array([pa[1] - pb[1], pb[0] - pa[0]]) / d
    return f[tri_nodes[0]] * ga + f[tri_nodes[1]] * gb + f[tri_nodes[2]] * gc


def _chain_segments(segments):
    """Chain directed segments into closed loops / open chains of points."""
    start_map = {}
    for idx, seg in enumerate(segments):
        start_map.setdefault(seg[0], []).append(idx)
    used = [False] * len(segments)
    loops = []

    end_keys = {seg[1] for seg in segments}
    # open chains start where no segment ends
    order = sorted(range(len(segments)),
                   key=lambda i: (segments[i][0] in end_keys, i))
    for s0 in order:
        if used[s0]:
            continue
        chain = [segments[s0][2], segments[s0][3]]
        used[s0] = True
        cur = segments[s0][1]
        first = segments[s0][0]
        closed = False
        while True:
            nxts = [i for i in start_map.get(cur, []) if not used[i]]
            if not nxts:
                closed = cur == first
                break
            nxt = nxts[0]
            used[nxt] = True
            chain.append(segments[nxt][3])
            cur = segments[nxt][1]
            if cur == first:
                closed = True
                break
        pts = np.array(chain)
        if closed and len(pts) > 1:
            pts = pts[:-1] if np.allclose(pts[0], pts[-1]) else pts
        loops.append((pts, closed))
    return loops


def _loop_area(points: np.ndarray) -> float:
    x, y = points[:, 0], points[:, 1]
    return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1)))


def level_profile(field: ScalarField, weight_w: ScalarField, n_levels: int = 50,
                  base_weight: ScalarField | None = None,
                  levels: np.ndarray | None = None) -> LevelSetProfile:
    """Level-set statistics of ``field`` with respect to the weight e^w.

    Levels default to a uniform grid on [0, max(field)].  Levels landing on
    nodal values are deterministically nudged upward before extraction.
    """
    if n_levels < 2:
        raise ValueError("need at least two levels")
    mesh = field.mesh
    if weight_w.mesh is not mesh:
        raise ValueError("field and weight must share a mesh")
    f = field.values
    t_plus = float(f.max())
    if levels is None:
        levels = np.linspace(0.0, t_plus, n_levels)
    levels = np.asarray(levels, dtype=float)
    eff = _perturb_levels(levels, f, mesh.resolution_h)
    base = base_weight.values if base_weight is not None else None

    mass, ell, comp, holes, mus = [], [], [], [], []
    for t in eff:
        m, l, loops, mu = _extract_level(mesh, f, weight_w.values, t, base)
        mass.append(m)
        ell.append(l)
        closed_areas = [_loop_area(p) for p, c in loops if c and len(p) >= 3]
        comp.append(sum(1 for a in closed_areas if a > 0))
        holes.append(sum(1 for a in closed_areas if a < 0))
        mus.append(mu)
    return LevelSetProfile(
        levels=levels, mass=np.array(mass), boundary_weight=np.array(ell),
        component_count=np.array(comp, dtype=int),
        hole_count=np.array(holes, dtype=int), t_plus=t_plus,
        base_mass=np.array(mus) if base is not None else None)


# ---------------------------------------------------------------------------
# defect functionals
# ---------------------------------------------------------------------------

def bol_defect(ell: float, mass: float) -> float:
    """l^2 - (1/2) m (8 pi - m); nonnegative for admissible weights."""
    if ell < 0:
        raise ValueError("boundary weight must be nonnegative")
    if not -1e-9 <= mass <= EIGHT_PI + 1e-9:
        raise ValueError(f"mass {mass:g} outside [0, 8 pi]")
    return float(ell) ** 2 - 0.5 * mass * (EIGHT_PI - mass)


def _field_on(region: Mesh, w: ScalarField) -> np.ndarray:
    """Nodal values of ``w`` on a (sub)region mesh, by P1 interpolation."""
    if region is w.mesh:
        return w.values
    evaluate = fem.interpolator(w.mesh, w.values)
    vals = evaluate(region.vertices)
    bad = ~np.isfinite(vals)
    if bad.any():
        # boundary nodes of the region can fall epsilon-outside the source
        # triangulation; snap them by nearest-vertex lookup
        src = w.mesh.vertices
        for i in np.flatnonzero(bad):
            d2 = (src[:, 0] - region.vertices[i, 0]) ** 2 \
                + (src[:, 1] - region.vertices[i, 1]) ** 2
            j = int(np.argmin(d2))
            if d2[j] > (4.0 * w.mesh.resolution_h) ** 2:
                raise ValueError("region is not covered by the field's mesh")
            vals[i] = w.values[j]
    return vals


def huber_defect(h: ScalarField, region: Mesh | None = None) -> float:
    """(int_boundary e^{h/2})^2 - 4 pi int e^h on the region (default: h's mesh).

    Nonnegative for subharmonic h on simply connected regions; the caller is
    expected to have screened subharmonicity via the discrete Laplacian sign.
    """
    mesh = h.mesh if region is None else region
    vals = _field_on(mesh, h)
    boundary = fem.boundary_exp_half(mesh, vals)
    area_mass = fem.integrate_exp(mesh, vals)
    return boundary ** 2 - 4.0 * np.pi * area_mass


def isoperimetric_defect(region: Mesh) -> float:
    """perimeter^2 - 4 pi area of the mesh."""
    return fem.boundary_length(region) ** 2 - 4.0 * np.pi * region.area()


# ---------------------------------------------------------------------------
# decomposition and extension
# ---------------------------------------------------------------------------

def decompose(w: ScalarField, region: Mesh | None = None) -> Decomposition:
    """Split w into the harmonic lifting h0, the subharmonic part h- with
    -Lap h- = f, and the zero-trace remainder u = w - h0 - h-.

    When ``region`` is a submesh of the field's domain, w is first
    interpolated onto it and the split is computed there.
    """
    mesh = w.mesh if region is None else region
    vals = _field_on(mesh, w)
    K = fem.stiffness_matrix(mesh)
    ml = fem.lumped_mass(mesh)
    interior = mesh.interior_nodes()
    boundary = mesh.boundary_nodes()

    kii = K[interior][:, interior].tocsc()
    kib = K[interior][:, boundary]
    lu = spla.splu(kii)

    h0 = np.zeros(mesh.num_vertices)
    h0[boundary] = vals[boundary]
    h0[interior] = lu.solve(-(kib @ vals[boundary]))

    resid = (K @ vals)[interior] / ml[interior] - np.exp(vals[interior])
    hm = np.zeros(mesh.num_vertices)
    hm[interior] = lu.solve(ml[interior] * resid)

    h = h0 + hm
    u = vals - h
    u[boundary] = 0.0  # exact by construction; pin the rounding
    return Decomposition(
        h0=ScalarField(mesh=mesh, values=h0),
        h_minus=ScalarField(mesh=mesh, values=hm),
        h=ScalarField(mesh=mesh, values=h),
        u=ScalarField(mesh=mesh, values=u),
        residual=resid)


def extend_hat(w: ScalarField, ambient: Mesh) -> ScalarField:
    """Extend a zero-trace field by 0 across the filled holes of its domain.

    ``ambient`` must come from :func:`~liouville_lab.mesh.fill_holes` on the
    field's mesh, so the parent vertices keep their indices.  The returned
    field is Lipschitz across the hole boundaries; use
    :func:`~liouville_lab.fields.weak_subsolution_check` for the
    distributional subsolution property.
    """
    nv = w.mesh.num_vertices
    if ambient.num_vertices < nv or \
            not np.array_equal(ambient.vertices[:nv], w.mesh.vertices):
        raise ValueError("ambient mesh does not extend the field's mesh "
                         "(mismatched boundary nodes)")
    for lp in w.mesh.boundary_loops:
        lp = np.asarray(lp)
        if _loop_area_idx(w.mesh, lp) < 0:  # hole loop: trace must be the gauge 0
            trace = np.abs(w.values[lp]).max()
            if trace > 1e-9 * max(1.0, float(np.abs(w.values).max())):
                raise ValueError("hole boundary trace is not 0; apply "
                                 "normalize_gauge first")
    vals = np.zeros(ambient.num_vertices)
    vals[:nv] = w.values
    return ScalarField(mesh=ambient, values=vals)


def _loop_area_idx(mesh: Mesh, loop) -> float:
    p = mesh.vertices[np.asarray(loop)]
    x, y = p[:, 0], p[:, 1]
    return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1)))


# ---------------------------------------------------------------------------
# multiply-connected audit
# ---------------------------------------------------------------------------

def _point_in_polygon(point, poly: np.ndarray) -> bool:
    x, y = point
    px, py = poly[:, 0], poly[:, 1]
    qx, qy = np.roll(px, -1), np.roll(py, -1)
    cond = (py > y) != (qy > y)
    with np.errstate(divide="ignore", invalid="ignore"):
        xs = (qx - px) * (y - py) / (qy - py) + px
    return bool(np.count_nonzero(cond & (x < xs)) % 2)


def _connected_components(mesh: Mesh):
    from scipy.sparse import csr_matrix
    from scipy.sparse.csgraph import connected_components

    t = mesh.triangles
    rows = np.concatenate([t[:, 0], t[:, 1], t[:, 2]])
    cols = np.concatenate([t[:, 1], t[:, 2], t[:, 0]])
    adj = csr_matrix((np.ones(len(rows)), (rows, cols)),
                     shape=(mesh.num_vertices, mesh.num_vertices))
    n, labels = connected_components(adj, directed=False)
    return n, labels


def _loop_weighted_length(points: np.ndarray, closed: bool, w_eval) -> float:
    a = points
    b = np.roll(points, -1, axis=0)
    if not closed:
        a, b = points[:-1], points[1:]
    seg = b - a
    length = np.hypot(seg[:, 0], seg[:, 1])
    total = 0.0
    for g in fem.GAUSS2:
        mid = (1 - g) * a + g * b
        total += float((0.5 * length * np.exp(0.5 * w_eval(mid))).sum())
    return total


def _polygon_region_mesh(points: np.ndarray, target_h: float) -> Mesh:
    """Fan triangulation of a star-shaped polygon, refined to the target
    resolution; used only for integration over filled hole regions."""
    from .mesh import refine as mesh_refine

    c = points.mean(axis=0)
    n = len(points)
    verts = np.vstack([points, c])
    tris = np.array([[i, (i + 1) % n, n] for i in range(n)], dtype=np.int64)
    if _loop_area(points) < 0:
        tris = tris[:, [1, 0, 2]]
        loop = np.arange(n)[::-1]
    else:
        loop = np.arange(n)
    d = np.concatenate([verts[tris[:, 1]] - verts[tris[:, 0]],
                        verts[tris[:, 2]] - verts[tris[:, 1]],
                        verts[tris[:, 0]] - verts[tris[:, 2]]])
    h = float(np.hypot(d[:, 0], d[:, 1]).max())
    m = Mesh(vertices=verts, triangles=tris, boundary_loops=[loop], resolution_h=h)
    while m.resolution_h > target_h:
        m = mesh_refine(m)
    return m


def _region_for_loop(points: np.ndarray, target_h: float) -> Mesh:
    """Integration mesh for the region enclosed by a loop polygon; circular
    loops get an exact polar disk."""
    c = points.mean(axis=0)
    radii = np.hypot(points[:, 0] - c[0], points[:, 1] - c[1])
    r = float(radii.mean())
    if np.ptp(radii) < 1e-9 * max(1.0, r):
        return translate(mesh_disk(r, min(target_h, r / 4)), c[0], c[1])
    return _polygon_region_mesh(points, target_h)


def _region_exp_mass(region: Mesh, weight: ScalarField) -> float:
    return fem.integrate_exp(region, _field_on(region, weight))


def appendix_audit(omega: Mesh, weight: ScalarField, ambient: Mesh) -> AuditReport:
    """Audit the strict Alexandrov-Bol chain for a multiply connected or
    disconnected region inside a (possibly multiply connected) domain.

    ``weight`` is the extended weight on ``ambient`` (or on any mesh covering
    the region); ``ambient`` carries ``hole_fills`` metadata when the
    enclosing domain itself has holes.
    """
    ncomp, labels = _connected_components(omega)
    loops = [(np.asarray(lp), _loop_area_idx(omega, lp)) for lp in omega.boundary_loops]
    outer = [(lp, a) for lp, a in loops if a > 0]
    holes = [(lp, a) for lp, a in loops if a < 0]
    if ncomp == 1 and not holes:
        raise ValueError("region is simply connected; evaluate bol_defect directly")

    w_eval_raw = fem.interpolator(weight.mesh, weight.values)

    def w_eval(pts):
        vals = w_eval_raw(pts)
        if np.any(~np.isfinite(vals)):
            # points on the source boundary may fall epsilon outside
            vals = np.where(np.isfinite(vals), vals, 0.0)
        return vals

    h_int = min(omega.resolution_h, ambient.resolution_h)
    m_omega = _region_exp_mass(omega, weight)
    ell_total = sum(_loop_weighted_length(omega.vertices[lp], True, w_eval)
                    for lp, _ in loops)

    if ncomp > 1:
        return _audit_disconnected(omega, weight, labels, ncomp, m_omega,
                                   ell_total, w_eval)

    # connected, with holes: which domain holes sit inside omega's holes?
    hole_polys = [omega.vertices[lp] for lp, _ in holes]
    contained_fills = []
    for fill in ambient.hole_fills:
        rep = ambient.vertices[fill.loop_nodes].mean(axis=0)
        if any(_point_in_polygon(rep, poly) for poly in hole_polys):
            contained_fills.append(fill)

    ell_1 = sum(_loop_weighted_length(omega.vertices[lp], True, w_eval)
                for lp, _ in outer)
    ell_0 = sum(_loop_weighted_length(omega.vertices[lp], True, w_eval)
                for lp, _ in holes)
    len_0 = sum(float(np.hypot(*(np.roll(omega.vertices[lp], -1, axis=0)
                                 - omega.vertices[lp]).T).sum())
                for lp, _ in holes)

    hole_regions = [_region_for_loop(poly, h_int) for poly in hole_polys]
    m_hole_fill = sum(_region_exp_mass(r, weight) for r in hole_regions)  # m^(omega* U Omega_0)
    area_holes = sum(r.area() for r in hole_regions)

    if contained_fills:
        m_omega_zero = 0.0
        for fill in contained_fills:
            sub = Mesh(vertices=ambient.vertices,
                       triangles=ambient.triangles[fill.patch_triangles],
                       boundary_loops=[], resolution_h=ambient.resolution_h)
            wv = weight.values if weight.mesh is ambient else _field_on_sub(sub, weight)
            m_omega_zero += fem.integrate_exp(sub, wv)
        m_star = m_hole_fill - m_omega_zero
        split = AppendixSplit(
            omega_star=hole_regions, omega_zero_mass=m_omega_zero,
            boundary_0=[omega.vertices[lp] for lp, _ in holes],
            boundary_1=[omega.vertices[lp] for lp, _ in outer],
            mass_omega=m_omega, mass_omega_star=m_star,
            ell_0=ell_0, ell_1=ell_1)
        return _audit_cases(weight, split, m_hole_fill, area_holes, len_0,
                            ell_total)
    # no enclosed domain hole: union with the filled holes is admissible
    split = AppendixSplit(
        omega_star=hole_regions, omega_zero_mass=0.0,
        boundary_0=[omega.vertices[lp] for lp, _ in holes],
        boundary_1=[omega.vertices[lp] for lp, _ in outer],
        mass_omega=m_omega, mass_omega_star=m_hole_fill,
        ell_0=ell_0, ell_1=ell_1)
    return _audit_union(weight, split, hole_regions, w_eval, m_omega, ell_total)


def _audit_disconnected(omega, weight, labels, ncomp, m_omega, ell_total, w_eval):
    rows = []
    comp_ms, comp_ells = [], []
    for c in range(ncomp):
        mask = np.isin(omega.triangles[:, 0], np.flatnonzero(labels == c))
        sub = Mesh(vertices=omega.vertices, triangles=omega.triangles[mask],
                   boundary_loops=[], resolution_h=omega.resolution_h)
        comp_loops = [np.asarray(lp) for lp in omega.boundary_loops
                      if labels[np.asarray(lp)[0]] == c]
        if any(_loop_area_idx(omega, lp) < 0 for lp in comp_loops):
            raise ValueError("disconnected audit expects simply connected pieces")
        comp_ms.append(fem.integrate_exp(sub, _field_on_sub(sub, weight)))
        comp_ells.append(sum(_loop_weighted_length(omega.vertices[lp], True, w_eval)
                             for lp in comp_loops))
    rows.append(InequalityRow("split_cross_terms", 2 * ell_total ** 2,
                              2 * sum(l ** 2 for l in comp_ells), strict=True))
    for i, (mi, li) in enumerate(zip(comp_ms, comp_ells)):
        rows.append(InequalityRow(f"bol_component_{i}", 2 * li ** 2,
                                  mi * (EIGHT_PI - mi)))
    rows.append(InequalityRow(
        "mass_superadditivity",
        EIGHT_PI * m_omega - sum(mi ** 2 for mi in comp_ms),
        EIGHT_PI * m_omega - m_omega ** 2))
    rows.append(InequalityRow("final_strict_bol", 2 * ell_total ** 2,
                              m_omega * (EIGHT_PI - m_omega), strict=True))
    split = AppendixSplit(omega_star=[], omega_zero_mass=0.0,
                          boundary_0=[], boundary_1=[],
                          mass_omega=m_omega, mass_omega_star=0.0,
                          ell_0=0.0, ell_1=ell_total)
    defect = ell_total ** 2 - 0.5 * m_omega * (EIGHT_PI - m_omega)
    return AuditReport("disconnected", split, rows, defect)


def _field_on_sub(sub: Mesh, weight: ScalarField) -> np.ndarray:
    if weight.mesh.num_vertices == sub.num_vertices and \
            np.array_equal(weight.mesh.vertices, sub.vertices):
        return weight.values
    return _field_on(sub, weight)


def _audit_union(weight, split, hole_regions, w_eval, m_omega, ell_total):
    """Holes of the region contain no domain hole: fill them and chain."""
    rows = []
    hole_ms = [_region_exp_mass(r, weight) for r in hole_regions]
    hole_ells = [_loop_weighted_length(p, True, w_eval) for p in split.boundary_0]
    ell_union = split.ell_1
    m_union = m_omega + sum(hole_ms)
    rows.append(InequalityRow(
        "split_cross_terms", 2 * ell_total ** 2,
        2 * ell_union ** 2 + 2 * sum(l ** 2 for l in hole_ells), strict=True))
    rows.append(InequalityRow("bol_union", 2 * ell_union ** 2,
                              m_union * (EIGHT_PI - m_union)))
    for i, (mi, li) in enumerate(zip(hole_ms, hole_ells)):
        rows.append(InequalityRow(f"bol_hole_{i}", 2 * li ** 2,
                                  mi * (EIGHT_PI - mi)))
    rows.append(InequalityRow("mass_budget", EIGHT_PI, m_union))
    lhs_alg = m_union * (EIGHT_PI - m_union) + sum(mi * (EIGHT_PI - mi) for mi in hole_ms)
    rows.append(InequalityRow("union_algebra", lhs_alg,
                              m_omega * (EIGHT_PI - m_omega)))
    rows.append(InequalityRow("final_strict_bol", 2 * ell_total ** 2,
                              m_omega * (EIGHT_PI - m_omega), strict=True))
    defect = ell_total ** 2 - 0.5 * m_omega * (EIGHT_PI - m_omega)
    return AuditReport("union_simply_connected", split, rows, defect)


def _audit_cases(weight, split, m_hat_inner, area_holes, len_0, ell_total):
    """Domain holes inside the region's holes: the three-case chain."""
    m, m_star = split.mass_omega, split.mass_omega_star
    m_zero = split.omega_zero_mass
    ell_0, ell_1 = split.ell_0, split.ell_1
    m_hat_full = m + m_hat_inner
    w_min = float(weight.values.min())
    rows = [InequalityRow("gauge_nonnegative", w_min, -1e-6)]

    if m_hat_inner >= EIGHT_PI:
        case = "case1_inner_mass_large"
        rows += [
            InequalityRow("weighted_ge_plain_length", 2 * ell_0 ** 2, 2 * len_0 ** 2),
            InequalityRow("isoperimetric_hole", 2 * len_0 ** 2,
                          EIGHT_PI * area_holes),
            InequalityRow("area_exceeds_hole_mass", EIGHT_PI * area_holes,
                          EIGHT_PI * m_zero, strict=True),
            InequalityRow("inner_mass_bound", 2 * ell_0 ** 2,
                          EIGHT_PI * (EIGHT_PI - m_star), strict=True),
            InequalityRow("outer_mass_bound", 2 * ell_1 ** 2,
                          EIGHT_PI * (EIGHT_PI - m - m_star), strict=True),
            InequalityRow("split_cross_terms", 2 * ell_total ** 2,
                          2 * (ell_1 ** 2 + ell_0 ** 2), strict=True),
            InequalityRow("combine",
                          2 * (ell_1 ** 2 + ell_0 ** 2),
                          m_star * (EIGHT_PI - m_star)
                          + (m + m_star) * (EIGHT_PI - m - m_star), strict=True),
            InequalityRow("mass_budget", EIGHT_PI, m + m_star),
            InequalityRow("algebra",
                          m_star * (EIGHT_PI - m_star)
                          + (m + m_star) * (EIGHT_PI - m - m_star),
                          m * (EIGHT_PI - m)),
        ]
    elif m_hat_full >= EIGHT_PI:
        case = "case2_total_mass_large"
        rows += [
            InequalityRow("bolhat_inner", 2 * ell_0 ** 2,
                          m_hat_inner * (EIGHT_PI - m_hat_inner)),
            InequalityRow("hole_mass_lower_inner", ell_0,
                          np.sqrt(4 * np.pi * m_zero)),
            InequalityRow("hole_mass_lower_outer", ell_1,
                          np.sqrt(4 * np.pi * m_zero)),
            InequalityRow("outer_mass_bound", 2 * ell_1 ** 2,
                          EIGHT_PI * (EIGHT_PI - m - m_star), strict=True),
            InequalityRow("expand",
                          2 * ell_total ** 2,
                          EIGHT_PI * (EIGHT_PI - m - m_star)
                          + m_hat_inner * (EIGHT_PI - m_hat_inner)
                          + 16 * np.pi * m_zero),
            InequalityRow("remainder_nonnegative",
                          (EIGHT_PI - m) ** 2 - m_star ** 2
                          + m_zero * (24 * np.pi - 2 * m_star - m_zero), 0.0),
        ]
    else:
        case = "case3_total_mass_small"
        m1 = m + m_hat_inner  # simply connected union
        rows += [
            InequalityRow("union_mass_small", EIGHT_PI, m1, strict=True),
            InequalityRow("split_cross_terms", 2 * ell_total ** 2,
                          2 * (ell_1 ** 2 + ell_0 ** 2), strict=True),
            InequalityRow("bolhat_union", 2 * ell_1 ** 2,
                          m1 * (EIGHT_PI - m1)),
            InequalityRow("bolhat_holes", 2 * ell_0 ** 2,
                          m_hat_inner * (EIGHT_PI - m_hat_inner)),
            InequalityRow("algebra",
                          m1 * (EIGHT_PI - m1) + m_hat_inner * (EIGHT_PI - m_hat_inner),
                          m * (EIGHT_PI - m)),
        ]
    rows.append(InequalityRow("final_strict_bol", 2 * ell_total ** 2,
                              m * (EIGHT_PI - m), strict=True))
    defect = ell_total ** 2 - 0.5 * m * (EIGHT_PI - m)
    return AuditReport(case, split, rows, defect)
