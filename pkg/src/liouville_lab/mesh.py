"""Structured triangulations of disks, annuli, and conformal images of the unit disk.

All meshes are plain piecewise-linear triangulations with explicit oriented
boundary loops: outer loops run counterclockwise, hole loops clockwise.  Disk
meshes use a "spiderweb" layout (ring i carries 6i nodes) whose inner quarter
is an exact triangular lattice blended into circular rings; the lattice core
keeps the lumped-mass discrete Laplacian pointwise accurate near the center,
which plain polar webs cannot do.  Meshes are immutable after construction.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field, replace

import numpy as np

__all__ = [
    "Mesh",
    "DiskGeometry",
    "AnnulusGeometry",
    "MappedGeometry",
    "HoleFill",
    "mesh_disk",
    "mesh_annulus",
    "mesh_mapped_disk",
    "refine",
    "fill_holes",
    "translate",
    "disjoint_union",
    "dump_mesh",
    "mesh_checksum",
]

# Ring count is padded so the longest edge (blend-zone diagonals included)
# stays below the requested resolution; measured worst stretch is ~1.21.
_DENSITY = 0.78


@dataclass(frozen=True)
class DiskGeometry:
    radius: float
    center: tuple[float, float] = (0.0, 0.0)


@dataclass(frozen=True)
class AnnulusGeometry:
    r_in: float
    r_out: float
    center: tuple[float, float] = (0.0, 0.0)


@dataclass(frozen=True)
class MappedGeometry:
    """Image of the unit disk under a conformal map (duck-typed: needs
    ``evaluate(z)`` for complex arrays)."""

    map: object


@dataclass(frozen=True, eq=False)
class HoleFill:
    """Bookkeeping for one filled hole inside an ambient mesh."""

    loop_nodes: np.ndarray        # hole boundary nodes (parent indexing)
    patch_triangles: np.ndarray   # triangle indices in the ambient mesh
    patch_vertices: np.ndarray    # vertex indices strictly inside the patch


@dataclass(frozen=True, eq=False)
class Mesh:
    """Planar triangulation with oriented boundary loops.

    Attributes
    ----------
    vertices : (nv, 2) float array
    triangles : (nt, 3) int array, counterclockwise
    boundary_loops : list of int arrays; each a closed chain of vertex
        indices (the edge back to the first node is implicit)
    resolution_h : longest edge length
    geometry : analytic boundary description used for refinement
        reprojection, or None
    preimage : unit-disk preimages of the vertices for mapped meshes
    hole_fills : patch metadata attached by :func:`fill_holes`
    """

    vertices: np.ndarray
    triangles: np.ndarray
    boundary_loops: list
    resolution_h: float
    geometry: object = None
    preimage: np.ndarray = None
    hole_fills: tuple = field(default_factory=tuple)

    @property
    def num_vertices(self) -> int:
        return len(self.vertices)

    @property
    def num_triangles(self) -> int:
        return len(self.triangles)

    def boundary_nodes(self) -> np.ndarray:
        if not self.boundary_loops:
            return np.empty(0, dtype=int)
        return np.unique(np.concatenate(self.boundary_loops))

    def interior_nodes(self) -> np.ndarray:
        mask = np.ones(self.num_vertices, dtype=bool)
        mask[self.boundary_nodes()] = False
        return np.flatnonzero(mask)

    def edges(self) -> np.ndarray:
        """Unique undirected edges, sorted pairs."""
        t = self.triangles
        e = np.concatenate([t[:, [0, 1]], t[:, [1, 2]], t[:, [2, 0]]])
        e.sort(axis=1)
        return np.unique(e, axis=0)

    def triangle_areas(self) -> np.ndarray:
        p0 = self.vertices[self.triangles[:, 0]]
        d1 = self.vertices[self.triangles[:, 1]] - p0
        d2 = self.vertices[self.triangles[:, 2]] - p0
        return 0.5 * (d1[:, 0] * d2[:, 1] - d1[:, 1] * d2[:, 0])

    def area(self) -> float:
        return float(self.triangle_areas().sum())

    def euler_characteristic(self) -> int:
        return self.num_vertices - len(self.edges()) + self.num_triangles

    def hole_count(self) -> int:
        """Holes counted from loop orientation (clockwise loops)."""
        return sum(1 for lp in self.boundary_loops if _loop_signed_area(self.vertices, lp) < 0)

    def validate(self) -> None:
        """Check the structural invariants; raises ValueError on failure."""
        areas = self.triangle_areas()
        if len(areas) and areas.min() <= 0:
            raise ValueError(f"non-positive triangle area: {areas.min():g}")
        if not np.all(np.isfinite(self.vertices)):
            raise ValueError("non-finite vertex coordinates")
        # interior edges shared by 2 triangles, boundary edges by 1
        t = self.triangles
        e = np.concatenate([t[:, [0, 1]], t[:, [1, 2]], t[:, [2, 0]]])
        e.sort(axis=1)
        uniq, counts = np.unique(e, axis=0, return_counts=True)
        if counts.max(initial=1) > 2:
            raise ValueError("edge shared by more than two triangles")
        bnd_edges = {tuple(pair) for pair in uniq[counts == 1]}
        loop_edges = set()
        for lp in self.boundary_loops:
            lp = np.asarray(lp)
            for a, b in zip(lp, np.roll(lp, -1)):
                key = (min(a, b), max(a, b))
                if key in loop_edges:
                    raise ValueError("boundary loop repeats an edge")
                loop_edges.add(key)
        if loop_edges != bnd_edges:
            raise ValueError("boundary loops do not match single-triangle edges")

    def __repr__(self) -> str:  # keep dataclass arrays out of logs
        return (f"Mesh(nv={self.num_vertices}, nt={self.num_triangles}, "
                f"loops={len(self.boundary_loops)}, h={self.resolution_h:.4g})")


def _loop_signed_area(vertices: np.ndarray, loop) -> float:
    p = vertices[np.asarray(loop)]
    x, y = p[:, 0], p[:, 1]
    return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1)))


def _max_edge(vertices: np.ndarray, triangles: np.ndarray) -> float:
    d = np.concatenate([
        vertices[triangles[:, 1]] - vertices[triangles[:, 0]],
        vertices[triangles[:, 2]] - vertices[triangles[:, 1]],
        vertices[triangles[:, 0]] - vertices[triangles[:, 2]],
    ])
    return float(np.hypot(d[:, 0], d[:, 1]).max())


def _smoothstep(x: np.ndarray) -> np.ndarray:
    x = np.clip(x, 0.0, 1.0)
    return x * x * (3.0 - 2.0 * x)


def _spiderweb_topology(n: int):
    """Triangle list and ring offsets for the 6i-per-ring web with n rings."""
    offs = [1]
    for i in range(1, n):
        offs.append(offs[-1] + 6 * i)
    tris = []
    for k in range(6):
        tris.append((1 + k, 1 + (k + 1) % 6, 0))
    for i in range(2, n + 1):
        oi, oo = offs[i - 2], offs[i - 1]
        ni, no = 6 * (i - 1), 6 * i
        for s in range(6):
            for k in range(i):
                tris.append((oo + (s * i + k) % no,
                             oo + (s * i + k + 1) % no,
                             oi + (s * (i - 1) + k) % ni))
            for k in range(i - 1):
                tris.append((oo + (s * i + k + 1) % no,
                             oi + (s * (i - 1) + k + 1) % ni,
                             oi + (s * (i - 1) + k) % ni))
    return np.array(tris, dtype=np.int64), offs


def _unit_disk_web(n: int):
    """Vertices of the hex-core spiderweb on the unit disk (n rings).

    Rings up to n//4 sit on the exact triangular lattice; they blend into
    true circles by ring n//2 so the outermost rings (and the boundary)
    are exactly circular.
    """
    k0, k1 = n // 4, n // 2
    corners = np.array([[np.cos(np.pi * s / 3), np.sin(np.pi * s / 3)] for s in range(7)])
    verts = [(0.0, 0.0)]
    for i in range(1, n + 1):
        r = i / n
        if i <= k0:
            beta = 1.0
        elif i >= k1:
            beta = 0.0
        else:
            beta = 1.0 - _smoothstep(np.array((i - k0) / (k1 - k0)))
        j = np.arange(6 * i)
        th = 2.0 * np.pi * j / (6 * i)
        circ = np.column_stack([r * np.cos(th), r * np.sin(th)])
        s_idx, t_idx = np.divmod(j, i)
        hexp = r * ((1 - t_idx / i)[:, None] * corners[s_idx]
                    + (t_idx / i)[:, None] * corners[s_idx + 1])
        verts.append((1 - beta) * circ + beta * hexp)
    return np.vstack([np.array(verts[0])[None, :], *verts[1:]])


def mesh_disk(radius: float, target_h: float) -> Mesh:
    """Triangulate the disk of the given radius centered at the origin.

    The longest edge of the result is at most ``target_h`` and the total
    area converges to pi*radius^2 at second order in ``target_h``.
    """
    if radius <= 0:
        raise ValueError(f"radius must be positive, got {radius}")
    if target_h <= 0:
        raise ValueError(f"target_h must be positive, got {target_h}")
    if target_h >= radius:
        raise ValueError("target_h must be smaller than the radius")
    n = max(4, int(np.ceil(np.pi * radius / (3.0 * target_h * _DENSITY))))
    while True:
        verts = radius * _unit_disk_web(n)
        tris, offs = _spiderweb_topology(n)
        h = _max_edge(verts, tris)
        if h <= target_h:
            break
        n = max(n + 1, int(np.ceil(n * h / target_h)))
    loop = np.arange(offs[n - 1], offs[n - 1] + 6 * n)
    return Mesh(vertices=verts, triangles=tris, boundary_loops=[loop],
                resolution_h=h, geometry=DiskGeometry(radius=radius))


def mesh_annulus(r_in: float, r_out: float, target_h: float) -> Mesh:
    """Triangulate the annulus r_in < |x| < r_out with a structured polar grid."""
    if not (0 < r_in < r_out):
        raise ValueError(f"need 0 < r_in < r_out, got {r_in}, {r_out}")
    if target_h <= 0:
        raise ValueError(f"target_h must be positive, got {target_h}")
    # sqrt(2) covers the cell diagonal
    m = max(8, int(np.ceil(np.sqrt(2.0) * 2 * np.pi * r_out / target_h)))
    nr = max(1, int(np.ceil(np.sqrt(2.0) * (r_out - r_in) / target_h)))
    radii = np.linspace(r_in, r_out, nr + 1)
    th = 2.0 * np.pi * np.arange(m) / m
    verts = np.concatenate([
        np.column_stack([r * np.cos(th), r * np.sin(th)]) for r in radii
    ])
    tris = []
    for j in range(nr):
        base, nxt = j * m, (j + 1) * m
        for k in range(m):
            k1 = (k + 1) % m
            tris.append((base + k, nxt + k, nxt + k1))
            tris.append((base + k, nxt + k1, base + k1))
    tris = np.array(tris, dtype=np.int64)
    outer = np.arange(nr * m, (nr + 1) * m)
    inner = np.arange(m)[::-1]  # clockwise: hole loop
    mesh = Mesh(vertices=verts, triangles=tris, boundary_loops=[outer, inner],
                resolution_h=_max_edge(verts, tris),
                geometry=AnnulusGeometry(r_in=r_in, r_out=r_out))
    if mesh.resolution_h > target_h:
        raise AssertionError("annulus mesh resolution exceeded target")
    return mesh


def mesh_mapped_disk(map, target_h: float) -> Mesh:
    """Triangulate the image of the unit disk under a univalent conformal map.

    Vertices are the images of a unit-disk web; their preimages are kept on
    the mesh so pullbacks and refinement stay exact.  The map must pass its
    univalence check (the caller is expected to have run it; a cheap
    derivative-sign screen is repeated here).
    """
    if target_h <= 0:
        raise ValueError(f"target_h must be positive, got {target_h}")
    sup_dphi = _boundary_derivative_max(map)
    pre = mesh_disk(1.0, min(0.5, target_h / sup_dphi))
    z = pre.vertices[:, 0] + 1j * pre.vertices[:, 1]
    img = np.asarray(map.evaluate(z))
    verts = np.column_stack([img.real, img.imag])
    areas = Mesh(verts, pre.triangles, pre.boundary_loops, 1.0).triangle_areas()
    if areas.min() <= 0:
        raise ValueError("map folds the disk web: not univalent at mesh scale")
    return Mesh(vertices=verts, triangles=pre.triangles,
                boundary_loops=pre.boundary_loops,
                resolution_h=_max_edge(verts, pre.triangles),
                geometry=MappedGeometry(map=map),
                preimage=pre.vertices)


def _boundary_derivative_max(map) -> float:
    th = 2.0 * np.pi * np.arange(720) / 720
    d = np.abs(np.asarray(map.derivative(np.exp(1j * th))))
    if d.min() <= 0:
        raise ValueError("map derivative vanishes on the boundary")
    return float(d.max())


def refine(mesh: Mesh) -> Mesh:
    """Split every triangle 1->4; boundary midpoints reproject to the
    analytic boundary whenever the mesh carries its geometry."""
    verts = list(map(tuple, mesh.vertices))
    pre = None if mesh.preimage is None else list(map(tuple, mesh.preimage))
    bnd_edge_loops = {}
    for li, lp in enumerate(mesh.boundary_loops):
        lp = np.asarray(lp)
        for a, b in zip(lp, np.roll(lp, -1)):
            bnd_edge_loops[(min(a, b), max(a, b))] = li

    loop_radius = _loop_radii(mesh)
    center = np.array(getattr(mesh.geometry, "center", (0.0, 0.0)))

    mid_index = {}

    def midpoint(a: int, b: int) -> int:
        key = (a, b) if a < b else (b, a)
        if key in mid_index:
            return mid_index[key]
        p = np.array([(verts[a][0] + verts[b][0]) / 2, (verts[a][1] + verts[b][1]) / 2])
        zmid = None
        if pre is not None:
            zmid = np.array([(pre[a][0] + pre[b][0]) / 2, (pre[a][1] + pre[b][1]) / 2])
        li = bnd_edge_loops.get(key)
        if li is not None:
            if pre is not None:
                zmid = zmid / np.hypot(*zmid)
            elif loop_radius is not None:
                q = p - center
                p = center + q * (loop_radius[li] / np.hypot(*q))
        if pre is not None:
            img = mesh.geometry.map.evaluate(complex(zmid[0], zmid[1]))
            p = np.array([img.real, img.imag])
        idx = len(verts)
        verts.append((p[0], p[1]))
        if pre is not None:
            pre.append((zmid[0], zmid[1]))
        mid_index[key] = idx
        return idx

    tris = []
    for a, b, c in mesh.triangles:
        ab, bc, ca = midpoint(a, b), midpoint(b, c), midpoint(c, a)
        tris.extend([(a, ab, ca), (b, bc, ab), (c, ca, bc), (ab, bc, ca)])
    tris = np.array(tris, dtype=np.int64)

    loops = []
    for li, lp in enumerate(mesh.boundary_loops):
        lp = np.asarray(lp)
        nodes = []
        for a, b in zip(lp, np.roll(lp, -1)):
            key = (min(a, b), max(a, b))
            nodes.append(int(a))
            nodes.append(mid_index[key])
        loops.append(np.array(nodes, dtype=np.int64))

    verts = np.array(verts)
    new_pre = None if pre is None else np.array(pre)
    # hole-fill bookkeeping indexes the parent; it does not survive a split
    return Mesh(vertices=verts, triangles=tris, boundary_loops=loops,
                resolution_h=_max_edge(verts, tris),
                geometry=mesh.geometry, preimage=new_pre)


def _loop_radii(mesh: Mesh):
    """Circle radius per boundary loop for polar geometries, else None."""
    g = mesh.geometry
    if isinstance(g, DiskGeometry):
        return {0: g.radius}
    if isinstance(g, AnnulusGeometry):
        return {0: g.r_out, 1: g.r_in}
    return None


def fill_holes(mesh: Mesh, target_h: float | None = None) -> Mesh:
    """Fill every hole loop with a polar patch, producing the ambient mesh.

    The parent vertices keep their indices (a field on the parent transfers
    by position); patch metadata is recorded in ``hole_fills`` so integrals
    over the filled regions stay available.
    """
    holes = [(li, lp) for li, lp in enumerate(mesh.boundary_loops)
             if _loop_signed_area(mesh.vertices, lp) < 0]
    if not holes:
        raise ValueError("mesh has no hole loops to fill")
    if target_h is None:
        target_h = mesh.resolution_h
    verts = [mesh.vertices]
    tris = [mesh.triangles]
    fills = list(mesh.hole_fills)
    next_v = mesh.num_vertices
    next_t = mesh.num_triangles
    center = np.array(getattr(mesh.geometry, "center", (0.0, 0.0)))
    for li, lp in holes:
        lp = np.asarray(lp)
        ring = mesh.vertices[lp]
        radii = np.hypot(ring[:, 0] - center[0], ring[:, 1] - center[1])
        r_hole = float(radii.mean())
        if np.ptp(radii) > 1e-9 * max(1.0, r_hole):
            raise ValueError("fill_holes supports circular hole loops only")
        m = len(lp)
        nr = max(1, int(np.ceil(np.sqrt(2) * r_hole / target_h)))
        # rings from the hole boundary (owned by the parent) inward
        ring_idx = [lp[::-1]]  # counterclockwise when walking the patch
        new_pts = []
        th = np.arctan2(ring[::-1, 1] - center[1], ring[::-1, 0] - center[0])
        for j in range(1, nr):
            r = r_hole * (nr - j) / nr
            pts = np.column_stack([center[0] + r * np.cos(th), center[1] + r * np.sin(th)])
            start = next_v + sum(len(p) for p in new_pts)
            new_pts.append(pts)
            ring_idx.append(np.arange(start, start + m))
        cstart = next_v + sum(len(p) for p in new_pts)
        new_pts.append(center[None, :])
        patch_tris = []
        for j in range(nr - 1):
            a_ring, b_ring = ring_idx[j], ring_idx[j + 1]
            for k in range(m):
                k1 = (k + 1) % m
                patch_tris.append((b_ring[k], a_ring[k], a_ring[k1]))
                patch_tris.append((b_ring[k], a_ring[k1], b_ring[k1]))
        inner = ring_idx[-1]
        for k in range(m):
            k1 = (k + 1) % m
            patch_tris.append((cstart, inner[k], inner[k1]))
        patch_tris = np.array(patch_tris, dtype=np.int64)
        new_block = np.concatenate(new_pts)
        verts.append(new_block)
        tris.append(patch_tris)
        fills.append(HoleFill(loop_nodes=lp.copy(),
                              patch_triangles=np.arange(next_t, next_t + len(patch_tris)),
                              patch_vertices=np.arange(next_v, next_v + len(new_block))))
        next_v += len(new_block)
        next_t += len(patch_tris)

    all_verts = np.concatenate(verts)
    all_tris = np.concatenate(tris)
    loops = [np.asarray(lp) for li, lp in enumerate(mesh.boundary_loops)
             if _loop_signed_area(mesh.vertices, lp) >= 0]
    geom = None
    if isinstance(mesh.geometry, AnnulusGeometry):
        geom = DiskGeometry(radius=mesh.geometry.r_out, center=mesh.geometry.center)
    return Mesh(vertices=all_verts, triangles=all_tris, boundary_loops=loops,
                resolution_h=_max_edge(all_verts, all_tris),
                geometry=geom, hole_fills=tuple(fills))


def translate(mesh: Mesh, dx: float, dy: float) -> Mesh:
    """Rigidly translate a mesh (geometry center moves with it)."""
    verts = mesh.vertices + np.array([dx, dy])
    geom = mesh.geometry
    if isinstance(geom, (DiskGeometry, AnnulusGeometry)):
        cx, cy = geom.center
        geom = replace(geom, center=(cx + dx, cy + dy))
    return Mesh(vertices=verts, triangles=mesh.triangles,
                boundary_loops=mesh.boundary_loops,
                resolution_h=mesh.resolution_h, geometry=geom,
                preimage=mesh.preimage, hole_fills=mesh.hole_fills)


def disjoint_union(a: Mesh, b: Mesh) -> Mesh:
    """Concatenate two meshes with disjoint supports into one mesh."""
    off = a.num_vertices
    verts = np.concatenate([a.vertices, b.vertices])
    tris = np.concatenate([a.triangles, b.triangles + off])
    loops = [np.asarray(lp) for lp in a.boundary_loops]
    loops += [np.asarray(lp) + off for lp in b.boundary_loops]
    return Mesh(vertices=verts, triangles=tris, boundary_loops=loops,
                resolution_h=max(a.resolution_h, b.resolution_h))


def mesh_checksum(mesh: Mesh) -> str:
    """Deterministic fingerprint of the node/triangle data."""
    hsh = hashlib.sha256()
    hsh.update(np.ascontiguousarray(mesh.vertices).tobytes())
    hsh.update(np.ascontiguousarray(mesh.triangles).tobytes())
    return hsh.hexdigest()[:16]


def dump_mesh(mesh: Mesh, path) -> None:
    """Plain-text dump: header ``V E F k``, vertex lines, triangle lines,
    then one index line per boundary loop."""
    lines = []
    k = mesh.hole_count()
    lines.append(f"{mesh.num_vertices} {len(mesh.edges())} {mesh.num_triangles} {k}")
    for x, y in mesh.vertices:
        lines.append(f"{x:.17g} {y:.17g}")
    for i, j, l in mesh.triangles:
        lines.append(f"{i} {j} {l}")
    for lp in mesh.boundary_loops:
        lines.append(" ".join(str(int(v)) for v in lp))
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")
