"""Triangulated surface of revolution, discrete measures, OBJ/STL output."""
from __future__ import annotations

from dataclasses import dataclass
import io
import math

import numpy as np

from .curvature import curvature_arrays
from .profile import ClosedProfile, build_closed_profile
from .quadrature import DomainError

__all__ = [
    "MeshError",
    "MeshSurface",
    "tessellate",
    "edge_counts",
    "euler_characteristic",
    "is_watertight",
    "discrete_measures",
    "discrete_mean_curvature",
    "export",
    "read_obj",
]

STL_HEADER = b"nodoid_shell binary STL"
_STL_RECORD = np.dtype([("normal", "<f4", (3,)), ("v", "<f4", (3, 3)), ("attr", "<u2")])


class MeshError(ValueError):
    pass


@dataclass
class MeshSurface:
    vertices: np.ndarray              # (n, 3)
    triangles: np.ndarray             # (m, 3) int
    vertex_arc: list                  # ArcId or None (poles, fixture arcs)
    vertex_t: np.ndarray              # profile parameter, nan at poles
    vertex_H: np.ndarray              # analytic H, nan where undefined
    unreliable: np.ndarray            # bool; poles and junction neighbourhoods
    pole_indices: tuple = ()

    @property
    def n_vertices(self):
        return len(self.vertices)

    @property
    def n_triangles(self):
        return len(self.triangles)


def _profile(obj) -> ClosedProfile:
    if isinstance(obj, ClosedProfile):
        return obj
    return build_closed_profile(obj)


def _profile_nodes(profile, n_profile):
    """Nodes along the pole-to-pole chain, uniform in arclength per arc.

    Returns arrays (x, y, t), the arc of every node and a junction mask.
    Arc endpoints are pinned to their exact parameters.
    """
    chain = profile.chain_from_axis()
    total = sum(arc.length for arc, _ in chain)
    xs, ys, ts, arcs, junction = [], [], [], [], []
    for k, (arc, d) in enumerate(chain):
        if arc.length <= 0.0:
            raise MeshError(f"arc {arc.id} has zero length")
        m = max(8, int(round(n_profile * arc.length / total)))
        s = np.linspace(0.0, arc.length, m + 1)
        t = arc.t_at_arclength(s)
        t[0], t[-1] = arc.t0, arc.t1
        x, y = arc.eval(t)
        x = np.asarray(arc.x(t))  # stable form of x for the nodary arc
        if d < 0:
            t, x, y = t[::-1], x[::-1], y[::-1]
        start = 0 if k == 0 else 1
        xs.append(x[start:])
        ys.append(y[start:])
        ts.append(t[start:])
        arcs.extend([arc.id] * (m + 1 - start))
        flags = np.zeros(m + 1 - start, dtype=bool)
        flags[-1] = True
        if k == 0:
            flags[0] = True
        junction.append(flags)
    x = np.concatenate(xs)
    # the chain starts and ends on the axis
    x[0] = 0.0
    x[-1] = 0.0
    return x, np.concatenate(ys), np.concatenate(ts), arcs, np.concatenate(junction)


def tessellate(params, n_profile=128, n_angular=128) -> MeshSurface:
    """Sweep the profile chain through ``n_angular`` angles.

    Each interior profile node becomes a ring of vertices; the two axis
    nodes become single pole vertices with triangle fans. Triangles are
    oriented so that the enclosed signed volume is positive.
    """
    if n_profile < 8 or n_angular < 8:
        raise DomainError("n_profile and n_angular must be >= 8")
    profile = _profile(params)
    x, y, t, arcs, junction = _profile_nodes(profile, n_profile)
    n_nodes = len(x)
    n_rings = n_nodes - 2
    phi = 2.0 * math.pi * np.arange(n_angular) / n_angular
    cphi, sphi = np.cos(phi), np.sin(phi)

    rx = x[1:-1, None]
    ry = np.broadcast_to(y[1:-1, None], (n_rings, n_angular))
    ring_xyz = np.stack([rx * cphi[None, :], ry, rx * sphi[None, :]], axis=-1).reshape(-1, 3)
    poles = np.array([[0.0, y[0], 0.0], [0.0, y[-1], 0.0]])
    vertices = np.vstack([poles[:1], ring_xyz, poles[1:]])
    top = len(vertices) - 1

    def ring(k):  # k-th ring, k = 0 .. n_rings-1
        return 1 + k * n_angular + np.arange(n_angular)

    tris = []
    r0 = ring(0)
    tris.append(np.column_stack([np.zeros(n_angular, dtype=int), np.roll(r0, -1), r0]))
    for k in range(n_rings - 1):
        a, b = ring(k), ring(k + 1)
        a1, b1 = np.roll(a, -1), np.roll(b, -1)
        tris.append(np.column_stack([a, a1, b1]))
        tris.append(np.column_stack([a, b1, b]))
    rl = ring(n_rings - 1)
    tris.append(np.column_stack([rl, np.roll(rl, -1), np.full(n_angular, top)]))
    triangles = np.vstack(tris).astype(np.int64)
    if _signed_volume(vertices, triangles) < 0:
        triangles = triangles[:, [0, 2, 1]]

    # per-vertex metadata
    vertex_arc = [None] + [arcs[k] for k in range(1, n_nodes - 1) for _ in range(n_angular)] + [None]
    node_H = np.full(n_nodes, np.nan)
    for arc, _ in profile.material:
        sel = np.array([(a is arc.id) for a in arcs]) & ~junction
        sel[0] = sel[-1] = False
        if sel.any():
            node_H[sel] = curvature_arrays(profile, arc.id, t[sel])[3]
    node_bad = junction.copy()
    node_bad[1:] |= junction[:-1]
    node_bad[:-1] |= junction[1:]
    node_bad[[0, 1, -2, -1]] = True
    node_t = t.copy()
    node_t[[0, -1]] = np.nan

    def per_vertex(values):
        return np.concatenate([values[:1], np.repeat(values[1:-1], n_angular), values[-1:]])

    return MeshSurface(vertices, triangles, vertex_arc, per_vertex(node_t),
                       per_vertex(node_H), per_vertex(node_bad), (0, top))


def _signed_volume(vertices, triangles):
    v0, v1, v2 = (vertices[triangles[:, i]] for i in range(3))
    return float(np.einsum("ij,ij->i", v0, np.cross(v1, v2)).sum() / 6.0)


def _edges(triangles):
    return np.concatenate([triangles[:, [0, 1]], triangles[:, [1, 2]], triangles[:, [2, 0]]])


def _keys(pairs, n):
    return pairs[:, 0].astype(np.int64) * n + pairs[:, 1]


def edge_counts(triangles):
    """Unique undirected edges (sorted pairs) and their triangle counts."""
    e = np.sort(_edges(triangles), axis=1)
    n = int(triangles.max()) + 1
    keys, counts = np.unique(_keys(e, n), return_counts=True)
    return np.column_stack([keys // n, keys % n]), counts


def euler_characteristic(mesh: MeshSurface) -> int:
    uniq, _ = edge_counts(mesh.triangles)
    return int(mesh.n_vertices - len(uniq) + mesh.n_triangles)


def is_watertight(mesh: MeshSurface) -> bool:
    """Every edge in exactly two triangles, traversed once in each direction."""
    tri = mesh.triangles
    _, counts = edge_counts(tri)
    if not np.all(counts == 2):
        return False
    directed = _keys(_edges(tri), int(tri.max()) + 1)
    return bool(np.unique(directed).size == directed.size)


def discrete_measures(mesh: MeshSurface):
    """(area, volume) of a closed mesh; volume from signed tetrahedra."""
    if not is_watertight(mesh):
        raise MeshError("mesh is not closed")
    v = mesh.vertices
    t = mesh.triangles
    cross = np.cross(v[t[:, 1]] - v[t[:, 0]], v[t[:, 2]] - v[t[:, 0]])
    area = 0.5 * np.linalg.norm(cross, axis=1).sum()
    return float(area), abs(_signed_volume(v, t))


def discrete_mean_curvature(mesh: MeshSurface):
    """Per-vertex H from the cotangent Laplacian with mixed Voronoi areas.

    Returns ``(H, flagged)``; flagged vertices are the mesh's unreliable
    set plus vertices touching degenerate triangles.
    """
    v = mesh.vertices
    tri = mesh.triangles
    n = len(v)
    p = [v[tri[:, i]] for i in range(3)]
    # edge opposite vertex i: from p[i+1] to p[i+2]
    e = [p[(i + 2) % 3] - p[(i + 1) % 3] for i in range(3)]
    cross = np.cross(p[1] - p[0], p[2] - p[0])
    dbl_area = np.linalg.norm(cross, axis=1)
    degenerate = dbl_area <= 1e-300
    safe = np.where(degenerate, 1.0, dbl_area)
    cot = []
    for i in range(3):
        u = p[(i + 1) % 3] - p[i]
        w = p[(i + 2) % 3] - p[i]
        cot.append(np.einsum("ij,ij->i", u, w) / safe)
    area = 0.5 * dbl_area
    sq = [np.einsum("ij,ij->i", ei, ei) for ei in e]
    obtuse = [np.einsum("ij,ij->i", p[(i + 1) % 3] - p[i], p[(i + 2) % 3] - p[i]) < 0
              for i in range(3)]
    any_obtuse = obtuse[0] | obtuse[1] | obtuse[2]

    def scatter(idx, values):
        return np.column_stack([np.bincount(idx, values[:, c], minlength=n) for c in range(3)])

    lap = np.zeros((n, 3))
    amix = np.zeros(n)
    normals = np.zeros((n, 3))
    for i in range(3):
        j, k = (i + 1) % 3, (i + 2) % 3
        # edge (j, k) is weighted by the cotangent at i
        w = cot[i][:, None] * (p[j] - p[k])
        lap += scatter(tri[:, j], w) - scatter(tri[:, k], w)
        voronoi = (sq[k] * cot[k] + sq[j] * cot[j]) / 8.0
        a_i = np.where(any_obtuse, np.where(obtuse[i], area / 2.0, area / 4.0), voronoi)
        amix += np.bincount(tri[:, i], a_i, minlength=n)
        normals += scatter(tri[:, i], cross)
    normals /= np.linalg.norm(normals, axis=1, keepdims=True)
    with np.errstate(divide="ignore", invalid="ignore"):
        K = lap / (2.0 * amix[:, None])
        H = 0.5 * np.einsum("ij,ij->i", K, normals)

    flagged = mesh.unreliable.copy()
    if degenerate.any():
        flagged[np.unique(tri[degenerate])] = True
    flagged |= ~np.isfinite(H)
    return H, flagged


def _face_normals(mesh):
    v, t = mesh.vertices, mesh.triangles
    c = np.cross(v[t[:, 1]] - v[t[:, 0]], v[t[:, 2]] - v[t[:, 0]])
    norm = np.linalg.norm(c, axis=1, keepdims=True)
    return np.divide(c, norm, out=np.zeros_like(c), where=norm > 0)


def export(mesh: MeshSurface, fmt, destination) -> int:
    """Write ``mesh`` as ``obj`` (ASCII) or ``stl`` (binary) to a byte sink."""
    if fmt == "obj":
        buf = io.StringIO()
        for x, y, z in mesh.vertices:
            buf.write(f"v {x:.17g} {y:.17g} {z:.17g}\n")
        for i, j, k in mesh.triangles + 1:
            buf.write(f"f {i} {j} {k}\n")
        data = buf.getvalue().encode("ascii")
    elif fmt in ("stl", "stl-binary"):
        rec = np.zeros(mesh.n_triangles, dtype=_STL_RECORD)
        rec["normal"] = _face_normals(mesh)
        rec["v"] = mesh.vertices[mesh.triangles]
        header = STL_HEADER.ljust(80, b" ")
        data = header + np.uint32(mesh.n_triangles).astype("<u4").tobytes() + rec.tobytes()
    else:
        raise DomainError(f"unknown mesh format {fmt!r}")
    destination.write(data)
    return len(data)


def read_obj(data):
    """Parse ``v``/``f`` records of an OBJ file (bytes or str)."""
    if isinstance(data, bytes):
        data = data.decode("ascii")
    verts, faces = [], []
    for line in data.splitlines():
        parts = line.split()
        if not parts:
            continue
        if parts[0] == "v":
            verts.append([float(c) for c in parts[1:4]])
        elif parts[0] == "f":
            faces.append([int(c.split("/")[0]) - 1 for c in parts[1:4]])
    return np.array(verts, dtype=float), np.array(faces, dtype=np.int64)
