"""Triangle-mesh builders for workflow previews (extrusions, wire tubes)."""

from __future__ import annotations

import numpy as np

from .mesh_kernel import TriangleMesh
from .polygon_ops import PolygonSet, normalize_polygonset, triangulate_polygonset

X = np.array([1.0, 0.0, 0.0])
Y = np.array([0.0, 1.0, 0.0])
Z = np.array([0.0, 0.0, 1.0])


def extrude_polygonset(
    ps: PolygonSet,
    w0: float,
    w1: float,
    u=X,
    v=Y,
    n=Z,
    name: str = "",
) -> TriangleMesh:
    """Extrude an even-odd region along n from w0 to w1 (u x v must equal n).

    2D point (a, b) maps to a*u + b*v + w*n. Caps are constrained-Delaunay
    triangulated so holes are preserved; walls follow contour orientation,
    which keeps all triangles facing outward.
    """
    if w1 < w0:
        w0, w1 = w1, w0
    ps = normalize_polygonset(ps)
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    n = np.asarray(n, dtype=float)

    verts: list[np.ndarray] = []
    index: dict[tuple[float, float, int], int] = {}
    tris: list[tuple[int, int, int]] = []

    def vid(x: float, y: float, top: int) -> int:
        key = (x, y, top)
        if key not in index:
            index[key] = len(verts)
            w = w1 if top else w0
            verts.append(x * u + y * v + w * n)
        return index[key]

    cap_verts, cap_tris = triangulate_polygonset(ps)
    for a, b, c in cap_tris:
        pa, pb, pc = cap_verts[a], cap_verts[b], cap_verts[c]
        tris.append((vid(*pa, 1), vid(*pb, 1), vid(*pc, 1)))
        tris.append((vid(*pa, 0), vid(*pc, 0), vid(*pb, 0)))
    for contour in ps.contours:
        pts = contour.points
        for i in range(len(pts)):
            p, q = pts[i], pts[(i + 1) % len(pts)]
            p0, q0 = vid(*p, 0), vid(*q, 0)
            p1, q1 = vid(*p, 1), vid(*q, 1)
            tris.append((p0, q0, q1))
            tris.append((p0, q1, p1))
    return TriangleMesh(np.array(verts), np.array(tris, dtype=np.int64), name)


def wire_tube(
    points3d: np.ndarray,
    plane_normal: np.ndarray,
    radius: float,
    closed: bool,
    name: str = "",
) -> TriangleMesh:
    """Square-profile tube along a planar polyline, for wire previews."""
    pts = np.asarray(points3d, dtype=float).reshape(-1, 3)
    n = np.asarray(plane_normal, dtype=float)
    n = n / np.linalg.norm(n)
    count = len(pts)
    rings = []
    for i in range(count):
        if closed:
            prev_pt, next_pt = pts[i - 1], pts[(i + 1) % count]
        else:
            prev_pt = pts[i] if i == 0 else pts[i - 1]
            next_pt = pts[i] if i == count - 1 else pts[i + 1]
        tangent = next_pt - prev_pt
        norm = np.linalg.norm(tangent)
        tangent = tangent / norm if norm > 1e-12 else np.array([1.0, 0.0, 0.0])
        side = np.cross(tangent, n)
        s_norm = np.linalg.norm(side)
        side = side / s_norm if s_norm > 1e-12 else np.cross(n, [1.0, 0.0, 0.0])
        p = pts[i]
        rings.append([p + radius * (n + side), p + radius * (n - side),
                      p + radius * (-n - side), p + radius * (-n + side)])
    rings_arr = np.array(rings)
    verts = rings_arr.reshape(-1, 3)
    tris = []
    seg_count = count if closed else count - 1
    for i in range(seg_count):
        a = 4 * i
        b = 4 * ((i + 1) % count)
        for k in range(4):
            k2 = (k + 1) % 4
            tris.append((a + k, b + k, b + k2))
            tris.append((a + k, b + k2, a + k2))
    if not closed:
        tris.append((0, 1, 2))
        tris.append((0, 2, 3))
        last = 4 * (count - 1)
        tris.append((last, last + 2, last + 1))
        tris.append((last, last + 3, last + 2))
    return TriangleMesh(verts, np.array(tris, dtype=np.int64), name)
