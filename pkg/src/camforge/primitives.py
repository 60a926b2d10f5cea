"""Parametric test and demo meshes (boxes, icospheres, cylinders, profiles)."""

from __future__ import annotations

import numpy as np

from .mesh_kernel import TriangleMesh
from .polygon_ops import Contour, PolygonSet
from .preview3d import extrude_polygonset

_BOX_FACES = [
    (0, 2, 1), (0, 3, 2),  # bottom (z = lo)
    (4, 5, 6), (4, 6, 7),  # top
    (0, 1, 5), (0, 5, 4),  # y = lo
    (2, 3, 7), (2, 7, 6),  # y = hi
    (1, 2, 6), (1, 6, 5),  # x = hi
    (3, 0, 4), (3, 4, 7),  # x = lo
]


def make_box(size=(10.0, 10.0, 10.0), center=(0.0, 0.0, 0.0), name: str = "box") -> TriangleMesh:
    sx, sy, sz = (float(s) / 2 for s in size)
    cx, cy, cz = center
    corners = np.array(
        [
            [cx - sx, cy - sy, cz - sz],
            [cx + sx, cy - sy, cz - sz],
            [cx + sx, cy + sy, cz - sz],
            [cx - sx, cy + sy, cz - sz],
            [cx - sx, cy - sy, cz + sz],
            [cx + sx, cy - sy, cz + sz],
            [cx + sx, cy + sy, cz + sz],
            [cx - sx, cy + sy, cz + sz],
        ]
    )
    return TriangleMesh(corners, np.array(_BOX_FACES, dtype=np.int64), name)


def make_icosphere(radius: float = 20.0, subdivisions: int = 3, center=(0.0, 0.0, 0.0),
                   name: str = "icosphere") -> TriangleMesh:
    t = (1.0 + 5 ** 0.5) / 2.0
    raw = [(-1, t, 0), (1, t, 0), (-1, -t, 0), (1, -t, 0),
           (0, -1, t), (0, 1, t), (0, -1, -t), (0, 1, -t),
           (t, 0, -1), (t, 0, 1), (-t, 0, -1), (-t, 0, 1)]
    verts = [np.array(v, dtype=float) / np.linalg.norm(v) for v in raw]
    faces = [(0, 11, 5), (0, 5, 1), (0, 1, 7), (0, 7, 10), (0, 10, 11),
             (1, 5, 9), (5, 11, 4), (11, 10, 2), (10, 7, 6), (7, 1, 8),
             (3, 9, 4), (3, 4, 2), (3, 2, 6), (3, 6, 8), (3, 8, 9),
             (4, 9, 5), (2, 4, 11), (6, 2, 10), (8, 6, 7), (9, 8, 1)]
    cache: dict[tuple[int, int], int] = {}

    def midpoint(i: int, j: int) -> int:
        key = (min(i, j), max(i, j))
        if key not in cache:
            m = verts[i] + verts[j]
            verts.append(m / np.linalg.norm(m))
            cache[key] = len(verts) - 1
        return cache[key]

    for _ in range(subdivisions):
        faces = [
            tri
            for a, b, c in faces
            for tri in (
                (a, midpoint(a, b), midpoint(c, a)),
                (midpoint(a, b), b, midpoint(b, c)),
                (midpoint(c, a), midpoint(b, c), c),
                (midpoint(a, b), midpoint(b, c), midpoint(c, a)),
            )
        ]
    vertices = np.array(verts) * radius + np.asarray(center, dtype=float)
    return TriangleMesh(vertices, np.array(faces, dtype=np.int64), name)


def make_cylinder(radius: float = 10.0, length: float = 40.0, axis: str = "x",
                  segments: int = 48, center=(0.0, 0.0, 0.0), name: str = "cylinder") -> TriangleMesh:
    angles = np.linspace(0.0, 2 * np.pi, segments, endpoint=False)
    circle = np.stack([np.cos(angles), np.sin(angles)], axis=1) * radius
    contour = PolygonSet([Contour(circle, closed=True)])
    half = length / 2
    if axis == "x":
        # circle in (y, z), extruded along +x
        mesh = extrude_polygonset(contour, -half, half,
                                  u=[0, 1, 0], v=[0, 0, 1], n=[1, 0, 0], name=name)
    elif axis == "y":
        mesh = extrude_polygonset(contour, -half, half,
                                  u=[0, 0, 1], v=[1, 0, 0], n=[0, 1, 0], name=name)
    else:
        mesh = extrude_polygonset(contour, -half, half, name=name)
    return mesh.translated(center)


def make_extruded_profile(points2d, depth: float, name: str = "profile") -> TriangleMesh:
    """Extrude an (x, z) profile along y, centered on the y axis."""
    ps = PolygonSet([Contour(np.asarray(points2d, dtype=float), closed=True)])
    return extrude_polygonset(ps, -depth / 2, depth / 2,
                              u=[1, 0, 0], v=[0, 0, 1], n=[0, -1, 0], name=name)


def make_stool(name: str = "stool") -> TriangleMesh:
    """Bridge-shaped profile (two legs and a seat) extruded 40 mm deep."""
    profile = [
        (0, 0), (15, 0), (15, 28), (45, 28), (45, 0), (60, 0), (60, 40), (0, 40),
    ]
    return make_extruded_profile(profile, depth=40.0, name=name)


def make_box_frustum(bottom_size=(40.0, 40.0), top_size=(20.0, 20.0), height: float = 20.0,
                     center_xy=(0.0, 0.0), z0: float = 0.0, name: str = "frustum") -> TriangleMesh:
    """Rectangular frustum: box topology with a differently sized top face."""
    bx, by = (float(s) / 2 for s in bottom_size)
    tx, ty = (float(s) / 2 for s in top_size)
    cx, cy = center_xy
    z1 = z0 + height
    corners = np.array(
        [
            [cx - bx, cy - by, z0],
            [cx + bx, cy - by, z0],
            [cx + bx, cy + by, z0],
            [cx - bx, cy + by, z0],
            [cx - tx, cy - ty, z1],
            [cx + tx, cy - ty, z1],
            [cx + tx, cy + ty, z1],
            [cx - tx, cy + ty, z1],
        ]
    )
    return TriangleMesh(corners, np.array(_BOX_FACES, dtype=np.int64), name)


def merge_meshes(meshes, name: str = "merged") -> TriangleMesh:
    verts, tris, offset = [], [], 0
    for m in meshes:
        verts.append(m.vertices)
        tris.append(m.triangles + offset)
        offset += len(m.vertices)
    return TriangleMesh(np.vstack(verts), np.vstack(tris), name)


def make_two_blob(name: str = "two-blob") -> TriangleMesh:
    """Two offset boxes whose bottom and top layers share no XY overlap."""
    a = make_box((20, 20, 10), center=(10, 10, 5))
    b = make_box((20, 20, 10), center=(40, 40, 15))
    return merge_meshes([a, b], name)
