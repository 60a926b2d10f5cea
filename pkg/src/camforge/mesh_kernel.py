"""Mesh ingestion, validation, global measures, and slicing primitives.

STL is unitless; coordinates are interpreted as millimeters. Vertices are
welded on a 1e-4 mm grid at parse time (facet duplication noise), while
contour chaining snaps at 1e-6 mm (arithmetic noise).
"""

from __future__ import annotations

import math
import re
import struct
from dataclasses import dataclass

import numpy as np

from . import polygon_ops
from .errors import (
    DegenerateInput,
    EmptyMesh,
    NonFiniteCoordinate,
    OpenChains,
    TruncatedFile,
)
from .polygon_ops import Contour, PolygonSet

WELD_TOL = 1e-4
CHAIN_SNAP_TOL = 1e-6
DEGENERATE_AREA = 1e-8


@dataclass(eq=False)
class TriangleMesh:
    """Indexed triangle soup in millimeters."""

    vertices: np.ndarray
    triangles: np.ndarray
    name: str = ""

    def __post_init__(self):
        self.vertices = np.asarray(self.vertices, dtype=float).reshape(-1, 3)
        self.triangles = np.asarray(self.triangles, dtype=np.int64).reshape(-1, 3)

    def validate(self) -> None:
        if len(self.triangles) < 1:
            raise EmptyMesh("mesh has no triangles")
        if not np.isfinite(self.vertices).all():
            raise NonFiniteCoordinate("mesh has non-finite coordinates")
        if self.triangles.min(initial=0) < 0 or self.triangles.max(initial=0) >= len(self.vertices):
            raise ValueError("triangle index out of range")

    @property
    def bbox(self) -> tuple[np.ndarray, np.ndarray]:
        return self.vertices.min(axis=0), self.vertices.max(axis=0)

    def translated(self, offset) -> "TriangleMesh":
        return TriangleMesh(self.vertices + np.asarray(offset, dtype=float), self.triangles.copy(), self.name)


@dataclass
class MeshStats:
    bbox_min: np.ndarray
    bbox_max: np.ndarray
    volume: float
    watertight: bool
    degenerate_triangles: int


@dataclass
class Plane:
    """Oriented plane {p : normal . p = offset} with a unit normal."""

    normal: np.ndarray
    offset: float

    def __post_init__(self):
        self.normal = np.asarray(self.normal, dtype=float).reshape(3)

    def validate(self) -> None:
        if abs(np.linalg.norm(self.normal) - 1.0) > 1e-9:
            raise ValueError("plane normal must be unit length")

    @classmethod
    def from_point_normal(cls, point, normal) -> "Plane":
        n = np.asarray(normal, dtype=float)
        n = n / np.linalg.norm(n)
        return cls(n, float(n @ np.asarray(point, dtype=float)))


def horizontal_plane(z: float) -> Plane:
    return Plane(np.array([0.0, 0.0, 1.0]), float(z))


# --- STL parsing and writing ---------------------------------------------------

_ASCII_FLOAT = r"[-+]?[0-9]*\.?[0-9]+(?:[eE][-+]?[0-9]+)?"
_FACET_RE = re.compile(
    r"facet\s+normal\s+({f})\s+({f})\s+({f})\s*"
    r"outer\s+loop\s*"
    r"vertex\s+({f})\s+({f})\s+({f})\s*"
    r"vertex\s+({f})\s+({f})\s+({f})\s*"
    r"vertex\s+({f})\s+({f})\s+({f})\s*"
    r"endloop\s*endfacet".format(f=_ASCII_FLOAT),
    re.IGNORECASE,
)


def _weld(raw_triangles: np.ndarray, name: str) -> TriangleMesh:
    """Merge duplicate corners on a WELD_TOL grid; keep first-seen coordinates."""
    corners = raw_triangles.reshape(-1, 3)
    if not np.isfinite(corners).all():
        raise NonFiniteCoordinate("STL contains non-finite coordinates")
    keys = np.round(corners / WELD_TOL).astype(np.int64)
    index: dict[tuple[int, int, int], int] = {}
    vertices: list[np.ndarray] = []
    tri_idx = np.empty(len(corners), dtype=np.int64)
    for i, key in enumerate(map(tuple, keys)):
        slot = index.get(key)
        if slot is None:
            slot = len(vertices)
            index[key] = slot
            vertices.append(corners[i])
        tri_idx[i] = slot
    tris = tri_idx.reshape(-1, 3)
    # drop triangles fully collapsed by welding
    ok = (tris[:, 0] != tris[:, 1]) & (tris[:, 1] != tris[:, 2]) & (tris[:, 0] != tris[:, 2])
    tris = tris[ok]
    if len(tris) == 0:
        raise EmptyMesh("no non-degenerate triangles after welding")
    mesh = TriangleMesh(np.array(vertices), tris, name)
    mesh.validate()
    return mesh


def _parse_ascii_stl(text: str) -> TriangleMesh | None:
    header = text.lstrip()
    if not header.lower().startswith("solid"):
        return None
    name_match = re.match(r"solid\s*([^\n\r]*)", header, re.IGNORECASE)
    name = name_match.group(1).strip() if name_match else ""
    facets = _FACET_RE.findall(text)
    if not facets:
        if re.search(r"endsolid", text, re.IGNORECASE) and "facet" not in text.lower():
            raise EmptyMesh("ASCII STL contains no facets")
        return None  # not valid facet grammar; caller retries as binary
    tris = np.array([[float(v) for v in row[3:]] for row in facets]).reshape(-1, 3, 3)
    return _weld(tris, name)


def _parse_binary_stl(data: bytes) -> TriangleMesh:
    if len(data) < 84:
        raise TruncatedFile(f"binary STL needs at least 84 bytes, got {len(data)}")
    (count,) = struct.unpack_from("<I", data, 80)
    if count == 0:
        raise EmptyMesh("binary STL declares zero triangles")
    needed = 84 + 50 * count
    if len(data) < needed:
        raise TruncatedFile(
            f"binary STL declares {count} triangles ({needed} bytes) but has {len(data)}"
        )
    body = np.frombuffer(data, dtype=np.uint8, count=50 * count, offset=84)
    facets = body.reshape(count, 50)[:, :48].copy().view("<f4").reshape(count, 4, 3)
    tris = facets[:, 1:, :].astype(float)
    name = data[:80].split(b"\0", 1)[0].decode("ascii", "replace").strip()
    if name.lower().startswith("solid"):
        name = name[5:].strip()
    return _weld(tris, name)


def parse_stl(data: bytes) -> TriangleMesh:
    """Auto-detecting STL reader (ASCII "solid" grammar, else binary)."""
    if not data:
        raise EmptyMesh("empty input")
    if data[:5].lower() == b"solid":
        try:
            text = data.decode("ascii")
        except UnicodeDecodeError:
            text = None
        if text is not None:
            mesh = _parse_ascii_stl(text)
            if mesh is not None:
                return mesh
    return _parse_binary_stl(data)


def _facet_normal(a: np.ndarray, b: np.ndarray, c: np.ndarray) -> np.ndarray:
    n = np.cross(b - a, c - a)
    length = np.linalg.norm(n)
    if length < 1e-20:
        return np.zeros(3)
    return n / length


def write_stl(mesh: TriangleMesh, ascii: bool = False) -> bytes:
    """Binary: 80-byte header + LE count + 50-byte facets. ASCII on request."""
    mesh.validate()
    v, t = mesh.vertices, mesh.triangles
    if ascii:
        name = mesh.name or "mesh"
        lines = [f"solid {name}"]
        for tri in t:
            a, b, c = v[tri[0]], v[tri[1]], v[tri[2]]
            n = _facet_normal(a, b, c)
            lines.append(f"  facet normal {n[0]:.6e} {n[1]:.6e} {n[2]:.6e}")
            lines.append("    outer loop")
            for p in (a, b, c):
                lines.append(f"      vertex {p[0]:.6e} {p[1]:.6e} {p[2]:.6e}")
            lines.append("    endloop")
            lines.append("  endfacet")
        lines.append(f"endsolid {name}")
        return ("\n".join(lines) + "\n").encode("ascii")
    header = (mesh.name or "camforge").encode("ascii", "replace")[:80]
    out = bytearray(header.ljust(80, b"\0"))
    out += struct.pack("<I", len(t))
    for tri in t:
        a, b, c = v[tri[0]], v[tri[1]], v[tri[2]]
        n = _facet_normal(a, b, c)
        out += struct.pack("<12fH", *n, *a, *b, *c, 0)
    return bytes(out)


# --- global measures -----------------------------------------------------------

def mesh_stats(mesh: TriangleMesh) -> MeshStats:
    """Signed volume (divergence theorem), watertightness, degeneracy count."""
    mesh.validate()
    v, t = mesh.vertices, mesh.triangles
    a, b, c = v[t[:, 0]], v[t[:, 1]], v[t[:, 2]]
    volume = float(math.fsum(np.einsum("ij,ij->i", a, np.cross(b, c))) / 6.0)
    areas = 0.5 * np.linalg.norm(np.cross(b - a, c - a), axis=1)
    degenerate = int((areas < DEGENERATE_AREA).sum())

    directed: dict[tuple[int, int], int] = {}
    for tri in t:
        for i in range(3):
            e = (int(tri[i]), int(tri[(i + 1) % 3]))
            directed[e] = directed.get(e, 0) + 1
    watertight = True
    for (i, j), n in directed.items():
        if n != 1 or directed.get((j, i), 0) != 1:
            watertight = False
            break
    lo, hi = mesh.bbox
    return MeshStats(lo, hi, volume, watertight, degenerate)


# --- plane intersection ----------------------------------------------------------

def plane_basis(plane: Plane) -> tuple[np.ndarray, np.ndarray]:
    """Right-handed in-plane basis (u, v) with u x v = normal.

    Horizontal planes get (x, y); vertical planes get (horizontal, z).
    """
    n = plane.normal
    z = np.array([0.0, 0.0, 1.0])
    if abs(n @ z) > 0.999999:
        u = np.array([1.0, 0.0, 0.0])
    else:
        u = np.cross(z, n)
        u = u / np.linalg.norm(u)
    v = np.cross(n, u)
    return u, v


def plane_to_world(plane: Plane, points_2d: np.ndarray) -> np.ndarray:
    """Map in-plane 2D coordinates back to 3D."""
    u, v = plane_basis(plane)
    pts = np.atleast_2d(np.asarray(points_2d, dtype=float))
    return pts[:, 0:1] * u[None, :] + pts[:, 1:2] * v[None, :] + plane.offset * plane.normal[None, :]


def _plane_segments(mesh: TriangleMesh, plane: Plane) -> list[tuple[np.ndarray, np.ndarray]]:
    v, t = mesh.vertices, mesh.triangles
    d = v @ plane.normal - plane.offset
    # on-plane vertices count as the positive side so shared edges produce
    # consistent single segments
    side = d >= 0
    tri_sides = side[t]
    mixed = (tri_sides.any(axis=1)) & (~tri_sides.all(axis=1))
    segments = []
    for tri in t[mixed]:
        pts = []
        for i in range(3):
            ia, ib = int(tri[i]), int(tri[(i + 1) % 3])
            if side[ia] == side[ib]:
                continue
            # canonical edge direction so both incident triangles compute
            # bit-identical crossing points
            if ia > ib:
                ia, ib = ib, ia
            da, db = d[ia], d[ib]
            s = da / (da - db)
            pts.append(v[ia] + s * (v[ib] - v[ia]))
        if len(pts) == 2 and np.linalg.norm(pts[0] - pts[1]) > 1e-12:
            segments.append((pts[0], pts[1]))
    return segments


def _chain_segments(segments, plane: Plane) -> tuple[list[Contour], int]:
    """Chain 3D segments into closed 2D contours; returns (closed, open count)."""
    u, v = plane_basis(plane)
    pts2 = [
        (np.array([a @ u, a @ v]), np.array([b @ u, b @ v]))
        for a, b in segments
    ]

    def key(p: np.ndarray) -> tuple[int, int]:
        return (int(round(p[0] / CHAIN_SNAP_TOL)), int(round(p[1] / CHAIN_SNAP_TOL)))

    endpoint_map: dict[tuple[int, int], list[tuple[int, int]]] = {}
    for idx, (a, b) in enumerate(pts2):
        endpoint_map.setdefault(key(a), []).append((idx, 0))
        endpoint_map.setdefault(key(b), []).append((idx, 1))

    used = [False] * len(pts2)
    closed: list[Contour] = []
    open_count = 0
    for start in range(len(pts2)):
        if used[start]:
            continue
        used[start] = True
        chain = [pts2[start][0], pts2[start][1]]
        start_key = key(chain[0])
        while True:
            tail_key = key(chain[-1])
            if tail_key == start_key and len(chain) > 2:
                break
            next_seg = None
            for idx, end in endpoint_map.get(tail_key, []):
                if not used[idx]:
                    next_seg = (idx, end)
                    break
            if next_seg is None:
                break
            idx, end = next_seg
            used[idx] = True
            chain.append(pts2[idx][1 - end])
        if key(chain[-1]) == start_key and len(chain) > 3:
            contour = polygon_ops.clean_contour(np.array(chain[:-1]), closed=True)
            contour = polygon_ops.strip_collinear(contour)
            if len(contour.points) >= 3:
                closed.append(contour)
        else:
            open_count += 1
    return closed, open_count


def intersect_plane(mesh: TriangleMesh, plane: Plane) -> PolygonSet:
    """Cross-section of the mesh as a normalized 2D polygon set.

    Planes passing within 1e-5 of the mesh extent of any vertex are nudged
    by +1e-5 x extent before intersecting (degeneracy dodge). Unclosed
    chains from non-watertight meshes raise OpenChains carrying the closed
    part of the result.
    """
    mesh.validate()
    plane.validate()
    d = mesh.vertices @ plane.normal
    extent = float(d.max() - d.min())
    working = plane
    if extent > 0:
        tol = 1e-5 * extent
        if np.abs(d - plane.offset).min() < tol:
            working = Plane(plane.normal.copy(), plane.offset + tol)
    segments = _plane_segments(mesh, working)
    if not segments:
        return PolygonSet([])
    closed, open_count = _chain_segments(segments, working)
    polygons = polygon_ops.normalize_polygonset(closed)
    if open_count:
        raise OpenChains(open_count, polygons)
    return polygons


# --- 2D convex hull ---------------------------------------------------------------

def convex_hull_2d(points) -> Contour:
    """Counter-clockwise convex hull (monotone chain), collinear points removed."""
    pts = np.unique(np.asarray(points, dtype=float).reshape(-1, 2), axis=0)
    if len(pts) < 3:
        raise DegenerateInput("need at least 3 distinct points")
    order = np.lexsort((pts[:, 1], pts[:, 0]))
    pts = pts[order]

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    def half(iterable):
        out: list[np.ndarray] = []
        for p in iterable:
            while len(out) >= 2 and cross(out[-2], out[-1], p) <= 1e-9:
                out.pop()
            out.append(p)
        return out

    lower = half(pts)
    upper = half(pts[::-1])
    hull = lower[:-1] + upper[:-1]
    if len(hull) < 3:
        raise DegenerateInput("all points are collinear")
    return Contour(np.array(hull), closed=True)
