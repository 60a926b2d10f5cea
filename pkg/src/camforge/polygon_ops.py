"""2D polygon machinery shared by every workflow.

Contours are ordered point lists in millimeters. A PolygonSet holds
non-crossing contours with outer boundaries counter-clockwise and holes
clockwise; membership follows the even-odd rule (the same fill rule the
SVG exporter declares). Boolean clipping and offsetting are delegated to
shapely/GEOS behind these contracts; everything else is implemented here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import shapely
from shapely.geometry import MultiPolygon, Polygon

from .errors import CrossingContours, DegeneratePoint, NotClosed

# Two tolerance tiers: geometric noise from chained/clipped input versus
# pure arithmetic noise.
DUPLICATE_TOL = 1e-9
AREA_EPS = 1e-12


@dataclass(eq=False)
class Contour:
    """Ordered 2D point list; closed contours do not repeat the first point."""

    points: np.ndarray
    closed: bool = True

    def __post_init__(self):
        self.points = np.asarray(self.points, dtype=float).reshape(-1, 2)

    def validate(self) -> None:
        if self.closed and len(self.points) < 3:
            raise ValueError("closed contour needs at least 3 points")
        if len(self.points) >= 2:
            d = np.linalg.norm(np.diff(self.points, axis=0), axis=1)
            if self.closed:
                d = np.append(d, np.linalg.norm(self.points[0] - self.points[-1]))
            if (d < DUPLICATE_TOL).any():
                raise ValueError("consecutive contour points closer than 1e-9 mm")

    def reversed(self) -> "Contour":
        return Contour(self.points[::-1].copy(), self.closed)


@dataclass(eq=False)
class PolygonSet:
    """Non-crossing closed contours; outers CCW, holes CW, even-odd fill."""

    contours: list[Contour] = field(default_factory=list)

    @property
    def is_empty(self) -> bool:
        return not self.contours


def clean_contour(points, closed: bool = True) -> Contour:
    """Build a contour, dropping consecutive points closer than 1e-9 mm."""
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    if len(pts) >= 2:
        gaps = np.linalg.norm(np.diff(pts, axis=0), axis=1)
        if (gaps < DUPLICATE_TOL).any():
            keep = [0]
            for i in range(1, len(pts)):
                if np.linalg.norm(pts[i] - pts[keep[-1]]) >= DUPLICATE_TOL:
                    keep.append(i)
            pts = pts[keep]
        if closed and len(pts) >= 2 and np.linalg.norm(pts[0] - pts[-1]) < DUPLICATE_TOL:
            pts = pts[:-1]
    return Contour(pts, closed)


def strip_collinear(contour: Contour, tol: float = DUPLICATE_TOL) -> Contour:
    """Drop vertices lying within tol of the segment between their neighbors.

    Chained cross-sections pick up zero-information points wherever the
    plane crosses a face-internal edge; those are exactly collinear.
    """
    pts = contour.points
    if len(pts) < (4 if contour.closed else 3):
        return contour
    changed = True
    while changed and len(pts) > (3 if contour.closed else 2):
        changed = False
        keep = np.ones(len(pts), dtype=bool)
        n = len(pts)
        last = n if contour.closed else n - 1
        for i in range(0 if contour.closed else 1, last):
            a = pts[(i - 1) % n]
            b = pts[(i + 1) % n]
            if not (keep[(i - 1) % n] and keep[(i + 1) % n]):
                continue
            if _point_segment_distance(pts[i : i + 1], a, b)[0] <= tol:
                keep[i] = False
                changed = True
        pts = pts[keep]
    return Contour(pts, contour.closed)


def signed_area(contour: Contour) -> float:
    """Shoelace area; positive for counter-clockwise contours."""
    if not contour.closed:
        raise NotClosed("signed_area requires a closed contour")
    p = contour.points
    q = np.roll(p, -1, axis=0)
    # math.fsum is exactly rounded, so reversing a contour negates the
    # area bit-for-bit (each cross term is the exact negation).
    return 0.5 * math.fsum(p[:, 0] * q[:, 1] - q[:, 0] * p[:, 1])


def contour_length(contour: Contour) -> float:
    p = contour.points
    d = np.linalg.norm(np.diff(p, axis=0), axis=1)
    total = math.fsum(d)
    if contour.closed and len(p) >= 2:
        total += float(np.linalg.norm(p[0] - p[-1]))
    return total


def polygonset_area(ps: PolygonSet) -> float:
    """Net even-odd area: outers count positive, holes negative."""
    return math.fsum(signed_area(c) for c in ps.contours)


def polygonset_bbox(ps: PolygonSet) -> tuple[np.ndarray, np.ndarray]:
    pts = np.vstack([c.points for c in ps.contours])
    return pts.min(axis=0), pts.max(axis=0)


def translate_polygonset(ps: PolygonSet, offset) -> PolygonSet:
    off = np.asarray(offset, dtype=float)
    return PolygonSet([Contour(c.points + off, c.closed) for c in ps.contours])


# --- point membership and distance ------------------------------------------

def _all_segments(ps: PolygonSet) -> tuple[np.ndarray, np.ndarray]:
    """Stack every closed-contour edge as (start, end) arrays."""
    starts, ends = [], []
    for c in ps.contours:
        if not c.closed or len(c.points) < 2:
            continue
        starts.append(c.points)
        ends.append(np.roll(c.points, -1, axis=0))
    if not starts:
        return np.zeros((0, 2)), np.zeros((0, 2))
    return np.vstack(starts), np.vstack(ends)


def points_in_polygonset(ps: PolygonSet, points) -> np.ndarray:
    """Even-odd membership for an array of points (crossing-number parity)."""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    a, b = _all_segments(ps)
    if len(a) == 0:
        return np.zeros(len(pts), dtype=bool)
    px = pts[:, 0][:, None]
    py = pts[:, 1][:, None]
    ay, by = a[None, :, 1], b[None, :, 1]
    ax, bx = a[None, :, 0], b[None, :, 0]
    straddles = (ay > py) != (by > py)
    with np.errstate(divide="ignore", invalid="ignore"):
        x_hit = ax + (py - ay) * (bx - ax) / (by - ay)
    crossings = (straddles & (px < x_hit)).sum(axis=1)
    return crossings % 2 == 1


def point_in_polygonset(ps: PolygonSet, point) -> bool:
    return bool(points_in_polygonset(ps, [point])[0])


def distance_to_boundary(ps: PolygonSet, points) -> np.ndarray:
    """Distance from each point to the nearest contour segment."""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    a, b = _all_segments(ps)
    if len(a) == 0:
        return np.full(len(pts), np.inf)
    ab = b - a
    ab_len2 = np.maximum((ab * ab).sum(axis=1), 1e-30)
    ap = pts[:, None, :] - a[None, :, :]
    t = np.clip((ap * ab[None, :, :]).sum(axis=2) / ab_len2[None, :], 0.0, 1.0)
    closest = a[None, :, :] + t[:, :, None] * ab[None, :, :]
    d = np.linalg.norm(pts[:, None, :] - closest, axis=2)
    return d.min(axis=1)


def _contains_point(ring: np.ndarray, point: np.ndarray) -> bool:
    x, y = point
    x1, y1 = ring[:, 0], ring[:, 1]
    x2, y2 = np.roll(ring[:, 0], -1), np.roll(ring[:, 1], -1)
    straddles = (y1 > y) != (y2 > y)
    with np.errstate(divide="ignore", invalid="ignore"):
        xi = x1 + (y - y1) * (x2 - x1) / (y2 - y1)
    return int((straddles & (x < xi)).sum()) % 2 == 1


# --- normalization -----------------------------------------------------------

def _segments_cross(a: np.ndarray, b: np.ndarray) -> bool:
    """True if any segment of ring a properly crosses a segment of ring b."""
    a1, a2 = a, np.roll(a, -1, axis=0)
    b1, b2 = b, np.roll(b, -1, axis=0)

    def cross(u, v):
        return u[..., 0] * v[..., 1] - u[..., 1] * v[..., 0]

    e_b = (b2 - b1)[None, :, :]
    d1 = cross(e_b, a1[:, None, :] - b1[None, :, :])
    d2 = cross(e_b, a2[:, None, :] - b1[None, :, :])
    e_a = (a2 - a1)[:, None, :]
    d3 = cross(e_a, b1[None, :, :] - a1[:, None, :])
    d4 = cross(e_a, b2[None, :, :] - a1[:, None, :])
    return bool(((d1 * d2 < 0) & (d3 * d4 < 0)).any())


def _nesting_depths(contours: list[Contour]) -> list[int]:
    depths = []
    for i, c in enumerate(contours):
        # rightmost vertex is the least likely to sit on another boundary
        rep = c.points[np.lexsort((c.points[:, 1], c.points[:, 0]))[-1]]
        depth = sum(
            1
            for j, other in enumerate(contours)
            if j != i and _contains_point(other.points, rep)
        )
        depths.append(depth)
    return depths


def normalize_polygonset(contours) -> PolygonSet:
    """Orient contours by nesting parity: even depth CCW, odd depth CW.

    Degenerate contours (under 3 points or ~zero area) are dropped;
    properly crossing contours are rejected.
    """
    if isinstance(contours, PolygonSet):
        contours = contours.contours
    kept: list[Contour] = []
    for c in contours:
        cc = clean_contour(c.points, closed=True)
        if len(cc.points) < 3:
            continue
        if abs(signed_area(cc)) < AREA_EPS:
            continue
        kept.append(cc)

    boxes = [(c.points.min(axis=0), c.points.max(axis=0)) for c in kept]
    for i in range(len(kept)):
        for j in range(i + 1, len(kept)):
            (lo_i, hi_i), (lo_j, hi_j) = boxes[i], boxes[j]
            if (hi_i < lo_j).any() or (hi_j < lo_i).any():
                continue
            if _segments_cross(kept[i].points, kept[j].points):
                raise CrossingContours(f"contours {i} and {j} cross")

    depths = _nesting_depths(kept)
    out = []
    for c, depth in zip(kept, depths):
        want_ccw = depth % 2 == 0
        is_ccw = signed_area(c) > 0
        out.append(c if want_ccw == is_ccw else c.reversed())
    return PolygonSet(out)


# --- shapely adapters --------------------------------------------------------

def _regions(ps: PolygonSet) -> list[tuple[Contour, list[Contour]]]:
    """Group each even-depth outer with its immediate holes."""
    contours = ps.contours
    if not contours:
        return []
    depths = _nesting_depths(contours)
    outers = [i for i, d in enumerate(depths) if d % 2 == 0]
    holes_of: dict[int, list[int]] = {i: [] for i in outers}
    for i, d in enumerate(depths):
        if d % 2 == 0:
            continue
        # immediate parent: smallest containing outer one level down
        parent, parent_area = None, np.inf
        rep = contours[i].points[0]
        for o in outers:
            if depths[o] == d - 1 and _contains_point(contours[o].points, rep):
                area = abs(signed_area(contours[o]))
                if area < parent_area:
                    parent, parent_area = o, area
        if parent is not None:
            holes_of[parent].append(i)
    return [(contours[o], [contours[h] for h in holes_of[o]]) for o in outers]


def _to_shapely_polygons(ps: PolygonSet) -> list[Polygon]:
    return [
        Polygon(outer.points, [hole.points for hole in holes])
        for outer, holes in _regions(ps)
    ]


def to_shapely(ps: PolygonSet) -> MultiPolygon | Polygon:
    polys = _to_shapely_polygons(ps)
    if not polys:
        return Polygon()
    if len(polys) == 1:
        return polys[0]
    return MultiPolygon(polys)


def from_shapely(geom) -> PolygonSet:
    """Rebuild a PolygonSet from any polygonal shapely geometry."""
    contours: list[Contour] = []

    def add_polygon(poly: Polygon):
        if poly.is_empty or poly.area < AREA_EPS:
            return
        shell = clean_contour(np.asarray(poly.exterior.coords)[:-1])
        if len(shell.points) >= 3:
            if signed_area(shell) < 0:
                shell = shell.reversed()
            contours.append(shell)
        for ring in poly.interiors:
            hole = clean_contour(np.asarray(ring.coords)[:-1])
            if len(hole.points) < 3 or abs(signed_area(hole)) < AREA_EPS:
                continue
            if signed_area(hole) > 0:
                hole = hole.reversed()
            contours.append(hole)

    if geom.is_empty:
        return PolygonSet([])
    if geom.geom_type == "Polygon":
        add_polygon(geom)
    else:
        for part in getattr(geom, "geoms", []):
            if part.geom_type == "Polygon":
                add_polygon(part)
            elif part.geom_type == "MultiPolygon":
                for sub in part.geoms:
                    add_polygon(sub)
    return PolygonSet(contours)


# --- boolean clipping and offsetting ----------------------------------------

def boolean_op(a: PolygonSet, b: PolygonSet, op: str) -> PolygonSet:
    """Even-odd boolean clipping: union, intersection, or difference."""
    if op not in ("union", "intersection", "difference"):
        raise ValueError(f"unknown boolean op {op!r}")
    ga, gb = to_shapely(a), to_shapely(b)
    if op == "union":
        out = ga.union(gb)
    elif op == "intersection":
        out = ga.intersection(gb)
    else:
        out = ga.difference(gb)
    return from_shapely(out)


@dataclass
class OffsetResult:
    """Offset output plus a flag for regions that vanished entirely."""

    polygons: PolygonSet
    collapsed: bool = False


MITER_LIMIT = 4.0


def _miter_ring(pts: np.ndarray, delta: float) -> np.ndarray | None:
    """Displace every edge of a ring by delta along its outward normal.

    Joins are exact offset-line intersections; spreading joins past the
    4x miter limit are beveled. Returns None when a join is numerically
    unresolvable or any offset edge reverses direction (local collapse),
    which forces the GEOS fallback.
    """
    n = len(pts)
    per_vertex: list[list[np.ndarray]] = []
    edges = []
    for i in range(n):
        p_prev, p, p_next = pts[i - 1], pts[i], pts[(i + 1) % n]
        e1, e2 = p - p_prev, p_next - p
        l1, l2 = np.linalg.norm(e1), np.linalg.norm(e2)
        if l1 < 1e-12 or l2 < 1e-12:
            return None
        n1 = np.array([e1[1], -e1[0]]) / l1
        n2 = np.array([e2[1], -e2[0]]) / l2
        denom = 1.0 + float(n1 @ n2)
        if denom < 1e-9:
            return None
        turn = e1[0] * e2[1] - e1[1] * e2[0]
        spreading = (delta > 0 and turn > 0) or (delta < 0 and turn < 0)
        if spreading and math.sqrt(2.0 / denom) > MITER_LIMIT:
            per_vertex.append([p + delta * n1, p + delta * n2])
        else:
            per_vertex.append([p + delta * (n1 + n2) / denom])
        edges.append(e2)
    # every offset edge must still run the way its source edge does
    for i in range(n):
        start = per_vertex[i][-1]
        end = per_vertex[(i + 1) % n][0]
        if float((end - start) @ edges[i]) <= 0:
            return None
    return np.array([q for points in per_vertex for q in points])


def _cross2(u: np.ndarray, v: np.ndarray) -> float:
    return float(u[0] * v[1] - u[1] * v[0])


def _ring_self_intersects(pts: np.ndarray) -> bool:
    n = len(pts)
    a1 = pts
    a2 = np.roll(pts, -1, axis=0)
    for i in range(n):
        for j in range(i + 2, n):
            if i == 0 and j == n - 1:
                continue  # adjacent around the wrap
            p1, p2, q1, q2 = a1[i], a2[i], a1[j], a2[j]
            d1 = _cross2(q2 - q1, p1 - q1)
            d2 = _cross2(q2 - q1, p2 - q1)
            d3 = _cross2(p2 - p1, q1 - p1)
            d4 = _cross2(p2 - p1, q2 - p1)
            if d1 * d2 < 0 and d3 * d4 < 0:
                return True
    return False


def _offset_region_fast(outer: Contour, holes: list[Contour], delta: float):
    """Exact miter offset of one region; None means fall back to GEOS.

    Returns (contours, collapsed): the outer flipping orientation means
    the whole region vanished; a hole flipping means the hole closed up.
    """
    raw_outer = _miter_ring(outer.points, delta)
    if raw_outer is None:
        return None
    outer_contour = clean_contour(raw_outer)
    if len(outer_contour.points) < 3 or signed_area(outer_contour) <= AREA_EPS:
        return ([], True) if delta < 0 else None
    if _ring_self_intersects(outer_contour.points):
        return None
    contours = [outer_contour]
    for hole in holes:
        raw = _miter_ring(hole.points, delta)
        if raw is None:
            return None
        hole_contour = clean_contour(raw)
        if len(hole_contour.points) < 3 or signed_area(hole_contour) >= -AREA_EPS:
            continue  # hole closed up
        if _ring_self_intersects(hole_contour.points):
            return None
        contours.append(hole_contour)
    return contours, False


def _offset_region_geos(outer: Contour, holes: list[Contour], delta: float):
    region = Polygon(outer.points, [h.points for h in holes])
    out = region.buffer(delta, join_style="mitre", mitre_limit=MITER_LIMIT)
    if out.is_empty or out.area < AREA_EPS:
        return [], True
    return from_shapely(out).contours, False


def offset_polygonset(ps: PolygonSet, delta: float) -> OffsetResult:
    """Displace every edge by delta along its outward normal.

    Joins are mitered with a limit of 4x delta (beveled beyond); holes
    shrink when outers grow. Raw results that self-intersect are cleaned
    by even-odd renormalization (via GEOS); regions that collapse to
    nothing are dropped and flagged.
    """
    if delta == 0:
        return OffsetResult(PolygonSet(list(ps.contours)), False)
    collapsed = False
    all_contours: list[Contour] = []
    for outer, holes in _regions(ps):
        fast = _offset_region_fast(outer, holes, delta)
        if fast is None:
            fast = _offset_region_geos(outer, holes, delta)
        contours, region_collapsed = fast
        collapsed = collapsed or region_collapsed
        all_contours.extend(contours)
    if not all_contours:
        return OffsetResult(PolygonSet([]), collapsed)
    try:
        result = normalize_polygonset(all_contours)
    except CrossingContours:
        # grown regions ran into each other: merge through GEOS
        merged = shapely.union_all(
            [Polygon(o.points, [h.points for h in hs]) for o, hs in _regions(ps)]
        ).buffer(delta, join_style="mitre", mitre_limit=MITER_LIMIT)
        result = from_shapely(merged)
    return OffsetResult(result, collapsed)


# --- polyline simplification -------------------------------------------------

def _point_segment_distance(pts: np.ndarray, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    ab = b - a
    len2 = float(ab @ ab)
    if len2 < 1e-30:
        return np.linalg.norm(pts - a, axis=1)
    t = np.clip((pts - a) @ ab / len2, 0.0, 1.0)
    proj = a + t[:, None] * ab
    return np.linalg.norm(pts - proj, axis=1)


def _douglas_peucker(pts: np.ndarray, tol: float) -> list[int]:
    keep = np.zeros(len(pts), dtype=bool)
    keep[0] = keep[-1] = True
    stack = [(0, len(pts) - 1)]
    while stack:
        i, j = stack.pop()
        if j - i < 2:
            continue
        mid = pts[i + 1 : j]
        d = _point_segment_distance(mid, pts[i], pts[j])
        k = int(np.argmax(d))
        if d[k] > tol:
            split = i + 1 + k
            keep[split] = True
            stack.append((i, split))
            stack.append((split, j))
    return list(np.nonzero(keep)[0])


def _max_deviation_from_ring(points: np.ndarray, ring: np.ndarray) -> float:
    worst = 0.0
    for i in range(len(ring)):
        d = _point_segment_distance(points, ring[i], ring[(i + 1) % len(ring)])
        if i == 0:
            best = d
        else:
            best = np.minimum(best, d)
    worst = float(best.max()) if len(points) else 0.0
    return worst


def simplify_polyline(c: Contour, tolerance: float) -> Contour:
    """Douglas-Peucker subset of the input vertices; deviation <= tolerance."""
    if tolerance < 0:
        raise ValueError("tolerance must be >= 0")
    cleaned = clean_contour(c.points, closed=c.closed)
    pts = cleaned.points
    if tolerance == 0 or len(pts) <= 2:
        return cleaned
    if not c.closed:
        idx = _douglas_peucker(pts, tolerance)
        return Contour(pts[idx], closed=False)
    # closed: anchor at vertex 0 and the farthest vertex, simplify both arcs
    far = int(np.argmax(np.linalg.norm(pts - pts[0], axis=1)))
    if far == 0:
        return cleaned
    first = pts[: far + 1]
    second = np.vstack([pts[far:], pts[:1]])
    idx1 = _douglas_peucker(first, tolerance)
    idx2 = _douglas_peucker(second, tolerance)
    merged = list(idx1) + [far + k for k in idx2[1:-1]]
    if len(merged) < 3:
        return cleaned
    # the two split anchors may themselves be redundant (e.g. a chain that
    # started mid-edge); drop one only if the whole-contour deviation bound
    # still holds afterwards
    for anchor in (0, far):
        if len(merged) <= 3 or anchor not in merged:
            continue
        candidate = [i for i in merged if i != anchor]
        if _max_deviation_from_ring(pts, pts[candidate]) <= tolerance:
            merged = candidate
    return Contour(pts[merged], closed=True)


# --- bend tables --------------------------------------------------------------

@dataclass
class BendTable:
    """Wire program: straight feeds alternating with signed in-plane turns."""

    rows: list[tuple[float, float]]
    closed: bool = False

    def validate(self) -> None:
        for feed, bend in self.rows:
            if feed <= 0:
                raise ValueError(f"feed must be positive, got {feed}")
            if not (-180.0 < bend < 180.0):
                raise ValueError(f"bend must be in (-180, 180), got {bend}")

    @property
    def total_length(self) -> float:
        return math.fsum(feed for feed, _ in self.rows)


def _wrap_angle(deg: float) -> float:
    return (deg + 180.0) % 360.0 - 180.0


def polyline_to_bends(c: Contour) -> BendTable:
    """Feeds from segment lengths, bends from signed turns (left positive)."""
    pts = c.points
    n = len(pts)
    if n < 2:
        raise ValueError("need at least 2 points")
    seg_count = n if c.closed else n - 1
    vecs = [pts[(i + 1) % n] - pts[i] for i in range(seg_count)]
    feeds = [float(np.linalg.norm(v)) for v in vecs]
    if any(f < DUPLICATE_TOL for f in feeds):
        raise DegeneratePoint("zero-length segment")
    headings = [math.degrees(math.atan2(v[1], v[0])) for v in vecs]
    rows = []
    for i in range(seg_count):
        if c.closed:
            bend = _wrap_angle(headings[(i + 1) % seg_count] - headings[i])
        elif i < seg_count - 1:
            bend = _wrap_angle(headings[i + 1] - headings[i])
        else:
            bend = 0.0
        if abs(abs(bend) - 180.0) < 1e-9:
            raise DegeneratePoint("full reversal between segments")
        rows.append((feeds[i], bend))
    table = BendTable(rows, closed=c.closed)
    table.validate()
    return table


def bends_to_polyline(t: BendTable, start=(0.0, 0.0), heading: float = 0.0) -> Contour:
    """Dead-reckoning reconstruction; inverse of polyline_to_bends up to rigid motion."""
    pos = np.asarray(start, dtype=float)
    h = math.radians(heading)
    points = [pos.copy()]
    for feed, bend in t.rows:
        pos = pos + feed * np.array([math.cos(h), math.sin(h)])
        points.append(pos.copy())
        h += math.radians(bend)
    if t.closed:
        return Contour(np.array(points[:-1]), closed=True)
    return Contour(np.array(points), closed=False)


# --- triangulation (preview caps) ---------------------------------------------

def triangulate_polygonset(ps: PolygonSet) -> tuple[np.ndarray, np.ndarray]:
    """Constrained Delaunay triangulation of the even-odd region.

    Returns (vertices (k,2), triangles (t,3)) with CCW triangles; the
    triangle area sum equals the polygon area, which the tests use as an
    oracle.
    """
    verts: list[tuple[float, float]] = []
    index: dict[tuple[float, float], int] = {}
    tris: list[tuple[int, int, int]] = []

    def vid(x: float, y: float) -> int:
        key = (x, y)
        if key not in index:
            index[key] = len(verts)
            verts.append(key)
        return index[key]

    for region in _to_shapely_polygons(ps):
        collection = shapely.constrained_delaunay_triangles(region)
        for tri in getattr(collection, "geoms", []):
            coords = list(tri.exterior.coords)[:-1]
            if len(coords) != 3:
                continue
            (x0, y0), (x1, y1), (x2, y2) = coords
            area2 = (x1 - x0) * (y2 - y0) - (x2 - x0) * (y1 - y0)
            if abs(area2) < 2 * AREA_EPS:
                continue
            if area2 < 0:
                coords = [coords[0], coords[2], coords[1]]
            tris.append(tuple(vid(x, y) for x, y in coords))
    if not verts:
        return np.zeros((0, 2)), np.zeros((0, 3), dtype=int)
    return np.array(verts, dtype=float), np.array(tris, dtype=int)
