"""Hot-wire foam cutting: one convex silhouette pass per direction.

The wire can only cut straight through the block, so each pass removes
everything outside the convex hull of the projected model. The fidelity
metric voxel-compares the mesh volume against the intersection of the
extruded silhouettes instead of hiding the concavity loss.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..engine import (
    ComparisonMetrics,
    DimensionProfile,
    MachineArtifact,
    PreviewPart,
    WorkflowDescriptor,
    WorkflowOutput,
)
from ..exporters import Placement, SheetLayout, export_svg, fmt4
from ..mesh_kernel import TriangleMesh, convex_hull_2d, mesh_stats
from ..polygon_ops import Contour, PolygonSet, contour_length
from ..preview3d import extrude_polygonset
from .common import caution, enum_param, length_param, rect_contour, steps

WORKFLOW_ID = "hotwire-foam"
MACHINES = frozenset({"hot_wire_cutter"})
BLOCK_MARGIN = 5.0
VOXEL_RESOLUTION = 64

# (projection axes, extrusion axis, 2D->3D basis)
_DIRECTIONS = {
    "x": ((1, 2), 0, ([0, 1, 0], [0, 0, 1], [1, 0, 0])),
    "y": ((0, 2), 1, ([1, 0, 0], [0, 0, 1], [0, -1, 0])),
}


def descriptor() -> WorkflowDescriptor:
    return WorkflowDescriptor(
        id=WORKFLOW_ID,
        name="Hot-Wire Foam Cutting",
        category="Guide Structure",
        machines=MACHINES,
        dimensions=DimensionProfile(
            product={
                "load_bearing": 0,
                "high_temperature_tolerance": 0,
                "lightweight": 3,
                "detail_fidelity": 1,
            },
            structure={
                "removable_support": False,
                "integrated_support": False,
                "flexible": False,
                "modular": False,
                "reusable": False,
            },
            machine=MACHINES,
        ),
        param_schema=[
            enum_param("directions", "x_and_y", ("x_only", "x_and_y"), "cut passes to make"),
            length_param("path_step", 1.0, 0.05, 20.0, "cut path sampling step"),
            length_param("lead_in", 10.0, 0.0, 100.0, "runway outside the block"),
            length_param("fidelity_floor", 0.6, 0.0, 1.0, "warn below this volume agreement"),
        ],
        doc_links=["https://en.wikipedia.org/wiki/Hot-wire_foam_cutter"],
    )


@dataclass(eq=False)
class CutProfile:
    direction: str
    silhouette: Contour       # convex hull of projected vertices
    path: np.ndarray          # ordered cut points incl. lead-in/out
    block_lo: np.ndarray      # projected block rectangle (bbox + margin)
    block_hi: np.ndarray


def _resample_edges(hull: Contour, step: float) -> np.ndarray:
    """Subdivide each hull edge at <= step spacing, keeping every vertex."""
    pts = hull.points
    out = []
    for i in range(len(pts)):
        a, b = pts[i], pts[(i + 1) % len(pts)]
        n = max(1, int(np.ceil(np.linalg.norm(b - a) / step)))
        for k in range(n):
            out.append(a + (b - a) * (k / n))
    return np.array(out)


def _nearest_on_rect(point: np.ndarray, lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
    """Closest point on the rectangle boundary to an interior point."""
    gaps = [
        (point[0] - lo[0], np.array([lo[0], point[1]])),
        (hi[0] - point[0], np.array([hi[0], point[1]])),
        (point[1] - lo[1], np.array([point[0], lo[1]])),
        (hi[1] - point[1], np.array([point[0], hi[1]])),
    ]
    gaps.sort(key=lambda g: g[0])
    return gaps[0][1]


def compute_profiles(mesh: TriangleMesh, params: dict) -> list[CutProfile]:
    directions = ["x"] if params["directions"] == "x_only" else ["x", "y"]
    profiles = []
    for direction in directions:
        axes, _, _ = _DIRECTIONS[direction]
        projected = mesh.vertices[:, axes]
        hull = convex_hull_2d(projected)
        lo = projected.min(axis=0) - BLOCK_MARGIN
        hi = projected.max(axis=0) + BLOCK_MARGIN
        # enter at the hull vertex nearest the block wall
        dists = [
            np.linalg.norm(p - _nearest_on_rect(p, lo, hi)) for p in hull.points
        ]
        entry = int(np.argmin(dists))
        loop = np.roll(hull.points, -entry, axis=0)
        loop = _resample_edges(Contour(loop, closed=True), params["path_step"])
        edge_point = _nearest_on_rect(loop[0], lo, hi)
        outward = edge_point - loop[0]
        norm = np.linalg.norm(outward)
        outward = outward / norm if norm > 1e-12 else np.array([1.0, 0.0])
        start = edge_point + params["lead_in"] * outward
        path = np.vstack([start[None, :], loop, loop[:1], start[None, :]])
        profiles.append(CutProfile(direction, hull, path, lo, hi))
    return profiles


def _inside_convex(hull: Contour, pts: np.ndarray) -> np.ndarray:
    a = hull.points
    b = np.roll(a, -1, axis=0)
    edge = b - a
    px = pts[:, 0][:, None] - a[None, :, 0]
    py = pts[:, 1][:, None] - a[None, :, 1]
    cross = edge[None, :, 0] * py - edge[None, :, 1] * px
    return (cross >= -1e-9).all(axis=1)


def compute_fidelity(mesh: TriangleMesh, profiles: list[CutProfile],
                     resolution: int = VOXEL_RESOLUTION) -> tuple[float, float]:
    """(fidelity, approximation volume) via a voxel grid spanning the bbox.

    The approximation is the intersection of the extruded silhouettes
    clipped to the bbox; it always contains the mesh, so fidelity is
    mesh volume / approximation volume.
    """
    lo, hi = mesh.bbox
    ticks = [
        lo[i] + (np.arange(resolution) + 0.5) * (hi[i] - lo[i]) / resolution
        for i in range(3)
    ]
    # each silhouette constrains only two axes, so test a 2D mask per
    # direction and combine the factored counts per z-slice
    masks = {}
    for profile in profiles:
        axes, _, _ = _DIRECTIONS[profile.direction]
        ga, gb = np.meshgrid(ticks[axes[0]], ticks[axes[1]], indexing="ij")
        pts2 = np.stack([ga.ravel(), gb.ravel()], axis=1)
        masks[profile.direction] = (
            _inside_convex(profile.silhouette, pts2).reshape(resolution, resolution)
        )
    if "y" in masks:
        count = float((masks["x"].sum(axis=0) * masks["y"].sum(axis=0)).sum())
    else:
        count = float(resolution * masks["x"].sum())
    cell = float(np.prod((hi - lo) / resolution))
    approx = count * cell
    volume = mesh_stats(mesh).volume
    if approx <= 0:
        return 0.0, approx
    return min(volume / approx, 1.0), approx


def _profile_csv(profile: CutProfile) -> bytes:
    lines = ["step,u_mm,v_mm"]
    for step, (u, v) in enumerate(profile.path, start=1):
        lines.append(f"{step},{fmt4(u)},{fmt4(v)}")
    return ("\n".join(lines) + "\n").encode("utf-8")


def _profile_svg(profile: CutProfile) -> bytes:
    lo, hi = profile.block_lo, profile.block_hi
    size = hi - lo
    block = rect_contour(lo[0], lo[1], hi[0], hi[1])
    layout = SheetLayout(float(size[0] + 2 * BLOCK_MARGIN), float(size[1] + 2 * BLOCK_MARGIN))
    translation = -lo + BLOCK_MARGIN
    anchor = translation + lo + np.array([size[0] / 2, size[1] - 2.0])
    layout.placements.append(
        Placement(
            f"profile-{profile.direction}",
            translation,
            PolygonSet([block, profile.silhouette]),
            f"{profile.direction.upper()} profile",
            anchor,
            paths=[Contour(profile.path, closed=False)],
        )
    )
    return export_svg(layout)


def generate(mesh: TriangleMesh, params: dict) -> WorkflowOutput:
    profiles = compute_profiles(mesh, params)
    fidelity, approx_volume = compute_fidelity(mesh, profiles)
    warnings = []
    if fidelity < params["fidelity_floor"]:
        warnings.append(
            caution(
                "ConcavityLoss",
                f"convex cuts keep only {fidelity:.0%} volume agreement with the model; "
                "concave detail will be lost (sand or carve afterwards)",
            )
        )

    artifacts = []
    for profile in profiles:
        artifacts.append(
            MachineArtifact(f"profile_{profile.direction}.csv", "csv", _profile_csv(profile))
        )
        artifacts.append(
            MachineArtifact(f"profile_{profile.direction}.svg", "svg", _profile_svg(profile))
        )

    lo, hi = mesh.bbox
    block = hi - lo + 2 * BLOCK_MARGIN
    mount = (
        "Mount the foam block",
        f"Clamp a foam block of at least {block[0]:.0f} x {block[1]:.0f} x {block[2]:.0f} mm "
        "on the cutter table.",
        [],
        ["https://en.wikipedia.org/wiki/Hot-wire_foam_cutter"],
        ["hot wire cutter", "foam block"],
    )
    cut_x = (
        "Cut the X profile",
        "Run the X profile program; the wire enters on the lead-in, loops the "
        "silhouette, and exits the same way.",
        ["profile_x.csv", "profile_x.svg"],
        [],
        ["hot wire cutter"],
    )
    sand = (
        "Sand to finish",
        "Knock down the facets and any concave regions the wire could not reach.",
        [],
        ["https://en.wikipedia.org/wiki/Sandpaper"],
        ["sandpaper"],
    )
    if len(profiles) == 2:
        guide = steps(
            mount,
            cut_x,
            ("Rotate the block", "Rotate the block 90 degrees about the vertical axis.", [], [], []),
            (
                "Cut the Y profile",
                "Run the Y profile program the same way.",
                ["profile_y.csv", "profile_y.svg"],
                [],
                ["hot wire cutter"],
            ),
            sand,
        )
    else:
        guide = steps(mount, cut_x, sand)

    previews = []
    for profile in profiles:
        axes, extrude_axis, (u, v, n) = _DIRECTIONS[profile.direction]
        w0, w1 = float(lo[extrude_axis]), float(hi[extrude_axis])
        if profile.direction == "y":
            # n = -y, so the extrusion coordinate runs opposite the axis
            w0, w1 = -w1, -w0
        previews.append(
            PreviewPart(
                f"silhouette_{profile.direction}",
                extrude_polygonset(
                    PolygonSet([profile.silhouette]), w0, w1, u=u, v=v, n=n,
                    name=f"silhouette_{profile.direction}",
                ),
                "approximation",
            )
        )

    path_length = float(
        sum(np.linalg.norm(np.diff(p.path, axis=0), axis=1).sum() for p in profiles)
    )
    metrics = ComparisonMetrics(
        part_count=1,
        total_cut_length=path_length,
        estimated_fidelity=fidelity,
        machine_set=MACHINES,
        material_volume=float(np.prod(block)),
    )
    return WorkflowOutput(previews, artifacts, guide, warnings, metrics)
