"""Egg-crate interlocking: two orthogonal families of slotted planar slats.

Each X/Y plane pair meets along a vertical line; the z-interval where both
slats have material becomes a slot pair, cut half-depth into each part
(X from the top, Y from the bottom) so the slats mate flush.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..engine import (
    ComparisonMetrics,
    DimensionProfile,
    PreviewPart,
    WorkflowDescriptor,
    WorkflowOutput,
)
from ..errors import OpenChains, ParamOutOfRange
from ..mesh_kernel import Plane, TriangleMesh, mesh_stats, intersect_plane, plane_basis
from ..polygon_ops import (
    PolygonSet,
    boolean_op,
    offset_polygonset,
    point_in_polygonset,
    points_in_polygonset,
)
from ..preview3d import extrude_polygonset
from .common import (
    caution,
    length_param,
    rect_contour,
    sheet_params,
    sheet_svg_artifacts,
    steps,
    total_cut_length,
    total_net_area,
    volume_agreement,
)

WORKFLOW_ID = "interlocking"
MACHINES = frozenset({"laser_cutter"})
SCAN_STEP = 0.1
REFINE_TOL = 1e-4
SLOT_OVERCUT = 1.0  # extends the cut past the part edge so slots open cleanly


def descriptor() -> WorkflowDescriptor:
    return WorkflowDescriptor(
        id=WORKFLOW_ID,
        name="Interlocking Slotted Slats",
        category="Interlocking Structure",
        machines=MACHINES,
        dimensions=DimensionProfile(
            product={
                "load_bearing": 2,
                "high_temperature_tolerance": 1,
                "lightweight": 3,
                "detail_fidelity": 1,
            },
            structure={
                "removable_support": False,
                "integrated_support": True,
                "flexible": False,
                "modular": True,
                "reusable": False,
            },
            machine=MACHINES,
        ),
        param_schema=[
            length_param("material_thickness", 3.0, 0.5, 30.0, "slat stock thickness"),
            length_param("spacing_x", 20.0, 1.0, 500.0, "distance between X slats"),
            length_param("spacing_y", 20.0, 1.0, 500.0, "distance between Y slats"),
            length_param("slot_clearance", 0.2, 0.0, 2.0, "extra slot width for easy fit"),
            length_param("kerf", 0.1, 0.0, 2.0, "cut width removed by the laser"),
            *sheet_params(),
        ],
        doc_links=["https://en.wikipedia.org/wiki/Laser_cutting"],
    )


@dataclass(eq=False)
class PlanarPart:
    part_id: str
    axis: str
    position: float
    plane: Plane
    polygons: PolygonSet  # before slot cutting
    cut: PolygonSet       # after slot cutting


@dataclass(eq=False)
class SlotSpec:
    piece_a: str
    piece_b: str
    location_a: np.ndarray
    location_b: np.ndarray
    width: float
    depth_a: float
    depth_b: float
    from_edge_a: str = "top"
    from_edge_b: str = "bottom"
    z_interval: tuple[float, float] = (0.0, 0.0)


def _plane_for(axis: str, position: float) -> Plane:
    if axis == "x":
        # basis (y, z)
        return Plane(np.array([1.0, 0.0, 0.0]), position)
    # normal -y gives in-plane coordinates (x, z)
    return Plane(np.array([0.0, -1.0, 0.0]), -position)


def _plane_positions(lo: float, hi: float, spacing: float) -> list[float]:
    positions = []
    i = 0
    while True:
        p = lo + spacing * (i + 0.5)
        if p >= hi - 1e-9:
            break
        positions.append(p)
        i += 1
    return positions


def _refine(predicate, z_out: float, z_in: float) -> float:
    """Bisect a covered/uncovered transition down to REFINE_TOL."""
    while abs(z_in - z_out) > REFINE_TOL:
        mid = 0.5 * (z_in + z_out)
        if predicate(mid):
            z_in = mid
        else:
            z_out = mid
    return z_in


def _cover_intervals(part_x: PlanarPart, part_y: PlanarPart, z_lo: float, z_hi: float):
    """z-intervals along the mutual vertical line where both slats have material."""
    hx = part_y.position  # horizontal coordinate on the X slat is y
    hy = part_x.position  # horizontal coordinate on the Y slat is x
    zs = np.arange(z_lo - SCAN_STEP, z_hi + 2 * SCAN_STEP, SCAN_STEP)
    in_x = points_in_polygonset(part_x.polygons, np.column_stack([np.full_like(zs, hx), zs]))
    in_y = points_in_polygonset(part_y.polygons, np.column_stack([np.full_like(zs, hy), zs]))
    covered = in_x & in_y

    def predicate(z: float) -> bool:
        return point_in_polygonset(part_x.polygons, (hx, z)) and point_in_polygonset(
            part_y.polygons, (hy, z)
        )

    intervals = []
    i = 0
    while i < len(zs):
        if not covered[i]:
            i += 1
            continue
        j = i
        while j + 1 < len(zs) and covered[j + 1]:
            j += 1
        lo = _refine(predicate, zs[i] - SCAN_STEP, zs[i]) if i > 0 else zs[i]
        hi = _refine(predicate, zs[j] + SCAN_STEP, zs[j]) if j + 1 < len(zs) else zs[j]
        intervals.append((float(lo), float(hi)))
        i = j + 1
    return intervals


def compute_parts_and_slots(mesh: TriangleMesh, params: dict):
    """Slat cross-sections, slot pairs, and geometric cautions (pre-kerf)."""
    lo, hi = mesh.bbox
    warnings = []
    parts: list[PlanarPart] = []
    family: dict[str, list[PlanarPart]] = {"x": [], "y": []}
    for axis, spacing in (("x", params["spacing_x"]), ("y", params["spacing_y"])):
        axis_index = 0 if axis == "x" else 1
        for position in _plane_positions(lo[axis_index], hi[axis_index], spacing):
            plane = _plane_for(axis, position)
            try:
                section = intersect_plane(mesh, plane)
            except OpenChains as exc:
                section = exc.polygons
                warnings.append(
                    caution(
                        "OpenChains",
                        f"{axis}-slat at {position:.2f} mm: {exc.open_chain_count} open chain(s)",
                    )
                )
            if section.is_empty:
                continue
            part_id = f"{axis.upper()}{len(family[axis]) + 1}"
            part = PlanarPart(part_id, axis, position, plane, section, section)
            family[axis].append(part)
            parts.append(part)

    width = params["material_thickness"] + params["slot_clearance"]
    slots: list[SlotSpec] = []
    slot_rects: dict[str, list] = {p.part_id: [] for p in parts}
    for part_x in family["x"]:
        for part_y in family["y"]:
            intervals = _cover_intervals(part_x, part_y, lo[2], hi[2])
            if not intervals:
                continue
            if len(intervals) > 1:
                warnings.append(
                    caution(
                        "MultiSpan",
                        f"{part_x.part_id} and {part_y.part_id} overlap in "
                        f"{len(intervals)} separate spans; slotting only the longest",
                    )
                )
                intervals.sort(key=lambda iv: (-(iv[1] - iv[0]), iv[0]))
            z0, z1 = intervals[0]
            mid = 0.5 * (z0 + z1)
            half = 0.5 * (z1 - z0)
            hx, hy = part_y.position, part_x.position
            slots.append(
                SlotSpec(
                    piece_a=part_x.part_id,
                    piece_b=part_y.part_id,
                    location_a=np.array([hx, z1]),
                    location_b=np.array([hy, z0]),
                    width=width,
                    depth_a=half,
                    depth_b=half,
                    z_interval=(z0, z1),
                )
            )
            slot_rects[part_x.part_id].append(
                rect_contour(hx - width / 2, mid, hx + width / 2, z1 + SLOT_OVERCUT)
            )
            slot_rects[part_y.part_id].append(
                rect_contour(hy - width / 2, z0 - SLOT_OVERCUT, hy + width / 2, mid)
            )

    for part in parts:
        rects = slot_rects[part.part_id]
        if rects:
            part.cut = boolean_op(part.polygons, PolygonSet(rects), "difference")

    if len(parts) >= 2:
        component = {p.part_id: p.part_id for p in parts}

        def find(a: str) -> str:
            while component[a] != a:
                component[a] = component[component[a]]
                a = component[a]
            return a

        for slot in slots:
            component[find(slot.piece_a)] = find(slot.piece_b)
        roots = {find(p.part_id) for p in parts}
        if len(roots) > 1:
            warnings.append(
                caution(
                    "DisconnectedAssembly",
                    f"the {len(parts)} slats form {len(roots)} disconnected groups; "
                    "the assembly will not hold together as one piece",
                )
            )
    return parts, slots, warnings


def generate(mesh: TriangleMesh, params: dict) -> WorkflowOutput:
    for spacing_name in ("spacing_x", "spacing_y"):
        if params[spacing_name] <= params["material_thickness"]:
            raise ParamOutOfRange(
                spacing_name,
                f"{params[spacing_name]} must exceed material_thickness {params['material_thickness']}",
            )
    parts, slots, warnings = compute_parts_and_slots(mesh, params)

    cut_sets = []
    sheet_parts = []
    previews = []
    thickness = params["material_thickness"]
    for part in parts:
        cut = offset_polygonset(part.cut, params["kerf"] / 2).polygons
        cut_sets.append(cut)
        sheet_parts.append((part.part_id, cut, part.part_id))
        u, v = plane_basis(part.plane)
        previews.append(
            PreviewPart(
                part.part_id,
                extrude_polygonset(
                    part.cut,
                    part.plane.offset - thickness / 2,
                    part.plane.offset + thickness / 2,
                    u=u,
                    v=v,
                    n=part.plane.normal,
                    name=part.part_id,
                ),
                "slat_x" if part.axis == "x" else "slat_y",
            )
        )

    artifacts, _ = sheet_svg_artifacts(sheet_parts, params["sheet_w"], params["sheet_h"])
    sheet_names = [a.filename for a in artifacts]
    x_count = sum(1 for p in parts if p.axis == "x")
    y_count = len(parts) - x_count

    guide = steps(
        (
            "Cut the slats",
            f"Laser-cut all {len(parts)} slats from {thickness:g} mm stock; "
            "labels give each slat's family and order.",
            sheet_names,
            ["https://en.wikipedia.org/wiki/Laser_cutting"],
            ["laser cutter", "safety glasses"],
        ),
        (
            "Stand the X slats",
            f"Place the {x_count} X slats upright in order, slots facing up.",
            [],
            [],
            [],
        ),
        (
            "Mate the Y slats",
            f"Lower each of the {y_count} Y slats onto the X family, engaging "
            f"{len(slots)} slot pairs until the edges sit flush.",
            [],
            ["https://en.wikipedia.org/wiki/Lap_joint"],
            ["rubber mallet"],
        ),
        (
            "Secure the joints",
            "Optionally add a drop of glue at each crossing for a permanent assembly.",
            [],
            [],
            ["wood glue"],
        ),
    )

    volume = mesh_stats(mesh).volume
    estimates = []
    for axis, spacing in (("x", params["spacing_x"]), ("y", params["spacing_y"])):
        axis_parts = [p for p in parts if p.axis == axis]
        if axis_parts:
            estimates.append(total_net_area(p.polygons for p in axis_parts) * spacing)
    approx = sum(estimates) / len(estimates) if estimates else 0.0
    metrics = ComparisonMetrics(
        part_count=len(parts),
        total_cut_length=total_cut_length(cut_sets),
        estimated_fidelity=volume_agreement(volume, approx),
        machine_set=MACHINES,
        material_area=total_net_area(p.cut for p in parts),
        material_volume=total_net_area(p.cut for p in parts) * thickness,
    )
    return WorkflowOutput(previews, artifacts, guide, warnings, metrics)
