"""Wire mesh: horizontal rings plus vertical meridians, bent from straight wire.

Every slice contour is simplified, converted to a feed/bend program, and
exported as one CSV per wire together with a 1:1 bend-check diagram.
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
from ..errors import DegeneratePoint, OpenChains
from ..exporters import export_wire_csv
from ..mesh_kernel import Plane, TriangleMesh, intersect_plane, mesh_stats, plane_to_world
from ..polygon_ops import (
    BendTable,
    Contour,
    PolygonSet,
    contour_length,
    polyline_to_bends,
    simplify_polyline,
)
from ..preview3d import wire_tube
from ..slicer import slice_uniform, stack_volume
from .common import (
    caution,
    count_param,
    length_param,
    lift_layer_warnings,
    sheet_svg_artifacts,
    steps,
    volume_agreement,
)

WORKFLOW_ID = "wire-mesh"
MACHINES = frozenset({"wire_bender"})


def descriptor() -> WorkflowDescriptor:
    return WorkflowDescriptor(
        id=WORKFLOW_ID,
        name="Wire Mesh Bending",
        category="Wire Forming",
        machines=MACHINES,
        dimensions=DimensionProfile(
            product={
                "load_bearing": 1,
                "high_temperature_tolerance": 3,
                "lightweight": 3,
                "detail_fidelity": 1,
            },
            structure={
                "removable_support": False,
                "integrated_support": True,
                "flexible": True,
                "modular": False,
                "reusable": False,
            },
            machine=MACHINES,
        ),
        param_schema=[
            length_param("ring_spacing", 10.0, 0.5, 200.0, "vertical distance between rings"),
            count_param("meridian_count", 4, 0, 36, "number of vertical profile wires"),
            length_param("wire_diameter", 1.5, 0.1, 10.0, "wire stock diameter"),
            length_param("simplify_tol", 0.5, 0.0, 10.0, "contour simplification tolerance"),
            length_param("min_contour_len", 15.0, 0.0, 500.0, "drop wires shorter than this"),
        ],
        doc_links=[
            "https://en.wikipedia.org/wiki/Wire_bending",
            "https://en.wikipedia.org/wiki/Wire_sculpture",
        ],
    )


@dataclass(eq=False)
class WirePath:
    wire_id: str
    kind: str  # ring | meridian
    plane: Plane
    contour: Contour
    bend_table: BendTable
    length: float


def _meridian_planes(mesh: TriangleMesh, count: int) -> list[Plane]:
    lo, hi = mesh.bbox
    center = (lo + hi) / 2
    planes = []
    for k in range(count):
        theta = np.radians(180.0 * k / count)
        normal = np.array([-np.sin(theta), np.cos(theta), 0.0])
        planes.append(Plane(normal, float(normal[:2] @ center[:2])))
    return planes


def compute_wires(mesh: TriangleMesh, params: dict):
    """Ring and meridian wire paths plus slicing/simplification cautions."""
    warnings = []
    dropped = 0

    def to_wires(contours, kind: str, plane: Plane, wires: list):
        nonlocal dropped
        for contour in contours:
            simplified = simplify_polyline(contour, params["simplify_tol"])
            length = contour_length(simplified)
            if length < params["min_contour_len"]:
                dropped += 1
                continue
            try:
                table = polyline_to_bends(simplified)
            except DegeneratePoint:
                dropped += 1
                continue
            wire_id = f"{kind}_{len(wires) + 1:02d}"
            wires.append(WirePath(wire_id, kind, plane, simplified, table, table.total_length))

    rings: list[WirePath] = []
    stack = slice_uniform(mesh, params["ring_spacing"])
    warnings.extend(lift_layer_warnings(stack))
    for layer in stack.layers:
        plane = Plane(np.array([0.0, 0.0, 1.0]), layer.z)
        to_wires(layer.cross_section.contours, "ring", plane, rings)

    meridians: list[WirePath] = []
    for plane in _meridian_planes(mesh, params["meridian_count"]):
        try:
            section = intersect_plane(mesh, plane)
        except OpenChains as exc:
            section = exc.polygons
            warnings.append(caution("OpenChains", f"meridian plane: {exc.open_chain_count} open chain(s)"))
        to_wires(section.contours, "meridian", plane, meridians)

    if dropped:
        warnings.append(
            caution(
                "MinFeature",
                f"{dropped} contour(s) shorter than {params['min_contour_len']:g} mm were "
                "dropped; those features are too small for this wire workflow",
            )
        )
    return rings, meridians, stack, warnings


def generate(mesh: TriangleMesh, params: dict) -> WorkflowOutput:
    rings, meridians, stack, warnings = compute_wires(mesh, params)
    wires = rings + meridians

    artifacts = [
        MachineArtifact(f"{wire.wire_id}.csv", "csv", export_wire_csv(wire)) for wire in wires
    ]
    csv_names = [a.filename for a in artifacts]
    diagram_names: list[str] = []
    if wires:
        diagram_parts = [
            (wire.wire_id, PolygonSet([wire.contour]), wire.wire_id) for wire in wires
        ]
        lo, hi = mesh.bbox
        sheet = max(600.0, 2.5 * float(max(hi - lo)) + 50.0)
        diagrams, _ = sheet_svg_artifacts(diagram_parts, sheet, sheet, prefix="assembly_diagram")
        diagram_names = [a.filename for a in diagrams]
        artifacts.extend(diagrams)

    guide = steps(
        (
            "Bend the wires",
            f"Feed {params['wire_diameter']:g} mm wire and run one CSV program per wire "
            f"({len(rings)} rings, {len(meridians)} meridians); check each against the 1:1 diagram.",
            csv_names + diagram_names,
            ["https://en.wikipedia.org/wiki/Wire_bending"],
            ["wire bender", "wire cutters"],
        ),
        (
            "Assemble rings onto meridians",
            "Hold the meridian wires upright and attach the rings bottom-up in id order.",
            diagram_names,
            ["https://en.wikipedia.org/wiki/Wire_sculpture"],
            ["masking tape"],
        ),
        (
            "Fasten the crossings",
            "Fix every ring/meridian crossing with a wire twist or a solder spot.",
            [],
            ["https://en.wikipedia.org/wiki/Soldering"],
            ["thin binding wire", "pliers"],
        ),
    )

    previews = []
    for wire in wires:
        pts3 = plane_to_world(wire.plane, wire.contour.points)
        previews.append(
            PreviewPart(
                wire.wire_id,
                wire_tube(pts3, wire.plane.normal, params["wire_diameter"] / 2,
                          wire.contour.closed, name=wire.wire_id),
                "wire_ring" if wire.kind == "ring" else "wire_meridian",
            )
        )

    volume = mesh_stats(mesh).volume
    total_length = float(sum(w.length for w in wires))
    wire_radius = params["wire_diameter"] / 2
    metrics = ComparisonMetrics(
        part_count=len(wires),
        total_cut_length=total_length,
        estimated_fidelity=volume_agreement(volume, stack_volume(stack)),
        machine_set=MACHINES,
        material_volume=total_length * np.pi * wire_radius**2,
    )
    return WorkflowOutput(previews, artifacts, guide, warnings, metrics)
