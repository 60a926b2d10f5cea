"""Layer stacking: laser-cut every slice outline, stack in order, glue.

Dowel registration holes are placed where every layer overlaps, so a pin
can keep the stack aligned during glue-up; when the model has no common
overlap the workflow falls back to label-only alignment with a caution.
"""

from __future__ import annotations

from functools import reduce

import numpy as np

from ..engine import (
    ComparisonMetrics,
    DimensionProfile,
    PreviewPart,
    WorkflowDescriptor,
    WorkflowOutput,
)
from ..mesh_kernel import TriangleMesh, mesh_stats
from ..polygon_ops import (
    PolygonSet,
    boolean_op,
    distance_to_boundary,
    offset_polygonset,
    points_in_polygonset,
    polygonset_bbox,
)
from ..preview3d import extrude_polygonset
from ..slicer import slice_uniform, stack_volume
from .common import (
    caution,
    circle_contour,
    count_param,
    length_param,
    lift_layer_warnings,
    sheet_params,
    sheet_svg_artifacts,
    steps,
    total_cut_length,
    total_net_area,
    volume_agreement,
)

WORKFLOW_ID = "stacked-slices"
MACHINES = frozenset({"laser_cutter"})
DOWEL_GRID = 20
DOWEL_MARGIN = 1.0  # clearance ring around each dowel hole


def descriptor() -> WorkflowDescriptor:
    return WorkflowDescriptor(
        id=WORKFLOW_ID,
        name="Laser-Cut Layer Stacking",
        category="Stacked Slice Construction",
        machines=MACHINES,
        dimensions=DimensionProfile(
            product={
                "load_bearing": 3,
                "high_temperature_tolerance": 1,
                "lightweight": 1,
                "detail_fidelity": 2,
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
            length_param("layer_height", 3.0, 0.2, 100.0, "sheet material thickness"),
            length_param("kerf", 0.1, 0.0, 2.0, "cut width removed by the laser"),
            length_param("dowel_diameter", 3.0, 1.0, 20.0, "registration dowel diameter"),
            count_param("dowel_count", 2, 0, 8, "number of registration dowels (0 disables)"),
            *sheet_params(),
        ],
        doc_links=[
            "https://en.wikipedia.org/wiki/Laser_cutting",
            "https://en.wikipedia.org/wiki/Dowel",
        ],
    )


def place_dowels(sections: list[PolygonSet], dowel_count: int, dowel_diameter: float):
    """Pick dowel centers inside the intersection of all non-empty sections.

    A 20x20 interior sample grid scores distance to the region boundary;
    centers are the farthest-apart qualifying samples. Returns None when
    the overlap cannot host the requested dowels.
    """
    if dowel_count < 1 or not sections:
        return None
    common = reduce(lambda a, b: boolean_op(a, b, "intersection"), sections)
    if common.is_empty:
        return None
    lo, hi = polygonset_bbox(common)
    span = hi - lo
    ticks = (np.arange(DOWEL_GRID) + 0.5) / DOWEL_GRID
    gx, gy = np.meshgrid(lo[0] + ticks * span[0], lo[1] + ticks * span[1], indexing="ij")
    grid = np.stack([gx.ravel(), gy.ravel()], axis=1)
    inside = points_in_polygonset(common, grid)
    if not inside.any():
        return None
    candidates = grid[inside]
    clearance = distance_to_boundary(common, candidates)
    required = dowel_diameter / 2 + DOWEL_MARGIN
    ok = clearance >= required
    candidates = candidates[ok]
    if len(candidates) < dowel_count:
        return None
    min_separation = dowel_diameter + DOWEL_MARGIN
    if dowel_count == 1:
        best = int(np.argmax(clearance[ok]))
        return [candidates[best]]
    # true farthest pair first, then greedy farthest-point additions
    diffs = candidates[:, None, :] - candidates[None, :, :]
    dist = np.linalg.norm(diffs, axis=2)
    i, j = np.unravel_index(int(np.argmax(dist)), dist.shape)
    if dist[i, j] < min_separation:
        return None
    chosen = [i, j]
    while len(chosen) < dowel_count:
        min_to_chosen = dist[:, chosen].min(axis=1)
        min_to_chosen[chosen] = -1.0
        k = int(np.argmax(min_to_chosen))
        if min_to_chosen[k] < min_separation:
            return None
        chosen.append(k)
    return [candidates[k] for k in chosen]


def generate(mesh: TriangleMesh, params: dict) -> WorkflowOutput:
    stack = slice_uniform(mesh, params["layer_height"])
    warnings = lift_layer_warnings(stack)
    occupied = [layer for layer in stack.layers if not layer.cross_section.is_empty]

    dowels = None
    if params["dowel_count"] >= 1:
        dowels = place_dowels(
            [layer.cross_section for layer in occupied],
            params["dowel_count"],
            params["dowel_diameter"],
        )
        if dowels is None:
            warnings.append(
                caution(
                    "AlignmentFallback",
                    "layers share no overlap large enough for registration dowels; "
                    "align by the engraved labels instead",
                )
            )
    holes = (
        PolygonSet([circle_contour(c, params["dowel_diameter"] / 2) for c in dowels])
        if dowels
        else None
    )

    parts, previews, cut_sets = [], [], []
    for layer in occupied:
        label = f"L{layer.index + 1}"
        cut = offset_polygonset(layer.cross_section, params["kerf"] / 2).polygons
        shape = layer.cross_section
        if holes is not None:
            cut = boolean_op(cut, holes, "difference")
            shape = boolean_op(shape, holes, "difference")
        parts.append((label, cut, label))
        cut_sets.append(cut)
        previews.append(
            PreviewPart(
                label,
                extrude_polygonset(
                    shape,
                    layer.z - layer.thickness / 2,
                    layer.z + layer.thickness / 2,
                    name=label,
                ),
                "layer",
            )
        )

    artifacts, _ = sheet_svg_artifacts(parts, params["sheet_w"], params["sheet_h"])
    sheet_names = [a.filename for a in artifacts]

    stacking = (
        f"Stack the {len(parts)} layers in label order (L1 at the bottom), threading "
        f"{params['dowel_count']} dowel pins of {params['dowel_diameter']:g} mm through the registration holes."
        if dowels
        else f"Stack the {len(parts)} layers in label order (L1 at the bottom), aligning edges by eye."
    )
    guide = steps(
        (
            "Cut the layers",
            f"Laser-cut every outline from {params['layer_height']:g} mm stock; "
            "the blue engraved label on each part gives its stacking order.",
            sheet_names,
            ["https://en.wikipedia.org/wiki/Laser_cutting"],
            ["laser cutter", "safety glasses"],
        ),
        (
            "Stack in order",
            stacking,
            [],
            ["https://en.wikipedia.org/wiki/Dowel"],
            ["dowel pins"] if dowels else [],
        ),
        (
            "Glue and clamp",
            "Spread glue between layers, clamp the stack, and let it cure before removing the dowels or sanding.",
            [],
            ["https://en.wikipedia.org/wiki/Wood_glue"],
            ["wood glue", "clamps"],
        ),
    )

    volume = mesh_stats(mesh).volume
    approx_volume = stack_volume(stack)
    metrics = ComparisonMetrics(
        part_count=len(parts),
        total_cut_length=total_cut_length(cut_sets),
        estimated_fidelity=volume_agreement(volume, approx_volume),
        machine_set=MACHINES,
        material_area=total_net_area(layer.cross_section for layer in occupied),
        material_volume=approx_volume,
    )
    return WorkflowOutput(previews, artifacts, guide, warnings, metrics)
