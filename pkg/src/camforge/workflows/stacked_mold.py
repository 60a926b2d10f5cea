"""One-part stacked mold: laser-cut block layers with the cross-section removed.

Layers glue into an open-top mold box; casting material is poured in and
demolded along +z. Upper cross-sections that are not contained in the
layer below are undercuts and trigger a caution suggesting a flexible
mold material.
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
from ..errors import BlockDegenerate
from ..exporters import export_stl_artifact
from ..mesh_kernel import TriangleMesh, mesh_stats
from ..polygon_ops import (
    Contour,
    PolygonSet,
    boolean_op,
    contour_length,
    distance_to_boundary,
    offset_polygonset,
    points_in_polygonset,
    polygonset_bbox,
)
from ..preview3d import extrude_polygonset
from ..slicer import slice_uniform, stack_volume
from .common import (
    caution,
    length_param,
    lift_layer_warnings,
    rect_contour,
    sheet_params,
    sheet_svg_artifacts,
    steps,
    total_cut_length,
    total_net_area,
    volume_agreement,
)

WORKFLOW_ID = "stacked-mold"
MACHINES = frozenset({"laser_cutter"})
CONTAIN_SAMPLES = 200
CONTAIN_TOL = 1e-3


def descriptor() -> WorkflowDescriptor:
    return WorkflowDescriptor(
        id=WORKFLOW_ID,
        name="Stacked Mold Casting",
        category="Mold Casting",
        machines=MACHINES,
        dimensions=DimensionProfile(
            product={
                "load_bearing": 1,
                "high_temperature_tolerance": 2,
                "lightweight": 0,
                "detail_fidelity": 2,
            },
            structure={
                "removable_support": True,
                "integrated_support": False,
                "flexible": False,
                "modular": False,
                "reusable": True,
            },
            machine=MACHINES,
        ),
        param_schema=[
            length_param("layer_height", 3.0, 0.2, 100.0, "sheet material thickness"),
            length_param("block_margin", 10.0, 0.5, 200.0, "mold wall around the part"),
            length_param("kerf", 0.1, 0.0, 2.0, "cut width removed by the laser"),
            *sheet_params(),
        ],
        doc_links=[
            "https://en.wikipedia.org/wiki/Molding_(process)",
            "https://en.wikipedia.org/wiki/Laser_cutting",
        ],
    )


@dataclass(eq=False)
class MoldLayer:
    index: int
    z: float
    thickness: float
    block: Contour
    cross_section: PolygonSet
    mold: PolygonSet


def check_block_fits(block: Contour, cross_section: PolygonSet) -> None:
    """Defensive guard: a cross-section must stay strictly inside its block."""
    if cross_section.is_empty:
        return
    lo, hi = polygonset_bbox(cross_section)
    block_lo = block.points.min(axis=0)
    block_hi = block.points.max(axis=0)
    if (lo <= block_lo + 1e-9).any() or (hi >= block_hi - 1e-9).any():
        raise BlockDegenerate(
            "cross-section touches the mold block boundary; increase block_margin"
        )


def _boundary_samples(ps: PolygonSet, count: int) -> np.ndarray:
    """Points spread uniformly by arc length over every contour boundary."""
    lengths = [contour_length(c) for c in ps.contours]
    total = sum(lengths)
    samples = []
    for contour, length in zip(ps.contours, lengths):
        n = max(1, round(count * length / total)) if total > 0 else 1
        pts = contour.points
        closed_pts = np.vstack([pts, pts[:1]])
        seg = np.linalg.norm(np.diff(closed_pts, axis=0), axis=1)
        cum = np.concatenate([[0.0], np.cumsum(seg)])
        targets = np.linspace(0.0, cum[-1], n, endpoint=False)
        idx = np.searchsorted(cum, targets, side="right") - 1
        idx = np.clip(idx, 0, len(seg) - 1)
        t = (targets - cum[idx]) / np.maximum(seg[idx], 1e-30)
        samples.append(closed_pts[idx] + t[:, None] * (closed_pts[idx + 1] - closed_pts[idx]))
    return np.vstack(samples) if samples else np.zeros((0, 2))


def contained_within(inner: PolygonSet, outer: PolygonSet, tol: float = CONTAIN_TOL) -> bool:
    """Boundary-sampled containment: every sample inside or within tol of outer."""
    if inner.is_empty:
        return True
    if outer.is_empty:
        return False
    pts = _boundary_samples(inner, CONTAIN_SAMPLES)
    inside = points_in_polygonset(outer, pts)
    if inside.all():
        return True
    near = distance_to_boundary(outer, pts[~inside]) <= tol
    return bool(near.all())


def compute_mold_layers(mesh: TriangleMesh, params: dict):
    """Per-layer block minus cross-section, plus undercut cautions (pre-kerf)."""
    stack = slice_uniform(mesh, params["layer_height"])
    warnings = lift_layer_warnings(stack)
    lo, hi = mesh.bbox
    margin = params["block_margin"]
    block = rect_contour(lo[0] - margin, lo[1] - margin, hi[0] + margin, hi[1] + margin)
    block_set = PolygonSet([block])

    layers = []
    for layer in stack.layers:
        check_block_fits(block, layer.cross_section)
        mold = boolean_op(block_set, layer.cross_section, "difference")
        layers.append(
            MoldLayer(layer.index, layer.z, layer.thickness, block, layer.cross_section, mold)
        )

    for below, above in zip(layers, layers[1:]):
        if above.cross_section.is_empty:
            continue
        if not contained_within(above.cross_section, below.cross_section):
            warnings.append(
                caution(
                    "Undercut",
                    f"layer {above.index + 1} overhangs layer {below.index + 1}; "
                    "demolding along +z needs a flexible mold material",
                )
            )
    return layers, stack, warnings


def generate(mesh: TriangleMesh, params: dict) -> WorkflowOutput:
    layers, stack, warnings = compute_mold_layers(mesh, params)

    sheet_parts, cut_sets, previews = [], [], []
    for layer in layers:
        label = f"M{layer.index + 1}"
        cut = offset_polygonset(layer.mold, params["kerf"] / 2).polygons
        cut_sets.append(cut)
        sheet_parts.append((label, cut, label))
        previews.append(
            PreviewPart(
                label,
                extrude_polygonset(
                    layer.mold,
                    layer.z - layer.thickness / 2,
                    layer.z + layer.thickness / 2,
                    name=label,
                ),
                "mold",
            )
        )
    previews.append(PreviewPart("casting", mesh, "casting"))

    artifacts, _ = sheet_svg_artifacts(sheet_parts, params["sheet_w"], params["sheet_h"])
    sheet_names = [a.filename for a in artifacts]
    reference = export_stl_artifact(mesh, "casting_reference.stl")
    artifacts = artifacts + [reference]

    guide = steps(
        (
            "Cut the mold layers",
            f"Laser-cut the {len(layers)} mold layers from {params['layer_height']:g} mm stock.",
            sheet_names,
            ["https://en.wikipedia.org/wiki/Laser_cutting"],
            ["laser cutter", "safety glasses"],
        ),
        (
            "Stack and glue",
            "Glue the layers in label order (M1 at the bottom) with edges flush to form the mold box.",
            [],
            [],
            ["wood glue", "clamps"],
        ),
        (
            "Seal the seams",
            "Brush sealant over interior seams so the pour cannot leak between layers.",
            [],
            ["https://en.wikipedia.org/wiki/Sealant"],
            ["sealant", "brush"],
        ),
        (
            "Pour the casting material",
            "Mix and pour the casting material slowly into the cavity; tap the mold to release air.",
            ["casting_reference.stl"],
            ["https://en.wikipedia.org/wiki/Molding_(process)"],
            ["casting material", "mixing cup"],
        ),
        (
            "Cure",
            "Leave the filled mold level and undisturbed for the material's full cure time.",
            [],
            [],
            [],
        ),
        (
            "Demold",
            "Pull the casting straight up and out; compare it against the reference model.",
            ["casting_reference.stl"],
            [],
            [],
        ),
    )

    volume = mesh_stats(mesh).volume
    cavity_volume = stack_volume(stack)
    metrics = ComparisonMetrics(
        part_count=len(layers),
        total_cut_length=total_cut_length(cut_sets),
        estimated_fidelity=volume_agreement(volume, cavity_volume),
        machine_set=MACHINES,
        material_area=total_net_area(layer.mold for layer in layers),
        material_volume=total_net_area(layer.mold for layer in layers) * params["layer_height"],
    )
    return WorkflowOutput(previews, artifacts, guide, warnings, metrics)
