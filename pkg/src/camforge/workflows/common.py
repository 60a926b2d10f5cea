"""Helpers shared by the foundational workflow generators."""

from __future__ import annotations

import math

import numpy as np

from ..engine import (
    GuideStep,
    MachineArtifact,
    ParamSpec,
    StepManifest,
    WorkflowWarning,
)
from ..exporters import export_svg, pack_sheets
from ..polygon_ops import Contour, PolygonSet, contour_length, polygonset_area
from ..slicer import SliceStack


def length_param(name, default, min_value, max_value, description) -> ParamSpec:
    return ParamSpec(name, "length", float(default), float(min_value), float(max_value), description)


def count_param(name, default, min_value, max_value, description) -> ParamSpec:
    return ParamSpec(name, "count", int(default), min_value, max_value, description)


def enum_param(name, default, choices, description) -> ParamSpec:
    return ParamSpec(name, "enum", default, description=description, choices=tuple(choices))


def sheet_params(default_w=600.0, default_h=400.0) -> list[ParamSpec]:
    return [
        length_param("sheet_w", default_w, 50, 3000, "stock sheet width"),
        length_param("sheet_h", default_h, 50, 3000, "stock sheet height"),
    ]


def caution(code: str, message: str) -> WorkflowWarning:
    return WorkflowWarning(code, "caution", message)


def blocker(code: str, message: str) -> WorkflowWarning:
    return WorkflowWarning(code, "blocker", message)


def lift_layer_warnings(stack: SliceStack) -> list[WorkflowWarning]:
    return [caution(code, message) for layer in stack.layers for code, message in layer.warnings]


def steps(*entries) -> StepManifest:
    """Build a manifest from (title, body, refs, links, tools) tuples."""
    return StepManifest(
        [
            GuideStep(i + 1, title, body, list(refs), list(links), list(tools))
            for i, (title, body, refs, links, tools) in enumerate(entries)
        ]
    )


def sheet_svg_artifacts(parts, sheet_w, sheet_h, prefix="sheet"):
    """Pack parts onto sheets and export one SVG artifact per sheet."""
    layouts = pack_sheets(parts, sheet_w, sheet_h)
    artifacts = [
        MachineArtifact(f"{prefix}_{i + 1}.svg", "svg", export_svg(layout))
        for i, layout in enumerate(layouts)
    ]
    return artifacts, layouts


def rect_contour(x0: float, y0: float, x1: float, y1: float) -> Contour:
    return Contour(np.array([[x0, y0], [x1, y0], [x1, y1], [x0, y1]]), closed=True)


def circle_contour(center, radius: float, segments: int = 32) -> Contour:
    angles = np.linspace(0.0, 2 * np.pi, segments, endpoint=False)
    pts = np.asarray(center, dtype=float) + radius * np.stack(
        [np.cos(angles), np.sin(angles)], axis=1
    )
    return Contour(pts, closed=True)


def total_cut_length(polygon_sets) -> float:
    return math.fsum(
        contour_length(c) for ps in polygon_sets for c in ps.contours
    )


def total_net_area(polygon_sets) -> float:
    return math.fsum(polygonset_area(ps) for ps in polygon_sets)


def volume_agreement(volume_a: float, volume_b: float) -> float:
    """min/max ratio in [0, 1]; 0 when either volume is degenerate."""
    lo, hi = sorted((abs(volume_a), abs(volume_b)))
    if hi <= 0:
        return 0.0
    return lo / hi
