"""Uniform horizontal slicing of a mesh into fixed-thickness layers."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import LayerHeightOutOfRange, OpenChains
from .mesh_kernel import TriangleMesh, horizontal_plane, intersect_plane
from .polygon_ops import PolygonSet, polygonset_area


@dataclass(eq=False)
class Layer:
    """One horizontal slab, sampled at its midplane."""

    index: int
    z: float
    thickness: float
    cross_section: PolygonSet
    warnings: list = field(default_factory=list)


@dataclass(eq=False)
class SliceStack:
    layers: list[Layer]
    source_bbox: tuple[np.ndarray, np.ndarray]
    layer_height: float


def slice_uniform(mesh: TriangleMesh, layer_height: float) -> SliceStack:
    """Slice into ceil(extent/h) layers at z = z_min + (i + 0.5) * h.

    Physical sheets keep full thickness, so the last midplane is clamped
    just inside the bbox instead of thinning the sheet. Empty layers and
    open chains become per-layer warnings, never silent drops.
    """
    mesh.validate()
    lo, hi = mesh.bbox
    extent = float(hi[2] - lo[2])
    if not (0 < layer_height < extent):
        raise LayerHeightOutOfRange(
            f"layer_height {layer_height} must be in (0, {extent})"
        )
    count = math.ceil(extent / layer_height)
    layers = []
    for i in range(count):
        z = min(lo[2] + (i + 0.5) * layer_height, hi[2] - 1e-6)
        warnings = []
        try:
            section = intersect_plane(mesh, horizontal_plane(z))
        except OpenChains as exc:
            section = exc.polygons
            warnings.append(
                ("OpenChains", f"layer {i + 1}: {exc.open_chain_count} open chain(s); "
                               "mesh is not watertight at this height")
            )
        if section.is_empty:
            warnings.append(
                ("MinFeature", f"layer {i + 1}: no material at z={z:.3f} mm; "
                               "features here are too small for this layer height")
            )
        layers.append(Layer(i, z, layer_height, section, warnings))
    return SliceStack(layers, (lo, hi), layer_height)


def stack_volume(stack: SliceStack) -> float:
    """Midpoint-rule volume: sum of layer area times thickness."""
    return math.fsum(
        polygonset_area(layer.cross_section) * layer.thickness
        for layer in stack.layers
        if not layer.cross_section.is_empty
    )
