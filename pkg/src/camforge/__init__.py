"""camforge: compile a triangle mesh into alternative craft fabrication workflows."""

from .engine import (
    ComparisonMetrics,
    DimensionProfile,
    ParamSpec,
    StepManifest,
    WorkflowDescriptor,
    WorkflowOutput,
    WorkflowRegistry,
    WorkflowWarning,
    default_registry,
)
from .mesh_kernel import (
    MeshStats,
    Plane,
    TriangleMesh,
    convex_hull_2d,
    intersect_plane,
    mesh_stats,
    parse_stl,
    write_stl,
)
from .polygon_ops import BendTable, Contour, PolygonSet
from .slicer import Layer, SliceStack, slice_uniform, stack_volume

__version__ = "0.1.0"

__all__ = [
    "BendTable",
    "ComparisonMetrics",
    "Contour",
    "DimensionProfile",
    "Layer",
    "MeshStats",
    "ParamSpec",
    "Plane",
    "PolygonSet",
    "SliceStack",
    "StepManifest",
    "TriangleMesh",
    "WorkflowDescriptor",
    "WorkflowOutput",
    "WorkflowRegistry",
    "WorkflowWarning",
    "convex_hull_2d",
    "default_registry",
    "intersect_plane",
    "mesh_stats",
    "parse_stl",
    "slice_uniform",
    "stack_volume",
    "write_stl",
    "__version__",
]
