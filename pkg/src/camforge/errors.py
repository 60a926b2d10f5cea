"""Exception types shared across the package."""

from __future__ import annotations


class CamforgeError(Exception):
    """Base class for all camforge errors."""


# --- mesh ingestion / kernel ---

class TruncatedFile(CamforgeError):
    """Binary STL declares more triangles than the byte stream contains."""


class NonFiniteCoordinate(CamforgeError):
    """STL contains NaN or infinite vertex coordinates."""


class EmptyMesh(CamforgeError):
    """Mesh has no usable triangles."""


class OpenChains(CamforgeError):
    """Plane intersection left unclosed segment chains (non-watertight mesh).

    Carries the closed contours that did chain so callers can keep the
    partial cross-section and decide severity themselves.
    """

    def __init__(self, open_chain_count: int, polygons):
        super().__init__(f"{open_chain_count} open chain(s) in plane intersection")
        self.open_chain_count = open_chain_count
        self.polygons = polygons


class DegenerateInput(CamforgeError):
    """Input points are collinear or coincident where a 2D hull is required."""


# --- polygon machinery ---

class NotClosed(CamforgeError):
    """Operation requires a closed contour."""


class CrossingContours(CamforgeError):
    """Contours of a polygon set cross each other."""


class DegeneratePoint(CamforgeError):
    """Polyline contains a zero-length segment or a full reversal."""


# --- slicing ---

class LayerHeightOutOfRange(CamforgeError):
    """Layer height must be positive and smaller than the bbox z-extent."""


# --- workflow engine ---

class DuplicateId(CamforgeError):
    """Workflow id already registered."""


class UnknownWorkflow(CamforgeError):
    """No workflow registered under the requested id."""


class ParamOutOfRange(CamforgeError):
    """Parameter value violates its schema (also raised for unknown names)."""

    def __init__(self, param: str, message: str):
        super().__init__(f"parameter '{param}': {message}")
        self.param = param


class InvalidWorkflowOutput(CamforgeError):
    """A generator returned output violating the output invariants."""


# --- workflow generators ---

class BlockDegenerate(CamforgeError):
    """A mold cross-section touches or exceeds the mold block boundary."""


# --- exporters ---

class PartTooLarge(CamforgeError):
    """A part does not fit on the configured sheet."""

    def __init__(self, part_id: str, message: str):
        super().__init__(f"part '{part_id}': {message}")
        self.part_id = part_id
