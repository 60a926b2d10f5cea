"""Workflow registry: descriptors, typed parameters, generation, comparison.

Generators are in-process functions (mesh, params) -> WorkflowOutput
registered behind a descriptor. The registry resolves and validates
parameters before dispatch and enforces the output invariants afterwards,
so individual generators are never trusted with them.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import (
    DuplicateId,
    InvalidWorkflowOutput,
    ParamOutOfRange,
    UnknownWorkflow,
)
from .mesh_kernel import TriangleMesh

CATEGORIES = (
    "Wire Forming",
    "Interlocking Structure",
    "Stacked Slice Construction",
    "Guide Structure",
    "Mold Casting",
    "Other",
)
MACHINE_TAGS = ("laser_cutter", "printer_3d", "wire_bender", "hot_wire_cutter", "none")
PRODUCT_DIMENSIONS = (
    "load_bearing",
    "high_temperature_tolerance",
    "lightweight",
    "detail_fidelity",
)
STRUCTURE_DIMENSIONS = (
    "removable_support",
    "integrated_support",
    "flexible",
    "modular",
    "reusable",
)
SEVERITIES = ("info", "caution", "blocker")
ARTIFACT_FORMATS = ("svg", "csv", "stl")
PARAM_KINDS = ("length", "count", "angle", "enum", "flag")


@dataclass(frozen=True)
class ParamSpec:
    name: str
    kind: str
    default: object
    min_value: float | None = None
    max_value: float | None = None
    description: str = ""
    choices: tuple[str, ...] = ()


@dataclass
class DimensionProfile:
    """Filterable process traits: product ratings 0-3, structure flags, machines."""

    product: dict[str, int]
    structure: dict[str, bool]
    machine: frozenset

    def validate(self) -> None:
        for key in PRODUCT_DIMENSIONS:
            rating = self.product.get(key)
            if not isinstance(rating, int) or not 0 <= rating <= 3:
                raise ValueError(f"product rating {key} must be an int in 0..3")
        for key in STRUCTURE_DIMENSIONS:
            if not isinstance(self.structure.get(key), bool):
                raise ValueError(f"structure flag {key} must be a bool")


@dataclass
class WorkflowDescriptor:
    id: str
    name: str
    category: str
    machines: frozenset
    dimensions: DimensionProfile
    param_schema: list[ParamSpec]
    doc_links: list[str] = field(default_factory=list)

    def validate(self) -> None:
        if self.category not in CATEGORIES:
            raise ValueError(f"unknown category {self.category!r}")
        for tag in self.machines:
            if tag not in MACHINE_TAGS:
                raise ValueError(f"unknown machine tag {tag!r}")
        self.dimensions.validate()
        if self.dimensions.machine != self.machines:
            raise ValueError("dimension machine set must equal descriptor machines")
        names = [spec.name for spec in self.param_schema]
        if len(names) != len(set(names)):
            raise ValueError("parameter names must be unique")
        for spec in self.param_schema:
            if spec.kind not in PARAM_KINDS:
                raise ValueError(f"unknown parameter kind {spec.kind!r}")

    def param(self, name: str) -> ParamSpec:
        for spec in self.param_schema:
            if spec.name == name:
                return spec
        raise KeyError(name)


@dataclass(frozen=True)
class WorkflowWarning:
    code: str
    severity: str
    message: str


@dataclass
class GuideStep:
    index: int
    title: str
    body: str
    artifact_refs: list[str] = field(default_factory=list)
    external_links: list[str] = field(default_factory=list)
    tools: list[str] = field(default_factory=list)


@dataclass
class StepManifest:
    steps: list[GuideStep]

    def validate(self) -> None:
        if not self.steps:
            raise ValueError("manifest needs at least one step")
        for i, step in enumerate(self.steps):
            if step.index != i + 1:
                raise ValueError("step indices must be contiguous from 1")


@dataclass(eq=False)
class MachineArtifact:
    filename: str
    format: str
    data: bytes

    def validate(self) -> None:
        if self.format not in ARTIFACT_FORMATS:
            raise ValueError(f"unknown artifact format {self.format!r}")
        if not self.filename.endswith("." + self.format):
            raise ValueError(
                f"filename {self.filename!r} does not match format {self.format!r}"
            )


@dataclass(eq=False)
class PreviewPart:
    part_id: str
    mesh: TriangleMesh
    color_role: str


@dataclass
class ComparisonMetrics:
    part_count: int
    total_cut_length: float
    estimated_fidelity: float
    machine_set: frozenset
    material_area: float | None = None
    material_volume: float | None = None


@dataclass(eq=False)
class WorkflowOutput:
    preview: list[PreviewPart]
    artifacts: list[MachineArtifact]
    guide: StepManifest
    warnings: list[WorkflowWarning]
    metrics: ComparisonMetrics


@dataclass(eq=False)
class CompareRow:
    descriptor: WorkflowDescriptor
    metrics: ComparisonMetrics
    warnings: list[WorkflowWarning]


def _coerce_param(spec: ParamSpec, value) -> object:
    if spec.kind in ("length", "angle"):
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ParamOutOfRange(spec.name, f"expected a number, got {value!r}")
        value = float(value)
    elif spec.kind == "count":
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ParamOutOfRange(spec.name, f"expected an integer, got {value!r}")
        if isinstance(value, float) and not value.is_integer():
            raise ParamOutOfRange(spec.name, f"expected an integer, got {value!r}")
        value = int(value)
    elif spec.kind == "enum":
        if value not in spec.choices:
            raise ParamOutOfRange(
                spec.name, f"expected one of {list(spec.choices)}, got {value!r}"
            )
        return value
    elif spec.kind == "flag":
        if not isinstance(value, bool):
            raise ParamOutOfRange(spec.name, f"expected a flag, got {value!r}")
        return value
    if spec.min_value is not None and value < spec.min_value:
        raise ParamOutOfRange(
            spec.name,
            f"{value} below minimum {spec.min_value}"
            + (f" (range {spec.min_value}..{spec.max_value})" if spec.max_value is not None else ""),
        )
    if spec.max_value is not None and value > spec.max_value:
        raise ParamOutOfRange(
            spec.name,
            f"{value} above maximum {spec.max_value}"
            + (f" (range {spec.min_value}..{spec.max_value})" if spec.min_value is not None else ""),
        )
    return value


def resolve_params(descriptor: WorkflowDescriptor, params: dict | None) -> dict:
    """Apply defaults and validate every provided value against the schema."""
    params = dict(params or {})
    known = {spec.name for spec in descriptor.param_schema}
    for name in params:
        if name not in known:
            raise ParamOutOfRange(name, "unknown parameter")
    resolved = {}
    for spec in descriptor.param_schema:
        raw = params.get(spec.name, spec.default)
        resolved[spec.name] = _coerce_param(spec, raw)
    return resolved


def validate_output(output: WorkflowOutput) -> None:
    """Output invariants enforced registry-side, not trusted to plugins."""
    names = [a.filename for a in output.artifacts]
    if len(names) != len(set(names)):
        raise InvalidWorkflowOutput("artifact filenames must be unique")
    for artifact in output.artifacts:
        try:
            artifact.validate()
        except ValueError as exc:
            raise InvalidWorkflowOutput(str(exc)) from exc
    try:
        output.guide.validate()
    except ValueError as exc:
        raise InvalidWorkflowOutput(str(exc)) from exc
    available = set(names)
    for step in output.guide.steps:
        for ref in step.artifact_refs:
            if ref not in available:
                raise InvalidWorkflowOutput(
                    f"step {step.index} references missing artifact {ref!r}"
                )
    for warning in output.warnings:
        if warning.severity not in SEVERITIES:
            raise InvalidWorkflowOutput(f"unknown severity {warning.severity!r}")
    m = output.metrics
    if m.part_count < 0 or m.total_cut_length < 0:
        raise InvalidWorkflowOutput("metrics counts must be non-negative")
    if not 0.0 <= m.estimated_fidelity <= 1.0:
        raise InvalidWorkflowOutput("estimated_fidelity must be in [0, 1]")
    part_ids = [p.part_id for p in output.preview]
    if len(part_ids) != len(set(part_ids)):
        raise InvalidWorkflowOutput("preview part ids must be unique")
    for part in output.preview:
        part.mesh.validate()


class WorkflowRegistry:
    """Write-at-startup, read-many registry of workflow generators."""

    def __init__(self):
        self._descriptors: dict[str, WorkflowDescriptor] = {}
        self._generators: dict[str, object] = {}

    def register(self, descriptor: WorkflowDescriptor, generator) -> str:
        if descriptor.id in self._descriptors:
            raise DuplicateId(f"workflow {descriptor.id!r} already registered")
        descriptor.validate()
        self._descriptors[descriptor.id] = descriptor
        self._generators[descriptor.id] = generator
        return descriptor.id

    def ids(self) -> list[str]:
        return list(self._descriptors)

    def descriptors(self) -> list[WorkflowDescriptor]:
        return list(self._descriptors.values())

    def descriptor(self, workflow_id: str) -> WorkflowDescriptor:
        try:
            return self._descriptors[workflow_id]
        except KeyError:
            raise UnknownWorkflow(f"no workflow registered as {workflow_id!r}") from None

    def filter_workflows(
        self,
        keywords: str = "",
        dims: dict | None = None,
        machines: set | None = None,
    ) -> list[WorkflowDescriptor]:
        """AND across groups: keyword substrings, minimum ratings, machine subset."""
        tokens = [t.lower() for t in keywords.split()] if keywords else []
        product_min = (dims or {}).get("product", {})
        structure_req = (dims or {}).get("structure", {})
        out = []
        for desc in self._descriptors.values():
            haystack = f"{desc.name} {desc.category}".lower()
            if not all(t in haystack for t in tokens):
                continue
            if machines is not None and not desc.machines <= frozenset(machines):
                continue
            if any(
                desc.dimensions.product.get(k, 0) < v for k, v in product_min.items()
            ):
                continue
            if any(
                desc.dimensions.structure.get(k) != v for k, v in structure_req.items()
            ):
                continue
            out.append(desc)
        return out

    def generate(self, workflow_id: str, mesh: TriangleMesh, params: dict | None = None) -> WorkflowOutput:
        descriptor = self.descriptor(workflow_id)
        resolved = resolve_params(descriptor, params)
        output = self._generators[workflow_id](mesh, resolved)
        validate_output(output)
        return output

    def compare(self, mesh: TriangleMesh, requests) -> list[CompareRow]:
        """One row per request, order preserved; no count limit engine-side."""
        rows = []
        for workflow_id, params in requests:
            output = self.generate(workflow_id, mesh, params)
            rows.append(CompareRow(self.descriptor(workflow_id), output.metrics, output.warnings))
        return rows


def default_registry() -> WorkflowRegistry:
    """Fresh registry with the five foundational workflows pre-registered."""
    from . import workflows

    registry = WorkflowRegistry()
    workflows.register_foundational(registry)
    return registry
