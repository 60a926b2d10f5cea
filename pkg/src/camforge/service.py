"""HTTP boundary: upload models, browse workflows, preview, export bundles.

Endpoints: POST /models, GET /workflows, POST /previews, POST /exports,
GET /healthz. The store holds parsed meshes in memory, optionally
persisted to a directory; everything else is stateless and served from
the pure engine, with previews memoized on (model, workflow, params).
"""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

from fastapi import FastAPI, Query, Request, Response
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from . import exporters
from .engine import (
    ComparisonMetrics,
    WorkflowDescriptor,
    WorkflowRegistry,
    WorkflowWarning,
    default_registry,
)
from .errors import CamforgeError, ParamOutOfRange, UnknownWorkflow
from .mesh_kernel import MeshStats, TriangleMesh, mesh_stats, parse_stl

DEFAULT_PORT = 8000
PORT_ENV_VAR = "CAMFORGE_PORT"


@dataclass
class StoredModel:
    model_id: str
    mesh: TriangleMesh
    stats: MeshStats
    uploaded_at: str


class ModelStore:
    """Thread-safe id -> mesh map; uploads never dedup."""

    def __init__(self, store_dir: str | None = None):
        self._lock = threading.Lock()
        self._models: dict[str, StoredModel] = {}
        self._counter = 0
        self._dir = Path(store_dir) if store_dir else None
        if self._dir:
            self._dir.mkdir(parents=True, exist_ok=True)
            for path in sorted(self._dir.glob("*.stl")):
                try:
                    self._insert(path.stem, path.read_bytes(), persist=False)
                except CamforgeError:
                    continue

    def _insert(self, model_id: str | None, data: bytes, persist: bool = True) -> StoredModel:
        mesh = parse_stl(data)
        with self._lock:
            if model_id is None:
                self._counter += 1
                model_id = f"m{self._counter:06d}"
            elif model_id in self._models:
                return self._models[model_id]
            record = StoredModel(
                model_id,
                mesh,
                mesh_stats(mesh),
                datetime.now(timezone.utc).isoformat(),
            )
            self._models[model_id] = record
        if persist and self._dir:
            (self._dir / f"{model_id}.stl").write_bytes(data)
        return record

    def add(self, data: bytes) -> StoredModel:
        return self._insert(None, data)

    def get(self, model_id: str) -> StoredModel | None:
        with self._lock:
            return self._models.get(model_id)


def stats_to_dict(stats: MeshStats) -> dict:
    return {
        "bbox_min": [float(v) for v in stats.bbox_min],
        "bbox_max": [float(v) for v in stats.bbox_max],
        "volume_mm3": stats.volume,
        "watertight": stats.watertight,
        "degenerate_triangles": stats.degenerate_triangles,
    }


def descriptor_to_dict(desc: WorkflowDescriptor) -> dict:
    return {
        "id": desc.id,
        "name": desc.name,
        "category": desc.category,
        "machines": sorted(desc.machines),
        "dimensions": {
            "product": dict(desc.dimensions.product),
            "structure": dict(desc.dimensions.structure),
            "machine": sorted(desc.dimensions.machine),
        },
        "param_schema": [
            {
                "name": spec.name,
                "kind": spec.kind,
                "default": spec.default,
                "min": spec.min_value,
                "max": spec.max_value,
                "description": spec.description,
                "choices": list(spec.choices),
            }
            for spec in desc.param_schema
        ],
        "doc_links": list(desc.doc_links),
    }


def metrics_to_dict(metrics: ComparisonMetrics) -> dict:
    return {
        "part_count": metrics.part_count,
        "material_area_mm2": metrics.material_area,
        "material_volume_mm3": metrics.material_volume,
        "total_cut_length_mm": metrics.total_cut_length,
        "estimated_fidelity": metrics.estimated_fidelity,
        "machine_set": sorted(metrics.machine_set),
    }


def warnings_to_list(warnings: list[WorkflowWarning]) -> list[dict]:
    return [
        {"code": w.code, "severity": w.severity, "message": w.message} for w in warnings
    ]


class GenerateRequest(BaseModel):
    model_id: str
    workflow_id: str
    params: dict = {}


def _error(status: int, code: str, detail: str) -> JSONResponse:
    return JSONResponse({"error": code, "detail": detail}, status_code=status)


def create_app(store_dir: str | None = None, registry: WorkflowRegistry | None = None) -> FastAPI:
    registry = registry or default_registry()
    store = ModelStore(store_dir)
    app = FastAPI(title="camforge", version="0.1.0")
    preview_cache: dict[str, bytes] = {}
    cache_lock = threading.Lock()

    def resolve(body: GenerateRequest):
        record = store.get(body.model_id)
        if record is None:
            return None, _error(404, "UnknownModel", f"no model {body.model_id!r}")
        try:
            registry.descriptor(body.workflow_id)
        except UnknownWorkflow as exc:
            return None, _error(404, "UnknownWorkflow", str(exc))
        return record, None

    def generate(body: GenerateRequest):
        record, err = resolve(body)
        if err:
            return None, None, err
        try:
            output = registry.generate(body.workflow_id, record.mesh, body.params)
        except ParamOutOfRange as exc:
            return None, None, JSONResponse(
                {"error": "ParamOutOfRange", "param": exc.param, "detail": str(exc)},
                status_code=422,
            )
        except CamforgeError as exc:
            return None, None, _error(422, type(exc).__name__, str(exc))
        return record, output, None

    @app.get("/healthz")
    def healthz():
        return {"status": "ok", "workflows": len(registry.ids())}

    @app.post("/models")
    async def upload_model(request: Request):
        data = await request.body()
        try:
            record = store.add(data)
        except CamforgeError as exc:
            return _error(400, type(exc).__name__, str(exc))
        return {"model_id": record.model_id, "stats": stats_to_dict(record.stats)}

    @app.get("/workflows")
    def list_workflows(
        keyword: str = "",
        machines: str | None = None,
        load_bearing: int | None = Query(None, ge=0, le=3),
        high_temperature_tolerance: int | None = Query(None, ge=0, le=3),
        lightweight: int | None = Query(None, ge=0, le=3),
        detail_fidelity: int | None = Query(None, ge=0, le=3),
        removable_support: bool | None = None,
        integrated_support: bool | None = None,
        flexible: bool | None = None,
        modular: bool | None = None,
        reusable: bool | None = None,
    ):
        product = {
            k: v
            for k, v in {
                "load_bearing": load_bearing,
                "high_temperature_tolerance": high_temperature_tolerance,
                "lightweight": lightweight,
                "detail_fidelity": detail_fidelity,
            }.items()
            if v is not None
        }
        structure = {
            k: v
            for k, v in {
                "removable_support": removable_support,
                "integrated_support": integrated_support,
                "flexible": flexible,
                "modular": modular,
                "reusable": reusable,
            }.items()
            if v is not None
        }
        machine_set = (
            {m for m in machines.split(",") if m} if machines is not None else None
        )
        found = registry.filter_workflows(
            keywords=keyword,
            dims={"product": product, "structure": structure},
            machines=machine_set,
        )
        return {"workflows": [descriptor_to_dict(d) for d in found]}

    @app.post("/previews")
    def create_preview(body: GenerateRequest):
        cache_key = json.dumps(
            [body.model_id, body.workflow_id, body.params], sort_keys=True, default=str
        )
        with cache_lock:
            cached = preview_cache.get(cache_key)
        if cached is not None:
            return Response(cached, media_type="application/json")
        record, output, err = generate(body)
        if err:
            return err
        payload = json.dumps(
            {
                "model_id": record.model_id,
                "workflow_id": body.workflow_id,
                "preview": json.loads(exporters.export_preview(output.preview)),
                "warnings": warnings_to_list(output.warnings),
                "metrics": metrics_to_dict(output.metrics),
            },
            separators=(",", ":"),
        ).encode("utf-8")
        with cache_lock:
            preview_cache[cache_key] = payload
        return Response(payload, media_type="application/json")

    @app.post("/exports")
    def create_export(body: GenerateRequest):
        record, output, err = generate(body)
        if err:
            return err
        descriptor = registry.descriptor(body.workflow_id)
        from .engine import resolve_params

        bundle = exporters.export_bundle(
            output, descriptor, resolve_params(descriptor, body.params)
        )
        filename = f"{record.model_id}-{body.workflow_id}.zip"
        return Response(
            bundle,
            media_type="application/zip",
            headers={"Content-Disposition": f'attachment; filename="{filename}"'},
        )

    return app


def run_server(port: int | None = None, store_dir: str | None = None) -> None:
    import os

    import uvicorn

    if port is None:
        port = int(os.environ.get(PORT_ENV_VAR, DEFAULT_PORT))
    uvicorn.run(create_app(store_dir=store_dir), host="127.0.0.1", port=port)
