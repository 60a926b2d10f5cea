#!/usr/bin/env python3
"""Generate docs/API.md from the live type definitions and serializers.

Field names in the HTTP reference come from the actual dataclasses and
the service's serializer functions, so the document cannot drift from
the code. Rerun after changing any domain type.
"""

import dataclasses
import json
import sys
from pathlib import Path

from camforge import default_registry, mesh_stats
from camforge.engine import (
    CATEGORIES,
    MACHINE_TAGS,
    PRODUCT_DIMENSIONS,
    SEVERITIES,
    STRUCTURE_DIMENSIONS,
    ComparisonMetrics,
    GuideStep,
    ParamSpec,
    WorkflowWarning,
)
from camforge.exporters import GUIDE_SCHEMA, PREVIEW_SCHEMA, WIRE_CSV_HEADER
from camforge.mesh_kernel import MeshStats
from camforge.primitives import make_box
from camforge.service import descriptor_to_dict, metrics_to_dict, stats_to_dict


def field_rows(cls) -> str:
    lines = ["| field | type | default |", "| --- | --- | --- |"]
    for f in dataclasses.fields(cls):
        default = "" if f.default is dataclasses.MISSING else repr(f.default)
        type_name = f.type if isinstance(f.type, str) else getattr(f.type, "__name__", str(f.type))
        lines.append(f"| `{f.name}` | `{type_name}` | {default} |")
    return "\n".join(lines)


def sample_json(obj) -> str:
    return "```json\n" + json.dumps(obj, indent=2) + "\n```"


def main() -> int:
    registry = default_registry()
    cube = make_box((40, 40, 40), center=(0, 0, 20), name="cube")
    descriptor = registry.descriptor("stacked-slices")
    output = registry.generate("stacked-slices", cube, {"layer_height": 8.0})

    doc = f"""# camforge API reference

Generated by `scripts/gen_api_reference.py`; do not edit by hand.

## Vocabulary

- categories: {", ".join(CATEGORIES)}
- machine tags: {", ".join(MACHINE_TAGS)}
- product dimensions (ratings 0-3): {", ".join(PRODUCT_DIMENSIONS)}
- structure dimensions (flags): {", ".join(STRUCTURE_DIMENSIONS)}
- warning severities: {", ".join(SEVERITIES)}

## Core types

### ParamSpec
{field_rows(ParamSpec)}

Parameter kinds: `length` (mm, float), `count` (int), `angle` (degrees,
float), `enum` (string from `choices`), `flag` (bool).

### MeshStats (wire form)
{sample_json(stats_to_dict(mesh_stats(cube)))}

### WorkflowDescriptor (wire form)
{sample_json(descriptor_to_dict(descriptor))}

### ComparisonMetrics (wire form)
{field_rows(ComparisonMetrics)}
{sample_json(metrics_to_dict(output.metrics))}

### WorkflowWarning
{field_rows(WorkflowWarning)}

### GuideStep
{field_rows(GuideStep)}

## HTTP endpoints

| method | path | request | response |
| --- | --- | --- | --- |
| GET | `/healthz` | - | `{{"status", "workflows"}}` |
| POST | `/models` | raw STL bytes | `{{"model_id", "stats"}}` or 400 `{{"error", "detail"}}` |
| GET | `/workflows` | query: `keyword`, `machines` (comma list), product ratings (`load_bearing`, ...) as minimums, structure flags as booleans | `{{"workflows": [descriptor...]}}` |
| POST | `/previews` | `{{"model_id", "workflow_id", "params"}}` | `{{"model_id", "workflow_id", "preview", "warnings", "metrics"}}`; 404 unknown ids, 422 `{{"error", "param", "detail"}}` |
| POST | `/exports` | `{{"model_id", "workflow_id", "params"}}` | zip bytes, `Content-Disposition: attachment; filename="<model>-<workflow>.zip"` |

The server reads `CAMFORGE_PORT` (default 8000) and `--store-dir` for
optional on-disk model persistence.

## File formats

- Preview document: JSON, schema tag `{PREVIEW_SCHEMA}`; parts carry
  `id`, `color_role`, `vertices` (mm triples), `triangles` (index triples).
- Guide manifest: plain text, first line `{GUIDE_SCHEMA}`; header
  `workflow:`/`name:`/`param:` lines, then per step `step:`, `title:`,
  `tools:`, `artifacts:`, `links:`, `body:` (lists joined by `; `).
- Wire CSV header: `{WIRE_CSV_HEADER}` (4-decimal numbers, LF endings).
- Hot-wire path CSV header: `step,u_mm,v_mm` where (u, v) are the cut
  plane coordinates ((y, z) for the x pass, (x, z) for the y pass).
- SVG: 1.1, millimeter units, `viewBox="0 0 w h"`, absolute `M/L/Z`
  paths at 3 decimals; cut strokes `#FF0000` width 0.1, engrave text
  `#0000FF`, `fill-rule="evenodd"`.
- Bundle zip: machine artifacts at the root plus `GUIDE.txt`,
  `preview.json`, `params.txt`; fixed timestamps, name-sorted entries.
"""
    out_path = Path(__file__).resolve().parent.parent / "docs" / "API.md"
    out_path.parent.mkdir(exist_ok=True)
    out_path.write_text(doc, encoding="utf-8")
    print(f"wrote {out_path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
