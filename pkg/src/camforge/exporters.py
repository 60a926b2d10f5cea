"""Machine-file exporters: SVG cut sheets, wire CSV, guide manifest, preview, zip.

All exporters are byte-deterministic and each has a parser used by the
round-trip tests (and by the service for embedding documents). Cut
geometry is red stroke, engrave labels blue, per the common laser-driver
default.
"""

from __future__ import annotations

import io
import json
import re
import zipfile
from dataclasses import dataclass, field

import numpy as np

from .engine import (
    GuideStep,
    MachineArtifact,
    PreviewPart,
    StepManifest,
    WorkflowDescriptor,
    WorkflowOutput,
)
from .errors import PartTooLarge
from .mesh_kernel import TriangleMesh
from .polygon_ops import Contour, PolygonSet, polygonset_bbox, translate_polygonset

GUIDE_SCHEMA = "camforge-guide 1"
PREVIEW_SCHEMA = "camforge-preview/1"


def _fmt(value: float, decimals: int) -> str:
    out = f"{value:.{decimals}f}"
    if out == "-" + "0." + "0" * decimals:
        out = out[1:]
    return out


def fmt3(value: float) -> str:
    return _fmt(value, 3)


def fmt4(value: float) -> str:
    return _fmt(value, 4)


def format_param_value(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    return str(value)


# --- sheet packing -------------------------------------------------------------

@dataclass(eq=False)
class Placement:
    part_id: str
    translation: np.ndarray
    polygons: PolygonSet
    label: str
    label_anchor: np.ndarray
    paths: list[Contour] = field(default_factory=list)

    def placed_polygons(self) -> PolygonSet:
        return translate_polygonset(self.polygons, self.translation)

    def placed_paths(self) -> list[Contour]:
        return [Contour(c.points + self.translation, c.closed) for c in self.paths]


@dataclass(eq=False)
class SheetLayout:
    sheet_w: float
    sheet_h: float
    placements: list[Placement] = field(default_factory=list)


def pack_sheets(parts, sheet_w: float, sheet_h: float, gap: float = 2.0) -> list[SheetLayout]:
    """Shelf packing: tallest parts first, left-to-right shelves, new sheet when full.

    parts: iterable of (part_id, PolygonSet, label). Deterministic
    tie-break on part id.
    """
    entries = []
    for part_id, polygons, label in parts:
        lo, hi = polygonset_bbox(polygons)
        w, h = float(hi[0] - lo[0]), float(hi[1] - lo[1])
        if w > sheet_w or h > sheet_h:
            raise PartTooLarge(part_id, f"{w:.1f}x{h:.1f} mm exceeds sheet {sheet_w}x{sheet_h} mm")
        entries.append((part_id, polygons, label, lo, w, h))
    entries.sort(key=lambda e: (-e[5], e[0]))

    sheets: list[SheetLayout] = []
    cursor_x = cursor_y = shelf_h = 0.0

    def open_sheet():
        nonlocal cursor_x, cursor_y, shelf_h
        sheets.append(SheetLayout(sheet_w, sheet_h))
        cursor_x = cursor_y = shelf_h = 0.0

    if entries:
        open_sheet()
    for part_id, polygons, label, lo, w, h in entries:
        if cursor_x > 0 and cursor_x + w > sheet_w:
            cursor_y += shelf_h + gap
            cursor_x, shelf_h = 0.0, 0.0
        if cursor_y + h > sheet_h:
            open_sheet()
        translation = np.array([cursor_x, cursor_y]) - lo
        anchor = translation + lo + np.array([w / 2, h / 2])
        sheets[-1].placements.append(
            Placement(part_id, translation, polygons, label, anchor)
        )
        shelf_h = max(shelf_h, h)
        cursor_x += w + gap
    return sheets


# --- SVG --------------------------------------------------------------------------

def _path_d(contour: Contour) -> str:
    cmds = []
    for i, (x, y) in enumerate(contour.points):
        cmds.append(("M" if i == 0 else "L") + f" {fmt3(x)} {fmt3(y)}")
    if contour.closed:
        cmds.append("Z")
    return " ".join(cmds)


def export_svg(layout: SheetLayout) -> bytes:
    """SVG 1.1 in mm units; red cut strokes, blue engrave labels, even-odd fill rule."""
    w, h = layout.sheet_w, layout.sheet_h
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{w:g}mm" height="{h:g}mm" viewBox="0 0 {w:g} {h:g}">',
    ]
    for placement in layout.placements:
        lines.append(
            f'  <g id="part-{placement.part_id}" fill-rule="evenodd" '
            f'stroke="#FF0000" stroke-width="0.1" fill="none">'
        )
        for contour in placement.placed_polygons().contours:
            lines.append(f'    <path d="{_path_d(contour)}"/>')
        for path in placement.placed_paths():
            lines.append(f'    <path d="{_path_d(path)}"/>')
        if placement.label:
            ax, ay = placement.label_anchor
            lo, hi = polygonset_bbox(placement.polygons)
            size = max(2.0, min(8.0, 0.2 * float(min(hi[0] - lo[0], hi[1] - lo[1]))))
            lines.append(
                f'    <text x="{fmt3(ax)}" y="{fmt3(ay)}" font-size="{size:g}" '
                f'text-anchor="middle" stroke="#0000FF" fill="none">{placement.label}</text>'
            )
        lines.append("  </g>")
    lines.append("</svg>")
    return ("\n".join(lines) + "\n").encode("utf-8")


_PATH_RE = re.compile(r'<path d="([^"]+)"')


def parse_svg_contours(data: bytes) -> list[Contour]:
    """Read back the M/L/Z paths this exporter writes (test round trips)."""
    contours = []
    for d in _PATH_RE.findall(data.decode("utf-8")):
        tokens = d.replace("M", " M ").replace("L", " L ").replace("Z", " Z ").split()
        pts, closed, i = [], False, 0
        while i < len(tokens):
            tok = tokens[i]
            if tok in ("M", "L"):
                pts.append((float(tokens[i + 1]), float(tokens[i + 2])))
                i += 3
            elif tok == "Z":
                closed = True
                i += 1
            else:
                i += 1
        contours.append(Contour(np.array(pts), closed=closed))
    return contours


# --- wire CSV ---------------------------------------------------------------------

WIRE_CSV_HEADER = "wire_id,step,feed_mm,bend_deg,rotate_deg"


def export_wire_csv(wire) -> bytes:
    """One row per bend-table row; rotate_deg is 0 for planar wires."""
    lines = [WIRE_CSV_HEADER]
    for step, (feed, bend) in enumerate(wire.bend_table.rows, start=1):
        lines.append(f"{wire.wire_id},{step},{fmt4(feed)},{fmt4(bend)},{fmt4(0.0)}")
    return ("\n".join(lines) + "\n").encode("utf-8")


def parse_wire_csv(data: bytes) -> tuple[str, list[tuple[float, float]]]:
    lines = data.decode("utf-8").strip().split("\n")
    if lines[0] != WIRE_CSV_HEADER:
        raise ValueError(f"unexpected wire CSV header {lines[0]!r}")
    wire_id, rows = "", []
    for line in lines[1:]:
        cols = line.split(",")
        wire_id = cols[0]
        rows.append((float(cols[2]), float(cols[3])))
    return wire_id, rows


# --- guide manifest ----------------------------------------------------------------

def _join(items) -> str:
    return "; ".join(items)


def _one_line(text: str) -> str:
    return " ".join(text.split())


def export_guide_manifest(guide: StepManifest, descriptor: WorkflowDescriptor, params: dict) -> bytes:
    """Line-oriented plain-text manifest, schema version 1."""
    guide.validate()
    lines = [GUIDE_SCHEMA, f"workflow: {descriptor.id}", f"name: {descriptor.name}"]
    for name in sorted(params):
        lines.append(f"param: {name}={format_param_value(params[name])}")
    for step in guide.steps:
        lines.append("")
        lines.append(f"step: {step.index}")
        lines.append(f"title: {_one_line(step.title)}")
        lines.append(f"tools: {_join(step.tools)}")
        lines.append(f"artifacts: {_join(step.artifact_refs)}")
        lines.append(f"links: {_join(step.external_links)}")
        lines.append(f"body: {_one_line(step.body)}")
    return ("\n".join(lines) + "\n").encode("utf-8")


def parse_guide_manifest(data: bytes) -> tuple[StepManifest, dict]:
    text = data.decode("utf-8")
    lines = text.strip("\n").split("\n")
    if lines[0] != GUIDE_SCHEMA:
        raise ValueError(f"unexpected manifest schema line {lines[0]!r}")
    header: dict = {"params": {}}
    steps: list[GuideStep] = []
    current: GuideStep | None = None

    def split_list(value: str) -> list[str]:
        return [item for item in value.split("; ") if item]

    for line in lines[1:]:
        if not line.strip():
            continue
        key, _, value = line.partition(": ")
        if key == "workflow":
            header["workflow"] = value
        elif key == "name":
            header["name"] = value
        elif key == "param":
            pname, _, pvalue = value.partition("=")
            header["params"][pname] = pvalue
        elif key == "step":
            current = GuideStep(index=int(value), title="", body="")
            steps.append(current)
        elif current is not None and key == "title":
            current.title = value
        elif current is not None and key == "tools":
            current.tools = split_list(value)
        elif current is not None and key == "artifacts":
            current.artifact_refs = split_list(value)
        elif current is not None and key == "links":
            current.external_links = split_list(value)
        elif current is not None and key == "body":
            current.body = value
    manifest = StepManifest(steps)
    manifest.validate()
    return manifest, header


# --- preview document ----------------------------------------------------------------

def export_preview(parts: list[PreviewPart]) -> bytes:
    """Self-contained JSON document: per part id, color role, vertices, triangles."""
    doc = {
        "schema": PREVIEW_SCHEMA,
        "parts": [
            {
                "id": part.part_id,
                "color_role": part.color_role,
                "vertices": [[float(x), float(y), float(z)] for x, y, z in part.mesh.vertices],
                "triangles": [[int(a), int(b), int(c)] for a, b, c in part.mesh.triangles],
            }
            for part in parts
        ],
    }
    return json.dumps(doc, separators=(",", ":")).encode("utf-8")


def parse_preview(data: bytes) -> list[PreviewPart]:
    doc = json.loads(data.decode("utf-8"))
    if doc.get("schema") != PREVIEW_SCHEMA:
        raise ValueError(f"unexpected preview schema {doc.get('schema')!r}")
    return [
        PreviewPart(
            part["id"],
            TriangleMesh(np.array(part["vertices"], dtype=float).reshape(-1, 3),
                         np.array(part["triangles"], dtype=np.int64).reshape(-1, 3)),
            part["color_role"],
        )
        for part in doc["parts"]
    ]


# --- bundle archive ---------------------------------------------------------------------

_ZIP_EPOCH = (1980, 1, 1, 0, 0, 0)


def export_bundle(output: WorkflowOutput, descriptor: WorkflowDescriptor, params: dict) -> bytes:
    """Zip with machine artifacts at the root plus GUIDE.txt, preview.json, params.txt.

    Entries are name-sorted with fixed timestamps so identical runs are
    byte-identical.
    """
    entries: dict[str, bytes] = {a.filename: a.data for a in output.artifacts}
    entries["GUIDE.txt"] = export_guide_manifest(output.guide, descriptor, params)
    entries["preview.json"] = export_preview(output.preview)
    entries["params.txt"] = (
        "\n".join(f"{k}={format_param_value(params[k])}" for k in sorted(params)) + "\n"
    ).encode("utf-8")
    buf = io.BytesIO()
    with zipfile.ZipFile(buf, "w", compression=zipfile.ZIP_DEFLATED) as archive:
        for name in sorted(entries):
            info = zipfile.ZipInfo(name, date_time=_ZIP_EPOCH)
            info.compress_type = zipfile.ZIP_DEFLATED
            info.external_attr = 0o644 << 16
            archive.writestr(info, entries[name])
    return buf.getvalue()


def read_bundle(data: bytes) -> dict[str, bytes]:
    with zipfile.ZipFile(io.BytesIO(data)) as archive:
        return {name: archive.read(name) for name in archive.namelist()}


def export_stl_artifact(mesh: TriangleMesh, filename: str) -> MachineArtifact:
    from .mesh_kernel import write_stl

    return MachineArtifact(filename, "stl", write_stl(mesh))
