"""Scriptable front door mirroring the service.

Subcommands: list, describe, preview, compile, compare, serve.
Exit codes: 0 success, 2 usage error, 1 generation error. Warnings go to
stderr as "WARN[code]: message".
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import exporters
from .engine import WorkflowDescriptor, default_registry, resolve_params
from .errors import CamforgeError, ParamOutOfRange, UnknownWorkflow
from .mesh_kernel import parse_stl
from .service import descriptor_to_dict, metrics_to_dict

USAGE_ERROR = 2
GENERATION_ERROR = 1


def _parse_param_value(descriptor: WorkflowDescriptor, name: str, raw: str):
    try:
        spec = descriptor.param(name)
    except KeyError:
        raise ParamOutOfRange(name, "unknown parameter") from None
    if spec.kind in ("length", "angle"):
        try:
            return float(raw)
        except ValueError:
            raise ParamOutOfRange(
                name, f"expected a number in {spec.min_value}..{spec.max_value}, got {raw!r}"
            ) from None
    if spec.kind == "count":
        try:
            return int(raw)
        except ValueError:
            raise ParamOutOfRange(
                name, f"expected an integer in {spec.min_value}..{spec.max_value}, got {raw!r}"
            ) from None
    if spec.kind == "flag":
        lowered = raw.lower()
        if lowered in ("true", "1", "yes", "on"):
            return True
        if lowered in ("false", "0", "no", "off"):
            return False
        raise ParamOutOfRange(name, f"expected true/false, got {raw!r}")
    return raw  # enum: validated against choices by the engine


def _collect_params(descriptor: WorkflowDescriptor, pairs: list[str]) -> dict:
    params = {}
    for pair in pairs:
        name, sep, raw = pair.partition("=")
        if not sep:
            raise ParamOutOfRange(pair, "expected --param name=value")
        params[name] = _parse_param_value(descriptor, name, raw)
    return params


def _load_mesh(path: str):
    return parse_stl(Path(path).read_bytes())


def _emit_warnings(warnings) -> None:
    for w in warnings:
        print(f"WARN[{w.code}]: {w.message}", file=sys.stderr)


def _print_table(headers: list[str], rows: list[list[str]], as_csv: bool) -> None:
    if as_csv:
        print(",".join(headers))
        for row in rows:
            print(",".join(row))
        return
    widths = [
        max(len(headers[i]), *(len(r[i]) for r in rows)) if rows else len(headers[i])
        for i in range(len(headers))
    ]
    print("  ".join(h.ljust(widths[i]) for i, h in enumerate(headers)))
    for row in rows:
        print("  ".join(cell.ljust(widths[i]) for i, cell in enumerate(row)))


def _fmt_opt(value, fmt: str = "{:.1f}") -> str:
    return "-" if value is None else fmt.format(value)


def cmd_list(args, registry) -> int:
    machines = set(args.machines.split(",")) if args.machines else None
    found = registry.filter_workflows(keywords=args.keyword or "", machines=machines)
    rows = [
        [d.id, d.name, d.category, "+".join(sorted(d.machines))] for d in found
    ]
    _print_table(["id", "name", "category", "machines"], rows, args.format == "csv")
    return 0


def cmd_describe(args, registry) -> int:
    descriptor = registry.descriptor(args.workflow)
    info = descriptor_to_dict(descriptor)
    print(f"{info['id']}: {info['name']}")
    print(f"category: {info['category']}")
    print(f"machines: {', '.join(info['machines'])}")
    print("dimensions:")
    for key, value in info["dimensions"]["product"].items():
        print(f"  product.{key}: {value}")
    for key, value in info["dimensions"]["structure"].items():
        print(f"  structure.{key}: {value}")
    print("parameters:")
    for spec in info["param_schema"]:
        rng = (
            f" choices={spec['choices']}"
            if spec["choices"]
            else f" range={spec['min']}..{spec['max']}"
        )
        print(f"  {spec['name']} ({spec['kind']}, default={spec['default']}{rng}) - {spec['description']}")
    if info["doc_links"]:
        print("links: " + ", ".join(info["doc_links"]))
    return 0


def cmd_preview(args, registry) -> int:
    descriptor = registry.descriptor(args.workflow)
    params = _collect_params(descriptor, args.param)
    mesh = _load_mesh(args.stl)
    output = registry.generate(args.workflow, mesh, params)
    _emit_warnings(output.warnings)
    Path(args.output).write_bytes(exporters.export_preview(output.preview))
    print(f"wrote {args.output} ({len(output.preview)} parts)")
    return 0


def cmd_compile(args, registry) -> int:
    descriptor = registry.descriptor(args.workflow)
    params = _collect_params(descriptor, args.param)
    mesh = _load_mesh(args.stl)
    output = registry.generate(args.workflow, mesh, params)
    _emit_warnings(output.warnings)
    resolved = resolve_params(descriptor, params)
    bundle = exporters.export_bundle(output, descriptor, resolved)
    out_dir = Path(args.output)
    out_dir.mkdir(parents=True, exist_ok=True)
    for name, data in sorted(exporters.read_bundle(bundle).items()):
        (out_dir / name).write_bytes(data)
        print(f"wrote {out_dir / name}")
    return 0


def cmd_compare(args, registry) -> int:
    mesh = _load_mesh(args.stl)
    rows = registry.compare(mesh, [(wf, {}) for wf in args.workflows])
    for row in rows:
        _emit_warnings(row.warnings)
    table = []
    for row in rows:
        m = metrics_to_dict(row.metrics)
        table.append(
            [
                row.descriptor.id,
                str(m["part_count"]),
                _fmt_opt(m["material_area_mm2"]),
                _fmt_opt(m["material_volume_mm3"]),
                f"{m['total_cut_length_mm']:.1f}",
                f"{m['estimated_fidelity']:.3f}",
                "+".join(m["machine_set"]),
            ]
        )
    _print_table(
        ["workflow", "part_count", "material_area", "material_volume", "cut_length", "fidelity", "machines"],
        table,
        args.format == "csv",
    )
    return 0


def cmd_serve(args, registry) -> int:
    from .service import run_server

    run_server(port=args.port, store_dir=args.store_dir)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="camforge",
        description="Compile an STL mesh into craft fabrication workflows.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_list = sub.add_parser("list", help="list registered workflows")
    p_list.add_argument("--machines", help="comma-separated machine tags to allow")
    p_list.add_argument("--keyword", help="substring filter over name and category")
    p_list.add_argument("--format", choices=("table", "csv"), default="table")
    p_list.set_defaults(func=cmd_list)

    p_desc = sub.add_parser("describe", help="show a workflow's schema and dimensions")
    p_desc.add_argument("workflow")
    p_desc.set_defaults(func=cmd_describe)

    p_prev = sub.add_parser("preview", help="write the preview document for a workflow")
    p_prev.add_argument("stl")
    p_prev.add_argument("workflow")
    p_prev.add_argument("--param", action="append", default=[], metavar="NAME=VALUE")
    p_prev.add_argument("-o", "--output", required=True)
    p_prev.set_defaults(func=cmd_preview)

    p_comp = sub.add_parser("compile", help="write the full bundle contents to a directory")
    p_comp.add_argument("stl")
    p_comp.add_argument("workflow")
    p_comp.add_argument("--param", action="append", default=[], metavar="NAME=VALUE")
    p_comp.add_argument("-o", "--output", required=True)
    p_comp.set_defaults(func=cmd_compile)

    p_cmp = sub.add_parser("compare", help="print a metrics table for several workflows")
    p_cmp.add_argument("stl")
    p_cmp.add_argument("workflows", nargs="+")
    p_cmp.add_argument("--format", choices=("table", "csv"), default="table")
    p_cmp.set_defaults(func=cmd_compare)

    p_srv = sub.add_parser("serve", help="run the HTTP service")
    p_srv.add_argument("--port", type=int, default=None)
    p_srv.add_argument("--store-dir", default=None)
    p_srv.set_defaults(func=cmd_serve)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else USAGE_ERROR
    registry = default_registry()
    try:
        return args.func(args, registry)
    except (UnknownWorkflow, ParamOutOfRange) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return GENERATION_ERROR
    except CamforgeError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return GENERATION_ERROR


if __name__ == "__main__":
    sys.exit(main())
