import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from camforge.engine import GuideStep, PreviewPart, StepManifest, resolve_params
from camforge.errors import PartTooLarge
from camforge.exporters import (
    SheetLayout,
    Placement,
    export_bundle,
    export_guide_manifest,
    export_preview,
    export_svg,
    export_wire_csv,
    pack_sheets,
    parse_guide_manifest,
    parse_preview,
    parse_svg_contours,
    parse_wire_csv,
    read_bundle,
)
from camforge.polygon_ops import (
    BendTable,
    Contour,
    PolygonSet,
    bends_to_polyline,
    polygonset_bbox,
    polyline_to_bends,
)
from camforge.workflows import stacked_slices, wire_mesh
from camforge.workflows.wire_mesh import WirePath
from camforge.mesh_kernel import Plane
from conftest import rigid_align


def square_set(side=40.0, corner=(0.0, 0.0)):
    x0, y0 = corner
    pts = np.array([[x0, y0], [x0 + side, y0], [x0 + side, y0 + side], [x0, y0 + side]])
    return PolygonSet([Contour(pts)])


class TestPackSheets:
    def test_five_squares_on_one_sheet(self):
        parts = [(f"L{i + 1}", square_set(40), f"L{i + 1}") for i in range(5)]
        sheets = pack_sheets(parts, 220, 50, gap=2.0)
        assert len(sheets) == 1
        xs = sorted(
            float(polygonset_bbox(p.placed_polygons())[0][0])
            for p in sheets[0].placements
        )
        assert xs == [0.0, 42.0, 84.0, 126.0, 168.0]

    def test_part_too_large(self):
        with pytest.raises(PartTooLarge) as excinfo:
            pack_sheets([("big", square_set(300), "big")], 200, 200)
        assert excinfo.value.part_id == "big"

    def test_zero_parts(self):
        assert pack_sheets([], 200, 200) == []

    def test_overflow_opens_new_sheet(self):
        parts = [(f"P{i}", square_set(40), f"P{i}") for i in range(6)]
        sheets = pack_sheets(parts, 90, 90, gap=2.0)
        assert len(sheets) == 2
        assert sum(len(s.placements) for s in sheets) == 6

    @given(st.integers(min_value=0, max_value=10_000))
    @settings(max_examples=50, deadline=None)
    def test_no_overlap_and_inside_sheet(self, seed):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(1, 12))
        parts = []
        for i in range(n):
            w, h = rng.uniform(5, 60, 2)
            pts = np.array([[0, 0], [w, 0], [w, h], [0, h]]) + rng.uniform(-30, 30, 2)
            parts.append((f"p{i:02d}", PolygonSet([Contour(pts)]), f"p{i:02d}"))
        gap = 2.0
        sheets = pack_sheets(parts, 200, 150, gap=gap)
        for sheet in sheets:
            boxes = []
            for placement in sheet.placements:
                lo, hi = polygonset_bbox(placement.placed_polygons())
                assert (lo >= -1e-9).all()
                assert hi[0] <= 200 + 1e-9 and hi[1] <= 150 + 1e-9
                boxes.append((lo, hi))
            for i in range(len(boxes)):
                for j in range(i + 1, len(boxes)):
                    (lo_i, hi_i), (lo_j, hi_j) = boxes[i], boxes[j]
                    separated = (
                        hi_i[0] + gap <= lo_j[0] + 1e-9
                        or hi_j[0] + gap <= lo_i[0] + 1e-9
                        or hi_i[1] + gap <= lo_j[1] + 1e-9
                        or hi_j[1] + gap <= lo_i[1] + 1e-9
                    )
                    assert separated


class TestExportSvg:
    def test_unit_square_path_text(self):
        layout = SheetLayout(20, 20)
        layout.placements.append(
            Placement("p", np.zeros(2), square_set(10), "", np.array([5.0, 5.0]))
        )
        svg = export_svg(layout).decode("utf-8")
        assert '<path d="M 0.000 0.000 L 10.000 0.000 L 10.000 10.000 L 0.000 10.000 Z"/>' in svg
        assert 'viewBox="0 0 20 20"' in svg
        assert 'width="20mm"' in svg
        assert 'stroke="#FF0000"' in svg
        assert 'fill-rule="evenodd"' in svg

    def test_reparse_counts_contours(self):
        layout = SheetLayout(100, 100)
        layout.placements.append(
            Placement("a", np.zeros(2), square_set(10), "A", np.array([5.0, 5.0]))
        )
        layout.placements.append(
            Placement("b", np.array([20.0, 0.0]), square_set(10), "B", np.array([25.0, 5.0]))
        )
        contours = parse_svg_contours(export_svg(layout))
        assert len(contours) == 2

    def test_stacked_cube_five_labeled_groups(self, cube):
        params = resolve_params(stacked_slices.descriptor(), {"layer_height": 2.0, "dowel_count": 0})
        out = stacked_slices.generate(cube, params)
        svg = out.artifacts[0].data.decode("utf-8")
        for i in range(1, 6):
            assert f'id="part-L{i}"' in svg
            assert f">L{i}</text>" in svg

    def test_labels_are_blue_engrave(self):
        layout = SheetLayout(50, 50)
        layout.placements.append(
            Placement("p", np.zeros(2), square_set(10), "L1", np.array([5.0, 5.0]))
        )
        assert 'stroke="#0000FF"' in export_svg(layout).decode("utf-8")

    def test_coordinates_within_viewbox(self, cube):
        params = resolve_params(stacked_slices.descriptor(), {"layer_height": 2.0})
        out = stacked_slices.generate(cube, params)
        for artifact in out.artifacts:
            if artifact.format != "svg":
                continue
            contours = parse_svg_contours(artifact.data)
            pts = np.vstack([c.points for c in contours])
            assert (pts >= -1e-6).all()
            assert (pts[:, 0] <= 600 + 1e-6).all()
            assert (pts[:, 1] <= 400 + 1e-6).all()


class TestWireCsv:
    def wire_from_square(self):
        pts = np.array([[0, 0], [40, 0], [40, 40], [0, 40]], dtype=float)
        contour = Contour(pts)
        table = polyline_to_bends(contour)
        return WirePath("ring_01", "ring", Plane(np.array([0.0, 0.0, 1.0]), 0.0), contour, table, table.total_length)

    def test_square_ring_rows(self):
        data = export_wire_csv(self.wire_from_square()).decode("utf-8")
        lines = data.strip().split("\n")
        assert lines[0] == "wire_id,step,feed_mm,bend_deg,rotate_deg"
        assert len(lines) == 5
        for i, line in enumerate(lines[1:], start=1):
            assert line == f"ring_01,{i},40.0000,90.0000,0.0000"

    def test_straight_wire_single_row(self):
        contour = Contour(np.array([[0.0, 0.0], [25.0, 0.0]]), closed=False)
        table = polyline_to_bends(contour)
        wire = WirePath("w", "ring", Plane(np.array([0.0, 0.0, 1.0]), 0.0), contour, table, 25.0)
        lines = export_wire_csv(wire).decode("utf-8").strip().split("\n")
        assert len(lines) == 2
        assert lines[1] == "w,1,25.0000,0.0000,0.0000"

    def test_round_trip_within_csv_rounding(self):
        # wobbly 16-point ring, the size the wire workflow actually emits
        rng = np.random.default_rng(3)
        theta = np.sort(rng.uniform(0, 2 * np.pi, 16))
        r = rng.uniform(15, 25, 16)
        contour = Contour(np.stack([r * np.cos(theta), r * np.sin(theta)], axis=1))
        wire = WirePath("w", "ring", Plane(np.array([0.0, 0.0, 1.0]), 0.0), contour,
                        polyline_to_bends(contour), 0.0)
        _, rows = parse_wire_csv(export_wire_csv(wire))
        rebuilt = bends_to_polyline(BendTable(rows, closed=True))
        aligned = rigid_align(rebuilt.points, contour.points)
        assert np.abs(aligned - contour.points).max() < 1e-4


class TestGuideManifest:
    def four_step_manifest(self):
        return StepManifest(
            [
                GuideStep(1, "Cut", "Cut all parts.", ["sheet_1.svg"], [], ["laser cutter"]),
                GuideStep(2, "Assemble", "Glue the stack.", [], [], ["glue"]),
                GuideStep(3, "Sand", "Smooth every face.", [], ["https://example.org/sanding"], ["sandpaper"]),
                GuideStep(4, "Coat", "Apply the finish coat.", [], [], ["brush"]),
            ]
        )

    def test_four_step_blocks_in_order(self, registry):
        desc = registry.descriptor("stacked-slices")
        data = export_guide_manifest(self.four_step_manifest(), desc, {"layer_height": 3.0})
        text = data.decode("utf-8")
        assert text.startswith("camforge-guide 1\n")
        positions = [text.index(f"step: {i}") for i in range(1, 5)]
        assert positions == sorted(positions)
        assert "param: layer_height=3.0" in text

    def test_round_trip_equality(self, registry):
        desc = registry.descriptor("stacked-slices")
        manifest = self.four_step_manifest()
        parsed, header = parse_guide_manifest(
            export_guide_manifest(manifest, desc, {"layer_height": 3.0, "kerf": 0.1})
        )
        assert parsed == manifest
        assert header["workflow"] == "stacked-slices"
        assert header["params"] == {"kerf": "0.1", "layer_height": "3.0"}

    def test_byte_deterministic(self, registry):
        desc = registry.descriptor("stacked-slices")
        a = export_guide_manifest(self.four_step_manifest(), desc, {"kerf": 0.1})
        b = export_guide_manifest(self.four_step_manifest(), desc, {"kerf": 0.1})
        assert a == b


class TestPreviewDocument:
    def test_five_layer_cube_preview(self, cube, registry):
        out = registry.generate(
            "stacked-slices", cube, {"layer_height": 2.0, "dowel_count": 0}
        )
        parts = parse_preview(export_preview(out.preview))
        assert len(parts) == 5
        for part in parts:
            assert len(part.mesh.vertices) == 8
            assert len(part.mesh.triangles) == 12

    def test_empty_part_list(self):
        assert parse_preview(export_preview([])) == []

    def test_vertex_count_conservation(self, cube40, registry):
        out = registry.generate("wire-mesh", cube40, {})
        doc = export_preview(out.preview)
        parts = parse_preview(doc)
        total = sum(len(p.mesh.vertices) for p in parts)
        assert total == sum(len(p.mesh.vertices) for p in out.preview)


class TestBundle:
    def test_contents(self, cube, registry):
        out = registry.generate("stacked-slices", cube, {"layer_height": 2.0})
        desc = registry.descriptor("stacked-slices")
        params = resolve_params(desc, {"layer_height": 2.0})
        entries = read_bundle(export_bundle(out, desc, params))
        assert "GUIDE.txt" in entries
        assert "preview.json" in entries
        assert "params.txt" in entries
        assert any(name.endswith(".svg") for name in entries)
        assert "layer_height=2.0" in entries["params.txt"].decode()

    def test_byte_identical_rebuilds(self, cube, registry):
        desc = registry.descriptor("stacked-slices")
        params = resolve_params(desc, {})
        a = export_bundle(registry.generate("stacked-slices", cube, {}), desc, params)
        b = export_bundle(registry.generate("stacked-slices", cube, {}), desc, params)
        assert a == b

    def test_wire_bundle_has_one_csv_per_wire(self, cube40, registry):
        params = resolve_params(registry.descriptor("wire-mesh"), {})
        rings, meridians, _, _ = wire_mesh.compute_wires(cube40, params)
        out = registry.generate("wire-mesh", cube40, {})
        entries = read_bundle(
            export_bundle(out, registry.descriptor("wire-mesh"), params)
        )
        csvs = [n for n in entries if n.endswith(".csv")]
        assert len(csvs) == len(rings) + len(meridians)
