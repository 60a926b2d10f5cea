import math

import numpy as np
import pytest

from camforge.errors import LayerHeightOutOfRange
from camforge.mesh_kernel import mesh_stats
from camforge.polygon_ops import PolygonSet, polygonset_area
from camforge.slicer import Layer, SliceStack, slice_uniform, stack_volume


class TestSliceUniform:
    def test_cube_five_identical_layers(self, cube):
        stack = slice_uniform(cube, 2.0)
        assert len(stack.layers) == 5
        for layer in stack.layers:
            assert polygonset_area(layer.cross_section) == pytest.approx(1600.0)
            assert layer.thickness == 2.0
        zs = [layer.z for layer in stack.layers]
        assert zs == sorted(zs)
        assert np.allclose(zs, [1, 3, 5, 7, 9])

    def test_stool_at_3mm(self, stool):
        stack = slice_uniform(stool, 3.0)
        lo, hi = stool.bbox
        assert stack.layer_height == 3.0
        assert len(stack.layers) * 3.0 >= hi[2] - lo[2]

    def test_icosphere_layer_areas(self, icosphere):
        stack = slice_uniform(icosphere, 5.0)
        assert len(stack.layers) == 8
        layer = stack.layers[4]
        assert layer.z == pytest.approx(2.5)
        area = polygonset_area(layer.cross_section)
        analytic = math.pi * (400 - 2.5**2)
        assert abs(area - analytic) / analytic < 0.015

    def test_layer_count_formula(self, all_fixture_meshes):
        for name, mesh in all_fixture_meshes.items():
            lo, hi = mesh.bbox
            extent = hi[2] - lo[2]
            for h in (1.7, 2.0, 3.0, 4.9):
                stack = slice_uniform(mesh, h)
                assert len(stack.layers) == math.ceil(extent / h), (name, h)

    def test_layer_height_out_of_range(self, cube):
        with pytest.raises(LayerHeightOutOfRange):
            slice_uniform(cube, 0.0)
        with pytest.raises(LayerHeightOutOfRange):
            slice_uniform(cube, 11.0)

    def test_convex_layers_single_contour(self, cube, icosphere):
        for mesh in (cube, icosphere):
            for layer in slice_uniform(mesh, 2.0).layers:
                if not layer.cross_section.is_empty:
                    assert len(layer.cross_section.contours) == 1

    def test_empty_layers_retained_with_warning(self, cube):
        # h=3 on a 10 mm slab: the clamped top midplane dodges above the mesh
        stack = slice_uniform(cube, 3.0)
        assert len(stack.layers) == 4
        empty = [layer for layer in stack.layers if layer.cross_section.is_empty]
        assert empty
        assert any(code == "MinFeature" for code, _ in empty[0].warnings)


class TestStackVolume:
    def test_cube_exact(self, cube):
        stack = slice_uniform(cube, 2.0)
        assert stack_volume(stack) == pytest.approx(5 * 1600.0 * 2.0, abs=1e-9)
        assert stack_volume(stack) == pytest.approx(mesh_stats(cube).volume, abs=1e-6)

    def test_empty_layers_only(self):
        empty = SliceStack(
            [Layer(0, 0.5, 1.0, PolygonSet([])), Layer(1, 1.5, 1.0, PolygonSet([]))],
            (np.zeros(3), np.ones(3)),
            1.0,
        )
        assert stack_volume(empty) == 0.0

    def test_icosphere_error_halves_with_h(self, icosphere):
        volume = mesh_stats(icosphere).volume
        err5 = abs(stack_volume(slice_uniform(icosphere, 5.0)) - volume)
        err25 = abs(stack_volume(slice_uniform(icosphere, 2.5)) - volume)
        assert err25 < err5
