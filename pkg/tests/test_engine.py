import pytest

from camforge.engine import (
    ComparisonMetrics,
    DimensionProfile,
    GuideStep,
    MachineArtifact,
    ParamSpec,
    StepManifest,
    WorkflowDescriptor,
    WorkflowOutput,
    WorkflowRegistry,
    default_registry,
    resolve_params,
)
from camforge.errors import (
    DuplicateId,
    InvalidWorkflowOutput,
    ParamOutOfRange,
    UnknownWorkflow,
)

FOUNDATIONAL_IDS = {
    "stacked-slices",
    "interlocking",
    "stacked-mold",
    "wire-mesh",
    "hotwire-foam",
}


def toy_descriptor(workflow_id="toy"):
    return WorkflowDescriptor(
        id=workflow_id,
        name="Toy",
        category="Other",
        machines=frozenset({"none"}),
        dimensions=DimensionProfile(
            product={
                "load_bearing": 0,
                "high_temperature_tolerance": 0,
                "lightweight": 0,
                "detail_fidelity": 0,
            },
            structure={
                "removable_support": False,
                "integrated_support": False,
                "flexible": False,
                "modular": False,
                "reusable": False,
            },
            machine=frozenset({"none"}),
        ),
        param_schema=[ParamSpec("n", "count", 1, 0, 10)],
    )


def toy_output(artifact_name="a.csv", ref=None):
    return WorkflowOutput(
        preview=[],
        artifacts=[MachineArtifact(artifact_name, "csv", b"x\n")],
        guide=StepManifest([GuideStep(1, "t", "b", artifact_refs=[ref] if ref else [])]),
        warnings=[],
        metrics=ComparisonMetrics(1, 0.0, 1.0, frozenset({"none"})),
    )


class TestRegistry:
    def test_default_registry_has_five_foundational(self, registry):
        assert set(registry.ids()) == FOUNDATIONAL_IDS

    def test_register_and_list(self):
        reg = WorkflowRegistry()
        reg.register(toy_descriptor(), lambda mesh, params: toy_output())
        assert reg.ids() == ["toy"]

    def test_duplicate_id_rejected(self):
        reg = WorkflowRegistry()
        reg.register(toy_descriptor(), lambda m, p: toy_output())
        with pytest.raises(DuplicateId):
            reg.register(toy_descriptor(), lambda m, p: toy_output())

    def test_descriptor_machine_mismatch_rejected(self):
        desc = toy_descriptor()
        desc.machines = frozenset({"laser_cutter"})
        reg = WorkflowRegistry()
        with pytest.raises(ValueError):
            reg.register(desc, lambda m, p: toy_output())


class TestFilter:
    def test_empty_filters_return_all(self, registry):
        assert len(registry.filter_workflows()) == 5

    def test_machine_filter_excludes_wire_mesh(self, registry):
        found = {d.id for d in registry.filter_workflows(machines={"laser_cutter"})}
        assert "wire-mesh" not in found
        assert found == {"stacked-slices", "interlocking", "stacked-mold"}

    def test_keyword_mold(self, registry):
        found = {d.id for d in registry.filter_workflows(keywords="mold")}
        assert "stacked-mold" in found

    def test_keyword_case_insensitive_over_name_and_category(self, registry):
        assert {d.id for d in registry.filter_workflows(keywords="WIRE FORMING")} == {"wire-mesh"}

    def test_product_threshold_subset(self, registry):
        everything = {d.id for d in registry.filter_workflows()}
        strong = {
            d.id
            for d in registry.filter_workflows(dims={"product": {"load_bearing": 2}})
        }
        assert strong <= everything
        assert strong == {"stacked-slices", "interlocking"}

    def test_structure_flag(self, registry):
        reusable = {
            d.id
            for d in registry.filter_workflows(dims={"structure": {"reusable": True}})
        }
        assert reusable == {"stacked-mold"}

    def test_and_semantics_across_groups(self, registry):
        found = registry.filter_workflows(
            keywords="stack",
            dims={"product": {"load_bearing": 2}},
            machines={"laser_cutter"},
        )
        assert {d.id for d in found} == {"stacked-slices"}


class TestGenerate:
    def test_stacked_cube_five_parts(self, registry, cube):
        out = registry.generate("stacked-slices", cube, {"layer_height": 2.0})
        assert out.metrics.part_count == 5
        assert any(a.format == "svg" for a in out.artifacts)

    def test_negative_layer_height_rejected(self, registry, cube):
        with pytest.raises(ParamOutOfRange) as excinfo:
            registry.generate("stacked-slices", cube, {"layer_height": -1})
        assert excinfo.value.param == "layer_height"

    def test_unknown_workflow(self, registry, cube):
        with pytest.raises(UnknownWorkflow):
            registry.generate("no-such-wf", cube, {})

    def test_unknown_param_named(self, registry, cube):
        with pytest.raises(ParamOutOfRange) as excinfo:
            registry.generate("stacked-slices", cube, {"bogus": 1})
        assert excinfo.value.param == "bogus"

    def test_missing_params_take_defaults(self, registry):
        desc = registry.descriptor("stacked-slices")
        resolved = resolve_params(desc, {})
        assert resolved["layer_height"] == 3.0
        assert resolved["dowel_count"] == 2

    def test_enum_validation(self, registry, cube):
        with pytest.raises(ParamOutOfRange):
            registry.generate("hotwire-foam", cube, {"directions": "diagonal"})

    def test_deterministic_artifacts(self, registry, cube):
        a = registry.generate("stacked-slices", cube, {"layer_height": 2.0})
        b = registry.generate("stacked-slices", cube, {"layer_height": 2.0})
        assert [x.filename for x in a.artifacts] == [x.filename for x in b.artifacts]
        for x, y in zip(a.artifacts, b.artifacts):
            assert x.data == y.data


class TestCompare:
    def test_two_rows(self, registry, cube):
        rows = registry.compare(
            cube, [("stacked-slices", {}), ("interlocking", {})]
        )
        assert len(rows) == 2
        assert all(row.metrics.part_count > 0 for row in rows)
        assert [row.descriptor.id for row in rows] == ["stacked-slices", "interlocking"]

    def test_empty_request_list(self, registry, cube):
        assert registry.compare(cube, []) == []

    def test_all_five_distinct_machine_sets_not_required_but_rows_match(self, registry, cube40):
        requests = [(wf, {}) for wf in sorted(FOUNDATIONAL_IDS)]
        rows = registry.compare(cube40, requests)
        assert len(rows) == 5
        machine_sets = [frozenset(row.metrics.machine_set) for row in rows]
        assert len(set(machine_sets)) >= 3  # laser trio shares a set

    def test_compare_matches_individual_generate(self, registry, cube40):
        rows = registry.compare(cube40, [("wire-mesh", {}), ("hotwire-foam", {})])
        for row in rows:
            single = registry.generate(row.descriptor.id, cube40, {})
            assert single.metrics == row.metrics

    def test_unknown_workflow_identified(self, registry, cube):
        with pytest.raises(UnknownWorkflow) as excinfo:
            registry.compare(cube, [("stacked-slices", {}), ("ghost", {})])
        assert "ghost" in str(excinfo.value)


class TestOutputValidation:
    def test_broken_artifact_ref_rejected(self, cube):
        reg = WorkflowRegistry()
        reg.register(
            toy_descriptor(), lambda m, p: toy_output(ref="missing.svg")
        )
        with pytest.raises(InvalidWorkflowOutput):
            reg.generate("toy", cube, {})

    def test_duplicate_filenames_rejected(self, cube):
        def bad(mesh, params):
            out = toy_output()
            out.artifacts = out.artifacts + out.artifacts
            return out

        reg = WorkflowRegistry()
        reg.register(toy_descriptor(), bad)
        with pytest.raises(InvalidWorkflowOutput):
            reg.generate("toy", cube, {})

    def test_extension_format_mismatch_rejected(self, cube):
        reg = WorkflowRegistry()
        reg.register(toy_descriptor(), lambda m, p: toy_output(artifact_name="a.svg"))
        out = toy_output()
        out.artifacts[0].format = "csv"
        out.artifacts[0].filename = "a.svg"
        with pytest.raises(InvalidWorkflowOutput):
            reg.generate("toy", cube, {})

    def test_bad_fidelity_rejected(self, cube):
        def bad(mesh, params):
            out = toy_output()
            out.metrics.estimated_fidelity = 1.5
            return out

        reg = WorkflowRegistry()
        reg.register(toy_descriptor(), bad)
        with pytest.raises(InvalidWorkflowOutput):
            reg.generate("toy", cube, {})

    def test_non_contiguous_steps_rejected(self, cube):
        def bad(mesh, params):
            out = toy_output()
            out.guide = StepManifest([GuideStep(2, "t", "b")])
            return out

        reg = WorkflowRegistry()
        reg.register(toy_descriptor(), bad)
        with pytest.raises(InvalidWorkflowOutput):
            reg.generate("toy", cube, {})

    def test_five_foundational_outputs_pass_closure(self, registry, cube40):
        for wf in registry.ids():
            out = registry.generate(wf, cube40, {})
            names = {a.filename for a in out.artifacts}
            for step in out.guide.steps:
                assert set(step.artifact_refs) <= names
