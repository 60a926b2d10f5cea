"""Foundational workflow generators and their registry wiring."""

from __future__ import annotations

from . import hotwire_foam, interlocking, stacked_mold, stacked_slices, wire_mesh

FOUNDATIONAL = (stacked_slices, interlocking, stacked_mold, wire_mesh, hotwire_foam)


def register_foundational(registry) -> None:
    for module in FOUNDATIONAL:
        registry.register(module.descriptor(), module.generate)
