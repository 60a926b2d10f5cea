import numpy as np
import pytest

from camforge.engine import default_registry
from camforge.primitives import (
    make_box,
    make_box_frustum,
    make_cylinder,
    make_icosphere,
    make_stool,
    make_two_blob,
)


@pytest.fixture(scope="session")
def cube():
    """40 x 40 x 10 mm slab sitting on z=0."""
    return make_box((40, 40, 10), center=(0, 0, 5), name="cube")


@pytest.fixture(scope="session")
def cube40():
    """40 mm cube sitting on z=0."""
    return make_box((40, 40, 40), center=(0, 0, 20), name="cube40")


@pytest.fixture(scope="session")
def cube40_origin():
    """40 mm cube centered at the origin."""
    return make_box((40, 40, 40), center=(0, 0, 0), name="cube40o")


@pytest.fixture(scope="session")
def cube10():
    """10 mm cube centered at the origin."""
    return make_box((10, 10, 10), center=(0, 0, 0), name="cube10")


@pytest.fixture(scope="session")
def icosphere():
    return make_icosphere(20.0, subdivisions=3)


@pytest.fixture(scope="session")
def stool():
    return make_stool()


@pytest.fixture(scope="session")
def two_blob():
    return make_two_blob()


@pytest.fixture(scope="session")
def cylinder_x():
    return make_cylinder(radius=15.0, length=40.0, axis="x")


@pytest.fixture(scope="session")
def frustum_shrinking():
    return make_box_frustum((40, 40), (16, 16), 20.0)


@pytest.fixture(scope="session")
def frustum_growing():
    return make_box_frustum((16, 16), (40, 40), 20.0)


@pytest.fixture(scope="session")
def registry():
    return default_registry()


@pytest.fixture(scope="session")
def all_fixture_meshes(cube, icosphere, two_blob, stool):
    return {"cube": cube, "icosphere": icosphere, "two_blob": two_blob, "stool": stool}


def rigid_align(source: np.ndarray, target: np.ndarray) -> np.ndarray:
    """Best-fit rotation+translation of source onto target (Kabsch, 2D)."""
    sc = source - source.mean(axis=0)
    tc = target - target.mean(axis=0)
    h = sc.T @ tc
    u, _, vt = np.linalg.svd(h)
    d = np.sign(np.linalg.det(vt.T @ u.T))
    r = vt.T @ np.diag([1.0, d]) @ u.T
    return (r @ sc.T).T + target.mean(axis=0)
