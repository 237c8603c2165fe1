import numpy as np
import pytest

from sasakigeom import (
    build_heisenberg,
    build_standard_sphere,
    curvature_at,
    d_homothetic_deform,
)


@pytest.fixture(scope="session")
def spaces():
    s5 = build_standard_sphere(2)
    return {
        "s5": s5,
        "s7": build_standard_sphere(3),
        "heis5": build_heisenberg(2),
        "def_half": d_homothetic_deform(s5, 0.5),
        "def2": d_homothetic_deform(s5, 2.0),
        "def3": d_homothetic_deform(s5, 3.0),
    }


_CURV_CACHE = {}


@pytest.fixture(scope="session")
def curv_of():
    """Cached curvature evaluation keyed by space identity and point."""

    def get(space, x):
        key = (id(space), np.asarray(x).tobytes())
        if key not in _CURV_CACHE:
            _CURV_CACHE[key] = curvature_at(space.structure.metric, np.asarray(x, dtype=float))
        return _CURV_CACHE[key]

    return get
