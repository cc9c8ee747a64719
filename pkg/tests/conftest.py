import numpy as np
import pytest

from fiberbody.bodies import (
    Ball,
    Disc,
    Discotope,
    Elliptope,
    Polytope,
    ProjectionSplit,
    Schneider,
    Zonotope,
)


@pytest.fixture(scope="session")
def split12():
    return ProjectionSplit.coordinate(1, 2)


@pytest.fixture(scope="session")
def cube():
    """[-1, 1]^3 as a zonotope."""
    return Zonotope(2.0 * np.eye(3))


@pytest.fixture(scope="session")
def elliptope():
    return Elliptope()


@pytest.fixture(scope="session")
def tetrahedron():
    return Polytope([[1, 1, 1], [1, -1, -1], [-1, 1, -1], [-1, -1, 1]])


@pytest.fixture(scope="session")
def dice():
    return Discotope(np.eye(3))


@pytest.fixture(scope="session")
def unit_ball():
    return Ball(1.0)


def random_zonotopes(count=5, max_gens=6, dim=3, seed=42):
    """Seeded random test zonotopes with nonzero generators."""
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        n = int(rng.integers(dim, max_gens + 1))
        gens = rng.standard_normal((n, dim))
        out.append(Zonotope(gens))
    return out
