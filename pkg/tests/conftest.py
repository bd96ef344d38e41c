from __future__ import annotations

import pytest
from hypothesis import HealthCheck, settings

from wlhier.constructions import connected_graphs, random_graphs
from wlhier.graph import Graph

settings.register_profile("repo", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("repo")

RANDOM_SEED = 20240601


@pytest.fixture(scope="session")
def atlas7() -> list[Graph]:
    return connected_graphs(7)


@pytest.fixture(scope="session")
def atlas5() -> list[Graph]:
    return connected_graphs(5)


@pytest.fixture(scope="session")
def random_corpus() -> list[Graph]:
    """200 seeded samples with at most 12 nodes."""
    return random_graphs(200, 12, seed=RANDOM_SEED)
