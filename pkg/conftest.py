"""
Shared pytest fixtures for the HWM toolkit tests.

Author: HWM Toolkit Team
Date: 2026
"""

import numpy as np
import pytest

from hwm.models.hypergraph import Hypergraph, build_hypergraph
from hwm.models.representations import StringLinearRep


def worked_example_graph() -> Hypergraph:
    """Three vertices ``1:a, 2:b, 3:a`` over ``{(a,3), (b,2)}`` with four hyperedges."""
    return build_hypergraph(
        {"a": 3, "b": 2},
        [("1", "a"), ("2", "b"), ("3", "a")],
        [
            [("1", 1), ("3", 3)],
            [("1", 2), ("2", 1), ("3", 2)],
            [("1", 3), ("2", 2)],
            [("3", 1)],
        ],
    )


@pytest.fixture
def example_graph() -> Hypergraph:
    return worked_example_graph()


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(1234)


@pytest.fixture
def counting_rep() -> StringLinearRep:
    """Counts occurrences of ``a``: ``r(w) = |w|_a``."""
    return StringLinearRep(
        np.array([1.0, 0.0]),
        np.array([0.0, 1.0]),
        {"a": np.array([[1.0, 1.0], [0.0, 1.0]]), "b": np.eye(2)},
    )
