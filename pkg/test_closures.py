"""
Tests for the sum, Hadamard product and closed-graph normalization.

Author: HWM Toolkit Team
Date: 2026
"""

import logging

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hwm.core.exceptions import AlphabetMismatch, NotClosedBinary, NotDense, NotReal
from hwm.models.algebra import DirectSumAlgebra, IdentityAlgebra, SubsetAlgebra, TableAlgebra
from hwm.models.hwm import create_hwm
from hwm.models.hypergraph import RankedAlphabet, disjoint_union
from hwm.models.tensors import SparseTensor, isclose
from hwm.services import generators as gen
from hwm.services.closures import (
    component_sum_value,
    has_binary_edges,
    hwm_hadamard,
    hwm_sum,
    hwm_sum_many,
    normalize_closed_graph,
    normalized_value,
    sum_applies,
)
from hwm.services.engine import evaluate

ALPHABET = RankedAlphabet.from_mapping({"a": 1, "b": 2, "c": 3})
BINARY = RankedAlphabet.from_mapping({"a": 2, "b": 2})


def _model_pair(rng, alphabet=ALPHABET):
    a = gen.random_model(alphabet, int(rng.integers(1, 3)), rng)
    b = gen.random_model(alphabet, int(rng.integers(1, 3)), rng)
    return a, b


class TestSum:
    @settings(max_examples=20, deadline=None)
    @given(seed=st.integers(0, 100_000))
    def test_additive_on_connected_graphs(self, seed):
        rng = np.random.default_rng(seed)
        a, b = _model_pair(rng)
        g = gen.random_hypergraph(ALPHABET, int(rng.integers(1, 4)), rng, connected=True, max_ports=7)
        assert sum_applies(g)
        assert isclose(evaluate(hwm_sum(a, b), g), evaluate(a, g) + evaluate(b, g), 1e-8)

    def test_dimension_adds_up(self, rng):
        a, b = _model_pair(rng)
        assert hwm_sum(a, b).dim == a.dim + b.dim

    def test_disconnected_graph_gives_product_of_sums(self, example_graph, rng, caplog):
        alphabet = RankedAlphabet.from_mapping({"a": 3, "b": 2})
        a, b = _model_pair(rng, alphabet)
        doubled = disjoint_union(example_graph, example_graph)
        with caplog.at_level(logging.WARNING):
            assert not sum_applies(doubled)
        assert "disconnected" in caplog.text
        summed = evaluate(hwm_sum(a, b), doubled)
        assert isclose(summed, component_sum_value(a, b, doubled), 1e-8)
        assert isclose(summed, (evaluate(a, example_graph) + evaluate(b, example_graph)) ** 2, 1e-8)

    def test_sum_many(self, rng):
        models = [gen.random_model(BINARY, 1, rng) for _ in range(3)]
        g = gen.random_binary_hypergraph(BINARY, 3, rng)
        if sum_applies(g):
            assert isclose(evaluate(hwm_sum_many(models), g), sum(evaluate(m, g) for m in models), 1e-8)
        with pytest.raises(ValueError):
            hwm_sum_many([])

    def test_alphabet_mismatch(self, rng):
        a = gen.random_model(ALPHABET, 1, rng)
        b = gen.random_model(BINARY, 1, rng)
        with pytest.raises(AlphabetMismatch):
            hwm_sum(a, b)

    def test_subset_operand_gives_direct_sum(self, example_graph, rng):
        subset = create_hwm(
            SubsetAlgebra(example_graph),
            {"a": SparseTensor(3, {}), "b": SparseTensor(2, {})},
        )
        dense = create_hwm(
            IdentityAlgebra(1),
            {"a": SparseTensor.from_dense(np.ones((1, 1, 1))), "b": SparseTensor.from_dense(np.ones((1, 1)))},
        )
        out = hwm_sum(hwm_sum(subset, dense), subset)
        assert isinstance(out.algebra, DirectSumAlgebra)
        assert len(out.algebra.blocks) == 3


class TestHadamard:
    @settings(max_examples=20, deadline=None)
    @given(seed=st.integers(0, 100_000))
    def test_multiplicative(self, seed):
        rng = np.random.default_rng(seed)
        a, b = _model_pair(rng)
        g = gen.random_hypergraph(ALPHABET, int(rng.integers(1, 4)), rng, max_ports=6)
        assert isclose(evaluate(hwm_hadamard(a, b), g), evaluate(a, g) * evaluate(b, g), 1e-8)

    def test_holds_on_disconnected_graphs(self, example_graph, rng):
        alphabet = RankedAlphabet.from_mapping({"a": 3, "b": 2})
        a, b = _model_pair(rng, alphabet)
        doubled = disjoint_union(example_graph, example_graph)
        assert isclose(evaluate(hwm_hadamard(a, b), doubled), evaluate(a, doubled) * evaluate(b, doubled), 1e-8)

    def test_dimension_multiplies(self, rng):
        a, b = _model_pair(rng)
        assert hwm_hadamard(a, b).dim == a.dim * b.dim

    def test_subset_operand_rejected(self, example_graph):
        subset = create_hwm(SubsetAlgebra(example_graph), {"a": SparseTensor(3, {}), "b": SparseTensor(2, {})})
        with pytest.raises(NotDense):
            hwm_hadamard(subset, subset)


class TestNormalization:
    @settings(max_examples=20, deadline=None)
    @given(seed=st.integers(0, 100_000))
    def test_values_agree_on_binary_graphs(self, seed):
        rng = np.random.default_rng(seed)
        m = gen.random_model(BINARY, int(rng.integers(1, 4)), rng)
        g = gen.random_binary_hypergraph(BINARY, int(rng.integers(1, 5)), rng)
        assert has_binary_edges(g)
        normalized = normalize_closed_graph(m)
        assert isinstance(normalized.algebra, IdentityAlgebra)
        assert isclose(evaluate(normalized, g), evaluate(m, g), 1e-7)

    def test_indefinite_form(self):
        # M = diag(1, -1): the second row of Q is imaginary
        c = np.zeros((2, 2, 2))
        c[0, 0, 0] = 1.0
        c[1, 1, 1] = 1.0
        algebra = TableAlgebra(2, c, [1.0, -1.0])
        m = create_hwm(algebra, {"a": SparseTensor.from_dense(np.array([[1.0, 2.0], [3.0, 4.0]]))})
        g = gen.random_binary_hypergraph(RankedAlphabet.from_mapping({"a": 2}), 3, np.random.default_rng(0))
        assert isclose(evaluate(normalize_closed_graph(m), g), evaluate(m, g), 1e-9)

    def test_complex_model_rejected(self):
        m = create_hwm(IdentityAlgebra(1), {"a": SparseTensor.from_dense(np.array([[1j]]))})
        with pytest.raises(NotReal):
            normalize_closed_graph(m)

    def test_non_binary_edges_detected(self, example_graph):
        assert not has_binary_edges(example_graph)

    def test_normalized_value_on_binary_graph(self, rng):
        m = gen.random_model(BINARY, 2, rng)
        g = gen.random_binary_hypergraph(BINARY, 3, rng)
        assert isclose(normalized_value(m, g), evaluate(m, g), 1e-7)

    def test_normalized_value_rejects_other_edge_sizes(self, example_graph, rng):
        m = gen.random_model(RankedAlphabet.from_mapping({"a": 3, "b": 2}), 2, rng)
        with pytest.raises(NotClosedBinary):
            normalized_value(m, example_graph)
