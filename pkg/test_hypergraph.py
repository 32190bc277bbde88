"""
Tests for ranked alphabets, hypergraph validation, components and isomorphism.

Author: HWM Toolkit Team
Date: 2026
"""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hwm.core.exceptions import (
    AlphabetMismatch,
    ArityMismatch,
    DuplicatePort,
    EmptyHyperedge,
    HypergraphValidationError,
    MissingPort,
    UnknownSymbol,
)
from hwm.models.hypergraph import (
    RankedAlphabet,
    are_isomorphic,
    build_hypergraph,
    canonical_hash,
    connected_components,
    disjoint_union,
    graph_summary,
    is_connected,
    permute_hyperedges,
    relabel_vertices,
    traversal_order,
    validate_hypergraph,
)
from hwm.services.encodings import encode_string_bare
from hwm.services.generators import random_hypergraph


class TestRankedAlphabet:
    def test_rejects_non_positive_arity(self):
        with pytest.raises(HypergraphValidationError):
            RankedAlphabet.from_mapping({"a": 0})

    def test_union_and_compatibility(self):
        a = RankedAlphabet.from_mapping({"a": 1, "b": 2})
        b = RankedAlphabet.from_mapping({"b": 2, "c": 3})
        assert a.union(b).arities == {"a": 1, "b": 2, "c": 3}
        with pytest.raises(AlphabetMismatch):
            a.union(RankedAlphabet.from_mapping({"b": 3}))

    def test_covers(self):
        big = RankedAlphabet.from_mapping({"a": 1, "b": 2})
        assert big.covers(RankedAlphabet.from_mapping({"a": 1}))
        assert not big.covers(RankedAlphabet.from_mapping({"a": 2}))


class TestValidation:
    def test_worked_example_is_valid(self, example_graph):
        validate_hypergraph(example_graph)
        assert example_graph.num_vertices == 3
        assert example_graph.num_edges == 4

    def test_singleton_partition_is_valid(self):
        build_hypergraph({"a": 3}, [("v", "a")], [[("v", 1)], [("v", 2)], [("v", 3)]])

    def test_missing_port(self):
        with pytest.raises(MissingPort) as info:
            build_hypergraph({"a": 3}, [("v", "a")], [[("v", 1)], [("v", 2)]])
        assert info.value.port == ("v", 3)

    def test_duplicate_port(self):
        with pytest.raises(DuplicatePort):
            build_hypergraph({"a": 2}, [("v", "a")], [[("v", 1), ("v", 2)], [("v", 2)]])

    def test_unknown_symbol(self):
        with pytest.raises(UnknownSymbol):
            build_hypergraph({"a": 1}, [("v", "z")], [[("v", 1)]])

    def test_empty_hyperedge(self):
        with pytest.raises(EmptyHyperedge):
            build_hypergraph({"a": 1}, [("v", "a")], [[("v", 1)], []])

    def test_slot_out_of_range(self):
        with pytest.raises(ArityMismatch):
            build_hypergraph({"a": 1}, [("v", "a")], [[("v", 1), ("v", 2)]])

    def test_partition_property(self, rng):
        alphabet = RankedAlphabet.from_mapping({"a": 1, "b": 2, "c": 3})
        for _ in range(20):
            g = random_hypergraph(alphabet, int(rng.integers(1, 6)), rng)
            assert sum(len(h) for h in g.hyperedges) == sum(g.arity_of(v) for v in g.vertex_ids)


class TestComponents:
    def test_worked_example_connected(self, example_graph):
        assert connected_components(example_graph).count == 1
        assert is_connected(example_graph)

    def test_disjoint_union_adds_components(self, example_graph):
        doubled = disjoint_union(example_graph, example_graph)
        assert doubled.num_vertices == 6
        assert doubled.num_edges == 8
        assert connected_components(doubled).count == 2
        validate_hypergraph(doubled)

    def test_single_vertex(self):
        g = build_hypergraph({"a": 1}, [("v", "a")], [[("v", 1)]])
        assert connected_components(g).count == 1

    def test_union_alphabet_mismatch(self, example_graph):
        other = build_hypergraph({"a": 1}, [("v", "a")], [[("v", 1)]])
        with pytest.raises(AlphabetMismatch):
            disjoint_union(example_graph, other)

    @settings(max_examples=30, deadline=None)
    @given(seed=st.integers(0, 10_000))
    def test_invariant_under_relabelling(self, seed):
        rng = np.random.default_rng(seed)
        alphabet = RankedAlphabet.from_mapping({"a": 1, "b": 2})
        g = random_hypergraph(alphabet, int(rng.integers(1, 6)), rng)
        ids = list(g.vertex_ids)
        shuffled = [ids[k] for k in rng.permutation(len(ids))]
        renamed = relabel_vertices(g, {v: f"x{w}" for v, w in zip(ids, shuffled)})
        reordered = permute_hyperedges(renamed, list(rng.permutation(g.num_edges)))
        assert connected_components(reordered).count == connected_components(g).count

    def test_traversal_order_covers_every_vertex(self, example_graph):
        doubled = disjoint_union(example_graph, example_graph)
        order = traversal_order(doubled)
        assert sorted(order) == sorted(doubled.vertex_ids)
        assert order[0] == min(doubled.vertex_ids)


class TestSummaryAndIsomorphism:
    def test_summary(self, example_graph):
        summary = graph_summary(example_graph)
        assert summary["ports"] == 8
        assert summary["edge_sizes"] == {1: 1, 2: 2, 3: 1}
        assert not summary["is_graph"]
        assert not summary["is_closed"]

    def test_relabelled_graph_is_isomorphic(self, example_graph):
        renamed = relabel_vertices(example_graph, {"1": "x", "2": "y", "3": "z"})
        assert are_isomorphic(example_graph, renamed)
        assert canonical_hash(example_graph) == canonical_hash(renamed)

    def test_mirror_sensitivity(self):
        assert not are_isomorphic(encode_string_bare("ab"), encode_string_bare("ba"))
        assert are_isomorphic(encode_string_bare("abba"), encode_string_bare("abba"))
