"""
Tests for tiling maps, quotients and the tiling-indicator models.

Author: HWM Toolkit Team
Date: 2026
"""

import pytest

from hwm.core.exceptions import BudgetExceeded, HypergraphValidationError, InvalidMap
from hwm.models.algebra import SubsetAlgebra
from hwm.models.hypergraph import RankedAlphabet, are_isomorphic, build_hypergraph
from hwm.models.representations import parse_tree
from hwm.models.tensors import isclose
from hwm.services.encodings import encode_circular, encode_string, encode_tree
from hwm.services.engine import evaluate, evaluate_detailed
from hwm.services.tiling import (
    TilingMap,
    check_tiling_map,
    enumerate_hypergraphs,
    find_tilings,
    finite_support_hwm,
    is_tiling_free,
    quotient_hypergraph,
    scaled_tiling_hwm,
    tiling_count,
    tiling_hwm,
    tiling_sweep,
)


def three_copy_tiling():
    """Three copies of the worked example with the first hyperedge rewired into a cycle."""
    vertices, edges = [], []
    for k in range(3):
        nxt = (k + 1) % 3
        vertices += [(f"1_{k}", "a"), (f"2_{k}", "b"), (f"3_{k}", "a")]
        edges += [
            [(f"1_{k}", 1), (f"3_{nxt}", 3)],
            [(f"1_{k}", 2), (f"2_{k}", 1), (f"3_{k}", 2)],
            [(f"1_{k}", 3), (f"2_{k}", 2)],
            [(f"3_{k}", 1)],
        ]
    return build_hypergraph({"a": 3, "b": 2}, vertices, edges)


class TestFindTilings:
    def test_identity(self, example_graph):
        report = find_tilings(example_graph, example_graph)
        assert len(report.maps) == 1
        assert report.maps[0].f == {"1": "1", "2": "2", "3": "3"}
        assert set(report.fiber_sizes.values()) == {1}

    def test_circular_abab_onto_ab(self):
        report = find_tilings(encode_circular("abab"), encode_circular("ab"))
        # labels pin every vertex
        assert len(report.maps) == 1
        assert report.maps[0].f == {"1": "1", "2": "2", "3": "1", "4": "2"}
        assert report.fiber_sizes == {"1": 2, "2": 2}
        assert report.constant_fibers()

    def test_circular_aaaa_onto_aa_has_two_phases(self):
        report = find_tilings(encode_circular("aaaa"), encode_circular("aa"))
        assert len(report.maps) == 2
        assert {tuple(sorted(m.f.items())) for m in report.maps} == {
            (("1", "1"), ("2", "2"), ("3", "1"), ("4", "2")),
            (("1", "2"), ("2", "1"), ("3", "2"), ("4", "1")),
        }
        assert report.fiber_sizes == {"1": 2, "2": 2}

    def test_label_mismatch(self):
        g = build_hypergraph({"a": 1}, [("v", "a")], [[("v", 1)]])
        template = build_hypergraph({"b": 1}, [("w", "b")], [[("w", 1)]])
        assert not find_tilings(g, template).is_tiling

    def test_circular_aba_is_not_a_tiling(self):
        assert not find_tilings(encode_circular("aba"), encode_circular("ab")).is_tiling

    def test_four_vertex_template(self):
        g, template = encode_circular("aabbaabb"), encode_circular("aabb")
        report = find_tilings(g, template)
        assert len(report.maps) == 1
        assert report.fiber_sizes == {"1": 2, "2": 2, "3": 2, "4": 2}
        assert are_isomorphic(quotient_hypergraph(g, template, report.maps[0]), template)

    def test_three_copies(self, example_graph):
        report = find_tilings(three_copy_tiling(), example_graph)
        assert len(report.maps) == 1
        assert set(report.fiber_sizes.values()) == {3}

    def test_limit(self):
        report = find_tilings(encode_circular("aaaa"), encode_circular("aa"), limit=1)
        assert len(report.maps) == 1

    def test_vertex_bound(self):
        with pytest.raises(BudgetExceeded) as info:
            find_tilings(encode_circular("abab"), encode_circular("ab"), max_vertices=3)
        assert info.value.needed == 4


class TestQuotient:
    def test_circular_quotient(self):
        g, template = encode_circular("abab"), encode_circular("ab")
        for tmap in find_tilings(g, template).maps:
            assert are_isomorphic(quotient_hypergraph(g, template, tmap), template)

    def test_identity_quotient(self, example_graph):
        identity = TilingMap.from_mapping({v: v for v in example_graph.vertex_ids})
        assert are_isomorphic(quotient_hypergraph(example_graph, example_graph, identity), example_graph)

    def test_three_copy_quotient(self, example_graph):
        g = three_copy_tiling()
        tmap = find_tilings(g, example_graph).maps[0]
        q = quotient_hypergraph(g, example_graph, tmap)
        # classes carry the smallest id of their fiber
        assert set(q.vertex_ids) == {"1_0", "2_0", "3_0"}
        assert q.num_edges == example_graph.num_edges
        assert are_isomorphic(q, example_graph)

    def test_phase_shifted_quotient(self):
        g, template = encode_circular("aaaa"), encode_circular("aa")
        for tmap in find_tilings(g, template).maps:
            q = quotient_hypergraph(g, template, tmap)
            assert set(q.vertex_ids) == {"1", "2"}
            assert are_isomorphic(q, template)

    def test_invalid_map(self):
        g, template = encode_circular("abab"), encode_circular("ab")
        bad = TilingMap.from_mapping({"1": "1", "2": "2", "3": "1", "4": "1"})
        with pytest.raises(InvalidMap):
            check_tiling_map(g, template, bad)
        with pytest.raises(InvalidMap):
            quotient_hypergraph(g, template, TilingMap.from_mapping({"1": "1"}))


class TestTilingModel:
    def test_uses_subset_algebra(self, example_graph):
        m = tiling_hwm(example_graph)
        assert isinstance(m.algebra, SubsetAlgebra)
        assert evaluate_detailed(m, example_graph).engine == "support"

    def test_value_on_template(self, example_graph):
        assert isclose(evaluate(tiling_hwm(example_graph), example_graph), 1)

    def test_counts_maps(self, example_graph):
        assert isclose(tiling_count(encode_circular("abab"), encode_circular("ab")), 1)
        assert isclose(tiling_count(encode_circular("aaaa"), encode_circular("aa")), 2)
        assert isclose(tiling_count(three_copy_tiling(), example_graph), 1)

    def test_non_tiling_is_zero(self):
        assert tiling_count(encode_circular("aba"), encode_circular("ab")) == 0

    def test_edge_weight_per_edge_of_g(self):
        m = tiling_hwm(encode_circular("ab"), edge_weight=2.0)
        # one map, 4 hyperedges in G
        assert isclose(evaluate(m, encode_circular("abab")), 2.0**4)


class TestScaledAndFiniteSupport:
    def test_scaled_to_target(self, example_graph):
        m = scaled_tiling_hwm(example_graph, 5)
        assert isclose(evaluate(m, example_graph), 5, 1e-8)

    def test_scaled_unchanged_at_self_value(self, example_graph):
        m = scaled_tiling_hwm(example_graph, 1)
        assert isclose(evaluate(m, three_copy_tiling()), 1, 1e-8)

    def test_scaled_to_zero(self, example_graph):
        m = scaled_tiling_hwm(example_graph, 0)
        assert evaluate(m, example_graph) == 0

    def test_scaled_over_larger_alphabet(self):
        template = encode_circular("ab")
        m = scaled_tiling_hwm(template, 3, alphabet=RankedAlphabet.from_mapping({"c": 2}))
        assert isclose(evaluate(m, template), 3, 1e-8)

    def test_two_rooted_trees(self):
        t1, t2, t3 = (encode_tree(parse_tree(s)) for s in ("f(a,a)", "g(a)", "f(a,g(a))"))
        m = finite_support_hwm([(t1, 2), (t2, 3)])
        assert isclose(evaluate(m, t1), 2, 1e-8)
        assert isclose(evaluate(m, t2), 3, 1e-8)
        assert isclose(evaluate(m, t3), 0, 1e-8)

    def test_circular_family_is_not_tiling_free(self):
        m = finite_support_hwm([(encode_circular("ab"), 1)])
        assert isclose(evaluate(m, encode_circular("abab")), 1, 1e-8)
        assert isclose(evaluate(m, encode_circular("ababab")), 1, 1e-8)

    def test_isomorphic_templates_rejected(self):
        with pytest.raises(HypergraphValidationError):
            finite_support_hwm([(encode_circular("ab"), 1), (encode_circular("ba"), 2)])

    def test_empty_pairs(self):
        with pytest.raises(ValueError):
            finite_support_hwm([])


class TestTilingFree:
    def test_rooted_strings(self):
        assert is_tiling_free([encode_string("a"), encode_string("ab")]).free

    def test_circular_witness(self):
        result = is_tiling_free([encode_circular("ab"), encode_circular("abab")])
        assert not result.free
        i, j, tmap = result.witness
        assert (i, j) == (1, 0)
        assert set(tmap.f.values()) == {"1", "2"}

    def test_distinct_trees(self):
        trees = ["a", "f(a,a)", "g(a)", "f(g(a),a)", "g(g(a))"]
        assert is_tiling_free([encode_tree(parse_tree(t)) for t in trees]).free


class TestSweep:
    def test_enumeration_is_up_to_isomorphism(self):
        graphs = enumerate_hypergraphs(RankedAlphabet.from_mapping({"a": 1}), 2)
        # one vertex with its singleton; two vertices joined or apart
        assert len(graphs) == 3

    def test_small_sweep(self):
        report = tiling_sweep(RankedAlphabet.from_mapping({"a": 1, "b": 2}), max_vertices=3, max_template_vertices=2)
        assert report.pairs > 0
        assert report.tilings > 0
        assert report.ok, report

    def test_sweep_with_larger_templates(self):
        alphabet = RankedAlphabet.from_mapping({"a": 2})
        small = tiling_sweep(alphabet, max_vertices=4, max_template_vertices=2)
        full = tiling_sweep(alphabet, max_vertices=4, max_template_vertices=4)
        assert full.ok, full
        # every 3- and 4-vertex graph at least tiles itself
        assert full.tilings > small.tilings
        assert full.pairs > small.pairs
