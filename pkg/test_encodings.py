"""
Tests for graph encodings, representation lifts and the trace lemma.

Author: HWM Toolkit Team
Date: 2026
"""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hwm.core.exceptions import DegenerateRep, EmptyWord, InvalidTree, NotReal, NotSquare, OddLength, UnknownSymbol
from hwm.models.hypergraph import graph_summary, is_connected
from hwm.models.representations import StringLinearRep, Tree, TreeLinearRep, parse_tree
from hwm.models.tensors import isclose
from hwm.services import generators as gen
from hwm.services.encodings import (
    encode_anbn_graph,
    encode_circular,
    encode_rooted_circular,
    encode_string,
    encode_string_bare,
    encode_tree,
)
from hwm.services.engine import evaluate
from hwm.services.linear_reps import (
    anbn_hwm,
    check_trace_lemma,
    circular_trace_hwm,
    lift_string_series,
    lift_string_series_iota_eq_tau,
    lift_tree_series,
    rooted_circular_hwm,
    string_series_eval,
    trace_lemma_harness,
    tree_oracle_mu,
)

TREE_ARITIES = {"f": 2, "g": 1, "a": 0, "b": 0}


def _sizes(g):
    return g.num_vertices, g.num_edges


def leaf_count_rep() -> TreeLinearRep:
    """Coordinates ``(count, one)``: leaves map to ``(1, 1)``, ``f`` adds its children's counts."""
    f = np.zeros((2, 2, 2))
    f[0, 0, 1] = 1.0
    f[0, 1, 0] = 1.0
    f[1, 1, 1] = 1.0
    return TreeLinearRep(np.array([1.0, 0.0]), {"f": f, "a": np.array([1.0, 1.0])})


class TestEncodingShapes:
    def test_string(self):
        assert _sizes(encode_string("ab")) == (4, 3)
        assert _sizes(encode_string("")) == (2, 1)

    def test_string_vertex_ids(self):
        g = encode_string("ab")
        assert dict(g.vertices) == {"0": "iota", "1": "a", "2": "b", "3": "tau"}

    def test_bare_string(self):
        assert _sizes(encode_string_bare("a")) == (1, 2)
        assert _sizes(encode_string_bare("ab")) == (2, 3)
        with pytest.raises(EmptyWord):
            encode_string_bare("")

    def test_tree(self):
        g = encode_tree(parse_tree("f(a,f(a,a))"))
        assert _sizes(g) == (6, 5)
        assert g.arity_of("ε") == 3
        assert g.arity_of("2.1") == 1
        assert is_connected(g)

    def test_tree_arity_disagreement(self):
        with pytest.raises(InvalidTree):
            encode_tree(parse_tree("f(a)"), {"f": 2})

    def test_circular(self):
        assert _sizes(encode_circular("a")) == (1, 1)
        assert graph_summary(encode_circular("abc"))["is_closed"]
        with pytest.raises(EmptyWord):
            encode_circular("")

    def test_rooted_circular(self):
        assert _sizes(encode_rooted_circular("ab")) == (3, 3)
        assert _sizes(encode_rooted_circular("")) == (1, 1)

    def test_anbn_graph(self):
        assert _sizes(encode_anbn_graph("abaa")) == (6, 7)
        assert _sizes(encode_anbn_graph("ab")) == (4, 4)
        with pytest.raises(OddLength):
            encode_anbn_graph("aba")
        with pytest.raises(OddLength):
            encode_anbn_graph("")

    def test_reserved_symbols_rejected(self):
        with pytest.raises(UnknownSymbol):
            encode_string(["a", "tau"])


class TestStringLift:
    def test_counting_rep(self, counting_rep):
        assert isclose(string_series_eval(counting_rep, "aaa"), 3)
        assert isclose(string_series_eval(counting_rep, "abab"), 2)
        assert isclose(evaluate(lift_string_series(counting_rep), encode_string("aaa")), 3)

    def test_powers(self):
        rep = StringLinearRep(np.array([1.0]), np.array([1.0]), {"a": np.array([[2.0]])})
        m = lift_string_series(rep)
        for k in range(5):
            assert isclose(evaluate(m, encode_string("a" * k)), 2**k)

    @settings(max_examples=25, deadline=None)
    @given(seed=st.integers(0, 100_000))
    def test_lift_matches_series(self, seed):
        rng = np.random.default_rng(seed)
        rep = gen.random_string_rep("ab", int(rng.integers(1, 4)), rng)
        w = gen.random_word("ab", 6, rng)
        assert isclose(evaluate(lift_string_series(rep), encode_string(w)), string_series_eval(rep, w), 1e-7)


class TestIotaEqTauLift:
    def test_identity_matrix(self):
        rep = StringLinearRep(np.ones(2), np.ones(2), {"a": np.eye(2)})
        m = lift_string_series_iota_eq_tau(rep)
        assert isclose(evaluate(m, encode_string_bare("a")), 2)

    def test_counting_rep_needs_a_basis_change(self, counting_rep):
        m = lift_string_series_iota_eq_tau(counting_rep, seed=7)
        for w in ("a", "ab", "aab", "baba"):
            assert isclose(evaluate(m, encode_string_bare(w)), string_series_eval(counting_rep, w), 1e-7), w

    def test_zero_final_vector(self):
        rep = StringLinearRep(np.ones(2), np.zeros(2), {"a": np.eye(2)})
        with pytest.raises(DegenerateRep):
            lift_string_series_iota_eq_tau(rep)

    def test_complex_rep_rejected(self):
        rep = StringLinearRep(np.ones(1), np.ones(1), {"a": np.array([[1j]])})
        with pytest.raises(NotReal):
            lift_string_series_iota_eq_tau(rep)

    @settings(max_examples=20, deadline=None)
    @given(seed=st.integers(0, 100_000))
    def test_bare_graph_value_matches_series(self, seed):
        rng = np.random.default_rng(seed)
        rep = gen.random_string_rep("ab", int(rng.integers(1, 4)), rng)
        w = gen.random_word("ab", 5, rng, min_length=1)
        m = lift_string_series_iota_eq_tau(rep, seed=seed)
        assert isclose(evaluate(m, encode_string_bare(w)), string_series_eval(rep, w), 1e-6)


class TestTreeLift:
    def test_leaf_count(self):
        rep = leaf_count_rep()
        t = parse_tree("f(a,f(a,a))")
        assert isclose(tree_oracle_mu(rep, t), 3)
        assert isclose(evaluate(lift_tree_series(rep), encode_tree(t)), 3)

    def test_single_leaf(self):
        rep = leaf_count_rep()
        assert isclose(evaluate(lift_tree_series(rep), encode_tree(Tree("a"))), 1)

    def test_children_are_ordered(self):
        f = np.zeros((2, 2, 2))
        f[0, 0, 1] = 1.0
        rep = TreeLinearRep(np.array([1.0, 0.0]), {"f": f, "a": np.array([1.0, 0.0]), "b": np.array([0.0, 1.0])})
        assert isclose(tree_oracle_mu(rep, parse_tree("f(a,b)")), 1)
        assert isclose(tree_oracle_mu(rep, parse_tree("f(b,a)")), 0)
        assert isclose(evaluate(lift_tree_series(rep), encode_tree(parse_tree("f(b,a)"))), 0)

    @settings(max_examples=20, deadline=None)
    @given(seed=st.integers(0, 100_000))
    def test_lift_matches_oracle(self, seed):
        rng = np.random.default_rng(seed)
        rep = gen.random_tree_rep(TREE_ARITIES, int(rng.integers(1, 4)), rng)
        t = gen.random_tree(TREE_ARITIES, 7, rng)
        assert isclose(evaluate(lift_tree_series(rep), encode_tree(t)), tree_oracle_mu(rep, t), 1e-7)


class TestCircular:
    def test_swap_matrix(self):
        m = circular_trace_hwm({"a": np.array([[0.0, 1.0], [1.0, 0.0]])})
        assert isclose(evaluate(m, encode_circular("aa")), 2)
        assert isclose(evaluate(m, encode_circular("aaa")), 0)

    def test_rotation_invariance(self, rng):
        matrices = gen.random_matrices("abc", 3, rng)
        m = circular_trace_hwm(matrices)
        w = "abcab"
        values = [evaluate(m, encode_circular(w[k:] + w[:k])) for k in range(len(w))]
        expected = np.trace(matrices["a"] @ matrices["b"] @ matrices["c"] @ matrices["a"] @ matrices["b"])
        for v in values:
            assert isclose(v, expected, 1e-9)

    def test_non_square_rejected(self):
        with pytest.raises(NotSquare):
            circular_trace_hwm({"a": np.ones((2, 3))})

    def test_rooted_sum_of_pairs(self, rng):
        matrices = gen.random_matrices("ab", 2, rng)
        pairs = [(rng.standard_normal(2), rng.standard_normal(2)) for _ in range(3)]
        m = rooted_circular_hwm(pairs, matrices)
        for w in ("", "a", "ab", "bba"):
            product = np.eye(2)
            for s in w:
                product = product @ matrices[s]
            expected = sum(iota @ product @ tau for iota, tau in pairs)
            assert isclose(evaluate(m, encode_rooted_circular(w)), expected, 1e-9), w


class TestAnbn:
    @pytest.mark.parametrize("w", ["ab", "aabb", "aaabbb"])
    def test_support(self, w):
        assert isclose(evaluate(anbn_hwm(), encode_anbn_graph(w)), 1)

    @pytest.mark.parametrize("w", ["ba", "abab", "aaba", "bb", "aa", "abba"])
    def test_outside_support(self, w):
        assert isclose(evaluate(anbn_hwm(), encode_anbn_graph(w)), 0)


class TestTraceLemma:
    def test_nilpotent(self):
        m = np.array([[0.0, 1.0, 2.0], [0.0, 0.0, 3.0], [0.0, 0.0, 0.0]])
        result = check_trace_lemma(m)
        assert result.premise_holds and result.conclusion_holds

    def test_premise_fails(self):
        result = check_trace_lemma(np.diag([1.0, -1.0]))
        assert not result.premise_holds
        assert result.conclusion_holds

    def test_roots_of_unity(self):
        w = np.exp(2j * np.pi / 3)
        result = check_trace_lemma(np.diag([1.0, w, w**2]))
        assert not result.premise_holds

    def test_non_square(self):
        with pytest.raises(NotSquare):
            check_trace_lemma(np.ones((2, 3)))

    def test_harness_finds_no_violations(self):
        report = trace_lemma_harness(n=300, max_dim=4, seed=3)
        assert report.trials == 300
        assert report.violations == 0
        assert report.by_kind["upper"]["premise_true"] == report.by_kind["upper"]["trials"]
