#!/usr/bin/env python3
"""
Demo script for the HWM toolkit.

Walks through the worked example, the string and tree lifts, the circular
trace model, the a^n b^n model, a crossword and the tiling models.

Author: HWM Toolkit Team
Date: 2026
"""

import os
import sys

import numpy as np

# Add the project root to the Python path
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from hwm.core.config import settings  # noqa: E402
from hwm.models.algebra import IdentityAlgebra  # noqa: E402
from hwm.models.hwm import create_hwm  # noqa: E402
from hwm.models.hypergraph import build_hypergraph, graph_summary  # noqa: E402
from hwm.models.representations import StringLinearRep, TreeLinearRep, parse_tree  # noqa: E402
from hwm.models.tensors import SparseTensor  # noqa: E402
from hwm.services.crosswords import Crossword, crossword_row_col_hwm, encode_crossword  # noqa: E402
from hwm.services.encodings import (  # noqa: E402
    encode_anbn_graph,
    encode_circular,
    encode_string,
    encode_string_bare,
    encode_tree,
)
from hwm.services.engine import evaluate_detailed  # noqa: E402
from hwm.services.linear_reps import (  # noqa: E402
    anbn_hwm,
    circular_trace_hwm,
    lift_string_series,
    lift_string_series_iota_eq_tau,
    lift_tree_series,
)
from hwm.services.tiling import find_tilings, finite_support_hwm, tiling_count  # noqa: E402


def _show(label: str, m, g) -> None:
    result = evaluate_detailed(m, g)
    print(f"   {label:<28} = {result.value.real:10.4f}   ({result.engine})")


def demo_worked_example():
    """Evaluate the three-vertex example with the identity product."""
    print("📐 DEMO: Worked Example")
    print("=" * 50)

    g = build_hypergraph(
        {"a": 3, "b": 2},
        [("1", "a"), ("2", "b"), ("3", "a")],
        [[("1", 1), ("3", 3)], [("1", 2), ("2", 1), ("3", 2)], [("1", 3), ("2", 2)], [("3", 1)]],
    )
    summary = graph_summary(g)
    print(f"   Vertices: {summary['vertices']}  Hyperedges: {summary['hyperedges']}  Ports: {summary['ports']}")

    rng = np.random.default_rng(settings.HWM_SEED)
    ta, tb = rng.standard_normal((2, 2, 2)), rng.standard_normal((2, 2))
    m = create_hwm(IdentityAlgebra(2), {"a": SparseTensor.from_dense(ta), "b": SparseTensor.from_dense(tb)})
    _show("r(G)", m, g)
    print(f"   {'einsum check':<28} = {np.einsum('abc,bc,fba->', ta, tb, ta):10.4f}")


def demo_lifts():
    """Strings, bare strings and trees."""
    print("\n🧵 DEMO: Classical Series as Models")
    print("=" * 50)

    counting = StringLinearRep(
        np.array([1.0, 0.0]),
        np.array([0.0, 1.0]),
        {"a": np.array([[1.0, 1.0], [0.0, 1.0]]), "b": np.eye(2)},
    )
    lifted = lift_string_series(counting)
    bare = lift_string_series_iota_eq_tau(counting, seed=settings.HWM_SEED)
    for w in ("aab", "abab"):
        _show(f"|{w}|_a on G_w", lifted, encode_string(w))
        _show(f"|{w}|_a on bare H_w", bare, encode_string_bare(w))

    f = np.zeros((2, 2, 2))
    f[0, 0, 1] = f[0, 1, 0] = f[1, 1, 1] = 1.0
    leaves = TreeLinearRep(np.array([1.0, 0.0]), {"f": f, "a": np.array([1.0, 1.0])})
    t = parse_tree("f(a,f(a,a))")
    _show(f"leaves of {t}", lift_tree_series(leaves), encode_tree(t))


def demo_circular_and_anbn():
    """Trace model on circular strings and the a^n b^n model."""
    print("\n🔁 DEMO: Circular Strings and a^n b^n")
    print("=" * 50)

    swap = circular_trace_hwm({"a": np.array([[0.0, 1.0], [1.0, 0.0]])})
    for w in ("aa", "aaa", "aaaa"):
        _show(f"Tr(swap^{len(w)})", swap, encode_circular(w))

    anbn = anbn_hwm()
    for w in ("ab", "aabb", "abab", "abba"):
        _show(f"a^n b^n indicator on {w}", anbn, encode_anbn_graph(w))


def demo_crossword():
    """Row/column product of two string series."""
    print("\n🔠 DEMO: Crosswords")
    print("=" * 50)

    counting = StringLinearRep(
        np.array([1.0, 0.0]), np.array([0.0, 1.0]), {"a": np.array([[1.0, 1.0], [0.0, 1.0]]), "b": np.eye(2)}
    )
    powers = StringLinearRep(np.ones(1), np.ones(1), {"a": np.array([[2.0]]), "b": np.array([[1.0]])})
    m = crossword_row_col_hwm(counting, powers, seed=settings.HWM_SEED)
    w = Crossword.from_text("ab\naa")
    print("   ab\n   aa")
    _show("rows x columns", m, encode_crossword(w))


def demo_tiling():
    """Tiling maps and a finite-support model."""
    print("\n🧩 DEMO: Tilings")
    print("=" * 50)

    g, template = encode_circular("aaaa"), encode_circular("aa")
    report = find_tilings(g, template)
    print(f"   circular aaaa onto aa: {len(report.maps)} maps, fibers {report.fiber_sizes}")
    print(f"   tiling model value: {tiling_count(g, template).real:.1f}")

    t1, t2 = encode_tree(parse_tree("f(a,a)")), encode_tree(parse_tree("g(a)"))
    m = finite_support_hwm([(t1, 2), (t2, 3)])
    _show("finite support on f(a,a)", m, t1)
    _show("finite support on g(a)", m, t2)
    _show("finite support on f(a,g(a))", m, encode_tree(parse_tree("f(a,g(a))")))


def main():
    """Run the complete demo."""
    print("🔬 HWM TOOLKIT - SYSTEM DEMO")
    print("=" * 60)
    print(f"Seed: {settings.HWM_SEED}   Engine: {settings.HWM_ENGINE}")
    print("=" * 60)

    try:
        demo_worked_example()
        demo_lifts()
        demo_circular_and_anbn()
        demo_crossword()
        demo_tiling()

        print("\n" + "=" * 60)
        print("🎉 DEMO COMPLETE!")
        print("💡 Next: python -m hwm selftest --quick")

    except Exception as e:
        print(f"\n❌ Demo failed: {e}")


if __name__ == "__main__":
    main()
