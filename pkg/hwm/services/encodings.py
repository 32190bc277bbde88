"""
Hypergraph encodings of strings, trees, circular strings and 3-ary words.

Every encoder returns a validated :class:`Hypergraph` whose vertex ids are
strings: word positions ``"0".."n+1"``, tree positions ``"ε"``/``"1.2"``
with the root symbol at ``"0"``.

Author: HWM Toolkit Team
Date: 2026
"""

import logging
from typing import Dict, List, Mapping, Optional, Tuple

from hwm.core.exceptions import EmptyWord, InvalidTree, OddLength
from hwm.models.hypergraph import Hypergraph, PortRef, RankedAlphabet, validate_hypergraph
from hwm.models.representations import IOTA, LAMBDA, TAU, Tree, Word, as_symbols, position_id

logger = logging.getLogger(__name__)

Edge = Tuple[Tuple[str, int], ...]


def _graph(arities: Mapping[str, int], vertices: List[Tuple[str, str]], edges: List[Edge]) -> Hypergraph:
    g = Hypergraph(
        RankedAlphabet.from_mapping(arities),
        tuple(vertices),
        tuple(tuple(PortRef(v, s) for v, s in h) for h in edges),
    )
    validate_hypergraph(g)
    return g


def _letters(symbols, arity: int) -> Dict[str, int]:
    return {s: arity for s in symbols}


def encode_string(w: Word) -> Hypergraph:
    """
    String graph ``G_w``: ``ι`` at vertex 0, letters at ``1..n``, ``τ`` at ``n+1``.

    Edges are ``{(0,1),(1,1)}`` and ``{(i,2),(i+1,1)}``; the empty word gives
    the two-vertex graph ``ι - τ``.
    """
    symbols = as_symbols(w)
    n = len(symbols)
    arities = {**_letters(symbols, 2), IOTA: 1, TAU: 1}
    vertices = [("0", IOTA)] + [(str(i), s) for i, s in enumerate(symbols, start=1)] + [(str(n + 1), TAU)]
    edges: List[Edge] = [(("0", 1), ("1", 1))]
    edges += [((str(i), 2), (str(i + 1), 1)) for i in range(1, n + 1)]
    return _graph(arities, vertices, edges)


def encode_string_bare(w: Word) -> Hypergraph:
    """
    Bare string graph ``H_w`` on vertices ``1..n`` with end singletons ``{(1,1)}`` and ``{(n,2)}``.

    Raises:
        EmptyWord: ``w`` is empty
    """
    symbols = as_symbols(w)
    n = len(symbols)
    if n == 0:
        raise EmptyWord("The bare string encoding needs a nonempty word")
    vertices = [(str(i), s) for i, s in enumerate(symbols, start=1)]
    edges: List[Edge] = [(("1", 1),)]
    edges += [((str(i), 2), (str(i + 1), 1)) for i in range(1, n)]
    edges.append(((str(n), 2),))
    return _graph(_letters(symbols, 2), vertices, edges)


def encode_tree(t: Tree, arities: Optional[Mapping[str, int]] = None) -> Hypergraph:
    """
    Tree graph ``G^t``: every symbol gains a parent-facing slot 1.

    The root symbol ``λ`` sits at vertex ``"0"``; edges are
    ``{(0,1),(ε,1)}`` and ``{(p, j+1), (p.j, 1)}`` for every child ``p.j``.

    Args:
        t: Tree
        arities: Optional ranked alphabet (number of children per symbol)

    Raises:
        InvalidTree: child counts disagree with ``arities`` or the tree uses ``λ``
    """
    tree_arities = t.arities()
    if LAMBDA in tree_arities:
        raise InvalidTree(f"'{LAMBDA}' is reserved for the root vertex")
    if arities is not None:
        for symbol, n in tree_arities.items():
            if symbol in arities and arities[symbol] != n:
                raise InvalidTree(f"'{symbol}' has arity {arities[symbol]} but {n} children")
    graph_arities = {s: n + 1 for s, n in tree_arities.items()}
    graph_arities[LAMBDA] = 1
    positions = t.positions()
    vertices = [("0", LAMBDA)] + [(position_id(p), s) for p, s in positions.items()]
    edges: List[Edge] = [(("0", 1), (position_id(()), 1))]
    for p in positions:
        if p:
            edges.append(((position_id(p[:-1]), p[-1] + 1), (position_id(p), 1)))
    return _graph(graph_arities, vertices, edges)


def encode_circular(w: Word) -> Hypergraph:
    """
    Circular string on vertices ``1..n`` with edges ``{(i,2),(i mod n + 1,1)}``.

    Raises:
        EmptyWord: ``w`` is empty
    """
    symbols = as_symbols(w)
    n = len(symbols)
    if n == 0:
        raise EmptyWord("A circular string needs at least one letter")
    vertices = [(str(i), s) for i, s in enumerate(symbols, start=1)]
    edges: List[Edge] = [((str(i), 2), (str(i % n + 1), 1)) for i in range(1, n + 1)]
    return _graph(_letters(symbols, 2), vertices, edges)


def encode_rooted_circular(w: Word) -> Hypergraph:
    """
    Rooted circular string: a binary ``λ`` vertex ``"0"`` closes the cycle.

    Edges are ``{(i,2),(i+1,1)}`` for ``0 <= i < n`` plus ``{(n,2),(0,1)}``;
    the empty word gives the ``λ`` self-loop.
    """
    symbols = as_symbols(w)
    n = len(symbols)
    arities = {**_letters(symbols, 2), LAMBDA: 2}
    vertices = [("0", LAMBDA)] + [(str(i), s) for i, s in enumerate(symbols, start=1)]
    edges: List[Edge] = [((str(i), 2), (str(i + 1), 1)) for i in range(n)]
    edges.append(((str(n), 2), ("0", 1)))
    return _graph(arities, vertices, edges)


def encode_anbn_graph(w: Word) -> Hypergraph:
    """
    3-ary representation of an even-length word ``w_1 ... w_2n``.

    Letters get a third slot pairing position ``i`` with ``n+i``; the chain
    runs ``ι -> w_1 -> ... -> w_2n -> τ``.

    Raises:
        OddLength: ``|w|`` is odd or zero
    """
    symbols = as_symbols(w)
    if not symbols or len(symbols) % 2:
        raise OddLength(f"The 3-ary encoding needs a nonempty even-length word, got length {len(symbols)}")
    n = len(symbols) // 2
    arities = {**_letters(symbols, 3), IOTA: 1, TAU: 1}
    vertices = [("0", IOTA)] + [(str(i), s) for i, s in enumerate(symbols, start=1)] + [(str(2 * n + 1), TAU)]
    edges: List[Edge] = [(("0", 1), ("1", 1))]
    edges += [((str(i), 2), (str(i + 1), 1)) for i in range(1, 2 * n + 1)]
    edges += [((str(i), 3), (str(n + i), 3)) for i in range(1, n + 1)]
    return _graph(arities, vertices, edges)


ENCODERS = {
    "string": encode_string,
    "bare": encode_string_bare,
    "circular": encode_circular,
    "rooted": encode_rooted_circular,
    "anbn": encode_anbn_graph,
}
