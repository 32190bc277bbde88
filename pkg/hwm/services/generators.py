"""
Seeded random instances: hypergraphs, models, representations and trees.

Used by the test suite, ``hwm selftest`` and ``hwm bench``. Every function
takes an explicit ``numpy.random.Generator`` so runs are reproducible from
one seed.

Author: HWM Toolkit Team
Date: 2026
"""

import logging
from typing import Dict, List, Mapping, Optional, Sequence

import numpy as np
from scipy.stats import ortho_group

from hwm.models.algebra import DiagScaledAlgebra, IdentityAlgebra, ProductAlgebra, TableAlgebra
from hwm.models.hwm import HWM
from hwm.models.hypergraph import (
    Hypergraph,
    PortRef,
    RankedAlphabet,
    connected_components,
    validate_hypergraph,
)
from hwm.models.representations import StringLinearRep, Tree, TreeLinearRep
from hwm.models.tensors import SparseTensor

logger = logging.getLogger(__name__)

ALGEBRA_KINDS = ("identity", "diag_scaled", "table")


def _orthogonal(d: int, rng: np.random.Generator) -> np.ndarray:
    return ortho_group.rvs(d, random_state=rng) if d > 1 else np.eye(1)


def random_table_algebra(d: int, rng: np.random.Generator) -> TableAlgebra:
    """
    Symmetric associative algebra from a diagonal one by an orthogonal change of basis.

    With ``e_i ⊙ e_i = w_i e_i`` and new basis ``f_a = Σ_i Q[i, a] e_i``:
    ``c[a, b, c] = Σ_i Q[i, a] Q[i, b] Q[i, c] w_i``.
    """
    q = _orthogonal(d, rng)
    w = rng.uniform(0.5, 1.5, size=d)
    c = np.einsum("ia,ib,ic,i->abc", q, q, q, w)
    c = (c + c.transpose(1, 0, 2)) / 2
    alpha = q.T @ rng.uniform(0.5, 1.5, size=d)
    return TableAlgebra(d, c, alpha)


def random_algebra(d: int, rng: np.random.Generator, kind: Optional[str] = None) -> ProductAlgebra:
    kind = kind or ALGEBRA_KINDS[int(rng.integers(len(ALGEBRA_KINDS)))]
    if kind == "identity":
        return IdentityAlgebra(d)
    if kind == "diag_scaled":
        return DiagScaledAlgebra(d, rng.uniform(0.5, 1.5, size=d), rng.uniform(0.5, 1.5, size=d))
    if kind == "table":
        return random_table_algebra(d, rng)
    raise ValueError(f"Unknown algebra kind '{kind}'")


def random_tensor(order: int, d: int, rng: np.random.Generator, complex_entries: bool = False) -> SparseTensor:
    shape = (d,) * order
    array = rng.standard_normal(shape)
    if complex_entries:
        array = array + 1j * rng.standard_normal(shape)
    return SparseTensor.from_dense(array)


def random_model(
    alphabet: RankedAlphabet,
    d: int,
    rng: np.random.Generator,
    kind: Optional[str] = None,
    complex_entries: bool = False,
) -> HWM:
    """Dense model with standard normal tensors over ``alphabet``."""
    algebra = random_algebra(d, rng, kind)
    tensors = {x: random_tensor(arity, d, rng, complex_entries) for x, arity in alphabet.symbols}
    return HWM(alphabet, algebra, tensors)


def _connect(edges: List[List[PortRef]], vertices: Sequence[str], alphabet, labels) -> List[List[PortRef]]:
    """Merge one hyperedge per extra component into the first component's hyperedge."""
    while True:
        g = Hypergraph(alphabet, tuple((v, labels[v]) for v in vertices), tuple(tuple(h) for h in edges))
        partition = connected_components(g)
        if partition.count == 1:
            return edges
        first = next(k for k, h in enumerate(edges) if partition.assignment[h[0].vertex] == 0)
        other = next(k for k, h in enumerate(edges) if partition.assignment[h[0].vertex] != 0)
        edges[first] = edges[first] + edges[other]
        del edges[other]


def random_hypergraph(
    alphabet: RankedAlphabet,
    num_vertices: int,
    rng: np.random.Generator,
    max_edge_size: int = 3,
    connected: bool = False,
    max_ports: Optional[int] = None,
) -> Hypergraph:
    """
    Random valid hypergraph: labels drawn uniformly, ports shuffled and cut into hyperedges.

    Args:
        alphabet: Positive ranked alphabet
        num_vertices: Number of vertices
        max_edge_size: Largest hyperedge before connecting components
        connected: Merge hyperedges across components until connected
        max_ports: Redraw labels (up to 100 times) until the port count fits
    """
    symbols = [x for x, _ in alphabet.symbols]
    for _ in range(100):
        labels = {str(k): symbols[int(rng.integers(len(symbols)))] for k in range(1, num_vertices + 1)}
        ports = [PortRef(v, j) for v, x in labels.items() for j in range(1, alphabet.arity(x) + 1)]
        if max_ports is None or len(ports) <= max_ports:
            break
    order = rng.permutation(len(ports))
    edges: List[List[PortRef]] = []
    k = 0
    while k < len(ports):
        size = int(rng.integers(1, max_edge_size + 1))
        edges.append([ports[i] for i in order[k : k + size]])
        k += size
    vertices = list(labels)
    if connected and edges:
        edges = _connect(edges, vertices, alphabet, labels)
    g = Hypergraph(alphabet, tuple((v, labels[v]) for v in vertices), tuple(tuple(h) for h in edges))
    validate_hypergraph(g)
    return g


def random_binary_hypergraph(alphabet: RankedAlphabet, num_vertices: int, rng: np.random.Generator) -> Hypergraph:
    """
    Random hypergraph whose hyperedges all have two ports.

    Labels are redrawn until the total port count is even.

    Raises:
        ValueError: no even port count was drawn
    """
    symbols = [x for x, _ in alphabet.symbols]
    for _ in range(100):
        labels = {str(k): symbols[int(rng.integers(len(symbols)))] for k in range(1, num_vertices + 1)}
        ports = [PortRef(v, j) for v, x in labels.items() for j in range(1, alphabet.arity(x) + 1)]
        if len(ports) % 2 == 0:
            break
    else:
        raise ValueError("Could not draw an even number of ports")
    order = rng.permutation(len(ports))
    edges = [(ports[order[i]], ports[order[i + 1]]) for i in range(0, len(ports), 2)]
    g = Hypergraph(alphabet, tuple(labels.items()), tuple(edges))
    validate_hypergraph(g)
    return g


def random_string_rep(
    symbols: Sequence[str], d: int, rng: np.random.Generator, scale: Optional[float] = None
) -> StringLinearRep:
    """Real representation with matrices scaled by ``1/sqrt(d)`` so long words stay bounded."""
    scale = 1.0 / np.sqrt(d) if scale is None else scale
    return StringLinearRep(
        rng.standard_normal(d),
        rng.standard_normal(d),
        {s: scale * rng.standard_normal((d, d)) for s in symbols},
    )


def random_tree_rep(arities: Mapping[str, int], d: int, rng: np.random.Generator) -> TreeLinearRep:
    """Real tree representation; ``mu[f]`` has shape ``(d,) * (arity + 1)``."""
    scale = 1.0 / np.sqrt(d)
    mu = {f: scale * rng.standard_normal((d,) * (p + 1)) for f, p in arities.items()}
    return TreeLinearRep(rng.standard_normal(d), mu)


def random_tree(arities: Mapping[str, int], max_nodes: int, rng: np.random.Generator) -> Tree:
    """
    Random tree with at most ``max_nodes`` nodes.

    Internal symbols are chosen while the node budget allows their children;
    otherwise a leaf symbol is used.

    Raises:
        ValueError: the alphabet has no leaf symbol
    """
    leaves = sorted(f for f, p in arities.items() if p == 0)
    if not leaves:
        raise ValueError("A tree alphabet needs at least one leaf symbol")
    internal = sorted(f for f, p in arities.items() if p > 0)
    budget = [max_nodes - 1]

    def grow() -> Tree:
        options = [f for f in internal if arities[f] <= budget[0]]
        if options and rng.random() < 0.6:
            f = options[int(rng.integers(len(options)))]
            budget[0] -= arities[f]
            return Tree(f, tuple(grow() for _ in range(arities[f])))
        return Tree(leaves[int(rng.integers(len(leaves)))])

    return grow()


def random_word(symbols: Sequence[str], max_length: int, rng: np.random.Generator, min_length: int = 0) -> List[str]:
    n = int(rng.integers(min_length, max_length + 1))
    return [symbols[int(rng.integers(len(symbols)))] for _ in range(n)]


def random_matrices(symbols: Sequence[str], d: int, rng: np.random.Generator) -> Dict[str, np.ndarray]:
    return {s: rng.standard_normal((d, d)) / np.sqrt(d) for s in symbols}
