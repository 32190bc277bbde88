"""
Ranked alphabets, hypergraphs with ports, validation and connectivity.

A hypergraph over a positive ranked alphabet is a nonempty set of labelled
vertices together with a partition of its ports ``(vertex, slot)``,
``1 <= slot <= arity(label)``, into hyperedges. Values are immutable; all
functions here are pure.

Author: HWM Toolkit Team
Date: 2026
"""

import logging
from collections import Counter
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, Iterable, List, Mapping, NamedTuple, Optional, Sequence, Tuple

import networkx as nx
from networkx.algorithms.isomorphism import categorical_edge_match, categorical_node_match

from hwm.core.exceptions import (
    AlphabetMismatch,
    ArityMismatch,
    DuplicatePort,
    EmptyHyperedge,
    HypergraphValidationError,
    MissingPort,
    UnknownSymbol,
)

logger = logging.getLogger(__name__)


class PortRef(NamedTuple):
    """A port ``(vertex, slot)``; slots are 1-based."""

    vertex: str
    slot: int

    def __str__(self) -> str:
        return f"{self.vertex}^({self.slot})"


@dataclass(frozen=True)
class RankedAlphabet:
    """
    Symbols with positive arities.

    Args:
        symbols: Sequence of ``(symbol, arity)`` pairs; names must be unique
    """

    symbols: Tuple[Tuple[str, int], ...]

    def __post_init__(self):
        normalized = tuple((str(s), int(a)) for s, a in self.symbols)
        object.__setattr__(self, "symbols", normalized)
        seen = set()
        for symbol, arity in normalized:
            if symbol in seen:
                raise HypergraphValidationError(f"Duplicate symbol '{symbol}' in alphabet")
            if arity < 1:
                raise ArityMismatch(f"Symbol '{symbol}' has arity {arity}; arities must be >= 1")
            seen.add(symbol)

    @classmethod
    def from_mapping(cls, arities: Mapping[str, int]) -> "RankedAlphabet":
        """Build an alphabet from a ``symbol -> arity`` mapping (sorted by symbol)."""
        return cls(tuple(sorted(arities.items())))

    @cached_property
    def arities(self) -> Dict[str, int]:
        return dict(self.symbols)

    def arity(self, symbol: str) -> int:
        try:
            return self.arities[symbol]
        except KeyError:
            raise UnknownSymbol(f"Symbol '{symbol}' is not in the alphabet") from None

    def __contains__(self, symbol: object) -> bool:
        return symbol in self.arities

    def __iter__(self):
        return iter(self.arities)

    def __len__(self) -> int:
        return len(self.symbols)

    def is_compatible_with(self, other: "RankedAlphabet") -> bool:
        """True when every shared symbol has the same arity in both alphabets."""
        return all(other.arities.get(s, a) == a for s, a in self.symbols)

    def covers(self, other: "RankedAlphabet") -> bool:
        """True when every symbol of ``other`` is here with the same arity."""
        return all(self.arities.get(s) == a for s, a in other.symbols)

    def union(self, other: "RankedAlphabet") -> "RankedAlphabet":
        if not self.is_compatible_with(other):
            raise AlphabetMismatch("Alphabets assign different arities to a shared symbol")
        merged = dict(self.arities)
        merged.update(other.arities)
        return RankedAlphabet.from_mapping(merged)


@dataclass(frozen=True)
class Hypergraph:
    """
    A labelled hypergraph ``G = (V, E, l)``.

    Vertex ids are strings. Each hyperedge is stored as a sorted tuple of
    :class:`PortRef`; the order of the hyperedge list is kept as given.
    Construction normalizes but does not validate; call
    :func:`validate_hypergraph` for the partition checks.
    """

    alphabet: RankedAlphabet
    vertices: Tuple[Tuple[str, str], ...]
    hyperedges: Tuple[Tuple[PortRef, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple((str(v), str(x)) for v, x in self.vertices))
        object.__setattr__(
            self,
            "hyperedges",
            tuple(tuple(sorted(PortRef(str(v), int(s)) for v, s in h)) for h in self.hyperedges),
        )

    @cached_property
    def labels(self) -> Dict[str, str]:
        return dict(self.vertices)

    @cached_property
    def vertex_ids(self) -> Tuple[str, ...]:
        return tuple(v for v, _ in self.vertices)

    def arity_of(self, vertex: str) -> int:
        return self.alphabet.arity(self.labels[vertex])

    @cached_property
    def ports(self) -> Tuple[PortRef, ...]:
        """All ports in vertex order, slots ascending."""
        return tuple(PortRef(v, j) for v, x in self.vertices for j in range(1, self.alphabet.arity(x) + 1))

    @cached_property
    def edge_of_port(self) -> Dict[PortRef, int]:
        return {p: k for k, h in enumerate(self.hyperedges) for p in h}

    @property
    def num_vertices(self) -> int:
        return len(self.vertices)

    @property
    def num_edges(self) -> int:
        return len(self.hyperedges)

    def used_alphabet(self) -> RankedAlphabet:
        """The sub-alphabet of labels actually used."""
        used = {x for _, x in self.vertices}
        return RankedAlphabet(tuple((s, a) for s, a in self.alphabet.symbols if s in used))


@dataclass(frozen=True)
class ComponentPartition:
    """Connected components: ``assignment`` maps vertex id to component index."""

    assignment: Mapping[str, int]
    count: int

    def members(self) -> List[List[str]]:
        groups: List[List[str]] = [[] for _ in range(self.count)]
        for vertex, index in self.assignment.items():
            groups[index].append(vertex)
        return groups


def validate_hypergraph(g: Hypergraph) -> None:
    """
    Check every hypergraph invariant, raising on the first violation.

    Args:
        g: Hypergraph to check

    Raises:
        UnknownSymbol, EmptyHyperedge, ArityMismatch, DuplicatePort,
        MissingPort or HypergraphValidationError for unknown/duplicate vertices
    """
    if not g.vertices:
        raise HypergraphValidationError("A hypergraph needs at least one vertex")

    labels: Dict[str, str] = {}
    for vertex, label in g.vertices:
        if vertex in labels:
            raise HypergraphValidationError(f"Duplicate vertex id '{vertex}'", vertex=vertex)
        if label not in g.alphabet:
            raise UnknownSymbol(f"Vertex '{vertex}' has label '{label}' outside the alphabet", vertex=vertex)
        labels[vertex] = label

    covered = set()
    for k, edge in enumerate(g.hyperedges):
        if not edge:
            raise EmptyHyperedge(f"Hyperedge #{k} is empty")
        for port in edge:
            if port.vertex not in labels:
                raise HypergraphValidationError(
                    f"Hyperedge #{k} references unknown vertex '{port.vertex}'", vertex=port.vertex, port=port
                )
            arity = g.alphabet.arity(labels[port.vertex])
            if not 1 <= port.slot <= arity:
                raise ArityMismatch(
                    f"Port {port} has slot {port.slot} but '{labels[port.vertex]}' has arity {arity}",
                    vertex=port.vertex,
                    port=port,
                )
            if port in covered:
                raise DuplicatePort(f"Port {port} appears in more than one hyperedge", vertex=port.vertex, port=port)
            covered.add(port)

    for port in g.ports:
        if port not in covered:
            raise MissingPort(f"Port {port} is covered by no hyperedge", vertex=port.vertex, port=port)


def _vertex_graph(g: Hypergraph) -> nx.Graph:
    graph = nx.Graph()
    graph.add_nodes_from(g.vertex_ids)
    for edge in g.hyperedges:
        first = edge[0].vertex
        graph.add_edges_from((first, p.vertex) for p in edge[1:])
    return graph


def connected_components(g: Hypergraph) -> ComponentPartition:
    """
    Group vertices sharing a hyperedge, transitively.

    Component indices follow the first appearance of a vertex in ``g.vertices``.

    Args:
        g: A valid hypergraph

    Returns:
        ComponentPartition: vertex-to-component assignment and count
    """
    assignment: Dict[str, int] = {}
    graph = _vertex_graph(g)
    count = 0
    for vertex in g.vertex_ids:
        if vertex in assignment:
            continue
        for member in nx.node_connected_component(graph, vertex):
            assignment[member] = count
        count += 1
    return ComponentPartition(assignment=assignment, count=count)


def is_connected(g: Hypergraph) -> bool:
    return connected_components(g).count == 1


def traversal_order(g: Hypergraph) -> List[str]:
    """Breadth-first vertex order, component by component, smallest id first."""
    graph = _vertex_graph(g)
    order: List[str] = []
    for component in sorted(nx.connected_components(graph), key=min):
        root = min(component)
        order.append(root)
        order.extend(v for _, v in nx.bfs_edges(graph, root, sort_neighbors=sorted))
    return order


def component_subgraphs(g: Hypergraph) -> List[Hypergraph]:
    """Split ``g`` into one hypergraph per connected component."""
    partition = connected_components(g)
    subgraphs = []
    for members in partition.members():
        keep = set(members)
        subgraphs.append(
            Hypergraph(
                g.alphabet,
                tuple((v, x) for v, x in g.vertices if v in keep),
                tuple(h for h in g.hyperedges if h[0].vertex in keep),
            )
        )
    return subgraphs


def disjoint_union(g1: Hypergraph, g2: Hypergraph) -> Hypergraph:
    """
    Place ``g2`` next to ``g1``, renaming colliding vertex ids of ``g2``.

    Colliding ids get a ``#k`` suffix with the smallest ``k >= 2`` that
    makes every id unique.

    Raises:
        AlphabetMismatch: when a shared symbol has different arities
    """
    alphabet = g1.alphabet.union(g2.alphabet)
    taken = set(g1.vertex_ids)
    mapping = {v: v for v in g2.vertex_ids}
    if taken & set(g2.vertex_ids):
        k = 2
        while any(f"{v}#{k}" in taken for v in g2.vertex_ids):
            k += 1
        mapping = {v: f"{v}#{k}" for v in g2.vertex_ids}
    renamed = relabel_vertices(g2, mapping)
    return Hypergraph(alphabet, g1.vertices + renamed.vertices, g1.hyperedges + renamed.hyperedges)


def relabel_vertices(g: Hypergraph, mapping: Mapping[str, str]) -> Hypergraph:
    """Rename vertex ids through ``mapping`` (ids not in it are kept)."""
    rename = lambda v: mapping.get(v, v)  # noqa: E731
    return Hypergraph(
        g.alphabet,
        tuple((rename(v), x) for v, x in g.vertices),
        tuple(tuple(PortRef(rename(p.vertex), p.slot) for p in h) for h in g.hyperedges),
    )


def permute_hyperedges(g: Hypergraph, order: Sequence[int]) -> Hypergraph:
    """Reorder the hyperedge list; ``order`` is a permutation of edge indices."""
    if sorted(order) != list(range(g.num_edges)):
        raise ValueError("order must be a permutation of the hyperedge indices")
    return Hypergraph(g.alphabet, g.vertices, tuple(g.hyperedges[k] for k in order))


def permute_vertices(g: Hypergraph, order: Sequence[int]) -> Hypergraph:
    """Reorder the vertex list; ``order`` is a permutation of vertex positions."""
    if sorted(order) != list(range(g.num_vertices)):
        raise ValueError("order must be a permutation of the vertex positions")
    return Hypergraph(g.alphabet, tuple(g.vertices[k] for k in order), g.hyperedges)


def graph_summary(g: Hypergraph) -> Dict[str, object]:
    """
    Summarize sizes and shape of a hypergraph.

    A hypergraph is a *graph* when every hyperedge has at most two ports
    and *closed* when every hyperedge has at least two.
    """
    sizes = Counter(len(h) for h in g.hyperedges)
    return {
        "vertices": g.num_vertices,
        "hyperedges": g.num_edges,
        "ports": len(g.ports),
        "edge_sizes": dict(sorted(sizes.items())),
        "components": connected_components(g).count,
        "is_graph": all(len(h) <= 2 for h in g.hyperedges),
        "is_closed": all(len(h) >= 2 for h in g.hyperedges),
        "all_binary": all(len(h) == 2 for h in g.hyperedges),
    }


# Isomorphism


def incidence_graph(g: Hypergraph) -> nx.Graph:
    """
    Bipartite vertex/hyperedge graph carrying labels and port slots.

    Vertex nodes are ``("v", id)`` labelled by symbol; hyperedge nodes are
    ``("h", k)`` labelled by size; an incidence carries the sorted slots of
    the vertex inside that hyperedge.
    """
    graph = nx.Graph()
    for vertex, label in g.vertices:
        graph.add_node(("v", vertex), kind="vertex", label=label, wl=f"v:{label}")
    for k, edge in enumerate(g.hyperedges):
        graph.add_node(("h", k), kind="edge", label=len(edge), wl=f"h:{len(edge)}")
        slots: Dict[str, List[int]] = {}
        for port in edge:
            slots.setdefault(port.vertex, []).append(port.slot)
        for vertex, vs in slots.items():
            key = tuple(sorted(vs))
            graph.add_edge(("v", vertex), ("h", k), slots=key, wl=",".join(map(str, key)))
    return graph


def canonical_hash(g: Hypergraph, iterations: int = 3) -> str:
    """Weisfeiler-Lehman hash of the incidence graph; equal for isomorphic hypergraphs."""
    return nx.weisfeiler_lehman_graph_hash(incidence_graph(g), node_attr="wl", edge_attr="wl", iterations=iterations)


def find_isomorphism(g1: Hypergraph, g2: Hypergraph) -> Optional[Dict[str, str]]:
    """
    Return a label- and port-preserving vertex bijection ``g1 -> g2``, or None.
    """
    if (
        g1.num_vertices != g2.num_vertices
        or g1.num_edges != g2.num_edges
        or Counter(x for _, x in g1.vertices) != Counter(x for _, x in g2.vertices)
    ):
        return None
    matcher = nx.algorithms.isomorphism.GraphMatcher(
        incidence_graph(g1),
        incidence_graph(g2),
        node_match=categorical_node_match(["kind", "label"], [None, None]),
        edge_match=categorical_edge_match("slots", None),
    )
    for mapping in matcher.isomorphisms_iter():
        return {a[1]: b[1] for a, b in mapping.items() if a[0] == "v"}
    return None


def are_isomorphic(g1: Hypergraph, g2: Hypergraph) -> bool:
    return find_isomorphism(g1, g2) is not None


def build_hypergraph(
    arities: Mapping[str, int],
    vertices: Iterable[Tuple[object, str]],
    hyperedges: Iterable[Iterable[Tuple[object, int]]],
    validate: bool = True,
) -> Hypergraph:
    """
    Convenience constructor from plain Python data.

    Args:
        arities: ``symbol -> arity``
        vertices: ``(id, label)`` pairs
        hyperedges: iterables of ``(id, slot)`` pairs
        validate: run :func:`validate_hypergraph` before returning
    """
    g = Hypergraph(
        RankedAlphabet.from_mapping(arities),
        tuple((str(v), x) for v, x in vertices),
        tuple(tuple(PortRef(str(v), int(s)) for v, s in h) for h in hyperedges),
    )
    if validate:
        validate_hypergraph(g)
    return g
