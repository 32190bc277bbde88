"""
Tilings, quotient hypergraphs and the tiling-indicator models.

``G`` is a tiling of a template ``Ĝ`` when a label-preserving vertex map
``f`` exists whose induced port map ``(v, i) -> (f(v), i)`` sends every
hyperedge of ``G`` bijectively onto a hyperedge of ``Ĝ``. The models built
here use the subset algebra over the template's ports so that their value
on ``G`` counts these maps (times a per-edge weight).

Author: HWM Toolkit Team
Date: 2026
"""

import itertools
import logging
from collections import Counter
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Mapping, Optional, Sequence, Tuple

from hwm.core.config import RunConfig, get_settings
from hwm.core.exceptions import (
    AlphabetMismatch,
    BudgetExceeded,
    HypergraphValidationError,
    InvalidMap,
    ZeroSelfValue,
)
from hwm.models.algebra import EMPTY, SubsetAlgebra, subset_basis_singletons
from hwm.models.hwm import HWM
from hwm.models.hypergraph import (
    Hypergraph,
    PortRef,
    RankedAlphabet,
    are_isomorphic,
    canonical_hash,
    find_isomorphism,
    is_connected,
    traversal_order,
    validate_hypergraph,
)
from hwm.models.tensors import SparseTensor, isclose
from hwm.services.closures import hwm_sum_many
from hwm.services.engine import eval_support_restricted

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TilingMap:
    """Vertex map ``f`` from ``G`` to the template, stored as sorted pairs."""

    pairs: Tuple[Tuple[str, str], ...]

    @classmethod
    def from_mapping(cls, f: Mapping[str, str]) -> "TilingMap":
        return cls(tuple(sorted(f.items())))

    @property
    def f(self) -> Dict[str, str]:
        return dict(self.pairs)

    def port(self, p: PortRef) -> PortRef:
        return PortRef(self.f[p.vertex], p.slot)


@dataclass(frozen=True)
class TilingReport:
    """
    Result of :func:`find_tilings`.

    Args:
        maps: Tiling maps in canonical order
        fiber_sizes: ``|f^{-1}(v̂)|`` of the first map, per template vertex
    """

    maps: Tuple[TilingMap, ...]
    fiber_sizes: Mapping[str, int] = field(default_factory=dict)

    @property
    def is_tiling(self) -> bool:
        return bool(self.maps)

    def constant_fibers(self) -> bool:
        return len(set(self.fiber_sizes.values())) <= 1


def _check_inputs(g: Hypergraph, template: Hypergraph) -> None:
    validate_hypergraph(g)
    validate_hypergraph(template)
    if not g.alphabet.is_compatible_with(template.alphabet):
        raise AlphabetMismatch("Graph and template assign different arities to a shared symbol")


def find_tilings(
    g: Hypergraph,
    template: Hypergraph,
    limit: Optional[int] = None,
    max_vertices: Optional[int] = None,
) -> TilingReport:
    """
    Enumerate every tiling map from ``g`` onto ``template`` by backtracking.

    Vertices are assigned in breadth-first order. Each assignment must keep
    the label, and every hyperedge of ``g`` must land inside one template
    hyperedge on distinct ports; a completed hyperedge must match its image
    in size.

    Args:
        g: Candidate tiling
        template: Template hypergraph ``Ĝ``
        limit: Stop after this many maps
        max_vertices: Vertex bound for ``g``; defaults to ``HWM_TILING_MAX_VERTICES``

    Raises:
        BudgetExceeded: ``g`` has more vertices than the bound
    """
    _check_inputs(g, template)
    bound = get_settings().HWM_TILING_MAX_VERTICES if max_vertices is None else max_vertices
    if g.num_vertices > bound:
        raise BudgetExceeded(
            f"Tiling search on {g.num_vertices} vertices exceeds bound {bound}", needed=g.num_vertices, budget=bound
        )
    by_label: Dict[str, List[str]] = {}
    for vt, x in template.vertices:
        by_label.setdefault(x, []).append(vt)
    for candidates in by_label.values():
        candidates.sort()
    order = traversal_order(g)
    template_edge = template.edge_of_port
    template_sizes = [len(h) for h in template.hyperedges]
    g_edge = g.edge_of_port
    g_edges = g.hyperedges
    f: Dict[str, str] = {}
    # per G-edge: image template edge and the image ports used so far
    image_edge: Dict[int, int] = {}
    image_ports: Dict[int, set] = {}
    found: List[TilingMap] = []

    undo_log: List[Tuple[int, PortRef]] = []

    def undo() -> None:
        k_, port = undo_log.pop()
        image_ports[k_].discard(port)
        if not image_ports[k_]:
            del image_ports[k_]
            del image_edge[k_]

    def assign(v: str, vt: str) -> Optional[List[int]]:
        touched: List[int] = []
        for slot in range(1, g.arity_of(v) + 1):
            k = g_edge[PortRef(v, slot)]
            target = PortRef(vt, slot)
            ht = template_edge[target]
            if (k in image_edge and image_edge[k] != ht) or target in image_ports.get(k, ()):
                for _ in touched:
                    undo()
                return None
            if k not in image_edge:
                image_edge[k] = ht
                image_ports[k] = set()
            image_ports[k].add(target)
            undo_log.append((k, target))
            touched.append(k)
        for k in set(touched):
            if len(image_ports[k]) == len(g_edges[k]) and len(g_edges[k]) != template_sizes[image_edge[k]]:
                for _ in touched:
                    undo()
                return None
        return touched

    def search(depth: int) -> bool:
        if depth == len(order):
            found.append(TilingMap.from_mapping(f))
            return limit is not None and len(found) >= limit
        v = order[depth]
        for vt in by_label.get(g.labels[v], []):
            touched = assign(v, vt)
            if touched is None:
                continue
            f[v] = vt
            stop = search(depth + 1)
            del f[v]
            for _ in touched:
                undo()
            if stop:
                return True
        return False

    search(0)
    maps = tuple(sorted(found, key=lambda t: t.pairs))
    fibers: Dict[str, int] = {}
    if maps:
        counts = Counter(maps[0].f.values())
        fibers = {vt: counts.get(vt, 0) for vt in template.vertex_ids}
    logger.debug(f"✅ Found {len(maps)} tiling map(s) onto a {template.num_vertices}-vertex template")
    return TilingReport(maps, fibers)


def check_tiling_map(g: Hypergraph, template: Hypergraph, tmap: TilingMap) -> None:
    """
    Verify the tiling conditions for an explicit map.

    Raises:
        InvalidMap: the map misses a vertex, breaks a label or a hyperedge condition
    """
    f = tmap.f
    if set(f) != set(g.vertex_ids):
        raise InvalidMap("Map domain differs from the vertex set")
    template_labels = template.labels
    for v, x in g.vertices:
        if f[v] not in template_labels or template_labels[f[v]] != x:
            raise InvalidMap(f"Vertex {v} maps to {f[v]} with a different label", vertex=v)
    template_edges = {frozenset(h) for h in template.hyperedges}
    for h in g.hyperedges:
        image = [tmap.port(p) for p in h]
        if len(set(image)) != len(image) or frozenset(image) not in template_edges:
            raise InvalidMap(f"Hyperedge {[str(p) for p in h]} is not mapped bijectively onto a template edge")


def quotient_hypergraph(g: Hypergraph, template: Hypergraph, tmap: TilingMap) -> Hypergraph:
    """
    Quotient of ``g`` by equal vertex images and equal hyperedge images.

    Each vertex class is named after the smallest ``g`` vertex id in its
    fiber; hyperedge classes are built from the ports of ``g``.

    Raises:
        InvalidMap: ``tmap`` is not a tiling map
    """
    check_tiling_map(g, template, tmap)
    f = tmap.f
    fibers: Dict[str, List[str]] = {}
    for v in g.vertex_ids:
        fibers.setdefault(f[v], []).append(v)
    representative = {vt: min(members) for vt, members in fibers.items()}
    vertices = sorted({(representative[f[v]], x) for v, x in g.vertices})
    edges = sorted(
        {tuple(sorted(PortRef(representative[f[p.vertex]], p.slot) for p in h)) for h in g.hyperedges}
    )
    q = Hypergraph(g.alphabet, tuple(vertices), tuple(edges))
    validate_hypergraph(q)
    return q


def tiling_hwm(
    template: Hypergraph, edge_weight: complex = 1.0, alphabet: Optional[RankedAlphabet] = None
) -> HWM:
    """
    Subset-algebra model whose value on ``G`` is ``#tilings · w^{|E(G)|}``.

    ``T^x = Σ_{v̂ : l(v̂) = x} e_{(v̂,1)} ⊗ ... ⊗ e_{(v̂,♯x)}`` and symbols
    absent from the template get ``e_∅ ⊗ ... ⊗ e_∅``.

    Args:
        template: Template ``Ĝ``
        edge_weight: ``α(e_S)`` for ``S`` a template hyperedge
        alphabet: Optional larger alphabet to cover
    """
    validate_hypergraph(template)
    alphabet = template.alphabet if alphabet is None else template.alphabet.union(alphabet)
    tensors: Dict[str, SparseTensor] = {}
    for symbol, arity in alphabet.symbols:
        entries = {
            tuple(subset_basis_singletons(template, vt)): 1.0 for vt, x in template.vertices if x == symbol
        }
        tensors[symbol] = SparseTensor(arity, entries or {(EMPTY,) * arity: 1.0})
    return HWM(alphabet, SubsetAlgebra(template, edge_weight), tensors)


def tiling_count(g: Hypergraph, template: Hypergraph, config: Optional[RunConfig] = None) -> complex:
    """Value of the unit-weight tiling model on ``g``."""
    alphabet = g.alphabet.union(template.alphabet)
    return eval_support_restricted(tiling_hwm(template, alphabet=alphabet), g, config).value


def scaled_tiling_hwm(
    template: Hypergraph,
    target: complex,
    alphabet: Optional[RankedAlphabet] = None,
    config: Optional[RunConfig] = None,
) -> HWM:
    """
    Tiling model rescaled so its value on the template is ``target``.

    With ``z`` the unit-weight self value, the edge weight becomes the
    principal root ``(target / z)^{1/|Ê|}``.

    Raises:
        ZeroSelfValue: the template evaluates to zero on itself
    """
    base = tiling_hwm(template, alphabet=alphabet)
    z = eval_support_restricted(base, template, config).value
    if z == 0:
        raise ZeroSelfValue("Template has no tiling map onto itself")
    if template.num_edges == 0:
        raise ZeroSelfValue("Template has no hyperedge to carry the rescaling weight")
    weight = complex(target / z) ** (1.0 / template.num_edges)
    return tiling_hwm(template, weight, alphabet=alphabet)


def finite_support_hwm(
    pairs: Sequence[Tuple[Hypergraph, complex]], config: Optional[RunConfig] = None
) -> HWM:
    """
    Sum of scaled tiling models: value ``y_k`` on ``Ĝ_k``.

    Zero elsewhere on connected members of a tiling-free family containing
    every ``Ĝ_k``.

    Raises:
        HypergraphValidationError: two templates are isomorphic
    """
    if not pairs:
        raise ValueError("At least one (template, value) pair is required")
    templates = [t for t, _ in pairs]
    for (i, a), (j, b) in itertools.combinations(enumerate(templates), 2):
        if are_isomorphic(a, b):
            raise HypergraphValidationError(f"Templates {i} and {j} are isomorphic")
    alphabet = templates[0].alphabet
    for t in templates[1:]:
        alphabet = alphabet.union(t.alphabet)
    models = [scaled_tiling_hwm(t, y, alphabet=alphabet, config=config) for t, y in pairs]
    out = hwm_sum_many(models)
    logger.info(f"✅ Finite-support model over {len(pairs)} template(s)")
    return out


@dataclass(frozen=True)
class TilingFreeResult:
    free: bool
    witness: Optional[Tuple[int, int, TilingMap]] = None


def is_tiling_free(family: Sequence[Hypergraph], max_vertices: Optional[int] = None) -> TilingFreeResult:
    """
    True when no member is a non-trivial tiling of another.

    Non-trivial means strictly more vertices than the tiled member. The
    witness is ``(i, j, map)`` with ``family[i]`` tiling ``family[j]``.
    """
    for i, g in enumerate(family):
        for j, template in enumerate(family):
            if i == j or g.num_vertices <= template.num_vertices:
                continue
            if not g.alphabet.is_compatible_with(template.alphabet):
                continue
            report = find_tilings(g, template, limit=1, max_vertices=max_vertices)
            if report.maps:
                return TilingFreeResult(False, (i, j, report.maps[0]))
    return TilingFreeResult(True)


# Exhaustive sweeps


def _set_partitions(items: List) -> Iterator[List[List]]:
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for partition in _set_partitions(rest):
        yield [[first]] + partition
        for k in range(len(partition)):
            yield partition[:k] + [[first] + partition[k]] + partition[k + 1 :]


def enumerate_hypergraphs(alphabet: RankedAlphabet, max_vertices: int) -> List[Hypergraph]:
    """
    All valid hypergraphs over ``alphabet`` with ``1..max_vertices`` vertices, one per isomorphism class.

    Deduplication buckets graphs by Weisfeiler-Lehman hash and confirms with
    an exact isomorphism test inside each bucket.
    """
    buckets: Dict[str, List[Hypergraph]] = {}
    out: List[Hypergraph] = []
    symbols = [s for s, _ in alphabet.symbols]
    for n in range(1, max_vertices + 1):
        for labels in itertools.combinations_with_replacement(symbols, n):
            vertices = tuple((str(k), x) for k, x in enumerate(labels, start=1))
            ports = [PortRef(v, j) for v, x in vertices for j in range(1, alphabet.arity(x) + 1)]
            for partition in _set_partitions(ports):
                g = Hypergraph(alphabet, vertices, tuple(tuple(block) for block in partition))
                key = canonical_hash(g)
                bucket = buckets.setdefault(key, [])
                if any(find_isomorphism(g, other) is not None for other in bucket):
                    continue
                bucket.append(g)
                out.append(g)
    logger.info(f"✅ Enumerated {len(out)} hypergraphs up to {max_vertices} vertices")
    return out


@dataclass
class TilingSweepReport:
    pairs: int = 0
    tilings: int = 0
    theorem_mismatches: List[Tuple[int, int]] = field(default_factory=list)
    count_mismatches: List[Tuple[int, int]] = field(default_factory=list)
    fiber_violations: List[Tuple[int, int]] = field(default_factory=list)
    quotient_violations: List[Tuple[int, int]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not (self.theorem_mismatches or self.count_mismatches or self.fiber_violations or self.quotient_violations)


def tiling_sweep(
    alphabet: RankedAlphabet,
    max_vertices: Optional[int] = None,
    max_template_vertices: Optional[int] = None,
    config: Optional[RunConfig] = None,
) -> TilingSweepReport:
    """
    Compare the tiling model against the backtracking oracle on every small pair.

    For every graph ``G`` and template ``Ĝ`` in the enumeration: the model
    is nonzero exactly when tilings exist, equals their count, fibers are
    constant for connected ``Ĝ`` and each quotient is isomorphic to ``Ĝ``.
    """
    settings = get_settings()
    max_vertices = settings.HWM_TILING_SWEEP_MAX_VERTICES if max_vertices is None else max_vertices
    max_template_vertices = (
        settings.HWM_TILING_SWEEP_MAX_TEMPLATE_VERTICES if max_template_vertices is None else max_template_vertices
    )
    graphs = enumerate_hypergraphs(alphabet, max_vertices)
    templates = [t for t in graphs if t.num_vertices <= max_template_vertices]
    report = TilingSweepReport()
    for j, template in enumerate(templates):
        model = tiling_hwm(template, alphabet=alphabet)
        connected = is_connected(template)
        for i, g in enumerate(graphs):
            report.pairs += 1
            oracle = find_tilings(g, template)
            value = eval_support_restricted(model, g, config).value
            if (abs(value) > 0.5) != oracle.is_tiling:
                report.theorem_mismatches.append((i, j))
            if not isclose(value, len(oracle.maps)):
                report.count_mismatches.append((i, j))
            if oracle.is_tiling:
                report.tilings += 1
                if connected and not oracle.constant_fibers():
                    report.fiber_violations.append((i, j))
                if connected and not all(
                    are_isomorphic(quotient_hypergraph(g, template, t), template) for t in oracle.maps
                ):
                    report.quotient_violations.append((i, j))
    if not report.ok:
        logger.warning(f"⚠️ Tiling sweep found disagreements: {report}")
    return report
