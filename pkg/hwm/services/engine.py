"""
Evaluation engines for hypergraph weighted models.

Four engines compute ``r_M(G) = Σ_γ T_γ Π_h α(⊙_{p∈h} e_{γ(p)})``:

* ``naive``: literal enumeration of every port assignment (reference oracle),
* ``support``: one stored tensor entry per vertex, pruned edge by edge,
* ``factored``: vertex and hyperedge factors contracted pairwise,
* ``gamma_id``: one shared index per hyperedge (Identity algebra, ``α ≡ 1``).

The enumeration engines can split their loop across worker processes; the
partial sums are reduced in partition order so results only depend on the
worker count.

Author: HWM Toolkit Team
Date: 2026
"""

import itertools
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from hwm.core.config import RunConfig, get_run_config
from hwm.core.exceptions import BasisMismatch, BudgetExceeded, WrongAlgebra
from hwm.models.algebra import edge_form, edge_weight_array
from hwm.models.hwm import HWM, check_graph_alphabet
from hwm.models.hypergraph import Hypergraph, PortRef, component_subgraphs, traversal_order, validate_hypergraph
from hwm.models.tensors import Index, index_sort_key
from hwm.services.contraction import ContractionStats, Factor, contract_network

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class EvaluationResult:
    """
    Value of a model on a hypergraph plus bookkeeping.

    Args:
        value: ``r_M(G)``
        engine: Engine that produced the value
        terms: Enumerated assignments (naive/support) or contraction steps
    """

    value: complex
    engine: str
    terms: int


def _config(config: Optional[RunConfig]) -> RunConfig:
    return config if config is not None else get_run_config()


def _prepare(m: HWM, g: Hypergraph) -> None:
    validate_hypergraph(g)
    check_graph_alphabet(m, g)


def _require_dense(m: HWM, engine: str) -> None:
    if not m.is_dense:
        raise BasisMismatch(f"The {engine} engine needs a dense algebra, got {m.algebra.kind}")


def _partition(n: int, parts: int) -> List[Tuple[int, int]]:
    """Split ``range(n)`` into ``parts`` contiguous blocks (empty blocks dropped)."""
    bounds = np.linspace(0, n, min(parts, n) + 1).astype(int) if n else [0, 0]
    return [(int(a), int(b)) for a, b in zip(bounds[:-1], bounds[1:]) if b > a]


def _reduce(partials: Sequence[Tuple[complex, int]]) -> Tuple[complex, int]:
    value, terms = 0j, 0
    for v, t in partials:
        value += v
        terms += t
    return value, terms


# Naive enumeration


def _naive_chunk(m: HWM, g: Hypergraph, first_range: Tuple[int, int]) -> Tuple[complex, int]:
    d = m.dim
    ports = g.ports
    port_pos = {p: k for k, p in enumerate(ports)}
    vertex_slots = [
        (m.dense_tensors[label], [port_pos[PortRef(v, j)] for j in range(1, g.alphabet.arity(label) + 1)])
        for v, label in g.vertices
    ]
    edge_slots = [[port_pos[p] for p in h] for h in g.hyperedges]
    cache: Dict[Tuple[int, ...], complex] = {}
    total, terms = 0j, 0
    for first in range(*first_range):
        for tail in itertools.product(range(d), repeat=len(ports) - 1):
            assignment = (first,) + tail
            terms += 1
            value = 1 + 0j
            for array, slots in vertex_slots:
                value *= array[tuple(assignment[s] for s in slots)]
                if value == 0:
                    break
            if value == 0:
                continue
            for slots in edge_slots:
                key = tuple(sorted(assignment[s] for s in slots))
                if key not in cache:
                    cache[key] = edge_form(m.algebra, key)
                value *= cache[key]
                if value == 0:
                    break
            total += value
    return total, terms


def eval_naive(m: HWM, g: Hypergraph, config: Optional[RunConfig] = None) -> EvaluationResult:
    """
    Literal sum over all ``d^{|P_G|}`` port assignments.

    Raises:
        BasisMismatch: the algebra is not dense
        BudgetExceeded: ``d^{|P_G|}`` exceeds the term budget
    """
    config = _config(config)
    _prepare(m, g)
    _require_dense(m, "naive")
    needed = m.dim ** len(g.ports)
    if needed > config.term_budget:
        raise BudgetExceeded(f"Naive evaluation needs {needed} terms", needed=needed, budget=config.term_budget)
    chunks = _partition(m.dim, config.workers)
    if config.workers > 1 and len(chunks) > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            partials = list(pool.map(_naive_chunk, [m] * len(chunks), [g] * len(chunks), chunks))
    else:
        partials = [_naive_chunk(m, g, chunk) for chunk in chunks]
    value, terms = _reduce(partials)
    return EvaluationResult(value, "naive", terms)


# Support-restricted enumeration


def _support_plan(m: HWM, g: Hypergraph):
    order = traversal_order(g)
    position = {v: k for k, v in enumerate(order)}
    closing: List[List[Tuple[PortRef, ...]]] = [[] for _ in order]
    for h in g.hyperedges:
        closing[max(position[p.vertex] for p in h)].append(h)
    entries = [sorted(m.tensor(g.labels[v]).entries.items(), key=lambda kv: index_sort_key(kv[0])) for v in order]
    return order, closing, entries


def _support_search(m: HWM, g: Hypergraph, first: Tuple[int, int]) -> Tuple[complex, int]:
    order, closing, entries = _support_plan(m, g)
    cache: Dict[Index, complex] = {}
    chosen: Dict[str, Index] = {}
    total, terms = 0j, 0

    def edge_value(h: Tuple[PortRef, ...]) -> complex:
        key = tuple(chosen[p.vertex][p.slot - 1] for p in h)
        if key not in cache:
            cache[key] = edge_form(m.algebra, key)
        return cache[key]

    def extend(k: int, acc: complex) -> None:
        nonlocal total, terms
        if k == len(order):
            terms += 1
            total += acc
            return
        options = entries[k][first[0] : first[1]] if k == 0 else entries[k]
        for idx, value in options:
            chosen[order[k]] = idx
            weight = acc * value
            for h in closing[k]:
                weight *= edge_value(h)
                if weight == 0:
                    break
            if weight != 0:
                extend(k + 1, weight)
        chosen.pop(order[k], None)

    extend(0, 1 + 0j)
    return total, terms


def eval_support_restricted(m: HWM, g: Hypergraph, config: Optional[RunConfig] = None) -> EvaluationResult:
    """
    Sum over one stored entry per vertex, multiplying closed hyperedge forms as they complete.

    Works for every algebra, including the functional subset algebra.

    Raises:
        BudgetExceeded: ``Π_v nnz(T^{l(v)})`` exceeds the term budget
    """
    config = _config(config)
    _prepare(m, g)
    needed = 1
    for _, label in g.vertices:
        needed *= m.tensor(label).nnz
    if needed > config.term_budget:
        raise BudgetExceeded(
            f"Support evaluation needs up to {needed} terms", needed=needed, budget=config.term_budget
        )
    if needed == 0:
        return EvaluationResult(0j, "support", 0)
    root_nnz = m.tensor(g.labels[traversal_order(g)[0]]).nnz
    chunks = _partition(root_nnz, config.workers)
    if config.workers > 1 and len(chunks) > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            partials = list(pool.map(_support_search, [m] * len(chunks), [g] * len(chunks), chunks))
    else:
        partials = [_support_search(m, g, chunk) for chunk in chunks]
    value, terms = _reduce(partials)
    return EvaluationResult(value, "support", terms)


# Contraction engines


def build_factored_network(m: HWM, g: Hypergraph, budget: Optional[int] = None) -> List[Factor]:
    """One factor per vertex (its tensor) and one per hyperedge (its edge weight tensor); wires are ports."""
    factors = [
        Factor(("v", k), tuple(PortRef(v, j) for j in range(1, g.arity_of(v) + 1)), m.dense_tensors[label])
        for k, (v, label) in enumerate(g.vertices)
    ]
    weights: Dict[int, np.ndarray] = {}
    for k, h in enumerate(g.hyperedges):
        if len(h) not in weights:
            weights[len(h)] = edge_weight_array(m.algebra, len(h), budget)
        factors.append(Factor(("h", k), tuple(h), weights[len(h)]))
    return factors


def eval_factored(
    m: HWM, g: Hypergraph, config: Optional[RunConfig] = None, order: str = "greedy"
) -> EvaluationResult:
    """
    Contract the vertex/hyperedge factor network.

    Args:
        order: ``"greedy"`` or ``"sequential"`` contraction order

    Raises:
        BasisMismatch: the algebra is not dense
        BudgetExceeded: a factor exceeds the intermediate budget
    """
    config = _config(config)
    _prepare(m, g)
    _require_dense(m, "factored")
    stats = ContractionStats()
    factors = build_factored_network(m, g, config.intermediate_budget)
    value = contract_network(factors, order=order, budget=config.intermediate_budget, stats=stats)
    return EvaluationResult(value, "factored", stats.steps)


def gamma_id_applies(m: HWM, tol: float = 1e-8) -> bool:
    return m.algebra.is_identity_with_unit_alpha(tol)


def eval_gamma_id(
    m: HWM, g: Hypergraph, config: Optional[RunConfig] = None, order: str = "greedy"
) -> EvaluationResult:
    """
    Contract vertex tensors with one shared index per hyperedge.

    Raises:
        WrongAlgebra: the algebra is not Identity with ``α ≡ 1``
    """
    config = _config(config)
    _prepare(m, g)
    if not gamma_id_applies(m, config.tolerance):
        raise WrongAlgebra(f"gamma_id needs the identity product with unit alpha, got {m.algebra!r}")
    edge_of = g.edge_of_port
    factors = [
        Factor(("v", k), tuple(edge_of[PortRef(v, j)] for j in range(1, g.arity_of(v) + 1)), m.dense_tensors[label])
        for k, (v, label) in enumerate(g.vertices)
    ]
    stats = ContractionStats()
    value = contract_network(factors, order=order, budget=config.intermediate_budget, stats=stats)
    return EvaluationResult(value, "gamma_id", stats.steps)


# Dispatch

ENGINES = {
    "naive": eval_naive,
    "support": eval_support_restricted,
    "factored": eval_factored,
    "gamma_id": eval_gamma_id,
}


def select_engine(m: HWM, config: RunConfig) -> str:
    """Resolve ``auto`` to gamma_id, then factored, then support."""
    if config.engine != "auto":
        return config.engine
    if m.is_dense and gamma_id_applies(m, config.tolerance):
        return "gamma_id"
    if m.is_dense:
        return "factored"
    return "support"


def evaluate_detailed(
    m: HWM, g: Hypergraph, engine: Optional[str] = None, config: Optional[RunConfig] = None
) -> EvaluationResult:
    """
    Evaluate ``m`` on ``g`` with the requested engine.

    Args:
        m: Model
        g: Hypergraph over (a subset of) the model's alphabet
        engine: Engine name or ``auto``; overrides ``config.engine``
        config: Run configuration; defaults from settings
    """
    config = _config(config)
    if engine is not None:
        config = RunConfig(**{**config.model_dump(), "engine": engine})
    name = select_engine(m, config)
    result = ENGINES[name](m, g, config)
    logger.debug(f"✅ {name} engine: value={result.value} terms={result.terms}")
    return result


def evaluate(m: HWM, g: Hypergraph, engine: Optional[str] = None, config: Optional[RunConfig] = None) -> complex:
    """``r_M(G)`` as a complex number."""
    return evaluate_detailed(m, g, engine, config).value


def component_values(
    m: HWM, g: Hypergraph, engine: Optional[str] = None, config: Optional[RunConfig] = None
) -> List[Tuple[Hypergraph, complex]]:
    """Value of the model on each connected component of ``g``."""
    return [(c, evaluate(m, c, engine, config)) for c in component_subgraphs(g)]
