"""
Pairwise contraction of small tensor networks.

A network is a list of :class:`Factor` objects, each a dense array whose
modes are tagged with hashable wire labels. A wire shared by several
factors is summed once every factor carrying it has been merged; a wire
repeated inside one factor is a diagonal. The greedy order repeatedly
merges the pair of factors sharing a wire with the smallest product of
entry counts.

Author: HWM Toolkit Team
Date: 2026
"""

import logging
from collections import Counter
from dataclasses import dataclass
from itertools import combinations
from typing import Dict, Hashable, List, Optional, Sequence, Tuple

import numpy as np

from hwm.core.exceptions import BudgetExceeded

logger = logging.getLogger(__name__)

CONTRACTION_ORDERS = ("greedy", "sequential")


@dataclass
class Factor:
    """
    One node of a tensor network.

    Args:
        fid: Sortable identifier used for deterministic tie breaking
        wires: One wire label per array mode
        array: Dense complex array
    """

    fid: Tuple
    wires: Tuple[Hashable, ...]
    array: np.ndarray

    @property
    def size(self) -> int:
        return int(self.array.size)


@dataclass
class ContractionStats:
    steps: int = 0
    peak_size: int = 0


def _letters(wires: Sequence[Hashable]) -> Dict[Hashable, int]:
    table: Dict[Hashable, int] = {}
    for w in wires:
        table.setdefault(w, len(table))
    return table


def _einsum(operands: Sequence[Factor], keep: Sequence[Hashable]) -> np.ndarray:
    table = _letters([w for f in operands for w in f.wires] + list(keep))
    args: List = []
    for f in operands:
        args.extend([f.array, [table[w] for w in f.wires]])
    args.append([table[w] for w in keep])
    return np.einsum(*args, optimize=False)


def _check_budget(size: int, budget: Optional[int]) -> None:
    if budget is not None and size > budget:
        raise BudgetExceeded(
            f"Contraction intermediate of {size} entries exceeds budget {budget}", needed=size, budget=budget
        )


def _simplify(factor: Factor, counts: Counter) -> Factor:
    """Take diagonals of repeated wires and sum wires no other factor carries."""
    local = Counter(factor.wires)
    keep = tuple(dict.fromkeys(w for w in factor.wires if counts[w] > local[w]))
    if keep == factor.wires:
        return factor
    return Factor(factor.fid, keep, _einsum([factor], keep))


def _merged_wires(a: Factor, b: Factor, counts: Counter) -> Tuple[Hashable, ...]:
    local = Counter(a.wires) + Counter(b.wires)
    return tuple(dict.fromkeys(w for w in a.wires + b.wires if counts[w] > local[w]))


def _result_size(wires: Sequence[Hashable], dims: Dict[Hashable, int]) -> int:
    return int(np.prod([dims[w] for w in wires], dtype=np.int64)) if wires else 1


def contract_network(
    factors: Sequence[Factor],
    order: str = "greedy",
    budget: Optional[int] = None,
    stats: Optional[ContractionStats] = None,
) -> complex:
    """
    Contract a closed network to a scalar.

    Args:
        factors: Network factors; every wire must appear somewhere
        order: ``"greedy"`` (smallest pair first) or ``"sequential"`` (right to left)
        budget: Max entries of any factor, input or intermediate
        stats: Optional accumulator for steps and peak size

    Returns:
        complex: The full contraction

    Raises:
        BudgetExceeded: an intermediate would exceed ``budget``
    """
    if order not in CONTRACTION_ORDERS:
        raise ValueError(f"order must be one of {CONTRACTION_ORDERS}")
    stats = stats if stats is not None else ContractionStats()
    dims: Dict[Hashable, int] = {}
    for f in factors:
        for w, n in zip(f.wires, f.array.shape):
            dims[w] = n
    counts: Counter = Counter(w for f in factors for w in f.wires)
    for f in factors:
        _check_budget(f.size, budget)
    live: List[Factor] = [_simplify(f, counts) for f in factors]
    counts = Counter(w for f in live for w in f.wires)
    stats.peak_size = max([stats.peak_size] + [f.size for f in live])

    scalar = 1 + 0j
    while live:
        closed = [f for f in live if not f.wires]
        for f in closed:
            scalar *= complex(f.array)
        live = [f for f in live if f.wires]
        if len(live) < 2:
            if live:
                scalar *= complex(_einsum(live, ()))
            break
        a, b = _pick_pair(live, counts, dims, order)
        wires = _merged_wires(a, b, counts)
        size = _result_size(wires, dims)
        _check_budget(size, budget)
        merged = Factor(min(a.fid, b.fid), wires, _einsum([a, b], wires))
        for w in a.wires + b.wires:
            counts[w] -= 1
        for w in wires:
            counts[w] += 1
        live = [f for f in live if f is not a and f is not b] + [merged]
        stats.steps += 1
        stats.peak_size = max(stats.peak_size, size)
    return scalar


def _pick_pair(live: List[Factor], counts: Counter, dims: Dict[Hashable, int], order: str) -> Tuple[Factor, Factor]:
    if order == "sequential":
        return live[-2], live[-1]
    best = None
    best_key = None
    for a, b in combinations(live, 2):
        if not set(a.wires) & set(b.wires):
            continue
        wires = _merged_wires(a, b, counts)
        key = (a.size * b.size, len(wires), tuple(sorted((a.fid, b.fid))))
        if best_key is None or key < best_key:
            best, best_key = (a, b), key
    if best is None:
        # disconnected pieces: merge the two smallest as an outer product
        a, b = sorted(live, key=lambda f: (f.size, f.fid))[:2]
        return a, b
    return best
