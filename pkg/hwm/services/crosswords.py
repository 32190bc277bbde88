"""
Crosswords: 2D words, their grid hypergraphs and the row/column factorization.

A crossword is an ``M x N`` array of symbols. Its graph has one arity-4
vertex per cell with ports ordered W, E, N, S; horizontal edges chain the
cells of each row (with boundary singletons on the west and east ends) and
vertical edges chain each column.

Author: HWM Toolkit Team
Date: 2026
"""

import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from hwm.core.exceptions import AlphabetMismatch, HypergraphValidationError
from hwm.models.algebra import block_algebra
from hwm.models.hwm import HWM
from hwm.models.hypergraph import Hypergraph, PortRef, RankedAlphabet, validate_hypergraph
from hwm.models.representations import StringLinearRep
from hwm.models.tensors import SparseTensor
from hwm.services.linear_reps import lift_string_series_iota_eq_tau, string_series_eval

logger = logging.getLogger(__name__)

WEST, EAST, NORTH, SOUTH = 1, 2, 3, 4

Edge = Tuple[PortRef, ...]


@dataclass(frozen=True)
class Crossword:
    """``cells[m][n]`` is the symbol at row ``m``, column ``n`` (0-based here, 1-based in vertex ids)."""

    cells: Tuple[Tuple[str, ...], ...]

    def __post_init__(self):
        cells = tuple(tuple(str(s) for s in row) for row in self.cells)
        if not cells or not cells[0]:
            raise HypergraphValidationError("A crossword needs at least one row and one column")
        if any(len(row) != len(cells[0]) for row in cells):
            raise HypergraphValidationError("All crossword rows must have the same length")
        object.__setattr__(self, "cells", cells)

    @classmethod
    def from_text(cls, text: str) -> "Crossword":
        """Rows as lines, one character per symbol; blank lines are ignored."""
        return cls(tuple(tuple(line.strip()) for line in text.splitlines() if line.strip()))

    @property
    def rows(self) -> int:
        return len(self.cells)

    @property
    def cols(self) -> int:
        return len(self.cells[0])

    def row(self, m: int) -> Tuple[str, ...]:
        return self.cells[m]

    def column(self, n: int) -> Tuple[str, ...]:
        return tuple(row[n] for row in self.cells)

    def symbols(self) -> List[str]:
        return sorted({s for row in self.cells for s in row})


def cell_id(m: int, n: int) -> str:
    """Vertex id of the 1-based cell ``(m, n)``."""
    return f"{m},{n}"


def _horizontal_edges(w: Crossword) -> List[Edge]:
    edges: List[Edge] = []
    for m in range(1, w.rows + 1):
        edges.append((PortRef(cell_id(m, 1), WEST),))
        edges += [(PortRef(cell_id(m, n), EAST), PortRef(cell_id(m, n + 1), WEST)) for n in range(1, w.cols)]
        edges.append((PortRef(cell_id(m, w.cols), EAST),))
    return edges


def _vertical_edges(w: Crossword) -> List[Edge]:
    edges: List[Edge] = []
    for n in range(1, w.cols + 1):
        edges.append((PortRef(cell_id(1, n), NORTH),))
        edges += [(PortRef(cell_id(m, n), SOUTH), PortRef(cell_id(m + 1, n), NORTH)) for m in range(1, w.rows)]
        edges.append((PortRef(cell_id(w.rows, n), SOUTH),))
    return edges


def _vertices(w: Crossword) -> Tuple[Tuple[str, str], ...]:
    return tuple((cell_id(m + 1, n + 1), w.cells[m][n]) for m in range(w.rows) for n in range(w.cols))


def encode_crossword(w: Crossword) -> Hypergraph:
    """Grid hypergraph ``G_w`` with ``E = E_H ∪ E_V`` over arity-4 symbols."""
    g = Hypergraph(
        RankedAlphabet.from_mapping({s: 4 for s in w.symbols()}),
        _vertices(w),
        tuple(_horizontal_edges(w) + _vertical_edges(w)),
    )
    validate_hypergraph(g)
    return g


def _split(w: Crossword, edges: List[Edge], first: int) -> Hypergraph:
    remap = {first: 1, first + 1: 2}
    g = Hypergraph(
        RankedAlphabet.from_mapping({s: 2 for s in w.symbols()}),
        _vertices(w),
        tuple(tuple(PortRef(p.vertex, remap[p.slot]) for p in h) for h in edges),
    )
    validate_hypergraph(g)
    return g


def crossword_split(w: Crossword) -> Tuple[Hypergraph, Hypergraph]:
    """
    Horizontal and vertical graphs over binary symbols.

    ``G_H`` keeps ``E_H`` with (W, E) -> (1, 2) and has one component per
    row; ``G_V`` keeps ``E_V`` with (N, S) -> (1, 2) and has one component
    per column.
    """
    return _split(w, _horizontal_edges(w), WEST), _split(w, _vertical_edges(w), NORTH)


def crossword_combine_hwm(a: HWM, b: HWM) -> HWM:
    """
    Model ``C`` with ``r_C(G_w) = r_A(G_w^H) · r_B(G_w^V)``.

    ``C^σ[i, j, d1 + k, d1 + l] = A^σ[i, j] · B^σ[k, l]``: W/E use the first
    block, N/S the second. The product is blockwise with cross products
    zero and ``α`` concatenates both.

    Raises:
        AlphabetMismatch: alphabets differ or are not binary
    """
    if a.alphabet.arities != b.alphabet.arities:
        raise AlphabetMismatch("Row and column models must share one alphabet")
    if any(arity != 2 for _, arity in a.alphabet.symbols):
        raise AlphabetMismatch("Row and column models must use binary symbols")
    if not (a.is_dense and b.is_dense):
        raise AlphabetMismatch("Row and column models need dense algebras")
    d1 = a.dim
    algebra = block_algebra([a.algebra, b.algebra])
    tensors: Dict[str, SparseTensor] = {}
    for symbol in a.alphabet:
        tensors[symbol] = SparseTensor(
            4,
            {
                (i, j, d1 + k, d1 + l): va * vb
                for (i, j), va in a.tensor(symbol).entries.items()
                for (k, l), vb in b.tensor(symbol).entries.items()
            },
        )
    alphabet = RankedAlphabet.from_mapping({s: 4 for s in a.alphabet})
    out = HWM(alphabet, algebra, tensors)
    logger.info(f"✅ Crossword model of dimension {algebra.dim}")
    return out


def crossword_row_col_hwm(
    rep_a: StringLinearRep, rep_b: StringLinearRep, seed: Optional[int] = None
) -> HWM:
    """Crossword model for ``Π_m r_A(row m) · Π_n r_B(column n)`` from two real string series."""
    return crossword_combine_hwm(
        lift_string_series_iota_eq_tau(rep_a, seed=seed),
        lift_string_series_iota_eq_tau(rep_b, seed=seed),
    )


def crossword_oracle(rep_a: StringLinearRep, rep_b: StringLinearRep, w: Crossword) -> complex:
    """Row/column product of classical series values."""
    value = 1 + 0j
    for m in range(w.rows):
        value *= string_series_eval(rep_a, w.row(m))
    for n in range(w.cols):
        value *= string_series_eval(rep_b, w.column(n))
    return value


def random_crossword(rows: int, cols: int, symbols: Sequence[str], rng: np.random.Generator) -> Crossword:
    return Crossword(tuple(tuple(str(rng.choice(list(symbols))) for _ in range(cols)) for _ in range(rows)))
