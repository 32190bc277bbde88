"""
Classical linear representations and ranked trees.

A string representation ``(ι, {M_σ}, τ)`` computes
``r(u_1...u_n) = ιᵀ M_{u_1} ... M_{u_n} τ``; a tree representation
``(λ, μ)`` computes ``r(t) = λᵀ μ(t)`` bottom-up. Trees are stored as
nested nodes and expose their prefix-closed position set.

Author: HWM Toolkit Team
Date: 2026
"""

import logging
import re
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Sequence, Tuple, Union

import numpy as np

from hwm.core.exceptions import DimensionMismatch, InvalidTree, NotSquare, UnknownSymbol

logger = logging.getLogger(__name__)

Position = Tuple[int, ...]
Word = Union[str, Sequence[str]]

IOTA = "iota"
TAU = "tau"
LAMBDA = "lambda"
RESERVED_SYMBOLS = (IOTA, TAU, LAMBDA)


def as_symbols(w: Word) -> Tuple[str, ...]:
    """A word as a tuple of symbols; plain strings are split per character."""
    symbols = tuple(w) if isinstance(w, str) else tuple(str(s) for s in w)
    for s in symbols:
        if s in RESERVED_SYMBOLS:
            raise UnknownSymbol(f"'{s}' is reserved and cannot appear in a word")
    return symbols


@dataclass(frozen=True, eq=False)
class StringLinearRep:
    """
    Weighted automaton ``(ι, {M_σ}, τ)`` of dimension ``d``.

    Args:
        iota: Initial vector
        tau: Final vector
        matrices: ``symbol -> d x d`` matrix
    """

    iota: np.ndarray
    tau: np.ndarray
    matrices: Mapping[str, np.ndarray]

    def __post_init__(self):
        iota = np.asarray(self.iota, dtype=complex).reshape(-1)
        tau = np.asarray(self.tau, dtype=complex).reshape(-1)
        d = iota.shape[0]
        if tau.shape[0] != d:
            raise DimensionMismatch(f"iota has {d} entries, tau has {tau.shape[0]}")
        matrices = {}
        for symbol, m in self.matrices.items():
            m = np.asarray(m, dtype=complex)
            if m.ndim != 2 or m.shape[0] != m.shape[1]:
                raise NotSquare(f"M_{symbol} has shape {m.shape}")
            if m.shape[0] != d:
                raise DimensionMismatch(f"M_{symbol} is {m.shape[0]}x{m.shape[0]}, dimension is {d}")
            matrices[str(symbol)] = m
        object.__setattr__(self, "iota", iota)
        object.__setattr__(self, "tau", tau)
        object.__setattr__(self, "matrices", matrices)

    @property
    def dim(self) -> int:
        return int(self.iota.shape[0])

    @property
    def symbols(self) -> Tuple[str, ...]:
        return tuple(sorted(self.matrices))

    def matrix(self, symbol: str) -> np.ndarray:
        try:
            return self.matrices[symbol]
        except KeyError:
            raise UnknownSymbol(f"Representation has no matrix for '{symbol}'") from None

    def is_real(self, tol: float = 1e-12) -> bool:
        arrays = [self.iota, self.tau, *self.matrices.values()]
        return all(np.max(np.abs(a.imag), initial=0.0) <= tol for a in arrays)


@dataclass(frozen=True, eq=False)
class TreeLinearRep:
    """
    Linear tree representation ``(λ, μ)``.

    ``mu[f]`` is an order ``p+1`` array with entry ``(i0, i1..ip)`` equal to
    ``e_{i0}ᵀ μ(f)(e_{i1}, ..., e_{ip})``; leaves are vectors.
    """

    lam: np.ndarray
    mu: Mapping[str, np.ndarray]

    def __post_init__(self):
        lam = np.asarray(self.lam, dtype=complex).reshape(-1)
        d = lam.shape[0]
        mu = {}
        for symbol, t in self.mu.items():
            t = np.asarray(t, dtype=complex)
            if t.ndim < 1 or any(n != d for n in t.shape):
                raise DimensionMismatch(f"mu({symbol}) has shape {t.shape}, dimension is {d}")
            mu[str(symbol)] = t
        object.__setattr__(self, "lam", lam)
        object.__setattr__(self, "mu", mu)

    @property
    def dim(self) -> int:
        return int(self.lam.shape[0])

    @property
    def arities(self) -> Dict[str, int]:
        return {f: t.ndim - 1 for f, t in self.mu.items()}


@dataclass(frozen=True)
class Tree:
    """A ranked tree ``f(t_1, ..., t_p)``; leaves have no children."""

    symbol: str
    children: Tuple["Tree", ...] = field(default_factory=tuple)

    def positions(self) -> Dict[Position, str]:
        """Prefix-closed position set with labels; the root is ``()``."""
        out: Dict[Position, str] = {}
        stack: List[Tuple[Position, Tree]] = [((), self)]
        while stack:
            pos, node = stack.pop()
            out[pos] = node.symbol
            for j, child in enumerate(node.children, start=1):
                stack.append((pos + (j,), child))
        return dict(sorted(out.items()))

    def size(self) -> int:
        return 1 + sum(c.size() for c in self.children)

    def arities(self) -> Dict[str, int]:
        """Symbol arities read off the tree; raises InvalidTree when inconsistent."""
        out: Dict[str, int] = {}
        for node in self._nodes():
            if out.setdefault(node.symbol, len(node.children)) != len(node.children):
                raise InvalidTree(f"Symbol '{node.symbol}' used with different numbers of children")
        return out

    def _nodes(self):
        yield self
        for c in self.children:
            yield from c._nodes()

    def __str__(self) -> str:
        if not self.children:
            return self.symbol
        return f"{self.symbol}({','.join(str(c) for c in self.children)})"


def position_id(pos: Position) -> str:
    """Vertex id of a tree position: ``ε`` for the root, else dot-joined integers."""
    return "ε" if not pos else ".".join(str(i) for i in pos)


_TOKEN = re.compile(r"\s*([^\s(),]+|[(),])")


def parse_tree(text: str) -> Tree:
    """
    Parse an s-expression such as ``f(a,f(a,a))``.

    Raises:
        InvalidTree: malformed text or reserved symbols
    """
    tokens = _TOKEN.findall(text.strip())
    if "".join(tokens) != re.sub(r"\s+", "", text):
        raise InvalidTree(f"Unexpected characters in tree '{text}'")
    pos = 0

    def node() -> Tree:
        nonlocal pos
        if pos >= len(tokens) or tokens[pos] in "(),":
            raise InvalidTree(f"Expected a symbol at token {pos} of '{text}'")
        symbol = tokens[pos]
        if symbol in RESERVED_SYMBOLS:
            raise InvalidTree(f"'{symbol}' is reserved")
        pos += 1
        children: List[Tree] = []
        if pos < len(tokens) and tokens[pos] == "(":
            pos += 1
            children.append(node())
            while pos < len(tokens) and tokens[pos] == ",":
                pos += 1
                children.append(node())
            if pos >= len(tokens) or tokens[pos] != ")":
                raise InvalidTree(f"Missing ')' in '{text}'")
            pos += 1
        return Tree(symbol, tuple(children))

    tree = node()
    if pos != len(tokens):
        raise InvalidTree(f"Trailing input in '{text}'")
    tree.arities()
    return tree
