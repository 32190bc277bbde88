"""
The hypergraph weighted model ``M = (d, {T^x}, ⊙, α)``.

Author: HWM Toolkit Team
Date: 2026
"""

import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, Mapping, Optional

import numpy as np

from hwm.core.exceptions import AlphabetMismatch, ArityMismatch, BasisMismatch, UnknownSymbol
from hwm.models.algebra import ProductAlgebra
from hwm.models.hypergraph import Hypergraph, RankedAlphabet
from hwm.models.tensors import DEFAULT_TOLERANCE, SparseTensor

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class HWM:
    """
    A model over a ranked alphabet.

    Args:
        alphabet: Ranked alphabet; every symbol needs a tensor
        algebra: Product algebra carrying the basis, ``⊙`` and ``α``
        tensors: ``symbol -> SparseTensor`` with order equal to the arity
    """

    alphabet: RankedAlphabet
    algebra: ProductAlgebra
    tensors: Mapping[str, SparseTensor]

    def __post_init__(self):
        object.__setattr__(self, "tensors", dict(self.tensors))
        validate_model(self)

    @property
    def dim(self) -> Optional[int]:
        return self.algebra.dim

    @property
    def is_dense(self) -> bool:
        return self.algebra.is_dense

    def tensor(self, symbol: str) -> SparseTensor:
        try:
            return self.tensors[symbol]
        except KeyError:
            raise UnknownSymbol(f"Model has no tensor for '{symbol}'") from None

    @cached_property
    def dense_tensors(self) -> Dict[str, np.ndarray]:
        """Dense arrays of every tensor (dense algebras only)."""
        return {x: t.to_dense(self.dim) for x, t in self.tensors.items()}

    def is_real(self, tol: float = DEFAULT_TOLERANCE) -> bool:
        """True when tensors, algebra constants and alpha are real within ``tol``."""
        if not self.is_dense:
            return False
        arrays = [self.algebra.structure_constants(), self.algebra.alpha_vector()]
        arrays.extend(self.dense_tensors.values())
        return all(np.max(np.abs(np.imag(a)), initial=0.0) <= tol for a in arrays)

    def __repr__(self) -> str:
        return f"HWM(symbols={len(self.alphabet)}, algebra={self.algebra!r})"


def validate_model(m: HWM) -> None:
    """
    Check tensor orders and basis labels against the alphabet and algebra.

    Raises:
        UnknownSymbol: a symbol lacks a tensor, or a tensor has no symbol
        ArityMismatch: a tensor order differs from its symbol's arity
        InvalidLabel/BasisMismatch: an entry uses a label outside the basis
    """
    for symbol, arity in m.alphabet.symbols:
        if symbol not in m.tensors:
            raise UnknownSymbol(f"Symbol '{symbol}' has no tensor")
        if m.tensors[symbol].order != arity:
            raise ArityMismatch(
                f"Tensor for '{symbol}' has order {m.tensors[symbol].order}, arity is {arity}"
            )
    for symbol, tensor in m.tensors.items():
        if symbol not in m.alphabet:
            raise UnknownSymbol(f"Tensor given for unknown symbol '{symbol}'")
        if not isinstance(tensor, SparseTensor):
            raise BasisMismatch(f"Tensor for '{symbol}' is not a SparseTensor")
        for idx in tensor.entries:
            for label in idx:
                m.algebra.check_label(label)


def check_graph_alphabet(m: HWM, g: Hypergraph) -> None:
    """Raise AlphabetMismatch unless the model covers every label used by ``g``."""
    if not m.alphabet.covers(g.used_alphabet()):
        missing = [s for s, a in g.used_alphabet().symbols if m.alphabet.arities.get(s) != a]
        raise AlphabetMismatch(f"Model does not cover symbols {missing}")


def create_hwm(algebra: ProductAlgebra, tensors: Mapping[str, SparseTensor]) -> HWM:
    """Build a model whose alphabet is read off the tensor orders."""
    alphabet = RankedAlphabet.from_mapping({x: t.order for x, t in tensors.items()})
    m = HWM(alphabet, algebra, tensors)
    logger.debug(f"✅ Built model over {len(alphabet)} symbols with {algebra!r}")
    return m
