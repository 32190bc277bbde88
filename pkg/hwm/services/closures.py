"""
Closure constructions: sum, Hadamard product and closed-graph normalization.

Author: HWM Toolkit Team
Date: 2026
"""

import logging
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from hwm.core.config import RunConfig
from hwm.core.exceptions import AlphabetMismatch, NotClosedBinary, NotDense, NotReal
from hwm.models.algebra import (
    DirectSumAlgebra,
    IdentityAlgebra,
    ProductAlgebra,
    bilinear_form_matrix,
    block_algebra,
    kronecker_algebra,
    symmetric_factor,
)
from hwm.models.hwm import HWM
from hwm.models.hypergraph import Hypergraph, is_connected
from hwm.models.tensors import DEFAULT_TOLERANCE, Label, SparseTensor, mode_apply_all
from hwm.services.engine import component_values, evaluate

logger = logging.getLogger(__name__)


def _require_same_alphabet(a: HWM, b: HWM) -> None:
    if a.alphabet.arities != b.alphabet.arities:
        raise AlphabetMismatch("Both models must be defined over the same ranked alphabet")


def _sum_relabelers(a: ProductAlgebra, b: ProductAlgebra) -> Tuple[Callable[[Label], Label], Callable[[Label], Label]]:
    """Label maps sending each operand's basis into the summed basis."""
    if a.is_dense and b.is_dense:
        shift = a.dim
        return (lambda i: i), (lambda i: i + shift)
    a_nested = isinstance(a, DirectSumAlgebra)
    b_nested = isinstance(b, DirectSumAlgebra)
    a_blocks = len(a.blocks) if a_nested else 1

    def to_a(label: Label) -> Label:
        return label if a_nested else (0, label)

    def to_b(label: Label) -> Label:
        return (label[0] + a_blocks, label[1]) if b_nested else (a_blocks, label)

    return to_a, to_b


def _sum_algebra(a: ProductAlgebra, b: ProductAlgebra) -> ProductAlgebra:
    if a.is_dense and b.is_dense:
        return block_algebra([a, b])
    blocks: List[ProductAlgebra] = []
    for alg in (a, b):
        blocks.extend(alg.blocks if isinstance(alg, DirectSumAlgebra) else [alg])
    return DirectSumAlgebra(blocks)


def hwm_sum(a: HWM, b: HWM) -> HWM:
    """
    Model computing ``r_A + r_B`` on connected hypergraphs.

    Tensors are placed block-diagonally (the ``B`` block shifted past the
    ``A`` block), the product acts blockwise with cross products zero and
    ``α`` is the concatenation. Non-dense operands produce a
    :class:`DirectSumAlgebra` instead of a shifted dense basis.

    Raises:
        AlphabetMismatch: the alphabets differ
    """
    _require_same_alphabet(a, b)
    to_a, to_b = _sum_relabelers(a.algebra, b.algebra)
    tensors: Dict[str, SparseTensor] = {}
    for symbol in a.alphabet:
        ta = a.tensor(symbol).map_labels(to_a)
        tb = b.tensor(symbol).map_labels(to_b)
        tensors[symbol] = SparseTensor(ta.order, {**ta.entries, **tb.entries})
    algebra = _sum_algebra(a.algebra, b.algebra)
    out = HWM(a.alphabet, algebra, tensors)
    logger.info(f"✅ Summed models into {algebra!r}")
    return out


def hwm_sum_many(models: Sequence[HWM]) -> HWM:
    """Left fold of :func:`hwm_sum`."""
    if not models:
        raise ValueError("At least one model is required")
    out = models[0]
    for m in models[1:]:
        out = hwm_sum(out, m)
    return out


def sum_applies(g: Hypergraph) -> bool:
    """Additivity is only claimed on connected graphs; logs a warning otherwise."""
    if is_connected(g):
        return True
    logger.warning("⚠️ Graph is disconnected: the summed model gives prod_c (r_A(c) + r_B(c)), not r_A + r_B")
    return False


def component_sum_value(a: HWM, b: HWM, g: Hypergraph, config: Optional[RunConfig] = None) -> complex:
    """``Π_c (r_A(c) + r_B(c))`` over the connected components of ``g``."""
    value = 1 + 0j
    for (_, va), (_, vb) in zip(component_values(a, g, config=config), component_values(b, g, config=config)):
        value *= va + vb
    return value


def hwm_hadamard(a: HWM, b: HWM) -> HWM:
    """
    Model computing ``r_A · r_B`` on every hypergraph.

    ``D^x = A^x ⊗ B^x`` with basis pairing ``(i, j) -> i·n + j``; the product
    and ``α`` are the tensor products of the operands'.

    Raises:
        AlphabetMismatch: the alphabets differ
        NotDense: an operand algebra is not dense
    """
    _require_same_alphabet(a, b)
    if not (a.is_dense and b.is_dense):
        raise NotDense("Hadamard products need dense algebras")
    n = b.dim
    tensors = {}
    for symbol in a.alphabet:
        ta, tb = a.tensor(symbol), b.tensor(symbol)
        tensors[symbol] = SparseTensor(
            ta.order,
            {
                tuple(i * n + j for i, j in zip(ia, ib)): va * vb
                for ia, va in ta.entries.items()
                for ib, vb in tb.entries.items()
            },
        )
    algebra = kronecker_algebra(a.algebra, b.algebra)
    out = HWM(a.alphabet, algebra, tensors)
    logger.info(f"✅ Hadamard product has dimension {algebra.dim}")
    return out


def normalize_closed_graph(a: HWM, tol: float = DEFAULT_TOLERANCE) -> HWM:
    """
    Rewrite a real model with the identity product and unit ``α``.

    With ``M = bilinear_form_matrix`` factored as ``QᵀQ``, every tensor gets
    ``Q`` on every mode. Values agree on graphs whose hyperedges all have
    exactly two ports.

    Raises:
        NotDense: the algebra is not dense
        NotReal: the model has complex entries
        NotSymmetric: the bilinear form is not symmetric
    """
    if not a.is_dense:
        raise NotDense("Normalization needs a dense algebra")
    if not a.is_real(tol):
        raise NotReal("Normalization needs a real-valued model")
    m = bilinear_form_matrix(a.algebra)
    q = symmetric_factor(np.real_if_close(m), tol)
    tensors = {x: mode_apply_all(q, t) for x, t in a.tensors.items()}
    out = HWM(a.alphabet, IdentityAlgebra(a.dim), tensors)
    logger.info(f"✅ Normalized model of dimension {a.dim}")
    return out


def has_binary_edges(g: Hypergraph) -> bool:
    """True when every hyperedge has exactly two ports."""
    return all(len(h) == 2 for h in g.hyperedges)


def normalized_value(
    a: HWM, g: Hypergraph, config: Optional[RunConfig] = None, normalized: Optional[HWM] = None
) -> complex:
    """
    Value of the normalized model on ``g``, which must have only two-port hyperedges.

    Pass ``normalized`` to reuse an earlier ``normalize_closed_graph(a)``.

    Raises:
        NotClosedBinary: ``g`` has a hyperedge with one port or more than two
    """
    if not has_binary_edges(g):
        sizes = sorted({len(h) for h in g.hyperedges if len(h) != 2})
        raise NotClosedBinary(f"Normalization needs two-port hyperedges; found sizes {sizes}")
    model = normalized if normalized is not None else normalize_closed_graph(a)
    return evaluate(model, g, config=config)
