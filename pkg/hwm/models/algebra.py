"""
Product algebras ``(⊙, α)`` of a hypergraph weighted model.

An algebra multiplies basis vectors (``product``) and reads a scalar off a
vector (``alpha``). Dense variants are indexed by ``0..d-1`` and expose
their structure constants ``c[i, j, k]`` (``e_i ⊙ e_j = Σ_k c[i,j,k] e_k``);
the subset algebra indexes its basis by sets of template ports and is only
ever used functionally.

Author: HWM Toolkit Team
Date: 2026
"""

import logging
from abc import ABC, abstractmethod
from functools import cached_property
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

import numpy as np
from scipy import linalg

from hwm.core.exceptions import (
    BasisMismatch,
    BudgetExceeded,
    InvalidLabel,
    NotAssociative,
    NotDense,
    NotReal,
    NotSquare,
    NotSymmetric,
)
from hwm.models.hypergraph import Hypergraph, PortRef
from hwm.models.tensors import DEFAULT_TOLERANCE, Label, SparseTensor

logger = logging.getLogger(__name__)

SparseVector = Dict[Label, complex]

ASSOCIATIVITY_ATOL = 1e-9
EMPTY: FrozenSet[PortRef] = frozenset()


class ProductAlgebra(ABC):
    """Base class of every product algebra."""

    kind: str = ""

    @property
    def is_dense(self) -> bool:
        return False

    @property
    def dim(self) -> Optional[int]:
        """Dimension of a dense algebra, None for functional bases."""
        return None

    @abstractmethod
    def check_label(self, label: Label) -> None:
        """Raise InvalidLabel if ``label`` is not a basis label."""

    @abstractmethod
    def product(self, a: Label, b: Label) -> SparseVector:
        """``e_a ⊙ e_b`` as a sparse vector."""

    @abstractmethod
    def alpha(self, label: Label) -> complex:
        """``α(e_label)``."""

    def structure_constants(self) -> np.ndarray:
        raise NotDense(f"{self.kind} algebra has no dense structure constants")

    def alpha_vector(self) -> np.ndarray:
        raise NotDense(f"{self.kind} algebra has no dense alpha vector")

    def is_identity_with_unit_alpha(self, tol: float = DEFAULT_TOLERANCE) -> bool:
        return False


class DenseAlgebra(ProductAlgebra):
    """Shared behaviour of the integer-indexed algebras."""

    def __init__(self, d: int, alpha):
        if d < 1:
            raise BasisMismatch("Algebra dimension must be at least 1")
        alpha = np.asarray(alpha, dtype=complex).reshape(-1)
        if alpha.shape != (d,):
            raise BasisMismatch(f"alpha has {alpha.shape[0]} entries, dimension is {d}")
        self._d = int(d)
        self._alpha = alpha
        self._alpha.setflags(write=False)

    @property
    def is_dense(self) -> bool:
        return True

    @property
    def dim(self) -> int:
        return self._d

    def check_label(self, label: Label) -> None:
        if not isinstance(label, (int, np.integer)) or not 0 <= label < self._d:
            raise InvalidLabel(f"Label {label!r} is outside the basis 0..{self._d - 1}")

    def alpha(self, label: Label) -> complex:
        self.check_label(label)
        return complex(self._alpha[label])

    def alpha_vector(self) -> np.ndarray:
        return self._alpha

    def product(self, a: Label, b: Label) -> SparseVector:
        self.check_label(a)
        self.check_label(b)
        row = self.structure_constants()[a, b]
        return {int(k): complex(row[k]) for k in np.flatnonzero(row)}


class IdentityAlgebra(DenseAlgebra):
    """``e_i ⊙ e_j = δ_ij e_i``."""

    kind = "identity"

    def __init__(self, d: int, alpha=None):
        super().__init__(d, np.ones(d) if alpha is None else alpha)

    def product(self, a: Label, b: Label) -> SparseVector:
        self.check_label(a)
        self.check_label(b)
        return {int(a): 1 + 0j} if a == b else {}

    @cached_property
    def _constants(self) -> np.ndarray:
        c = np.zeros((self._d,) * 3, dtype=complex)
        idx = np.arange(self._d)
        c[idx, idx, idx] = 1
        return c

    def structure_constants(self) -> np.ndarray:
        return self._constants

    def is_identity_with_unit_alpha(self, tol: float = DEFAULT_TOLERANCE) -> bool:
        return bool(np.all(np.abs(self._alpha - 1) <= tol))

    def __repr__(self) -> str:
        return f"IdentityAlgebra(d={self._d})"


class DiagScaledAlgebra(DenseAlgebra):
    """``e_i ⊙ e_j = δ_ij w_i e_i``."""

    kind = "diag_scaled"

    def __init__(self, d: int, weights, alpha):
        super().__init__(d, alpha)
        weights = np.asarray(weights, dtype=complex).reshape(-1)
        if weights.shape != (d,):
            raise BasisMismatch(f"weights has {weights.shape[0]} entries, dimension is {d}")
        self.weights = weights
        self.weights.setflags(write=False)

    def product(self, a: Label, b: Label) -> SparseVector:
        self.check_label(a)
        self.check_label(b)
        if a != b or self.weights[a] == 0:
            return {}
        return {int(a): complex(self.weights[a])}

    @cached_property
    def _constants(self) -> np.ndarray:
        c = np.zeros((self._d,) * 3, dtype=complex)
        idx = np.arange(self._d)
        c[idx, idx, idx] = self.weights
        return c

    def structure_constants(self) -> np.ndarray:
        return self._constants

    def __repr__(self) -> str:
        return f"DiagScaledAlgebra(d={self._d})"


class TableAlgebra(DenseAlgebra):
    """
    General commutative associative algebra given by its coefficient table.

    The table is validated on construction: symmetry must hold exactly and
    associativity within ``ASSOCIATIVITY_ATOL``.

    Raises:
        NotSymmetric: ``c[i,j,k] != c[j,i,k]`` for some indices
        NotAssociative: ``(e_i ⊙ e_j) ⊙ e_k != e_i ⊙ (e_j ⊙ e_k)`` for some indices
    """

    kind = "table"

    def __init__(self, d: int, coefficients, alpha, validate: bool = True):
        super().__init__(d, alpha)
        coefficients = np.asarray(coefficients, dtype=complex)
        if coefficients.shape != (d, d, d):
            raise BasisMismatch(f"coefficients must have shape {(d, d, d)}, got {coefficients.shape}")
        self.coefficients = coefficients
        self.coefficients.setflags(write=False)
        if validate:
            check_symmetry(coefficients)
            check_associativity(coefficients)

    def structure_constants(self) -> np.ndarray:
        return self.coefficients

    def __repr__(self) -> str:
        return f"TableAlgebra(d={self._d})"


class SubsetAlgebra(ProductAlgebra):
    """
    Algebra on the virtual basis ``{e_S : S ⊆ ports(template)}``.

    ``e_S ⊙ e_T = e_{S∪T}`` for nonempty disjoint ``S``, ``T``, else ``e_∅``;
    ``α(e_S) = edge_weight`` if ``S`` is a hyperedge of the template, else 0.
    """

    kind = "subset"

    def __init__(self, template: Hypergraph, edge_weight: complex = 1.0):
        self.template = template
        self.edge_weight = complex(edge_weight)
        self.edges = frozenset(frozenset(h) for h in template.hyperedges)
        self._ports = frozenset(template.ports)

    def check_label(self, label: Label) -> None:
        if not isinstance(label, frozenset) or not label <= self._ports:
            raise InvalidLabel(f"Label {label!r} is not a set of template ports")

    def product(self, a: Label, b: Label) -> SparseVector:
        self.check_label(a)
        self.check_label(b)
        if a and b and not (a & b):
            return {a | b: 1 + 0j}
        return {EMPTY: 1 + 0j}

    def alpha(self, label: Label) -> complex:
        self.check_label(label)
        return self.edge_weight if label in self.edges else 0j

    def __repr__(self) -> str:
        return f"SubsetAlgebra(ports={len(self._ports)}, edges={len(self.edges)})"


class DirectSumAlgebra(ProductAlgebra):
    """
    Block algebra with labels ``(block, inner_label)``.

    Products inside one block follow that block's algebra; products across
    blocks vanish. Built when summing models whose algebras are not dense.
    """

    kind = "direct_sum"

    def __init__(self, blocks: Sequence[ProductAlgebra]):
        if not blocks:
            raise BasisMismatch("A direct sum needs at least one block")
        self.blocks: Tuple[ProductAlgebra, ...] = tuple(blocks)

    def check_label(self, label: Label) -> None:
        if not (isinstance(label, tuple) and len(label) == 2 and isinstance(label[0], int)):
            raise InvalidLabel(f"Label {label!r} is not a (block, label) pair")
        block, inner = label
        if not 0 <= block < len(self.blocks):
            raise InvalidLabel(f"Block {block} out of range")
        self.blocks[block].check_label(inner)

    def product(self, a: Label, b: Label) -> SparseVector:
        self.check_label(a)
        self.check_label(b)
        if a[0] != b[0]:
            return {}
        block = a[0]
        return {(block, k): v for k, v in self.blocks[block].product(a[1], b[1]).items()}

    def alpha(self, label: Label) -> complex:
        self.check_label(label)
        return self.blocks[label[0]].alpha(label[1])

    def __repr__(self) -> str:
        return f"DirectSumAlgebra(blocks={len(self.blocks)})"


# Validation


def check_symmetry(c: np.ndarray) -> None:
    """Exact symmetry of a ``(d, d, d)`` coefficient table in its first two modes."""
    bad = np.argwhere(c != c.transpose(1, 0, 2))
    if bad.size:
        i, j, k = (int(x) for x in bad[0])
        raise NotSymmetric(
            f"c[{i + 1},{j + 1},{k + 1}] != c[{j + 1},{i + 1},{k + 1}]", indices=(i + 1, j + 1, k + 1)
        )


def check_associativity(c: np.ndarray, atol: float = ASSOCIATIVITY_ATOL) -> None:
    """Exhaustive ``(e_i ⊙ e_j) ⊙ e_k = e_i ⊙ (e_j ⊙ e_k)`` over all triples."""
    left = np.einsum("ijm,mkn->ijkn", c, c)
    right = np.einsum("jkm,imn->ijkn", c, c)
    bad = np.argwhere(np.abs(left - right) > atol)
    if bad.size:
        i, j, k, n = (int(x) for x in bad[0])
        raise NotAssociative(
            f"(e{i + 1}⊙e{j + 1})⊙e{k + 1} and e{i + 1}⊙(e{j + 1}⊙e{k + 1}) differ at coordinate {n + 1}",
            indices=(i + 1, j + 1, k + 1),
        )


# Core operations


def product_fold(alg: ProductAlgebra, labels: Sequence[Label]) -> SparseVector:
    """
    Fold ``e_l1 ⊙ e_l2 ⊙ ...`` from the left.

    Args:
        alg: Product algebra
        labels: Nonempty sequence of basis labels

    Returns:
        SparseVector: Result as ``label -> coefficient`` with zeros dropped
    """
    labels = list(labels)
    if not labels:
        raise InvalidLabel("product_fold needs at least one label")
    alg.check_label(labels[0])
    acc: SparseVector = {labels[0]: 1 + 0j}
    for label in labels[1:]:
        nxt: SparseVector = {}
        for current, coeff in acc.items():
            for out, value in alg.product(current, label).items():
                nxt[out] = nxt.get(out, 0j) + coeff * value
        acc = {k: v for k, v in nxt.items() if v != 0}
        if not acc:
            break
    return acc


def edge_form(alg: ProductAlgebra, labels: Sequence[Label]) -> complex:
    """``α(e_l1 ⊙ ... ⊙ e_lk)``; for one label this is ``α(e_l)``."""
    return sum((coeff * alg.alpha(label) for label, coeff in product_fold(alg, labels).items()), 0j)


def bilinear_form_matrix(alg: ProductAlgebra) -> np.ndarray:
    """
    ``M[i, j] = α(e_i ⊙ e_j)`` for a dense algebra.

    Raises:
        NotDense: for functional algebras
    """
    if not alg.is_dense:
        raise NotDense(f"{alg.kind} algebra has no bilinear form matrix")
    if isinstance(alg, IdentityAlgebra):
        return np.diag(alg.alpha_vector())
    if isinstance(alg, DiagScaledAlgebra):
        return np.diag(alg.alpha_vector() * alg.weights)
    return np.einsum("ijk,k->ij", alg.structure_constants(), alg.alpha_vector())


def edge_weight_array(alg: ProductAlgebra, k: int, budget: Optional[int] = None) -> np.ndarray:
    """
    Dense ``W[i1..ik] = edge_form(alg, (i1..ik))``.

    Raises:
        NotDense: for functional algebras
        BudgetExceeded: ``d**k`` exceeds ``budget``
    """
    if not alg.is_dense:
        raise NotDense(f"{alg.kind} algebra has no dense edge weights")
    d = alg.dim
    if k < 1:
        raise InvalidLabel("A hyperedge has at least one port")
    needed = d**k
    if budget is not None and needed > budget:
        raise BudgetExceeded(f"Edge weight tensor needs {needed} entries", needed=needed, budget=budget)
    alpha = alg.alpha_vector()
    if isinstance(alg, (IdentityAlgebra, DiagScaledAlgebra)):
        diag = alpha * (alg.weights ** (k - 1) if isinstance(alg, DiagScaledAlgebra) else 1)
        out = np.zeros((d,) * k, dtype=complex)
        idx = np.arange(d)
        out[(idx,) * k] = diag
        return out
    c = alg.structure_constants()
    folded = np.eye(d, dtype=complex)
    for _ in range(k - 1):
        folded = np.tensordot(folded, c, axes=([-1], [0]))
    return folded @ alpha


def edge_weight_tensor(alg: ProductAlgebra, k: int, budget: Optional[int] = None) -> SparseTensor:
    """Sparse form of :func:`edge_weight_array`."""
    return SparseTensor.from_dense(edge_weight_array(alg, k, budget))


def symmetric_factor(m, tol: float = DEFAULT_TOLERANCE) -> np.ndarray:
    """
    Complex ``Q`` with ``Qᵀ Q = M`` for a real symmetric ``M``.

    Uses ``M = U Λ Uᵀ`` and ``Q = Λ^{1/2} Uᵀ`` with principal square roots,
    so negative eigenvalues produce imaginary rows.

    Raises:
        NotSquare: M is not square
        NotReal: M has imaginary entries
        NotSymmetric: M differs from its transpose beyond tolerance
    """
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise NotSquare(f"Matrix of shape {m.shape} is not square")
    scale = max(1.0, float(np.max(np.abs(m))) if m.size else 1.0)
    if np.iscomplexobj(m):
        if np.max(np.abs(m.imag), initial=0.0) > tol * scale:
            raise NotReal("symmetric_factor needs a real matrix")
        m = m.real
    m = m.astype(float)
    asym = np.abs(m - m.T)
    if np.max(asym, initial=0.0) > tol * scale:
        i, j = (int(x) for x in np.unravel_index(np.argmax(asym), asym.shape))
        raise NotSymmetric(f"M[{i + 1},{j + 1}] != M[{j + 1},{i + 1}]", indices=(i + 1, j + 1))
    eigenvalues, u = linalg.eigh((m + m.T) / 2)
    return np.diag(np.sqrt(eigenvalues.astype(complex))) @ u.T


# Builders used by the closure constructions


def _is_diagonal(alg: ProductAlgebra) -> bool:
    return isinstance(alg, (IdentityAlgebra, DiagScaledAlgebra))


def _diag_weights(alg: ProductAlgebra) -> np.ndarray:
    if isinstance(alg, DiagScaledAlgebra):
        return np.asarray(alg.weights)
    return np.ones(alg.dim, dtype=complex)


def block_algebra(algebras: Sequence[ProductAlgebra]) -> ProductAlgebra:
    """
    Direct sum of algebras with cross-block products zero.

    Dense inputs give a dense algebra on ``Σ d_k`` (Identity when all are
    Identity, DiagScaled when all are diagonal, Table otherwise); any
    functional input gives a :class:`DirectSumAlgebra`.
    """
    algebras = list(algebras)
    if not all(a.is_dense for a in algebras):
        return DirectSumAlgebra(algebras)
    alpha = np.concatenate([a.alpha_vector() for a in algebras])
    total = int(sum(a.dim for a in algebras))
    if all(isinstance(a, IdentityAlgebra) for a in algebras):
        return IdentityAlgebra(total, alpha)
    if all(_is_diagonal(a) for a in algebras):
        return DiagScaledAlgebra(total, np.concatenate([_diag_weights(a) for a in algebras]), alpha)
    c = np.zeros((total,) * 3, dtype=complex)
    offset = 0
    for a in algebras:
        sl = slice(offset, offset + a.dim)
        c[sl, sl, sl] = a.structure_constants()
        offset += a.dim
    return TableAlgebra(total, c, alpha)


def kronecker_algebra(a: ProductAlgebra, b: ProductAlgebra) -> ProductAlgebra:
    """
    Tensor product algebra on ``m·n`` with pairing ``(i, j) -> i·n + j`` (0-based).

    ``(e_i⊗f_j) ⊙ (e_k⊗f_l) = (e_i ⊙ e_k) ⊗ (f_j ⊙ f_l)`` and ``δ = α ⊗ β``.
    """
    if not (a.is_dense and b.is_dense):
        raise NotDense("Hadamard products need dense algebras")
    alpha = np.kron(a.alpha_vector(), b.alpha_vector())
    total = a.dim * b.dim
    if isinstance(a, IdentityAlgebra) and isinstance(b, IdentityAlgebra):
        return IdentityAlgebra(total, alpha)
    if _is_diagonal(a) and _is_diagonal(b):
        return DiagScaledAlgebra(total, np.kron(_diag_weights(a), _diag_weights(b)), alpha)
    ca, cb = a.structure_constants(), b.structure_constants()
    c = np.einsum("ikp,jlq->ijklpq", ca, cb).reshape(total, total, total)
    return TableAlgebra(total, c, alpha)


def subset_basis_singletons(template: Hypergraph, vertex: str) -> List[FrozenSet[PortRef]]:
    """Singleton labels ``{(v, 1)}, ..., {(v, ♯v)}`` of one template vertex."""
    return [frozenset([PortRef(vertex, slot)]) for slot in range(1, template.arity_of(vertex) + 1)]
