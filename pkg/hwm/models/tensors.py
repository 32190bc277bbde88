"""
Sparse complex tensors over a basis family.

A :class:`SparseTensor` of order ``k`` stores only its nonzero entries as a
map from a ``k``-tuple of basis labels to a complex value. Three label
families exist:

* dense labels: Python ``int`` in ``[0, d)`` (1-based only in JSON),
* subset labels: ``frozenset`` of template ports (tiling models),
* block labels: ``(block, inner_label)`` pairs (direct sums of models).
"""

from dataclasses import dataclass
from typing import Dict, Hashable, Iterable, Mapping, Optional, Tuple

import numpy as np

from hwm.core.exceptions import BasisMismatch, ModeOutOfRange, ShapeMismatch

Label = Hashable
Index = Tuple[Label, ...]

DEFAULT_TOLERANCE = 1e-8


def isclose(a: complex, b: complex, tol: float = DEFAULT_TOLERANCE) -> bool:
    """``|a - b| <= tol * max(1, |a|, |b|)``."""
    return abs(a - b) <= tol * max(1.0, abs(a), abs(b))


def label_family(label: Label) -> str:
    if isinstance(label, (int, np.integer)):
        return "dense"
    if isinstance(label, frozenset):
        return "subset"
    if isinstance(label, tuple) and len(label) == 2:
        return "block"
    raise BasisMismatch(f"Unsupported basis label {label!r}")


@dataclass(frozen=True, eq=False)
class SparseTensor:
    """
    Order-``k`` tensor as ``multi-index -> complex`` entries, zeros dropped.

    Args:
        order: Number of modes (0 for a scalar)
        entries: Mapping from ``order``-tuples of labels to values
    """

    order: int
    entries: Mapping[Index, complex]

    def __post_init__(self):
        cleaned: Dict[Index, complex] = {}
        for idx, value in self.entries.items():
            idx = tuple(int(i) if isinstance(i, np.integer) else i for i in idx)
            if len(idx) != self.order:
                raise ShapeMismatch(f"Index {idx!r} has {len(idx)} labels, tensor order is {self.order}")
            value = complex(value)
            if value != 0:
                cleaned[idx] = cleaned.get(idx, 0j) + value
        object.__setattr__(self, "entries", {k: v for k, v in cleaned.items() if v != 0})

    @classmethod
    def scalar(cls, value: complex) -> "SparseTensor":
        return cls(0, {(): value})

    @classmethod
    def from_dense(cls, array) -> "SparseTensor":
        """Wrap a numpy array; indices become 0-based ints."""
        array = np.asarray(array, dtype=complex)
        nz = np.argwhere(array != 0)
        return cls(array.ndim, {tuple(int(i) for i in idx): array[tuple(idx)] for idx in nz})

    @classmethod
    def pure(cls, labels: Iterable[Label], value: complex = 1.0) -> "SparseTensor":
        """The pure tensor ``value * e_l1 (x) ... (x) e_lk``."""
        labels = tuple(labels)
        return cls(len(labels), {labels: value})

    @property
    def nnz(self) -> int:
        return len(self.entries)

    def family(self) -> Optional[str]:
        """Label family of the stored entries, or None for a zero/scalar tensor."""
        for idx in self.entries:
            if idx:
                return label_family(idx[0])
        return None

    def is_dense_family(self) -> bool:
        return self.family() in (None, "dense")

    def max_dense_label(self) -> int:
        return max((max(idx) for idx in self.entries if idx), default=-1)

    def to_dense(self, dim: int) -> np.ndarray:
        if not self.is_dense_family():
            raise BasisMismatch("Only dense-labelled tensors have a dense array form")
        array = np.zeros((dim,) * self.order, dtype=complex)
        for idx, value in self.entries.items():
            array[idx] = value
        return array

    def scale(self, factor: complex) -> "SparseTensor":
        return SparseTensor(self.order, {k: v * factor for k, v in self.entries.items()})

    def map_labels(self, fn) -> "SparseTensor":
        """Apply ``fn`` to every label of every index."""
        out: Dict[Index, complex] = {}
        for idx, value in self.entries.items():
            key = tuple(fn(i) for i in idx)
            out[key] = out.get(key, 0j) + value
        return SparseTensor(self.order, out)

    def is_real(self, tol: float = DEFAULT_TOLERANCE) -> bool:
        return all(abs(v.imag) <= tol * max(1.0, abs(v)) for v in self.entries.values())

    def allclose(self, other: "SparseTensor", tol: float = DEFAULT_TOLERANCE) -> bool:
        if self.order != other.order:
            return False
        keys = set(self.entries) | set(other.entries)
        return all(isclose(self.entries.get(k, 0j), other.entries.get(k, 0j), tol) for k in keys)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, SparseTensor) and self.order == other.order and self.entries == other.entries

    def __repr__(self) -> str:
        return f"SparseTensor(order={self.order}, nnz={self.nnz})"


def tensor_product(a: SparseTensor, b: SparseTensor) -> SparseTensor:
    """
    Tensor product: ``(a (x) b)[i..., j...] = a[i...] * b[j...]``.

    Raises:
        BasisMismatch: when the operands use different label families
    """
    fa, fb = a.family(), b.family()
    if fa is not None and fb is not None and fa != fb:
        raise BasisMismatch(f"Cannot multiply a {fa}-labelled tensor with a {fb}-labelled tensor")
    return SparseTensor(
        a.order + b.order,
        {ia + ib: va * vb for ia, va in a.entries.items() for ib, vb in b.entries.items()},
    )


def mode_apply(q, t: SparseTensor, mode: int) -> SparseTensor:
    """
    Contract the matrix ``q`` (``d' x d``) against mode ``mode`` (0-based) of ``t``.

    ``out[..., r, ...] = sum_i q[r, i] * t[..., i, ...]``.

    Raises:
        ModeOutOfRange: mode outside ``[0, order)``
        ShapeMismatch: an index of ``t`` exceeds the column count of ``q``
    """
    q = np.asarray(q, dtype=complex)
    if q.ndim != 2:
        raise ShapeMismatch("q must be a matrix")
    if not 0 <= mode < t.order:
        raise ModeOutOfRange(f"Mode {mode} out of range for an order-{t.order} tensor")
    if not t.is_dense_family():
        raise BasisMismatch("mode_apply needs dense labels")
    out: Dict[Index, complex] = {}
    for idx, value in t.entries.items():
        column = idx[mode]
        if column >= q.shape[1]:
            raise ShapeMismatch(f"Index {column} exceeds the {q.shape[1]} columns of q")
        for row in np.flatnonzero(q[:, column]):
            key = idx[:mode] + (int(row),) + idx[mode + 1 :]
            out[key] = out.get(key, 0j) + q[row, column] * value
    return SparseTensor(t.order, out)


def mode_apply_all(q, t: SparseTensor) -> SparseTensor:
    """Apply ``q`` on every mode of ``t``."""
    for mode in range(t.order):
        t = mode_apply(q, t, mode)
    return t


def label_sort_key(label: Label):
    """Total order on labels that does not depend on hash seeds."""
    if isinstance(label, frozenset):
        return (1, tuple(sorted(label)))
    if isinstance(label, tuple):
        return (2, label[0], label_sort_key(label[1]))
    return (0, int(label))


def index_sort_key(idx: Index):
    return tuple(label_sort_key(label) for label in idx)
