"""
Lifting classical linear representations into HWMs, and their oracles.

Each ``lift_*`` function turns a string or tree representation into a model
whose value on the matching graph encoding equals the classical series;
``string_series_eval`` and ``tree_oracle_mu`` compute the classical side
directly and serve as the independent check. The module also carries the
trace lemma verifier behind the circular-string argument.

Author: HWM Toolkit Team
Date: 2026
"""

import logging
from dataclasses import dataclass, field
from typing import Mapping, Optional, Sequence, Tuple

import numpy as np
from scipy.stats import ortho_group

from hwm.core.config import get_settings
from hwm.core.exceptions import DegenerateRep, DimensionMismatch, InvalidTree, NotReal, NotSquare, UnknownSymbol
from hwm.models.algebra import DiagScaledAlgebra, IdentityAlgebra, TableAlgebra
from hwm.models.hwm import HWM, create_hwm
from hwm.models.representations import (
    IOTA,
    LAMBDA,
    TAU,
    StringLinearRep,
    Tree,
    TreeLinearRep,
    Word,
    as_symbols,
)
from hwm.models.tensors import SparseTensor

logger = logging.getLogger(__name__)


# Classical oracles


def string_series_eval(rep: StringLinearRep, w: Word) -> complex:
    """
    ``ιᵀ M_{w_1} ... M_{w_n} τ``; the empty word gives ``ιᵀτ``.

    Raises:
        UnknownSymbol: a letter has no matrix
    """
    row = rep.iota
    for symbol in as_symbols(w):
        row = row @ rep.matrix(symbol)
    return complex(row @ rep.tau)


def _mu(rep: TreeLinearRep, t: Tree) -> np.ndarray:
    if t.symbol not in rep.mu:
        raise UnknownSymbol(f"Tree representation has no tensor for '{t.symbol}'")
    tensor = rep.mu[t.symbol]
    if tensor.ndim != len(t.children) + 1:
        raise InvalidTree(f"'{t.symbol}' has {tensor.ndim - 1} arguments in the representation, {len(t.children)} in the tree")
    for child in reversed(t.children):
        tensor = tensor @ _mu(rep, child)
    return tensor


def tree_oracle_mu(rep: TreeLinearRep, t: Tree) -> complex:
    """``λᵀ μ(t)`` with ``μ(f(t_1..t_p)) = μ(f)(μ(t_1), ..., μ(t_p))``."""
    return complex(rep.lam @ _mu(rep, t))


# Lifts


def _vector(v: np.ndarray) -> SparseTensor:
    return SparseTensor.from_dense(v)


def lift_string_series(rep: StringLinearRep) -> HWM:
    """Identity-product model with ``T^ι = ι``, ``T^τ = τ`` and ``T^σ = M_σ``."""
    tensors = {IOTA: _vector(rep.iota), TAU: _vector(rep.tau)}
    tensors.update({s: SparseTensor.from_dense(m) for s, m in rep.matrices.items()})
    m = create_hwm(IdentityAlgebra(rep.dim), tensors)
    logger.info(f"✅ Lifted string representation of dimension {rep.dim}")
    return m


def _candidate_bases(d: int, retries: int, rng: np.random.Generator):
    yield np.eye(d)
    if d == 1:
        return
    for _ in range(retries):
        yield ortho_group.rvs(d, random_state=rng)


def lift_string_series_iota_eq_tau(
    rep: StringLinearRep, seed: Optional[int] = None, tol: float = 1e-8
) -> HWM:
    """
    Complex model evaluating a real string series on bare graphs ``H_w``.

    The basis is rotated (identity first, then seeded random orthogonal
    matrices) until every coordinate of ``ι'`` and ``τ'`` is nonzero. With
    ``D = diag(sqrt(τ'_i) / sqrt(ι'_i))`` the initial and final vectors both
    become ``α = D ι' = D^{-1} τ'``, the matrices become ``D^{-1} M' D``, and
    the product is ``e_i ⊙ e_j = δ_ij e_i / α_i``.

    Args:
        rep: Real representation
        seed: Seed for the basis search; defaults to ``HWM_SEED``
        tol: Tolerance of the ``D ι' = D^{-1} τ'`` consistency check

    Raises:
        NotReal: the representation has complex entries
        DegenerateRep: no basis with nonzero coordinates was found
    """
    if not rep.is_real():
        raise NotReal("The iota=tau lift needs a real representation")
    settings = get_settings()
    seed = settings.HWM_SEED if seed is None else seed
    threshold = settings.HWM_NONZERO_THRESHOLD
    rng = np.random.default_rng(seed)
    iota, tau = rep.iota.real, rep.tau.real
    for attempt, q in enumerate(_candidate_bases(rep.dim, settings.HWM_BASIS_RETRIES, rng)):
        iota_p, tau_p = q.T @ iota, q.T @ tau
        if np.all(np.abs(iota_p) > threshold) and np.all(np.abs(tau_p) > threshold):
            break
        if attempt:
            logger.debug(f"⚠️ Basis attempt {attempt} left a coordinate below {threshold}")
    else:
        raise DegenerateRep(f"No basis with nonzero iota/tau coordinates after {settings.HWM_BASIS_RETRIES} retries")
    if attempt:
        logger.warning(f"⚠️ iota=tau lift needed {attempt} random basis change(s)")

    d_diag = np.sqrt(tau_p.astype(complex)) / np.sqrt(iota_p.astype(complex))
    alpha = d_diag * iota_p
    check = tau_p / d_diag
    if not np.allclose(alpha, check, rtol=tol, atol=tol):
        raise DegenerateRep("D iota' and D^-1 tau' disagree")
    scale = d_diag[None, :] / d_diag[:, None]
    tensors = {s: SparseTensor.from_dense((q.T @ m.real @ q) * scale) for s, m in rep.matrices.items()}
    m = create_hwm(DiagScaledAlgebra(rep.dim, 1.0 / alpha, alpha), tensors)
    logger.info(f"✅ Built iota=tau model of dimension {rep.dim}")
    return m


def lift_tree_series(rep: TreeLinearRep) -> HWM:
    """Identity-product model with ``T^λ = λ`` and ``T^f = μ(f)`` (parent index first)."""
    tensors = {LAMBDA: _vector(rep.lam)}
    tensors.update({f: SparseTensor.from_dense(t) for f, t in rep.mu.items()})
    m = create_hwm(IdentityAlgebra(rep.dim), tensors)
    logger.info(f"✅ Lifted tree representation of dimension {rep.dim}")
    return m


def circular_trace_hwm(matrices: Mapping[str, np.ndarray]) -> HWM:
    """Identity-product model whose value on a circular string is ``Tr(M_{w_1} ... M_{w_n})``."""
    arrays = {s: np.asarray(m, dtype=complex) for s, m in matrices.items()}
    dims = {m.shape for m in arrays.values()}
    if len(dims) != 1:
        raise DimensionMismatch(f"Matrices have different shapes {sorted(dims)}")
    shape = dims.pop()
    if len(shape) != 2 or shape[0] != shape[1]:
        raise NotSquare(f"Matrices of shape {shape} are not square")
    return create_hwm(IdentityAlgebra(shape[0]), {s: SparseTensor.from_dense(m) for s, m in arrays.items()})


def rooted_circular_hwm(
    pairs: Sequence[Tuple[np.ndarray, np.ndarray]], matrices: Mapping[str, np.ndarray]
) -> HWM:
    """
    Model on rooted circular strings computing ``Σ_i ι_iᵀ M_{w_1} ... M_{w_n} τ_i``.

    The root tensor is ``T^λ = Σ_i τ_i ι_iᵀ`` because the cycle contracts to
    ``Tr(T^λ M_{w_1} ... M_{w_n})``.

    Raises:
        DimensionMismatch: vectors and matrices disagree in size
    """
    if not pairs:
        raise DimensionMismatch("At least one (iota, tau) pair is required")
    base = circular_trace_hwm(matrices) if matrices else None
    d = base.dim if base is not None else np.asarray(pairs[0][0]).shape[0]
    root = np.zeros((d, d), dtype=complex)
    for iota, tau in pairs:
        iota = np.asarray(iota, dtype=complex).reshape(-1)
        tau = np.asarray(tau, dtype=complex).reshape(-1)
        if iota.shape[0] != d or tau.shape[0] != d:
            raise DimensionMismatch(f"Vectors of size {iota.shape[0]}/{tau.shape[0]}, dimension is {d}")
        root += np.outer(tau, iota)
    tensors = {LAMBDA: SparseTensor.from_dense(root)}
    tensors.update({s: SparseTensor.from_dense(np.asarray(m, dtype=complex)) for s, m in matrices.items()})
    return create_hwm(IdentityAlgebra(d), tensors)


# basis of the a^n b^n model
S1, S2, PA, PB, SINK = range(5)


def anbn_hwm() -> HWM:
    """
    Five-dimensional model that is nonzero (and equal to 1) exactly on 3-ary graphs of ``a^n b^n``.

    ``e_i ⊙ e_j = B_ij e_sink`` with ``B`` matching equal chain states and
    the two pairing tags; ``α`` reads the sink. Letters carry
    ``(in, out, pair)`` indices: ``a`` keeps state 1, ``b`` moves to or
    stays in state 2.
    """
    d = 5
    c = np.zeros((d, d, d))
    for i, j in ((S1, S1), (S2, S2), (PA, PB), (PB, PA)):
        c[i, j, SINK] = 1.0
    alpha = np.zeros(d)
    alpha[SINK] = 1.0
    tensors = {
        IOTA: SparseTensor.pure([S1]),
        TAU: SparseTensor.pure([S2]),
        "a": SparseTensor.pure([S1, S1, PA]),
        "b": SparseTensor(3, {(S1, S2, PB): 1.0, (S2, S2, PB): 1.0}),
    }
    return create_hwm(TableAlgebra(d, c, alpha), tensors)


# Trace lemma


@dataclass(frozen=True)
class TraceLemmaResult:
    premise_holds: bool
    conclusion_holds: bool
    traces: Tuple[complex, ...] = ()


def check_trace_lemma(m, kmax: Optional[int] = None, tol: float = 1e-8) -> TraceLemmaResult:
    """
    Test ``Tr(M^k) = 0`` for ``k = 2..kmax`` and, when it holds, ``Tr(M) = 0``.

    Args:
        m: Square matrix
        kmax: Highest power; defaults to ``dim + 1``
        tol: Premise tolerance relative to ``max(1, ||M||_F)``; the conclusion allows 100x

    Raises:
        NotSquare: ``m`` is not square
    """
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise NotSquare(f"Matrix of shape {m.shape} is not square")
    kmax = m.shape[0] + 1 if kmax is None else kmax
    scale = max(1.0, float(np.linalg.norm(m)))
    traces = []
    power = m.copy()
    for _ in range(2, kmax + 1):
        power = power @ m
        traces.append(complex(np.trace(power)))
    premise = all(abs(t) <= tol * scale for t in traces)
    conclusion = abs(complex(np.trace(m))) <= 100 * tol * scale
    return TraceLemmaResult(premise, conclusion, tuple(traces))


@dataclass
class TraceLemmaReport:
    trials: int = 0
    premise_true: int = 0
    violations: int = 0
    by_kind: dict = field(default_factory=dict)


def _trace_lemma_sample(kind: str, d: int, rng: np.random.Generator) -> np.ndarray:
    if kind == "dense":
        return rng.standard_normal((d, d))
    upper = np.triu(rng.standard_normal((d, d)), k=1)
    if kind == "upper":
        return upper
    q = ortho_group.rvs(d, random_state=rng) if d > 1 else np.eye(1)
    return q @ upper @ q.T


def trace_lemma_harness(n: int = 10_000, max_dim: int = 6, seed: int = 0, tol: float = 1e-8) -> TraceLemmaReport:
    """
    Falsification run of the trace lemma on random dense, strictly upper
    triangular and orthogonally conjugated nilpotent matrices.

    A violation is a matrix for which the premise holds but the conclusion fails.
    """
    rng = np.random.default_rng(seed)
    report = TraceLemmaReport()
    kinds = ("dense", "upper", "conjugated")
    for trial in range(n):
        kind = kinds[trial % len(kinds)]
        d = int(rng.integers(1, max_dim + 1))
        result = check_trace_lemma(_trace_lemma_sample(kind, d, rng), tol=tol)
        report.trials += 1
        stats = report.by_kind.setdefault(kind, {"trials": 0, "premise_true": 0})
        stats["trials"] += 1
        if result.premise_holds:
            report.premise_true += 1
            stats["premise_true"] += 1
            if not result.conclusion_holds:
                report.violations += 1
    if report.violations:
        logger.warning(f"⚠️ Trace lemma harness found {report.violations} violations")
    return report
