"""
Property-based acceptance suite run by ``hwm selftest``.

Each criterion draws seeded random instances, compares two independent
computations of the same quantity and records the worst deviation it saw.
Failures, including exceeded budgets, become report entries; nothing is
raised to the caller.

Author: HWM Toolkit Team
Date: 2026
"""

import itertools
import logging
import time
from dataclasses import asdict, dataclass, field
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np

from hwm.core.config import RunConfig, get_run_config
from hwm.core.exceptions import HWMError
from hwm.models.hypergraph import RankedAlphabet
from hwm.models.representations import Tree
from hwm.models.tensors import isclose
from hwm.services import generators as gen
from hwm.services.closures import hwm_hadamard, hwm_sum, normalize_closed_graph, normalized_value
from hwm.services.crosswords import (
    crossword_combine_hwm,
    crossword_oracle,
    crossword_split,
    encode_crossword,
    random_crossword,
)
from hwm.services.encodings import (
    encode_anbn_graph,
    encode_circular,
    encode_string,
    encode_string_bare,
    encode_tree,
)
from hwm.services.engine import (
    eval_factored,
    eval_gamma_id,
    eval_naive,
    eval_support_restricted,
    evaluate,
    gamma_id_applies,
)
from hwm.services.linear_reps import (
    anbn_hwm,
    circular_trace_hwm,
    lift_string_series,
    lift_string_series_iota_eq_tau,
    lift_tree_series,
    string_series_eval,
    trace_lemma_harness,
    tree_oracle_mu,
)
from hwm.services.tiling import finite_support_hwm, tiling_count, tiling_sweep

logger = logging.getLogger(__name__)

# instance counts at full size
DEFAULT_COUNTS: Dict[str, int] = {
    "engine_agreement": 200,
    "string_lift": 100,
    "iota_tau_lift": 100,
    "tree_lift": 100,
    "circular_trace": 50,
    "closures": 100,
    "normalization": 50,
    "trace_lemma": 10_000,
    "crossword": 30,
}


@dataclass
class CriterionResult:
    """One acceptance criterion: pass flag, worst measured deviation and its tolerance."""

    name: str
    passed: bool
    measured: float = 0.0
    tolerance: float = 0.0
    instances: int = 0
    seconds: float = 0.0
    detail: str = ""


@dataclass
class SelfTestReport:
    seed: int
    criteria: List[CriterionResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.criteria)

    def to_payload(self) -> dict:
        return {"seed": self.seed, "passed": self.passed, "criteria": [asdict(c) for c in self.criteria]}


class _Worst:
    """Running maximum of relative deviations."""

    def __init__(self, tol: float):
        self.tol = tol
        self.value = 0.0
        self.count = 0
        self.failures = 0

    def add(self, got: complex, expected: complex) -> None:
        self.count += 1
        deviation = abs(got - expected) / max(1.0, abs(got), abs(expected))
        self.value = max(self.value, deviation)
        if not isclose(got, expected, self.tol):
            self.failures += 1

    @property
    def ok(self) -> bool:
        return self.failures == 0


def _criterion(name: str, tol: float, body: Callable[[], Tuple[_Worst, str]]) -> CriterionResult:
    start = time.perf_counter()
    try:
        worst, detail = body()
        result = CriterionResult(name, worst.ok, worst.value, tol, worst.count, detail=detail)
    except HWMError as e:
        logger.error(f"❌ {name}: {type(e).__name__}: {e}")
        result = CriterionResult(name, False, float("nan"), tol, detail=f"{type(e).__name__}: {e}")
    result.seconds = round(time.perf_counter() - start, 3)
    marker = "✅" if result.passed else "❌"
    logger.info(f"{marker} {name}: measured={result.measured:.3g} tol={tol:g} n={result.instances}")
    return result


# Criteria


def engine_agreement(config: RunConfig, n: int, rng: np.random.Generator) -> Tuple[_Worst, str]:
    worst = _Worst(config.tolerance)
    alphabet = RankedAlphabet.from_mapping({"a": 1, "b": 2, "c": 3})
    gamma_checked = 0
    for _ in range(n):
        d = int(rng.integers(1, 4))
        m = gen.random_model(alphabet, d, rng, complex_entries=bool(rng.integers(2)))
        g = gen.random_hypergraph(alphabet, int(rng.integers(1, 5)), rng, max_ports=8)
        reference = eval_naive(m, g, config).value
        worst.add(eval_factored(m, g, config).value, reference)
        worst.add(eval_factored(m, g, config, order="sequential").value, reference)
        worst.add(eval_support_restricted(m, g, config).value, reference)
        if gamma_id_applies(m, config.tolerance):
            worst.add(eval_gamma_id(m, g, config).value, reference)
            gamma_checked += 1
    return worst, f"gamma_id compared on {gamma_checked} identity models"


def string_lift(config: RunConfig, n: int, rng: np.random.Generator) -> Tuple[_Worst, str]:
    worst = _Worst(config.tolerance)
    symbols = ["a", "b"]
    for _ in range(n):
        rep = gen.random_string_rep(symbols, int(rng.integers(1, 5)), rng)
        m = lift_string_series(rep)
        w = gen.random_word(symbols, 6, rng)
        worst.add(evaluate(m, encode_string(w), config=config), string_series_eval(rep, w))
    return worst, "r_M(G_w) against iota^T M_w tau"


def iota_tau_lift(config: RunConfig, n: int, rng: np.random.Generator) -> Tuple[_Worst, str]:
    worst = _Worst(config.tolerance)
    symbols = ["a", "b"]
    for k in range(n):
        rep = gen.random_string_rep(symbols, int(rng.integers(1, 5)), rng)
        m = lift_string_series_iota_eq_tau(rep, seed=config.seed + k)
        w = gen.random_word(symbols, 6, rng, min_length=1)
        worst.add(evaluate(m, encode_string_bare(w), config=config), string_series_eval(rep, w))
    return worst, "r_M(H_w) against iota^T M_w tau"


TREE_ARITIES = {"f": 2, "g": 1, "a": 0, "b": 0}


def tree_lift(config: RunConfig, n: int, rng: np.random.Generator) -> Tuple[_Worst, str]:
    worst = _Worst(config.tolerance)
    for _ in range(n):
        rep = gen.random_tree_rep(TREE_ARITIES, int(rng.integers(1, 4)), rng)
        m = lift_tree_series(rep)
        t = gen.random_tree(TREE_ARITIES, 8, rng)
        worst.add(evaluate(m, encode_tree(t, TREE_ARITIES), config=config), tree_oracle_mu(rep, t))
    return worst, "r_M(G^t) against lambda^T mu(t)"


def circular_trace(config: RunConfig, n: int, rng: np.random.Generator) -> Tuple[_Worst, str]:
    worst = _Worst(config.tolerance)
    symbols = ["a", "b", "c"]
    for _ in range(n):
        matrices = gen.random_matrices(symbols, int(rng.integers(1, 5)), rng)
        m = circular_trace_hwm(matrices)
        w = gen.random_word(symbols, 6, rng, min_length=1)
        product = np.eye(m.dim)
        for s in w:
            product = product @ matrices[s]
        value = evaluate(m, encode_circular(w), config=config)
        worst.add(value, complex(np.trace(product)))
        shift = int(rng.integers(len(w)))
        worst.add(evaluate(m, encode_circular(w[shift:] + w[:shift]), config=config), value)
    return worst, "trace of the matrix product and rotation invariance"


def closures(config: RunConfig, n: int, rng: np.random.Generator) -> Tuple[_Worst, str]:
    worst = _Worst(config.tolerance)
    alphabet = RankedAlphabet.from_mapping({"a": 1, "b": 2, "c": 3})
    for _ in range(n):
        a = gen.random_model(alphabet, int(rng.integers(1, 3)), rng)
        b = gen.random_model(alphabet, int(rng.integers(1, 3)), rng)
        connected = gen.random_hypergraph(alphabet, int(rng.integers(1, 5)), rng, connected=True, max_ports=8)
        worst.add(
            evaluate(hwm_sum(a, b), connected, config=config),
            evaluate(a, connected, config=config) + evaluate(b, connected, config=config),
        )
        g = gen.random_hypergraph(alphabet, int(rng.integers(1, 5)), rng, max_ports=8)
        worst.add(
            evaluate(hwm_hadamard(a, b), g, config=config),
            evaluate(a, g, config=config) * evaluate(b, g, config=config),
        )
    return worst, "sum on connected graphs and Hadamard product on all graphs"


def normalization(config: RunConfig, n: int, rng: np.random.Generator) -> Tuple[_Worst, str]:
    tol = 10 * config.tolerance
    worst = _Worst(tol)
    alphabet = RankedAlphabet.from_mapping({"a": 1, "b": 2, "c": 3})
    for _ in range(n):
        m = gen.random_model(alphabet, int(rng.integers(1, 4)), rng)
        normalized = normalize_closed_graph(m)
        g = gen.random_binary_hypergraph(alphabet, int(rng.integers(2, 5)), rng)
        worst.add(normalized_value(m, g, config, normalized), evaluate(m, g, config=config))
    return worst, "identity-product rewrite on all-binary graphs"


def trace_lemma(config: RunConfig, n: int, rng: np.random.Generator) -> Tuple[_Worst, str]:
    worst = _Worst(config.tolerance)
    report = trace_lemma_harness(n, max_dim=6, seed=config.seed, tol=config.tolerance / 10)
    worst.count = report.trials
    worst.failures = report.violations
    worst.value = float(report.violations)
    return worst, f"premise held on {report.premise_true} of {report.trials} matrices"


def tiling_theorem(config: RunConfig, rng: np.random.Generator) -> Tuple[_Worst, str]:
    worst = _Worst(config.tolerance)
    report = tiling_sweep(RankedAlphabet.from_mapping({"a": 1, "b": 2}), config=config)
    worst.count = report.pairs
    bad = (
        len(report.theorem_mismatches)
        + len(report.count_mismatches)
        + len(report.fiber_violations)
        + len(report.quotient_violations)
    )
    worst.failures = bad
    worst.value = float(bad)
    return worst, f"{report.tilings} tiling pairs among {report.pairs}"


FAMILY = [
    Tree("a"),
    Tree("g", (Tree("a"),)),
    Tree("f", (Tree("a"), Tree("a"))),
    Tree("g", (Tree("g", (Tree("a"),)),)),
    Tree("f", (Tree("g", (Tree("a"),)), Tree("a"))),
]
OUTSIDE = [Tree("g", (Tree("f", (Tree("a"), Tree("a"))),)), Tree("f", (Tree("a"), Tree("g", (Tree("a"),))))]
PRIMES = (2, 3, 5, 7, 11)


def non_recognizability(config: RunConfig, rng: np.random.Generator) -> Tuple[_Worst, str]:
    worst = _Worst(config.tolerance)
    obstruction = tiling_count(encode_circular("abab"), encode_circular("ab"), config)
    worst.add(obstruction, 1)
    arities = {"f": 2, "g": 1, "a": 0}
    m = finite_support_hwm([(encode_tree(t, arities), y) for t, y in zip(FAMILY, PRIMES)], config)
    for t, y in zip(FAMILY, PRIMES):
        worst.add(evaluate(m, encode_tree(t, arities), config=config), y)
    for t in OUTSIDE:
        worst.add(evaluate(m, encode_tree(t, arities), config=config), 0)
    return worst, f"circular ab tiles circular abab {obstruction.real:g} times"


ANBN_SUPPORT = {"ab", "aabb", "aaabbb", "aaaabbbb"}


def anbn(config: RunConfig, rng: np.random.Generator) -> Tuple[_Worst, str]:
    worst = _Worst(config.tolerance)
    m = anbn_hwm()
    support = set()
    for length in range(2, 9, 2):
        for letters in itertools.product("ab", repeat=length):
            w = "".join(letters)
            value = evaluate(m, encode_anbn_graph(w), config=config)
            worst.add(value, 1 if w in ANBN_SUPPORT else 0)
            if abs(value) > 0.5:
                support.add(w)
    if support != ANBN_SUPPORT:
        worst.failures += 1
    return worst, f"support {sorted(support, key=len)}"


def crossword(config: RunConfig, n: int, rng: np.random.Generator) -> Tuple[_Worst, str]:
    worst = _Worst(config.tolerance)
    symbols = ["a", "b"]
    for k in range(n):
        rep_a = gen.random_string_rep(symbols, int(rng.integers(1, 3)), rng)
        rep_b = gen.random_string_rep(symbols, int(rng.integers(1, 3)), rng)
        a = lift_string_series_iota_eq_tau(rep_a, seed=config.seed + k)
        b = lift_string_series_iota_eq_tau(rep_b, seed=config.seed + k)
        c = crossword_combine_hwm(a, b)
        w = random_crossword(int(rng.integers(1, 4)), int(rng.integers(1, 4)), symbols, rng)
        value = evaluate(c, encode_crossword(w), config=config)
        horizontal, vertical = crossword_split(w)
        worst.add(value, evaluate(a, horizontal, config=config) * evaluate(b, vertical, config=config))
        worst.add(value, crossword_oracle(rep_a, rep_b, w))
    return worst, "factorization and row/column oracle"


def run_selftest(config: Optional[RunConfig] = None, counts: Optional[Dict[str, int]] = None) -> SelfTestReport:
    """
    Run every acceptance criterion with the configured seed.

    Args:
        config: Run configuration; defaults from settings
        counts: Per-criterion instance counts overriding :data:`DEFAULT_COUNTS`

    Returns:
        SelfTestReport: one entry per criterion
    """
    config = config if config is not None else get_run_config()
    counts = {**DEFAULT_COUNTS, **(counts or {})}
    report = SelfTestReport(seed=config.seed)
    tol = config.tolerance

    def rng(offset: int) -> np.random.Generator:
        return np.random.default_rng([config.seed, offset])

    sized = [
        ("engine_agreement", tol, engine_agreement),
        ("string_lift", tol, string_lift),
        ("iota_tau_lift", tol, iota_tau_lift),
        ("tree_lift", tol, tree_lift),
        ("circular_trace", tol, circular_trace),
        ("closures", tol, closures),
        ("normalization", 10 * tol, normalization),
        ("trace_lemma", tol / 10, trace_lemma),
    ]
    for offset, (name, criterion_tol, fn) in enumerate(sized):
        report.criteria.append(
            _criterion(name, criterion_tol, lambda fn=fn, name=name, offset=offset: fn(config, counts[name], rng(offset)))
        )
    fixed = [
        ("tiling_theorem", tiling_theorem),
        ("non_recognizability", non_recognizability),
        ("anbn", anbn),
    ]
    for offset, (name, fn) in enumerate(fixed, start=len(sized)):
        report.criteria.append(_criterion(name, tol, lambda fn=fn, offset=offset: fn(config, rng(offset))))
    report.criteria.append(
        _criterion("crossword", tol, lambda: crossword(config, counts["crossword"], rng(len(sized) + len(fixed))))
    )
    status = "✅ all criteria passed" if report.passed else "❌ some criteria failed"
    logger.info(f"{status} (seed={config.seed})")
    return report
