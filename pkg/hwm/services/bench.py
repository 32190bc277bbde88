"""
Engine timings on seeded random instances (``hwm bench``).

Author: HWM Toolkit Team
Date: 2026
"""

import logging
import time
from dataclasses import asdict, dataclass
from typing import Dict, List, Optional

import numpy as np

from hwm.core.config import RunConfig, get_run_config
from hwm.core.exceptions import HWMError
from hwm.models.hypergraph import RankedAlphabet
from hwm.services import generators as gen
from hwm.services.engine import ENGINES

logger = logging.getLogger(__name__)


@dataclass
class BenchRow:
    engine: str
    instances: int
    seconds: float
    skipped: int

    @property
    def mean_ms(self) -> float:
        done = self.instances - self.skipped
        return 1000.0 * self.seconds / done if done else float("nan")


def run_bench(
    config: Optional[RunConfig] = None,
    instances: int = 20,
    dim: int = 2,
    num_vertices: int = 4,
    engines: Optional[List[str]] = None,
) -> List[BenchRow]:
    """
    Time every engine on the same random (model, graph) pairs.

    Instances an engine cannot handle (wrong algebra, exceeded budget) are
    counted as skipped.
    """
    config = config if config is not None else get_run_config()
    rng = np.random.default_rng(config.seed)
    alphabet = RankedAlphabet.from_mapping({"a": 1, "b": 2, "c": 3})
    pairs = [
        (
            gen.random_model(alphabet, dim, rng, kind="identity" if k % 2 == 0 else None),
            gen.random_hypergraph(alphabet, num_vertices, rng),
        )
        for k in range(instances)
    ]
    rows = []
    for name in engines or list(ENGINES):
        fn = ENGINES[name]
        skipped = 0
        start = time.perf_counter()
        for m, g in pairs:
            try:
                fn(m, g, config)
            except HWMError:
                skipped += 1
        rows.append(BenchRow(name, instances, time.perf_counter() - start, skipped))
        logger.info(f"✅ {name}: {rows[-1].mean_ms:.2f} ms per instance ({skipped} skipped)")
    return rows


def bench_payload(rows: List[BenchRow]) -> Dict[str, list]:
    return {"engines": [{**asdict(r), "mean_ms": r.mean_ms} for r in rows]}
