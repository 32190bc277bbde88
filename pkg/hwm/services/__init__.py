"""
Services Module

Evaluation engines, encodings, lifts, closures, crosswords, tilings and the
self-test suite.
"""

from .closures import hwm_hadamard, hwm_sum, normalize_closed_graph, normalized_value
from .crosswords import Crossword, crossword_combine_hwm, encode_crossword
from .encodings import (
    encode_anbn_graph,
    encode_circular,
    encode_rooted_circular,
    encode_string,
    encode_string_bare,
    encode_tree,
)
from .engine import EvaluationResult, evaluate, evaluate_detailed
from .linear_reps import lift_string_series, lift_string_series_iota_eq_tau, lift_tree_series
from .tiling import find_tilings, finite_support_hwm, scaled_tiling_hwm, tiling_hwm

__all__ = [
    # Evaluation
    "EvaluationResult",
    "evaluate",
    "evaluate_detailed",
    # Encodings
    "encode_string",
    "encode_string_bare",
    "encode_tree",
    "encode_circular",
    "encode_rooted_circular",
    "encode_anbn_graph",
    # Lifts
    "lift_string_series",
    "lift_string_series_iota_eq_tau",
    "lift_tree_series",
    # Closures
    "hwm_sum",
    "hwm_hadamard",
    "normalize_closed_graph",
    "normalized_value",
    # Crosswords
    "Crossword",
    "crossword_combine_hwm",
    "encode_crossword",
    # Tilings
    "find_tilings",
    "tiling_hwm",
    "scaled_tiling_hwm",
    "finite_support_hwm",
]
