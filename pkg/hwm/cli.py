"""
Umbrella command line for the HWM toolkit (``python -m hwm``).

Every subcommand reads JSON documents from files (``-`` for standard
input) and writes canonical JSON to ``-o`` or standard output. Exit codes:
0 ok, 2 validation error, 3 budget exceeded, 4 schema error.

Author: HWM Toolkit Team
Date: 2026
"""

import argparse
import logging
import sys
from typing import Any, Dict, List, Optional

from hwm.core.config import configure_logging, get_run_config, get_settings
from hwm.core.exceptions import HWMError, HypergraphValidationError
from hwm.models.hypergraph import Hypergraph, graph_summary, is_connected
from hwm.models.representations import parse_tree
from hwm.models.schemas import (
    dumps,
    emit_graph,
    emit_model,
    parse_graph,
    parse_json,
    parse_matrices,
    parse_model,
    parse_string_rep,
    parse_tree_rep,
    value_to_payload,
)
from hwm.services.bench import bench_payload, run_bench
from hwm.services.closures import hwm_hadamard, hwm_sum, normalize_closed_graph, normalized_value, sum_applies
from hwm.services.crosswords import (
    Crossword,
    crossword_combine_hwm,
    crossword_oracle,
    crossword_row_col_hwm,
    crossword_split,
    encode_crossword,
)
from hwm.services.encodings import ENCODERS, encode_tree
from hwm.services.engine import ENGINES, component_values, evaluate_detailed
from hwm.services.linear_reps import (
    anbn_hwm,
    circular_trace_hwm,
    lift_string_series,
    lift_string_series_iota_eq_tau,
    lift_tree_series,
)
from hwm.services.selftest import run_selftest
from hwm.services.tiling import (
    find_tilings,
    finite_support_hwm,
    is_tiling_free,
    scaled_tiling_hwm,
    tiling_count,
    tiling_hwm,
)

logger = logging.getLogger(__name__)

QUICK_COUNTS = {
    "engine_agreement": 20,
    "string_lift": 20,
    "iota_tau_lift": 20,
    "tree_lift": 20,
    "circular_trace": 10,
    "closures": 20,
    "normalization": 10,
    "trace_lemma": 1000,
    "crossword": 5,
}


def _read(path: str) -> bytes:
    if path == "-":
        return sys.stdin.buffer.read()
    with open(path, "rb") as f:
        return f.read()


def _write(data: bytes, path: Optional[str]) -> None:
    if path is None or path == "-":
        sys.stdout.buffer.write(data)
        sys.stdout.flush()
    else:
        with open(path, "wb") as f:
            f.write(data)
        logger.info(f"✅ Wrote {path}")


def _config(args: argparse.Namespace):
    return get_run_config(
        engine=getattr(args, "engine", None),
        term_budget=getattr(args, "term_budget", None),
        intermediate_budget=getattr(args, "intermediate_budget", None),
        tolerance=getattr(args, "tolerance", None),
        workers=getattr(args, "workers", None),
        seed=args.seed,
    )


def _crossword(path: str) -> Crossword:
    try:
        text = _read(path).decode("utf-8")
    except UnicodeDecodeError as e:
        raise HypergraphValidationError(f"Crossword text {path} is not valid UTF-8: {e.reason}") from e
    return Crossword.from_text(text)


def _word(text: str, sep: Optional[str]) -> List[str]:
    if sep:
        return [s for s in text.split(sep) if s]
    return list(text)


# Commands


def cmd_validate(args: argparse.Namespace) -> Dict[str, Any]:
    data = _read(args.file)
    raw = parse_json(data)
    if isinstance(raw, dict) and "algebra" in raw:
        m = parse_model(data)
        return {"kind": "model", "ok": True, "algebra": m.algebra.kind, "dim": m.dim, "symbols": len(m.alphabet)}
    g = parse_graph(data)
    return {"kind": "graph", "ok": True, **graph_summary(g)}


def cmd_eval(args: argparse.Namespace) -> Dict[str, Any]:
    config = _config(args)
    m = parse_model(_read(args.model))
    g = parse_graph(_read(args.graph))
    result = evaluate_detailed(m, g, config=config)
    payload = {**value_to_payload(result.value, config.tolerance), "engine": result.engine, "terms": result.terms}
    if args.components or not is_connected(g):
        payload["components"] = [
            value_to_payload(v, config.tolerance) for _, v in component_values(m, g, config=config)
        ]
    return payload


def cmd_encode(args: argparse.Namespace) -> bytes:
    if args.kind == "tree":
        arities = parse_json(args.arities) if args.arities else None
        return emit_graph(encode_tree(parse_tree(args.word), arities))
    if args.kind == "crossword":
        return emit_graph(encode_crossword(_crossword(args.word)))
    return emit_graph(ENCODERS[args.kind](_word(args.word, args.sep)))


def cmd_lift(args: argparse.Namespace) -> bytes:
    if args.kind == "anbn":
        return emit_model(anbn_hwm())
    if args.input is None:
        raise HWMError(f"lift {args.kind} needs an input document")
    data = _read(args.input)
    if args.kind == "string":
        return emit_model(lift_string_series(parse_string_rep(data)))
    if args.kind == "iota-tau":
        return emit_model(lift_string_series_iota_eq_tau(parse_string_rep(data), seed=args.seed))
    if args.kind == "tree":
        return emit_model(lift_tree_series(parse_tree_rep(data)))
    return emit_model(circular_trace_hwm(parse_matrices(data)))


def cmd_sum(args: argparse.Namespace) -> bytes:
    out = hwm_sum(parse_model(_read(args.a)), parse_model(_read(args.b)))
    if args.graph:
        sum_applies(parse_graph(_read(args.graph)))
    return emit_model(out)


def cmd_hadamard(args: argparse.Namespace) -> bytes:
    return emit_model(hwm_hadamard(parse_model(_read(args.a)), parse_model(_read(args.b))))


def cmd_normalize(args: argparse.Namespace):
    m = parse_model(_read(args.model))
    normalized = normalize_closed_graph(m)
    if args.graph is None:
        return emit_model(normalized)
    config = _config(args)
    value = normalized_value(m, parse_graph(_read(args.graph)), config, normalized)
    return value_to_payload(value, config.tolerance)


def cmd_crossword(args: argparse.Namespace):
    if args.action == "combine":
        return emit_model(crossword_combine_hwm(parse_model(_read(args.inputs[0])), parse_model(_read(args.inputs[1]))))
    if args.action == "build":
        rep_a, rep_b = parse_string_rep(_read(args.inputs[0])), parse_string_rep(_read(args.inputs[1]))
        return emit_model(crossword_row_col_hwm(rep_a, rep_b, seed=args.seed))
    if args.action == "oracle":
        rep_a, rep_b = parse_string_rep(_read(args.inputs[0])), parse_string_rep(_read(args.inputs[1]))
        w = _crossword(args.inputs[2])
        return value_to_payload(crossword_oracle(rep_a, rep_b, w), _config(args).tolerance)
    horizontal, vertical = crossword_split(_crossword(args.inputs[0]))
    return {"horizontal": parse_json(emit_graph(horizontal)), "vertical": parse_json(emit_graph(vertical))}


def cmd_tiling(args: argparse.Namespace):
    config = _config(args)
    if args.action == "build":
        template = parse_graph(_read(args.inputs[0]))
        if args.value is None:
            return emit_model(tiling_hwm(template))
        return emit_model(scaled_tiling_hwm(template, complex(args.value), config=config))
    if args.action == "support":
        graphs = [parse_graph(_read(p)) for p in args.inputs]
        values = [complex(v) for v in (args.values or [])]
        if len(values) != len(graphs):
            raise HWMError("tiling support needs one --values entry per template")
        return emit_model(finite_support_hwm(list(zip(graphs, values)), config))
    if args.action == "free":
        result = is_tiling_free([parse_graph(_read(p)) for p in args.inputs])
        payload: Dict[str, Any] = {"free": result.free}
        if result.witness is not None:
            i, j, tmap = result.witness
            payload["witness"] = {"tiling": args.inputs[i], "template": args.inputs[j], "map": dict(tmap.pairs)}
        return payload
    g, template = parse_graph(_read(args.inputs[0])), parse_graph(_read(args.inputs[1]))
    if args.action == "count":
        return {**value_to_payload(tiling_count(g, template, config), config.tolerance)}
    report = find_tilings(g, template, limit=args.limit)
    return {
        "is_tiling": report.is_tiling,
        "maps": [dict(t.pairs) for t in report.maps],
        "fiber_sizes": dict(report.fiber_sizes),
    }


def cmd_selftest(args: argparse.Namespace) -> Dict[str, Any]:
    report = run_selftest(_config(args), QUICK_COUNTS if args.quick else None)
    args.failed = not report.passed
    return report.to_payload()


def cmd_bench(args: argparse.Namespace) -> Dict[str, Any]:
    rows = run_bench(_config(args), instances=args.instances, dim=args.dim, num_vertices=args.vertices)
    return bench_payload(rows)


# Parser


def _add_run_options(p: argparse.ArgumentParser, engine: bool = True) -> None:
    if engine:
        p.add_argument("--engine", choices=["auto", *ENGINES])
    p.add_argument("--term-budget", type=int)
    p.add_argument("--intermediate-budget", type=int)
    p.add_argument("--tolerance", type=float)
    p.add_argument("--workers", type=int)


def _add_model_graph(p: argparse.ArgumentParser, graph_required: bool) -> None:
    p.add_argument("model_pos", nargs="?", metavar="model", help="Model document (or --model)")
    p.add_argument("graph_pos", nargs="?", metavar="graph", help="Graph document (or --graph)")
    p.add_argument("--model", dest="model_flag", default=None)
    p.add_argument("--graph", dest="graph_flag", default=None)
    p.set_defaults(graph_required=graph_required)


def _resolve_model_graph(parser: argparse.ArgumentParser, args: argparse.Namespace) -> None:
    """Merge positional and flag forms of the model and graph paths."""
    if not hasattr(args, "model_flag"):
        return
    for name in ("model", "graph"):
        pos, flag = getattr(args, f"{name}_pos"), getattr(args, f"{name}_flag")
        if pos is not None and flag is not None:
            parser.error(f"{args.command}: give the {name} once, positionally or with --{name}")
        setattr(args, name, flag if flag is not None else pos)
    if args.model is None:
        parser.error(f"{args.command}: a model document is required")
    if args.graph_required and args.graph is None:
        parser.error(f"{args.command}: a graph document is required")


def build_parser() -> argparse.ArgumentParser:
    settings = get_settings()
    parser = argparse.ArgumentParser(prog="hwm", description="Hypergraph weighted models")
    parser.add_argument("--seed", type=int, default=None, help="Overrides HWM_SEED")
    parser.add_argument("--log-level", default=None, help=f"Defaults to LOG_LEVEL ({settings.LOG_LEVEL})")
    parser.add_argument("-o", "--output", default=None, help="Output file (default: stdout)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="Validate a graph or model document")
    p.add_argument("file")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("eval", help="Evaluate a model on a hypergraph")
    _add_model_graph(p, graph_required=True)
    p.add_argument("--components", action="store_true", help="Also report per-component values")
    _add_run_options(p)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("encode", help="Encode a word, tree or crossword as a hypergraph")
    p.add_argument("kind", choices=[*ENCODERS, "tree", "crossword"])
    p.add_argument("word", help="Word, tree s-expression, or crossword text file")
    p.add_argument("--sep", default=None, help="Symbol separator (default: one symbol per character)")
    p.add_argument("--arities", default=None, help='Tree alphabet as JSON, e.g. {"f": 2, "a": 0}')
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("lift", help="Lift a classical representation to a model")
    p.add_argument("kind", choices=["string", "iota-tau", "tree", "circular", "anbn"])
    p.add_argument("input", nargs="?")
    p.set_defaults(func=cmd_lift)

    p = sub.add_parser("sum", help="Model of r_A + r_B on connected graphs")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--graph", default=None, help="Warn when this graph is disconnected")
    p.set_defaults(func=cmd_sum)

    p = sub.add_parser("hadamard", help="Model of r_A * r_B")
    p.add_argument("a")
    p.add_argument("b")
    p.set_defaults(func=cmd_hadamard)

    p = sub.add_parser("normalize", help="Identity-product rewrite for all-binary graphs")
    _add_model_graph(p, graph_required=False)
    _add_run_options(p)
    p.set_defaults(func=cmd_normalize)

    p = sub.add_parser("crossword", help="Crossword split, combination and oracle")
    p.add_argument("action", choices=["split", "combine", "build", "oracle"])
    p.add_argument("inputs", nargs="+")
    p.add_argument("--tolerance", type=float)
    p.set_defaults(func=cmd_crossword)

    p = sub.add_parser("tiling", help="Tiling maps and tiling-indicator models")
    p.add_argument("action", choices=["build", "check", "count", "free", "support"])
    p.add_argument("inputs", nargs="+")
    p.add_argument("--value", type=complex, default=None, help="Target value on the template")
    p.add_argument("--values", type=complex, nargs="+", default=None, help="Per-template values for 'support'")
    p.add_argument("--limit", type=int, default=None)
    _add_run_options(p, engine=False)
    p.set_defaults(func=cmd_tiling)

    p = sub.add_parser("selftest", help="Run the acceptance suite")
    p.add_argument("--quick", action="store_true", help="Reduced instance counts")
    _add_run_options(p)
    p.set_defaults(func=cmd_selftest)

    p = sub.add_parser("bench", help="Time the engines on random instances")
    p.add_argument("--instances", type=int, default=20)
    p.add_argument("--dim", type=int, default=2)
    p.add_argument("--vertices", type=int, default=4)
    _add_run_options(p, engine=False)
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    _resolve_model_graph(parser, args)
    configure_logging(args.log_level)
    args.failed = False
    try:
        result = args.func(args)
    except HWMError as e:
        logger.error(f"❌ {type(e).__name__}: {e}")
        location = getattr(e, "location", None)
        error = {"error": type(e).__name__, "message": str(e)}
        if location is not None:
            error["location"] = location
        sys.stderr.write(dumps(error).decode("utf-8"))
        return e.exit_code
    _write(result if isinstance(result, bytes) else dumps(result), args.output)
    return 1 if args.failed else 0


if __name__ == "__main__":
    sys.exit(main())
