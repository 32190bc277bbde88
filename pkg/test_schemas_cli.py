"""
Tests for the JSON documents and the ``hwm`` command line.

Author: HWM Toolkit Team
Date: 2026
"""

import json

import numpy as np
import pytest

from hwm.cli import main
from hwm.core.config import get_run_config, get_settings
from hwm.core.exceptions import NotSymmetric, SchemaError
from hwm.models.hypergraph import RankedAlphabet, are_isomorphic
from hwm.models.schemas import (
    emit_graph,
    emit_model,
    parse_graph,
    parse_model,
    parse_string_rep,
    parse_tree_rep,
    value_to_payload,
)
from hwm.models.tensors import isclose
from hwm.services import generators as gen
from hwm.services.encodings import encode_circular, encode_string
from hwm.services.engine import evaluate
from hwm.services.linear_reps import lift_string_series
from hwm.services.selftest import run_selftest
from hwm.services.tiling import tiling_hwm

EXAMPLE_ALPHABET = RankedAlphabet.from_mapping({"a": 3, "b": 2})


def _write(path, data) -> str:
    path.write_bytes(data if isinstance(data, bytes) else data.encode("utf-8"))
    return str(path)


class TestDocuments:
    @pytest.mark.parametrize("kind", ["identity", "diag_scaled", "table"])
    def test_model_round_trip_is_byte_identical(self, example_graph, rng, kind):
        m = gen.random_model(EXAMPLE_ALPHABET, 2, rng, kind=kind, complex_entries=True)
        first = emit_model(m)
        again = parse_model(first)
        assert emit_model(again) == first
        assert isclose(evaluate(again, example_graph), evaluate(m, example_graph), 1e-12)

    def test_subset_model_round_trip(self, example_graph):
        first = emit_model(tiling_hwm(example_graph))
        assert emit_model(parse_model(first)) == first

    def test_graph_round_trip(self, rng):
        for _ in range(5):
            g = gen.random_hypergraph(EXAMPLE_ALPHABET, int(rng.integers(1, 5)), rng)
            first = emit_graph(g)
            back = parse_graph(first)
            assert emit_graph(back) == first
            assert are_isomorphic(back, g)

    def test_truncated_document(self, example_graph):
        data = emit_graph(example_graph)
        with pytest.raises(SchemaError):
            parse_graph(data[: len(data) // 2])

    def test_unknown_field_has_location(self, example_graph):
        doc = json.loads(emit_graph(example_graph))
        doc["vertices"][0]["colour"] = "red"
        with pytest.raises(SchemaError) as info:
            parse_graph(json.dumps(doc))
        assert info.value.location.startswith("/vertices/0")

    def test_index_out_of_range(self, rng):
        doc = json.loads(emit_model(gen.random_model(EXAMPLE_ALPHABET, 2, rng, kind="identity")))
        doc["tensors"]["b"]["entries"][0]["idx"] = [3, 1]
        with pytest.raises(SchemaError) as info:
            parse_model(json.dumps(doc))
        assert info.value.location == "/tensors/b/entries/0/idx"

    def test_non_symmetric_table(self):
        doc = {
            "version": 1,
            "alphabet": {"a": 1},
            "algebra": {
                "kind": "table",
                "dim": 2,
                "coefficients": [{"idx": [1, 2, 1], "re": 1.0}],
                "alpha": [{"re": 1.0}, {"re": 1.0}],
            },
            "tensors": {"a": {"order": 1, "entries": [{"idx": [1], "re": 1.0}]}},
        }
        with pytest.raises(NotSymmetric) as info:
            parse_model(json.dumps(doc))
        assert info.value.indices == (1, 2, 1)

    def test_string_rep_document(self):
        rep = parse_string_rep('{"d": 1, "iota": [1], "tau": [1], "matrices": {"a": [[2]]}}')
        assert isclose(evaluate(lift_string_series(rep), encode_string("aa")), 4)
        with pytest.raises(SchemaError):
            parse_string_rep('{"d": 2, "iota": [1], "tau": [1], "matrices": {}}')

    def test_tree_rep_document(self):
        rep = parse_tree_rep('{"lambda": [1, 0], "mu": {"a": [1, 1]}}')
        assert rep.dim == 2
        assert rep.arities == {"a": 0}

    def test_display_value(self):
        assert value_to_payload(2 + 1e-14j, 1e-8)["display"] == 2.0
        assert value_to_payload(2 + 1j, 1e-8)["value"] == {"re": 2.0, "im": 1.0}


class TestCommandLine:
    def test_encode_string(self, capsys):
        assert main(["encode", "string", "ab"]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert len(doc["vertices"]) == 4
        assert len(doc["hyperedges"]) == 3

    def test_eval_counting_rep(self, tmp_path, capsys, counting_rep):
        model = _write(tmp_path / "m.json", emit_model(lift_string_series(counting_rep)))
        graph = _write(tmp_path / "g.json", emit_graph(encode_string("aaba")))
        assert main(["eval", model, graph]) == 0
        out = json.loads(capsys.readouterr().out)
        assert out["display"] == pytest.approx(3.0)
        assert out["engine"] == "gamma_id"

    def test_eval_with_model_and_graph_flags(self, tmp_path, capsys, counting_rep):
        model = _write(tmp_path / "m.json", emit_model(lift_string_series(counting_rep)))
        graph = _write(tmp_path / "g.json", emit_graph(encode_string("aaba")))
        assert main(["eval", "--model", model, "--graph", graph]) == 0
        assert json.loads(capsys.readouterr().out)["display"] == pytest.approx(3.0)
        assert main(["eval", model, "--graph", graph]) == 0

    def test_eval_rejects_a_path_given_twice(self, tmp_path, counting_rep):
        model = _write(tmp_path / "m.json", emit_model(lift_string_series(counting_rep)))
        with pytest.raises(SystemExit) as info:
            main(["eval", model, "--model", model, "--graph", model])
        assert info.value.code == 2
        with pytest.raises(SystemExit):
            main(["eval", "--model", model])

    def test_normalize_value_on_a_graph(self, tmp_path, capsys, counting_rep):
        model = _write(tmp_path / "m.json", emit_model(lift_string_series(counting_rep)))
        graph = _write(tmp_path / "g.json", emit_graph(encode_string("aaba")))
        assert main(["normalize", model, "--graph", graph]) == 0
        assert json.loads(capsys.readouterr().out)["display"] == pytest.approx(3.0)

    def test_normalize_rejects_non_binary_graph(self, tmp_path, capsys, rng, example_graph):
        model = _write(tmp_path / "m.json", emit_model(gen.random_model(EXAMPLE_ALPHABET, 2, rng)))
        graph = _write(tmp_path / "g.json", emit_graph(example_graph))
        assert main(["normalize", "--model", model, "--graph", graph]) == 2
        assert json.loads(capsys.readouterr().err)["error"] == "NotClosedBinary"

    def test_crossword_text_must_be_utf8(self, tmp_path, capsys):
        path = _write(tmp_path / "w.txt", b"ab\n\xff\xfe")
        assert main(["encode", "crossword", path]) == 2
        assert json.loads(capsys.readouterr().err)["error"] == "HypergraphValidationError"

    def test_output_file(self, tmp_path):
        target = tmp_path / "anbn.json"
        assert main(["-o", str(target), "lift", "anbn"]) == 0
        assert parse_model(target.read_bytes()).dim == 5

    def test_tiling_check(self, tmp_path, capsys):
        g = _write(tmp_path / "g.json", emit_graph(encode_circular("aaaa")))
        t = _write(tmp_path / "t.json", emit_graph(encode_circular("aa")))
        assert main(["tiling", "check", g, t]) == 0
        out = json.loads(capsys.readouterr().out)
        assert out["is_tiling"]
        assert len(out["maps"]) == 2

    def test_schema_error_exit_code(self, tmp_path, capsys, example_graph):
        data = emit_graph(example_graph)
        path = _write(tmp_path / "bad.json", data[:-20])
        assert main(["validate", path]) == 4
        assert json.loads(capsys.readouterr().err)["error"] == "SchemaError"

    def test_validation_error_exit_code(self, tmp_path, example_graph):
        doc = json.loads(emit_graph(example_graph))
        doc["hyperedges"].pop()
        path = _write(tmp_path / "missing.json", json.dumps(doc))
        assert main(["validate", path]) == 2

    def test_budget_exit_code(self, tmp_path, rng, example_graph):
        model = _write(tmp_path / "m.json", emit_model(gen.random_model(EXAMPLE_ALPHABET, 2, rng)))
        graph = _write(tmp_path / "g.json", emit_graph(example_graph))
        assert main(["eval", model, graph, "--engine", "naive", "--term-budget", "10"]) == 3


class TestSelfTest:
    @pytest.fixture(autouse=True)
    def small_sweep(self, monkeypatch):
        monkeypatch.setattr(get_settings(), "HWM_TILING_SWEEP_MAX_VERTICES", 3)

    COUNTS = {
        "engine_agreement": 5,
        "string_lift": 5,
        "iota_tau_lift": 5,
        "tree_lift": 5,
        "circular_trace": 5,
        "closures": 5,
        "normalization": 5,
        "trace_lemma": 200,
        "crossword": 2,
    }

    def test_default_seed_passes(self):
        report = run_selftest(get_run_config(seed=0), self.COUNTS)
        failed = [c.name for c in report.criteria if not c.passed]
        assert report.passed, failed
        assert {c.name for c in report.criteria} >= {"tiling_theorem", "anbn", "crossword"}

    def test_tiny_budget_is_reported(self):
        report = run_selftest(get_run_config(seed=0, term_budget=10), self.COUNTS)
        assert not report.passed
        assert any("BudgetExceeded" in c.detail for c in report.criteria)
