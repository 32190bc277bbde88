"""
Pydantic document models and canonical JSON for graphs and models.

This module defines the on-disk formats read and written by the command
line: hypergraph documents, tensor payloads, product algebras and full
model documents. Parsing validates the document shape with pydantic and
then builds the domain values (which run their own invariant checks).
Emission is canonical: sorted keys, sorted entries, two-space indent and a
trailing newline.

Author: HWM Toolkit Team
Date: 2026
"""

import json
import logging
from typing import Annotated, Any, Dict, List, Literal, Optional, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError

from hwm.core.exceptions import SchemaError
from hwm.models.algebra import (
    DiagScaledAlgebra,
    DirectSumAlgebra,
    IdentityAlgebra,
    ProductAlgebra,
    SubsetAlgebra,
    TableAlgebra,
)
from hwm.models.hwm import HWM
from hwm.models.hypergraph import Hypergraph, PortRef, RankedAlphabet, validate_hypergraph
from hwm.models.representations import StringLinearRep, TreeLinearRep
from hwm.models.tensors import Label, SparseTensor

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1


class Document(BaseModel):
    """Base for every document model: unknown fields are rejected."""

    model_config = ConfigDict(extra="forbid")


class ComplexValue(Document):
    """A complex number as ``{"re": x, "im": y}``."""

    re: float
    im: float = 0.0


class VertexDoc(Document):
    id: str = Field(..., min_length=1)
    label: str = Field(..., min_length=1)


class GraphDocument(Document):
    """
    Hypergraph document.

    Ports are ``[vertex_id, slot]`` pairs with 1-based slots.
    """

    version: Literal[1] = SCHEMA_VERSION
    alphabet: Dict[str, int]
    vertices: List[VertexDoc]
    hyperedges: List[List[Tuple[str, int]]]


class TensorEntry(Document):
    idx: List[Any]
    re: float
    im: float = 0.0


class TensorDoc(Document):
    order: int = Field(..., ge=0)
    entries: List[TensorEntry]


class IdentityDoc(Document):
    kind: Literal["identity"]
    dim: int = Field(..., ge=1)
    alpha: List[ComplexValue]


class TableDoc(Document):
    kind: Literal["table"]
    dim: int = Field(..., ge=1)
    coefficients: List[TensorEntry]
    alpha: List[ComplexValue]


class DiagScaledDoc(Document):
    kind: Literal["diag_scaled"]
    dim: int = Field(..., ge=1)
    weights: List[ComplexValue]
    alpha: List[ComplexValue]


class SubsetDoc(Document):
    kind: Literal["subset"]
    template: GraphDocument
    edge_weight: ComplexValue


class DirectSumDoc(Document):
    kind: Literal["direct_sum"]
    blocks: List["AlgebraDoc"]


AlgebraDoc = Annotated[
    Union[IdentityDoc, TableDoc, DiagScaledDoc, SubsetDoc, DirectSumDoc],
    Field(discriminator="kind"),
]
DirectSumDoc.model_rebuild()


class ModelDocument(Document):
    """Full model document (version 1)."""

    version: Literal[1] = SCHEMA_VERSION
    alphabet: Dict[str, int]
    algebra: AlgebraDoc
    tensors: Dict[str, TensorDoc]


# Helpers


def _pointer(loc: Tuple[Any, ...]) -> str:
    return "/" + "/".join(str(part) for part in loc) if loc else "/"


def _validate(model_cls, data: Union[bytes, str]):
    try:
        return model_cls.model_validate_json(data)
    except ValidationError as e:
        first = e.errors()[0]
        raise SchemaError(first.get("msg", "invalid document"), location=_pointer(tuple(first.get("loc", ())))) from e


def _complex(value: ComplexValue) -> complex:
    return complex(value.re, value.im)


def _complex_doc(value: complex) -> Dict[str, float]:
    value = complex(value)
    return {"im": float(value.imag), "re": float(value.real)}


def _dumps(payload: Dict[str, Any]) -> bytes:
    return (json.dumps(payload, sort_keys=True, indent=2, ensure_ascii=False) + "\n").encode("utf-8")


def _entry_sort_key(idx: List[Any]) -> str:
    if all(isinstance(i, int) for i in idx):
        return json.dumps([f"{i:012d}" for i in idx])
    return json.dumps(idx, sort_keys=True)


# Graphs


def graph_from_document(doc: GraphDocument, validate: bool = True) -> Hypergraph:
    alphabet = RankedAlphabet.from_mapping(doc.alphabet)
    g = Hypergraph(
        alphabet,
        tuple((v.id, v.label) for v in doc.vertices),
        tuple(tuple(PortRef(v, s) for v, s in h) for h in doc.hyperedges),
    )
    if validate:
        validate_hypergraph(g)
    return g


def graph_to_payload(g: Hypergraph) -> Dict[str, Any]:
    return {
        "version": SCHEMA_VERSION,
        "alphabet": dict(g.alphabet.symbols),
        "vertices": [{"id": v, "label": x} for v, x in sorted(g.vertices)],
        "hyperedges": sorted([[p.vertex, p.slot] for p in sorted(h)] for h in g.hyperedges),
    }


def parse_graph(data: Union[bytes, str]) -> Hypergraph:
    """
    Parse and validate a hypergraph document.

    Raises:
        SchemaError: malformed JSON or document shape
        HypergraphValidationError: the hypergraph breaks an invariant
    """
    return graph_from_document(_validate(GraphDocument, data))


def emit_graph(g: Hypergraph) -> bytes:
    """Canonical JSON bytes of a hypergraph."""
    return _dumps(graph_to_payload(g))


# Labels and tensors


def _decode_label(alg: ProductAlgebra, raw: Any, location: str) -> Label:
    if isinstance(alg, DirectSumAlgebra):
        if not (isinstance(raw, list) and len(raw) == 2 and isinstance(raw[0], int)):
            raise SchemaError("direct-sum labels are [block, label]", location)
        if not 1 <= raw[0] <= len(alg.blocks):
            raise SchemaError(f"block {raw[0]} out of range", location)
        return (raw[0] - 1, _decode_label(alg.blocks[raw[0] - 1], raw[1], location))
    if isinstance(alg, SubsetAlgebra):
        if not isinstance(raw, list) or not all(
            isinstance(p, list) and len(p) == 2 and isinstance(p[0], str) and isinstance(p[1], int) for p in raw
        ):
            raise SchemaError("subset labels are lists of [vertex, slot] ports", location)
        return frozenset(PortRef(v, s) for v, s in raw)
    if not isinstance(raw, int) or isinstance(raw, bool):
        raise SchemaError("dense labels are 1-based integers", location)
    if not 1 <= raw <= alg.dim:
        raise SchemaError(f"index {raw} outside 1..{alg.dim}", location)
    return raw - 1


def _encode_label(alg: ProductAlgebra, label: Label) -> Any:
    if isinstance(alg, DirectSumAlgebra):
        return [label[0] + 1, _encode_label(alg.blocks[label[0]], label[1])]
    if isinstance(alg, SubsetAlgebra):
        return [[p.vertex, p.slot] for p in sorted(label)]
    return int(label) + 1


def tensor_from_document(doc: TensorDoc, alg: ProductAlgebra, location: str = "/") -> SparseTensor:
    entries = {}
    for n, entry in enumerate(doc.entries):
        where = f"{location}/entries/{n}/idx"
        if len(entry.idx) != doc.order:
            raise SchemaError(f"index has {len(entry.idx)} labels, order is {doc.order}", where)
        key = tuple(_decode_label(alg, raw, where) for raw in entry.idx)
        if key in entries:
            raise SchemaError("duplicate index", where)
        entries[key] = complex(entry.re, entry.im)
    return SparseTensor(doc.order, entries)


def tensor_to_payload(t: SparseTensor, alg: ProductAlgebra) -> Dict[str, Any]:
    entries = [
        {"idx": [_encode_label(alg, label) for label in idx], **_complex_doc(value)}
        for idx, value in t.entries.items()
    ]
    entries.sort(key=lambda e: _entry_sort_key(e["idx"]))
    return {"order": t.order, "entries": entries}


# Algebras


def _dense_vector(values: List[ComplexValue], dim: int, location: str) -> np.ndarray:
    if len(values) != dim:
        raise SchemaError(f"expected {dim} values, got {len(values)}", location)
    return np.array([_complex(v) for v in values], dtype=complex)


def algebra_from_document(doc, location: str = "/algebra") -> ProductAlgebra:
    if isinstance(doc, IdentityDoc):
        return IdentityAlgebra(doc.dim, _dense_vector(doc.alpha, doc.dim, f"{location}/alpha"))
    if isinstance(doc, DiagScaledDoc):
        return DiagScaledAlgebra(
            doc.dim,
            _dense_vector(doc.weights, doc.dim, f"{location}/weights"),
            _dense_vector(doc.alpha, doc.dim, f"{location}/alpha"),
        )
    if isinstance(doc, TableDoc):
        c = np.zeros((doc.dim,) * 3, dtype=complex)
        for n, entry in enumerate(doc.coefficients):
            where = f"{location}/coefficients/{n}/idx"
            if len(entry.idx) != 3 or not all(isinstance(i, int) and 1 <= i <= doc.dim for i in entry.idx):
                raise SchemaError(f"coefficient index must be three integers in 1..{doc.dim}", where)
            c[tuple(i - 1 for i in entry.idx)] = complex(entry.re, entry.im)
        return TableAlgebra(doc.dim, c, _dense_vector(doc.alpha, doc.dim, f"{location}/alpha"))
    if isinstance(doc, SubsetDoc):
        return SubsetAlgebra(graph_from_document(doc.template), _complex(doc.edge_weight))
    if isinstance(doc, DirectSumDoc):
        return DirectSumAlgebra([algebra_from_document(b, f"{location}/blocks/{k}") for k, b in enumerate(doc.blocks)])
    raise SchemaError("unknown algebra kind", f"{location}/kind")


def algebra_to_payload(alg: ProductAlgebra) -> Dict[str, Any]:
    if isinstance(alg, DirectSumAlgebra):
        return {"kind": alg.kind, "blocks": [algebra_to_payload(b) for b in alg.blocks]}
    if isinstance(alg, SubsetAlgebra):
        return {"kind": alg.kind, "template": graph_to_payload(alg.template), "edge_weight": _complex_doc(alg.edge_weight)}
    payload: Dict[str, Any] = {
        "kind": alg.kind,
        "dim": alg.dim,
        "alpha": [_complex_doc(a) for a in alg.alpha_vector()],
    }
    if isinstance(alg, DiagScaledAlgebra):
        payload["weights"] = [_complex_doc(w) for w in alg.weights]
    elif isinstance(alg, TableAlgebra):
        c = alg.structure_constants()
        payload["coefficients"] = [
            {"idx": [int(i) + 1 for i in idx], **_complex_doc(c[tuple(idx)])} for idx in np.argwhere(c != 0)
        ]
    return payload


# Models


def model_from_document(doc: ModelDocument) -> HWM:
    algebra = algebra_from_document(doc.algebra)
    alphabet = RankedAlphabet.from_mapping(doc.alphabet)
    tensors = {x: tensor_from_document(t, algebra, f"/tensors/{x}") for x, t in doc.tensors.items()}
    return HWM(alphabet, algebra, tensors)


def model_to_payload(m: HWM) -> Dict[str, Any]:
    return {
        "version": SCHEMA_VERSION,
        "alphabet": dict(m.alphabet.symbols),
        "algebra": algebra_to_payload(m.algebra),
        "tensors": {x: tensor_to_payload(t, m.algebra) for x, t in m.tensors.items()},
    }


def parse_model(data: Union[bytes, str]) -> HWM:
    """
    Parse a model document.

    Raises:
        SchemaError: malformed JSON, unknown fields or bad index payloads
        AlgebraError: the algebra table or tensors violate an invariant
    """
    m = model_from_document(_validate(ModelDocument, data))
    logger.debug(f"✅ Parsed model {m!r}")
    return m


def emit_model(m: HWM) -> bytes:
    """Canonical JSON bytes of a model."""
    return _dumps(model_to_payload(m))


def parse_json(data: Union[bytes, str], location: str = "/") -> Any:
    """Plain JSON decoding with SchemaError on malformed input."""
    try:
        return json.loads(data)
    except (json.JSONDecodeError, UnicodeDecodeError) as e:
        raise SchemaError(f"malformed JSON: {e}", location) from e


def value_to_payload(value: complex, tol: float) -> Dict[str, Any]:
    """Evaluation output: raw ``{re, im}`` plus a real display value when the imaginary part is negligible."""
    value = complex(value)
    payload: Dict[str, Any] = {"value": _complex_doc(value)}
    payload["display"] = value.real if abs(value.imag) <= tol * max(1.0, abs(value)) else f"{value.real}{value.imag:+}j"
    return payload


def dumps(payload: Dict[str, Any]) -> bytes:
    """Public canonical JSON writer for ad-hoc reports."""
    return _dumps(payload)


# Classical representations


class StringRepDocument(Document):
    """Real string representation: ``iota``, ``tau`` and one square matrix per symbol."""

    d: Optional[int] = Field(None, ge=1)
    iota: List[float]
    tau: List[float]
    matrices: Dict[str, List[List[float]]]


class TreeRepDocument(Document):
    """Real tree representation; ``mu[f]`` is a nested list of depth ``arity + 1``."""

    model_config = ConfigDict(extra="forbid", populate_by_name=True)

    d: Optional[int] = Field(None, ge=1)
    lam: List[float] = Field(..., alias="lambda")
    mu: Dict[str, Any]


class MatricesDocument(Document):
    matrices: Dict[str, List[List[float]]]


def _array(raw: Any, location: str) -> np.ndarray:
    try:
        return np.asarray(raw, dtype=float)
    except (TypeError, ValueError) as e:
        raise SchemaError(f"not a rectangular numeric array: {e}", location) from e


def parse_string_rep(data: Union[bytes, str]) -> StringLinearRep:
    doc = _validate(StringRepDocument, data)
    if doc.d is not None and doc.d != len(doc.iota):
        raise SchemaError(f"d is {doc.d} but iota has {len(doc.iota)} entries", "/d")
    return StringLinearRep(
        np.asarray(doc.iota),
        np.asarray(doc.tau),
        {s: _array(m, f"/matrices/{s}") for s, m in doc.matrices.items()},
    )


def parse_tree_rep(data: Union[bytes, str]) -> TreeLinearRep:
    doc = _validate(TreeRepDocument, data)
    if doc.d is not None and doc.d != len(doc.lam):
        raise SchemaError(f"d is {doc.d} but lambda has {len(doc.lam)} entries", "/d")
    return TreeLinearRep(np.asarray(doc.lam), {f: _array(t, f"/mu/{f}") for f, t in doc.mu.items()})


def parse_matrices(data: Union[bytes, str]) -> Dict[str, np.ndarray]:
    doc = _validate(MatricesDocument, data)
    return {s: _array(m, f"/matrices/{s}") for s, m in doc.matrices.items()}
