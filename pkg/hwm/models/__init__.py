"""
Domain Models Module

Hypergraphs, sparse tensors, product algebras, models, classical
representations and their JSON document schemas.
"""

from .algebra import (
    DiagScaledAlgebra,
    DirectSumAlgebra,
    IdentityAlgebra,
    ProductAlgebra,
    SubsetAlgebra,
    TableAlgebra,
)
from .hwm import HWM, create_hwm
from .hypergraph import Hypergraph, PortRef, RankedAlphabet, build_hypergraph, validate_hypergraph
from .representations import StringLinearRep, Tree, TreeLinearRep, parse_tree
from .tensors import SparseTensor

__all__ = [
    # Structure
    "Hypergraph",
    "PortRef",
    "RankedAlphabet",
    "build_hypergraph",
    "validate_hypergraph",
    # Algebra
    "ProductAlgebra",
    "IdentityAlgebra",
    "DiagScaledAlgebra",
    "TableAlgebra",
    "SubsetAlgebra",
    "DirectSumAlgebra",
    "SparseTensor",
    # Models
    "HWM",
    "create_hwm",
    "StringLinearRep",
    "TreeLinearRep",
    "Tree",
    "parse_tree",
]
