"""Exact homological checks for triangular matrix algebras over prime fields.

Modules over finite-dimensional F_p-algebras, triples over a triangular
matrix algebra, exact subcategories of triples, their stable categories
and the recollement between them.
"""

from .algebra import Algebra, Module, ModuleHom, field_algebra, regular_module, truncated_polynomial
from .bimodule import Bimodule, regular_bimodule
from .errors import BudgetExceeded, MalformedInputError, OutOfCap, TrirepError, ValidationError
from .io import FixtureManifest, load_manifest
from .rep import TriangularContext, TripleRep, TripleRepH
from .subcat import ECategory, MCategory, ModuleCategory, SubcategorySpec
from .suite import Report, emit_report, run_suite
from .verdict import Check

__version__ = "0.1.0"

__all__ = [
    "Algebra",
    "Bimodule",
    "BudgetExceeded",
    "Check",
    "ECategory",
    "FixtureManifest",
    "MCategory",
    "MalformedInputError",
    "Module",
    "ModuleCategory",
    "ModuleHom",
    "OutOfCap",
    "Report",
    "SubcategorySpec",
    "TriangularContext",
    "TripleRep",
    "TripleRepH",
    "TrirepError",
    "ValidationError",
    "emit_report",
    "field_algebra",
    "load_manifest",
    "regular_bimodule",
    "regular_module",
    "run_suite",
    "truncated_polynomial",
]
