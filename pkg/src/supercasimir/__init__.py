"""Exact computation of Casimir-type operators for Lie superalgebras."""

from __future__ import annotations

__version__ = "0.1.0"

from .algebra import SuperAlgebra, build_gl, build_rank1, builtin, load_algebra, root_decomposition, validate_algebra
from .exact import LaurentPoly, lagrange_basis
from .invariants import (
    build_anti_invariant,
    build_casimir,
    build_casimir_c,
    build_even_gelfand,
    build_gelfand,
    build_generalized_casimir,
    verify_anti_invariant,
    verify_central,
    verify_even_central,
)
from .parser import eval_expr, parse_expr
from .representations import EvaluationModule, act_uea, natural_module, tensor_product
from .uea import Enveloping, UEAElement

__all__ = [
    "Enveloping", "EvaluationModule", "LaurentPoly", "SuperAlgebra", "UEAElement",
    "act_uea", "build_anti_invariant", "build_casimir", "build_casimir_c", "build_even_gelfand",
    "build_gelfand", "build_generalized_casimir", "build_gl", "build_rank1", "builtin",
    "eval_expr", "lagrange_basis", "load_algebra", "natural_module", "parse_expr",
    "root_decomposition", "tensor_product", "validate_algebra", "verify_anti_invariant",
    "verify_central", "verify_even_central",
]
