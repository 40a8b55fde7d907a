"""Exact cohomology and formal deformations of finite-dimensional Poisson algebras."""

from .algebra import (
    AlgebraSpec,
    AxiomError,
    ModuleSpec,
    StructuralError,
    ValidationReport,
    builtin,
    load_algebra,
    load_module,
    regular_module,
    standard_poisson,
    trivial_bracket,
    validate_algebra,
    validate_module,
)

__version__ = "0.1.0"

__all__ = [
    "AlgebraSpec",
    "AxiomError",
    "ModuleSpec",
    "StructuralError",
    "ValidationReport",
    "builtin",
    "load_algebra",
    "load_module",
    "regular_module",
    "standard_poisson",
    "trivial_bracket",
    "validate_algebra",
    "validate_module",
    "__version__",
]
