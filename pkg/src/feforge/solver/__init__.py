"""Solution families, constraint solving and membership tests."""
from .constraints import Branch, ConstraintSystem, SolvedSet, UnsupportedSystem, simplify_exact, solve_constraints
from .families import (
    ConstraintViolation,
    MissingParameter,
    NonRealError,
    Param,
    SolutionFamily,
    Unsupported,
    UnsupportedShapeError,
    check_membership,
    family_equation,
    real_admissible,
    realize,
    solve_shape,
)

__all__ = [
    "Branch",
    "ConstraintSystem",
    "SolvedSet",
    "UnsupportedSystem",
    "simplify_exact",
    "solve_constraints",
    "ConstraintViolation",
    "MissingParameter",
    "NonRealError",
    "Param",
    "SolutionFamily",
    "Unsupported",
    "UnsupportedShapeError",
    "check_membership",
    "family_equation",
    "real_admissible",
    "realize",
    "solve_shape",
]
