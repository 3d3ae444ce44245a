"""Finite-model oracles: exhaustive enumeration, family matching and cocycle checks."""
from .characters import CharacterModel
from .dstar import dstar_prime_model
from .enumerate import (
    PrimeFieldModel,
    SearchSpaceExceeded,
    cauchy_difference,
    cocycle_check,
    default_bound,
    enumerate_additive,
    enumerate_exponential,
    enumerate_solutions,
    pointwise_residual,
    verify_solution,
)
from .match import evaluate_exppoly, gaussian_mod_p, instantiate, match_family
from .models import (
    CharacteristicTwoError,
    FiniteDomain,
    FiniteGroup,
    PrimeField,
    additive_field_model,
    adjoin_zero,
    generating_set,
    multiplicative_model,
)

__all__ = [
    "CharacterModel",
    "dstar_prime_model",
    "PrimeFieldModel",
    "SearchSpaceExceeded",
    "cauchy_difference",
    "cocycle_check",
    "default_bound",
    "enumerate_additive",
    "enumerate_exponential",
    "enumerate_solutions",
    "pointwise_residual",
    "verify_solution",
    "evaluate_exppoly",
    "gaussian_mod_p",
    "instantiate",
    "match_family",
    "CharacteristicTwoError",
    "FiniteDomain",
    "FiniteGroup",
    "PrimeField",
    "additive_field_model",
    "adjoin_zero",
    "generating_set",
    "multiplicative_model",
]
