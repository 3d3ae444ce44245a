"""Regular real-valued solutions: evaluation, residuals and parameter fitting."""
from .fit import (
    FIT_VARIANTS,
    IDENTIFIABILITY_EPS,
    FitResult,
    SampleError,
    SampleSet,
    fit_regular,
    generate_samples,
    read_samples_csv,
    write_samples_csv,
)
from .regular import MULT_FORMS, VARIANTS, DomainViolation, RegularFamily, eval_regular, random_pairs, residual_max

__all__ = [
    "RegularFamily",
    "DomainViolation",
    "eval_regular",
    "residual_max",
    "random_pairs",
    "VARIANTS",
    "MULT_FORMS",
    "SampleSet",
    "SampleError",
    "FitResult",
    "fit_regular",
    "generate_samples",
    "read_samples_csv",
    "write_samples_csv",
    "FIT_VARIANTS",
    "IDENTIFIABILITY_EPS",
    "RegularFamilyRegressor",
]


def __getattr__(name):
    # scikit-learn is slow to import; load the estimator only when asked for
    if name == "RegularFamilyRegressor":
        from .estimator import RegularFamilyRegressor

        return RegularFamilyRegressor
    raise AttributeError(f"module {__name__!r} has no attribute {name!r}")
