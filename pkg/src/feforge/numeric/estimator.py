"""scikit-learn wrapper around :func:`fit_regular`."""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, RegressorMixin
from sklearn.utils.validation import check_is_fitted

from .fit import SampleSet, fit_regular
from .regular import eval_regular

__all__ = ["RegularFamilyRegressor"]


class RegularFamilyRegressor(RegressorMixin, BaseEstimator):
    """Fit a regular family to ``X`` (one column of abscissae) and ``y = [f, alpha]``.

    ``predict`` returns the two-column array ``[f_hat, alpha_hat]``.
    """

    def __init__(self, variant="auto", seed=0, max_iter=200, validation_fraction=0.2):
        self.variant = variant
        self.seed = seed
        self.max_iter = max_iter
        self.validation_fraction = validation_fraction

    def fit(self, X, y):
        X = np.asarray(X, dtype=float)
        y = np.asarray(y, dtype=float)
        if X.ndim == 2:
            if X.shape[1] != 1:
                raise ValueError("X must have exactly one feature")
            X = X[:, 0]
        if y.ndim != 2 or y.shape[1] != 2 or len(y) != len(X):
            raise ValueError("y must have shape (n_samples, 2) holding f and alpha")
        samples = SampleSet(X, y[:, 0], y[:, 1])
        self.result_ = fit_regular(samples, self.variant, self.seed, self.max_iter, self.validation_fraction)
        self.family_ = self.result_.family
        self.params_ = dict(self.result_.params)
        self.n_features_in_ = 1
        return self

    def predict(self, X):
        check_is_fitted(self, "family_")
        X = np.asarray(X, dtype=float)
        if X.ndim == 2:
            X = X[:, 0]
        f, a = eval_regular(self.family_, X)
        return np.column_stack([f, a])
