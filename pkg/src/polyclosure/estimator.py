"""scikit-learn style wrapper: ``fit`` on a family, ``predict`` membership."""

from __future__ import annotations

import itertools

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_array, check_is_fitted

from .clones import CloneSpec, resolve
from .core import Family
from .enumeration import enumerate_closure


class ClosureEstimator(BaseEstimator):
    """Closure of the rows of ``X`` under a clone.

    Parameters
    ----------
    clone : str
        Clone name such as ``"E2 dual"`` or ``"S10^3"``. Ignored when
        ``operations`` is given.
    operations : sequence of Operation, optional
        Explicit operation tables, for domains larger than two.
    fast : bool
        Use the specialised enumerator rather than the generic backtrack search.
    """

    def __init__(self, clone="E2", operations=None, fast=True):
        self.clone = clone
        self.operations = operations
        self.fast = fast

    def _domain(self) -> int:
        return self.operations[0].d if self.operations else 2

    def _validate(self, X, *, reset: bool):
        X = check_array(X, dtype=np.int64, ensure_min_samples=0 if reset else 1)
        d = self._domain()
        if X.size and (X.min() < 0 or X.max() >= d):
            raise ValueError(f"entries must lie in 0..{d - 1}")
        if not reset and X.shape[1] != self.n_features_in_:
            raise ValueError(f"X has {X.shape[1]} features, estimator was fitted with {self.n_features_in_}")
        return X

    def fit(self, X, y=None):
        X = self._validate(X, reset=True)
        self.n_features_in_ = X.shape[1]
        spec = CloneSpec.explicit(self.operations) if self.operations else self.clone
        self.family_ = Family((tuple(int(x) for x in row) for row in X), n=X.shape[1], d=self._domain())
        self.problem_ = resolve(spec, self.family_)
        self.algorithm_ = self.problem_.algorithm
        return self

    def predict(self, X) -> np.ndarray:
        """Boolean array: is each row of ``X`` in the closure?"""
        check_is_fitted(self, "problem_")
        X = self._validate(X, reset=False)
        return np.fromiter((self.problem_.decide(tuple(int(x) for x in row)) for row in X), dtype=bool, count=len(X))

    def iter_closure(self):
        check_is_fitted(self, "problem_")
        return enumerate_closure(self.problem_, fast=self.fast)

    def transform(self, X=None, limit: int | None = None) -> np.ndarray:
        """The closure of the fitted family as an ``(k, n)`` array (at most ``limit`` rows)."""
        rows = list(itertools.islice(self.iter_closure(), limit))
        return np.array(rows, dtype=np.int64).reshape(len(rows), self.n_features_in_)

    def fit_transform(self, X, y=None, limit: int | None = None) -> np.ndarray:
        return self.fit(X).transform(limit=limit)
