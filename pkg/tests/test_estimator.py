from __future__ import annotations

import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from polyclosure import ClosureEstimator
from polyclosure.core import Operation

WORKED = np.array([[1, 1, 0, 1], [0, 1, 1, 0], [1, 0, 1, 0]])


def test_fit_predict_union_clone():
    est = ClosureEstimator(clone="E2 dual").fit(WORKED)
    assert est.algorithm_ == "E2"
    assert est.n_features_in_ == 4
    np.testing.assert_array_equal(est.predict([[1, 1, 1, 0], [0, 0, 0, 1], [1, 1, 1, 1]]), [True, False, True])


def test_transform_lists_closure():
    closure = ClosureEstimator(clone="E2 dual").fit_transform(WORKED)
    assert closure.shape == (5, 4)
    assert {tuple(r) for r in closure} == {(1, 1, 0, 1), (1, 1, 1, 1), (0, 1, 1, 0), (1, 0, 1, 0), (1, 1, 1, 0)}


def test_transform_limit_and_generic():
    est = ClosureEstimator(clone="L0", fast=False).fit([[1, 1, 0], [0, 1, 1]])
    assert est.transform(limit=2).tolist() == [[0, 0, 0], [0, 1, 1]]


def test_params_and_clone():
    est = ClosureEstimator(clone="D2", fast=False)
    assert est.get_params() == {"clone": "D2", "fast": False, "operations": None}
    twin = clone(est).set_params(clone="M2")
    assert twin.clone == "M2" and est.clone == "D2"


def test_explicit_operations_over_three_values():
    capped = Operation.from_function("cappedSum", 2, 3, lambda x, y: min(x + y, 2))
    est = ClosureEstimator(operations=[capped]).fit([[0, 1], [1, 0]])
    assert est.algorithm_ == "ASSOC"
    assert len(est.transform()) == 8
    assert est.predict([[2, 2], [0, 0]]).tolist() == [True, False]


def test_validation():
    with pytest.raises(NotFittedError):
        ClosureEstimator().predict([[0, 1]])
    with pytest.raises(ValueError):
        ClosureEstimator().fit([[0, 2]])
    est = ClosureEstimator().fit([[0, 1]])
    with pytest.raises(ValueError):
        est.predict([[0, 1, 1]])
    with pytest.raises(ValueError):
        ClosureEstimator(clone="E2 +neg").fit([[0, 1]])


def test_empty_fit_gives_empty_closure():
    est = ClosureEstimator(clone="L0").fit(np.empty((0, 3)))
    assert est.transform().shape == (0, 3)
    assert est.predict([[0, 0, 0]]).tolist() == [False]
