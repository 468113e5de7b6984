import numpy as np
import pytest
from sklearn.base import clone
from sklearn.pipeline import Pipeline
from sklearn.tree import DecisionTreeClassifier

from proxyfinder import ProxySelector
from proxyfinder.selector import empirical_instance


@pytest.fixture
def xor_data():
    rng = np.random.default_rng(0)
    a = rng.integers(0, 2, size=400)
    b = rng.integers(0, 2, size=400)
    noise = rng.integers(0, 3, size=400)
    X = np.column_stack([noise, a, b])
    return X, a ^ b


def test_selects_xor_pair(xor_data):
    X, y = xor_data
    sel = ProxySelector().fit(X, y)
    assert sel.get_support().tolist() == [False, True, True]
    assert sel.feasible_
    assert sel.uncertainty_ == pytest.approx(0.0, abs=1e-12)
    assert sel.transform(X).shape == (400, 2)


def test_exact_method_agrees(xor_data):
    X, y = xor_data
    assert ProxySelector(method="exact").fit(X, y).selected_ == [1, 2]


def test_relative_alpha(xor_data):
    X, y = xor_data
    sel = ProxySelector(alpha=1.0, relative=True).fit(X, y)
    assert sel.get_support().sum() == 0 and sel.feasible_


def test_infeasible_selects_nothing():
    X = np.array([[0], [0], [1], [1]])
    y = np.array([0, 1, 0, 1])
    sel = ProxySelector().fit(X, y)
    assert not sel.feasible_ and sel.get_support().sum() == 0
    assert sel.uncertainty_ == pytest.approx(1.0)


def test_string_features():
    X = np.array([["en", "x"], ["de", "x"], ["en", "y"], ["de", "y"]], dtype=object)
    y = np.array(["US", "DE", "US", "DE"])
    sel = ProxySelector().fit(X, y)
    assert sel.get_support().tolist() == [True, False]


def test_params_clone_pipeline(xor_data):
    X, y = xor_data
    sel = ProxySelector(alpha=0.1, method="exact")
    assert sel.get_params() == {"alpha": 0.1, "relative": False, "method": "exact", "n_jobs": None}
    assert clone(sel).get_params() == sel.get_params()
    pipe = Pipeline([("select", ProxySelector()), ("tree", DecisionTreeClassifier(random_state=0))]).fit(X, y)
    assert pipe.score(X, y) == 1.0


def test_bad_method(xor_data):
    with pytest.raises(ValueError):
        ProxySelector(method="magic").fit(*xor_data)


def test_empirical_instance_matches_frequencies():
    X = np.array([[0], [0], [0], [1]])
    y = np.array([0, 0, 1, 1])
    inst = empirical_instance(X, y)
    probs = dict(inst.distribution.entries)
    assert probs[("0", "0")] == 0.5 and probs[("1", "1")] == 0.25


def test_sklearn_estimator_checks():
    from sklearn.utils.estimator_checks import check_estimator

    results = check_estimator(ProxySelector(), on_fail=None)
    assert [r["check_name"] for r in results if r["status"] == "failed"] == []
