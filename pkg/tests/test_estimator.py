import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from fourier_circuits.estimator import FourierCircuitRegressor


def make_problem(n=60, seed=0):
    rng = np.random.default_rng(seed)
    X = rng.uniform(-np.pi, np.pi, (n, 1))
    y = 0.1 + 0.4 * np.cos(X[:, 0]) + 0.3 * np.sin(X[:, 0])
    return X, y


def test_fit_predict_recovers_single_harmonic():
    X, y = make_problem()
    model = FourierCircuitRegressor(
        kind="line", d=2, layers=1, max_iterations=4000, restarts=2, seed=3
    )
    model.fit(X, y)
    predictions = model.predict(X)
    assert np.sqrt(np.mean((predictions - y) ** 2)) <= 1e-3
    assert model.score(X, y) >= 0.999
    assert model.n_features_in_ == 1
    assert model.spec_.M == 1


def test_get_set_params_and_clone():
    model = FourierCircuitRegressor(kind="parallel", layers=2, seed=5)
    params = model.get_params()
    assert params["kind"] == "parallel"
    assert params["layers"] == 2
    model.set_params(layers=3)
    assert model.layers == 3
    copy = clone(model)
    assert copy.get_params() == model.get_params()


def test_predict_before_fit_raises():
    model = FourierCircuitRegressor()
    with pytest.raises(NotFittedError):
        model.predict(np.zeros((3, 1)))


def test_fit_is_deterministic():
    X, y = make_problem(n=30, seed=2)
    kwargs = dict(kind="line", d=2, layers=1, max_iterations=500, seed=7)
    a = FourierCircuitRegressor(**kwargs).fit(X, y)
    b = FourierCircuitRegressor(**kwargs).fit(X, y)
    assert np.array_equal(a.predict(X), b.predict(X))
