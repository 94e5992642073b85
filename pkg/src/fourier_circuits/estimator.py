"""Scikit-learn compatible regressor wrapping the circuit fitting pipeline."""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, RegressorMixin
from sklearn.utils.validation import check_array, check_is_fitted, check_X_y

from .circuits import AnsatzSpec, EncodingSpec, expectation_many
from .fitting import LabeledDataset, OptimizerConfig, fit


class FourierCircuitRegressor(BaseEstimator, RegressorMixin):
    """Fits a qudit data re-uploading circuit to real-valued targets.

    The model output is the expectation value of a diagonal observable, a
    truncated multi-dimensional Fourier series in the input features. The
    data dimension is taken from X at fit time.

    Parameters
    ----------
    kind : ansatz family ("line", "parallel", "mixed" or one of the
        variant kinds).
    d : local qudit dimension.
    layers : number of re-uploading layers.
    p : qudit count for the mixed ansatz.
    rescaling : rescaling mode for the encoding gates
        ("none", "global", "per_gate", "per_feature").
    restarts : extra optimizer reruns from perturbed starts.
    max_iterations : Nelder-Mead iteration cap per run.
    tol : simplex value-spread stopping tolerance.
    seed : seed for initialization and restarts.
    """

    def __init__(
        self,
        kind: str = "parallel",
        d: int = 2,
        layers: int = 1,
        p: int | None = None,
        rescaling: str = "none",
        restarts: int = 0,
        max_iterations: int = 20_000,
        tol: float = 1e-8,
        seed: int = 0,
    ):
        self.kind = kind
        self.d = d
        self.layers = layers
        self.p = p
        self.rescaling = rescaling
        self.restarts = restarts
        self.max_iterations = max_iterations
        self.tol = tol
        self.seed = seed

    def fit(self, X, y):
        X, y = check_X_y(X, y, y_numeric=True)
        spec = AnsatzSpec(
            kind=self.kind,
            d=self.d,
            M=X.shape[1],
            L=self.layers,
            p=self.p,
            encoding=EncodingSpec.spin(self.d, rescaling_mode=self.rescaling),
        )
        ranges = tuple(
            (float(np.min(X[:, m])), float(np.max(X[:, m]) + 1e-12))
            for m in range(X.shape[1])
        )
        dataset = LabeledDataset(
            M=spec.M, points=X, values=np.asarray(y, dtype=float),
            ranges=ranges, seed=self.seed,
        )
        config = OptimizerConfig(
            max_iterations=self.max_iterations,
            simplex_tolerance=self.tol,
            restarts=self.restarts,
            seed=self.seed,
        )
        result = fit(spec, dataset, dataset, config)
        self.spec_ = spec
        self.result_ = result
        self.params_ = result.best_params
        self.n_features_in_ = X.shape[1]
        return self

    def predict(self, X):
        check_is_fitted(self, "params_")
        X = check_array(X)
        if X.shape[1] != self.n_features_in_:
            raise ValueError(
                f"X has {X.shape[1]} features, expected {self.n_features_in_}"
            )
        return expectation_many(self.spec_, self.params_, X)
