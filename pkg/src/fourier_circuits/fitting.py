"""Datasets, MSE cost, a self-contained Nelder-Mead optimizer and fitting."""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .circuits import AnsatzSpec, ParameterVector, expectation_many, param_count
from .errors import ValidationError
from .fourier import FourierSeries, evaluate_series


@dataclass(frozen=True)
class LabeledDataset:
    """Input points in R^M with real target values. Regeneration with the
    same (target, ranges, n, seed) is bit-identical."""

    M: int
    points: np.ndarray
    values: np.ndarray
    ranges: tuple[tuple[float, float], ...]
    seed: int

    def __post_init__(self) -> None:
        points = np.asarray(self.points, dtype=float)
        values = np.asarray(self.values, dtype=float)
        if points.ndim != 2 or points.shape[1] != self.M:
            raise ValidationError(f"points must have shape (n, {self.M})")
        if values.shape != (points.shape[0],):
            raise ValidationError("points and values must have equal length")
        points.setflags(write=False)
        values.setflags(write=False)
        object.__setattr__(self, "points", points)
        object.__setattr__(self, "values", values)

    def __len__(self) -> int:
        return len(self.values)


def make_dataset(
    target: FourierSeries,
    ranges,
    n: int,
    seed: int,
) -> LabeledDataset:
    """Draw n uniform points per range and label them with the target series."""
    if n < 1:
        raise ValidationError("need at least one data point")
    ranges = tuple((float(lo), float(hi)) for lo, hi in ranges)
    if len(ranges) != target.M:
        raise ValidationError(f"expected {target.M} ranges, got {len(ranges)}")
    for lo, hi in ranges:
        if not (np.isfinite(lo) and np.isfinite(hi)) or hi <= lo:
            raise ValidationError(f"invalid range ({lo}, {hi})")
    rng = np.random.default_rng(seed)
    unit = rng.random((n, target.M))
    lows = np.array([lo for lo, _ in ranges])
    highs = np.array([hi for _, hi in ranges])
    points = lows + unit * (highs - lows)
    values = np.array([evaluate_series(target, x) for x in points])
    return LabeledDataset(M=target.M, points=points, values=values, ranges=ranges, seed=seed)


def mse_cost(spec: AnsatzSpec, params: ParameterVector, dataset: LabeledDataset) -> float:
    """Mean squared error of the model output against the dataset labels."""
    if dataset.M != spec.M:
        raise ValidationError("dataset dimension does not match the ansatz")
    predictions = expectation_many(spec, params, dataset.points)
    return float(np.mean((predictions - dataset.values) ** 2))


def accuracy(predictions, truth) -> float:
    """Range-normalized RMSE complement, clipped to [0, 1]."""
    predictions = np.asarray(predictions, dtype=float)
    truth = np.asarray(truth, dtype=float)
    if predictions.shape != truth.shape or predictions.size == 0:
        raise ValidationError("predictions and truth must be non-empty and equal-length")
    rmse = float(np.sqrt(np.mean((predictions - truth) ** 2)))
    spread = float(np.max(truth) - np.min(truth))
    if spread == 0.0:
        return 1.0 if rmse == 0.0 else 0.0
    return max(0.0, 1.0 - rmse / spread)


@dataclass(frozen=True)
class OptimizerConfig:
    max_iterations: int = 20_000
    simplex_tolerance: float = 1e-8
    restarts: int = 0
    seed: int = 0
    reflection: float = 1.0
    expansion: float = 2.0
    contraction: float = 0.5
    shrink: float = 0.5
    initial_step: float = 0.25
    restart_scale: float = 0.5

    def __post_init__(self) -> None:
        if self.reflection <= 0 or self.expansion <= 1:
            raise ValidationError("need reflection > 0 and expansion > 1")
        if not (0 < self.contraction < 1) or not (0 < self.shrink < 1):
            raise ValidationError("contraction and shrink must lie in (0, 1)")


def _safe(cost, x: np.ndarray) -> float:
    value = cost(x)
    return float(value) if np.isfinite(value) else np.inf


def _simplex_run(cost, x0, config: OptimizerConfig, budget: int):
    """One Nelder-Mead descent; returns (best x, best f, evaluations, trace)."""
    k = len(x0)
    simplex = [np.array(x0, dtype=float)]
    for i in range(k):
        vertex = np.array(x0, dtype=float)
        vertex[i] += config.initial_step
        simplex.append(vertex)
    values = [_safe(cost, v) for v in simplex]
    trace = []
    iteration = 0
    while iteration < budget:
        order = np.argsort(values)
        simplex = [simplex[i] for i in order]
        values = [values[i] for i in order]
        trace.append((iteration, values[0]))
        if values[-1] - values[0] < config.simplex_tolerance:
            break
        centroid = np.mean(simplex[:-1], axis=0)
        reflected = centroid + config.reflection * (centroid - simplex[-1])
        f_reflected = _safe(cost, reflected)
        if f_reflected < values[0]:
            expanded = centroid + config.expansion * (reflected - centroid)
            f_expanded = _safe(cost, expanded)
            if f_expanded < f_reflected:
                simplex[-1], values[-1] = expanded, f_expanded
            else:
                simplex[-1], values[-1] = reflected, f_reflected
        elif f_reflected < values[-2]:
            simplex[-1], values[-1] = reflected, f_reflected
        else:
            contracted = centroid + config.contraction * (simplex[-1] - centroid)
            f_contracted = _safe(cost, contracted)
            if f_contracted < values[-1]:
                simplex[-1], values[-1] = contracted, f_contracted
            else:
                best = simplex[0]
                simplex = [best] + [
                    best + config.shrink * (v - best) for v in simplex[1:]
                ]
                values = [values[0]] + [_safe(cost, v) for v in simplex[1:]]
        iteration += 1
    order = np.argsort(values)
    best = simplex[order[0]]
    trace.append((iteration, values[order[0]]))
    return best, values[order[0]], iteration, trace


def nelder_mead(cost, x0, config: OptimizerConfig):
    """Simplex minimization with optional seeded restarts around the best point.

    Returns (best x, best f, trace) with a globally non-increasing trace.
    """
    x0 = np.asarray(x0, dtype=float)
    if x0.ndim != 1 or x0.size < 1:
        raise ValidationError("x0 must be a non-empty vector")
    if not np.isfinite(_safe(cost, x0)):
        raise ValidationError("cost is not finite at the starting point")
    rng = np.random.default_rng(config.seed)
    best_x, best_f, used, raw_trace = _simplex_run(cost, x0, config, config.max_iterations)
    trace = []
    offset = 0
    running = np.inf
    for it, value in raw_trace:
        running = min(running, value)
        trace.append((offset + it, running))
    offset += used
    for _ in range(config.restarts):
        start = best_x + rng.normal(scale=config.restart_scale, size=best_x.shape)
        x, f, used, raw_trace = _simplex_run(cost, start, config, config.max_iterations)
        for it, value in raw_trace:
            running = min(running, value)
            trace.append((offset + it, running))
        offset += used
        if f < best_f:
            best_x, best_f = x, f
    return best_x, best_f, trace


@dataclass(frozen=True)
class FitResult:
    best_params: ParameterVector
    train_mse: float
    test_mse: float
    accuracy: float
    iterations_used: int
    trace: tuple[tuple[int, float], ...]

    def to_json_dict(self) -> dict:
        return {
            "thetas": list(self.best_params.thetas),
            "etas": list(self.best_params.etas),
            "train_mse": self.train_mse,
            "test_mse": self.test_mse,
            "accuracy": self.accuracy,
            "iterations_used": self.iterations_used,
            "trace": [[it, value] for it, value in self.trace],
        }


def fit(
    spec: AnsatzSpec,
    train: LabeledDataset,
    test: LabeledDataset,
    config: OptimizerConfig,
) -> FitResult:
    """Optimize the circuit parameters (and rescaling factors) on train data."""
    if train.M != spec.M or test.M != spec.M:
        raise ValidationError("dataset dimensions do not match the ansatz")
    k = param_count(spec)
    n_etas = spec.n_etas()
    rng = np.random.default_rng(config.seed)
    x0 = np.concatenate([rng.uniform(0.0, 2.0 * np.pi, k), np.ones(n_etas)])

    def unpack(vector: np.ndarray) -> ParameterVector:
        return ParameterVector(tuple(vector[:k]), tuple(vector[k:]))

    def cost(vector: np.ndarray) -> float:
        return mse_cost(spec, unpack(vector), train)

    best_x, best_f, trace = nelder_mead(cost, x0, config)
    best_params = unpack(best_x)
    predictions = expectation_many(spec, best_params, test.points)
    return FitResult(
        best_params=best_params,
        train_mse=best_f,
        test_mse=float(np.mean((predictions - test.values) ** 2)),
        accuracy=accuracy(predictions, test.values),
        iterations_used=trace[-1][0] if trace else 0,
        trace=tuple(trace),
    )
