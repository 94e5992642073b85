"""Command-line surface: audit, spectrum, extract, fit and demo experiments.

Configuration is a single strict JSON document; tables are CSV with LF line
endings and 17-significant-digit floats, reports are JSON.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .circuits import (
    AnsatzSpec,
    EncodingSpec,
    ParameterVector,
    expectation_many,
    param_count,
)
from .errors import CircuitTooLargeError, UnsupportedEncodingError, ValidationError
from .fitting import OptimizerConfig, fit, make_dataset
from .fourier import (
    FourierSeries,
    degeneracy,
    audit,
    crossover_degree,
    evaluate_series,
    extract_analytic,
    extract_sampling,
    model_degree,
    noncommuting_spectrum_check,
    spectrum,
    trig_to_exp,
)

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_CAPABILITY = 3

BUILTIN_TARGETS = {
    "fig4": [
        ("const", -0.02, (0, 0)),
        ("cos", 0.04, (2, 1)),
        ("sin", 0.25, (1, 0)),
        ("cos", -0.3, (0, 2)),
        ("sin", -0.1, (1, -1)),
    ],
    "fig5": [
        ("const", 0.2, (0,)),
        ("cos", 0.2, (0.5,)),
        ("sin", 0.2, (0.5,)),
        ("cos", 0.2, (1,)),
        ("sin", 0.2, (1,)),
    ],
    "fig_a7": [
        ("const", 1.0 / 12.0, (0, 0)),
        ("cos", 1.0 / 12.0, (1, 0)),
        ("cos", 1.0 / 12.0, (0, 1)),
    ],
}


def _fmt(value: float) -> str:
    return f"{value:.17g}"


def _write_text(path: str | Path, text: str) -> None:
    Path(path).write_text(text, encoding="utf-8")


def _write_json(path: str | Path, payload) -> None:
    _write_text(path, json.dumps(payload, sort_keys=True, indent=2) + "\n")


def _check_keys(section: dict, allowed: set[str], where: str) -> None:
    unknown = set(section) - allowed
    if unknown:
        raise ValidationError(f"unknown keys in {where}: {sorted(unknown)}")


def _require(section: dict, keys: set[str], where: str) -> None:
    missing = keys - set(section)
    if missing:
        raise ValidationError(f"missing keys in {where}: {sorted(missing)}")


def load_config(path: str | Path) -> dict:
    try:
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ValidationError(f"cannot read config {path}: {exc}") from exc
    if not isinstance(raw, dict):
        raise ValidationError("config root must be a JSON object")
    _check_keys(
        raw,
        {"ansatz", "encoding", "observable", "target", "data", "optimizer", "params"},
        "config",
    )
    return raw


def parse_ansatz(config: dict) -> AnsatzSpec:
    _require(config, {"ansatz"}, "config")
    section = config["ansatz"]
    _check_keys(section, {"kind", "d", "m", "l", "p"}, "ansatz")
    _require(section, {"kind", "d", "m", "l"}, "ansatz")
    encoding_section = config.get("encoding", {"preset": "spin"})
    _check_keys(encoding_section, {"preset", "eigenvalues", "rescaling_mode"}, "encoding")
    mode = encoding_section.get("rescaling_mode", "none")
    if "eigenvalues" in encoding_section:
        encoding = EncodingSpec(tuple(encoding_section["eigenvalues"]), mode)
    elif encoding_section.get("preset", "spin") == "spin":
        encoding = EncodingSpec.spin(int(section["d"]), mode)
    else:
        raise ValidationError(f"unknown encoding preset {encoding_section.get('preset')!r}")
    observable = config.get("observable", "default")
    if observable == "default":
        observable = None
    else:
        observable = tuple(float(v) for v in observable)
    return AnsatzSpec(
        kind=section["kind"],
        d=int(section["d"]),
        M=int(section["m"]),
        L=int(section["l"]),
        p=int(section["p"]) if section.get("p") is not None else None,
        encoding=encoding,
        observable=observable,
    )


def parse_target(config: dict) -> FourierSeries:
    _require(config, {"target"}, "config")
    section = config["target"]
    _check_keys(section, {"builtin", "trig", "coefficients"}, "target")
    if len(section) != 1:
        raise ValidationError("target must set exactly one of builtin/trig/coefficients")
    if "builtin" in section:
        name = section["builtin"]
        if name not in BUILTIN_TARGETS:
            raise ValidationError(f"unknown builtin target {name!r}")
        return trig_to_exp(BUILTIN_TARGETS[name])
    if "trig" in section:
        terms = []
        for entry in section["trig"]:
            _check_keys(entry, {"kind", "amplitude", "frequency"}, "trig term")
            _require(entry, {"kind", "amplitude", "frequency"}, "trig term")
            terms.append((entry["kind"], float(entry["amplitude"]), tuple(entry["frequency"])))
        return trig_to_exp(terms)
    return FourierSeries.from_json_dict(section["coefficients"])


def parse_data(config: dict, target: FourierSeries, seed_override: int | None):
    _require(config, {"data"}, "config")
    section = config["data"]
    _check_keys(section, {"n_train", "n_test", "ranges", "seed"}, "data")
    _require(section, {"n_train", "n_test", "ranges", "seed"}, "data")
    seed = int(section["seed"]) if seed_override is None else seed_override
    ranges = [tuple(r) for r in section["ranges"]]
    train = make_dataset(target, ranges, int(section["n_train"]), seed)
    test = make_dataset(target, ranges, int(section["n_test"]), seed + 1)
    return train, test


def parse_optimizer(config: dict) -> OptimizerConfig:
    section = config.get("optimizer", {})
    allowed = {
        "max_iterations",
        "simplex_tolerance",
        "restarts",
        "seed",
        "reflection",
        "expansion",
        "contraction",
        "shrink",
        "initial_step",
        "restart_scale",
    }
    _check_keys(section, allowed, "optimizer")
    return OptimizerConfig(**section)


def parse_params(config: dict, spec: AnsatzSpec, seed: int) -> ParameterVector:
    if "params" in config:
        section = config["params"]
        _check_keys(section, {"thetas", "etas"}, "params")
        _require(section, {"thetas"}, "params")
        return ParameterVector(
            tuple(section["thetas"]), tuple(section.get("etas", ()))
        )
    return ParameterVector.random(spec, np.random.default_rng(seed))


# ---------------------------------------------------------------------------
# commands


def cmd_audit(args) -> int:
    report = audit(args.kind, args.d, args.m, args.p, args.lmax)
    lines = ["L,D,N_p,N_c,nu,satisfied"]
    for row in report.rows:
        lines.append(
            f"{row.L},{row.D},{row.N_p},{row.N_c},{row.nu},{str(row.satisfied).lower()}"
        )
    _write_text(args.output, "\n".join(lines) + "\n")
    crossover = crossover_degree(args.kind, args.d, args.m, args.p, max(args.lmax, 100))
    print(f"crossover degree: {crossover if crossover is not None else 'none'}")
    return EXIT_OK


def cmd_spectrum(args) -> int:
    spec = AnsatzSpec(kind="line", d=args.d, M=1, L=args.l)
    lines = ["omega,degeneracy"]
    degree = model_degree(spec)
    for k in range(-degree, degree + 1):
        omega = args.eta * k
        lines.append(f"{_fmt(omega)},{degeneracy(k, args.l, args.d)}")
    _write_text(args.output, "\n".join(lines) + "\n")
    return EXIT_OK


def cmd_extract(args) -> int:
    config = load_config(args.config)
    spec = parse_ansatz(config)
    seed = args.seed if args.seed is not None else 0
    params = parse_params(config, spec, seed)
    if args.verify:
        analytic = extract_analytic(spec, params)
        sampled = extract_sampling(spec, params)
        keys = set(analytic.terms) | set(sampled.terms)
        discrepancy = max(
            (abs(analytic.coefficient(k) - sampled.coefficient(k)) for k in keys),
            default=0.0,
        )
        print(f"max coefficient discrepancy: {_fmt(discrepancy)}")
        series = analytic if args.method == "analytic" else sampled
    else:
        extractor = extract_analytic if args.method == "analytic" else extract_sampling
        series = extractor(spec, params)
    _write_json(args.output, series.to_json_dict())
    return EXIT_OK


def _prediction_grid(spec: AnsatzSpec, ranges, seed: int) -> np.ndarray:
    if spec.M <= 2:
        axes = [np.linspace(lo, hi, 40) for lo, hi in ranges]
        return np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, spec.M)
    rng = np.random.default_rng(seed)
    lows = np.array([lo for lo, _ in ranges])
    highs = np.array([hi for _, hi in ranges])
    return lows + rng.random((2000, spec.M)) * (highs - lows)


def cmd_fit(args) -> int:
    config = load_config(args.config)
    spec = parse_ansatz(config)
    target = parse_target(config)
    train, test = parse_data(config, target, args.seed)
    optimizer = parse_optimizer(config)
    if args.seed is not None:
        optimizer = OptimizerConfig(
            **{**optimizer.__dict__, "seed": args.seed}
        )
    result = fit(spec, train, test, optimizer)
    outdir = Path(args.output)
    outdir.mkdir(parents=True, exist_ok=True)
    _write_json(outdir / "result.json", result.to_json_dict())
    grid = _prediction_grid(spec, train.ranges, train.seed)
    predicted = expectation_many(spec, result.best_params, grid)
    truth = np.array([evaluate_series(target, x) for x in grid])
    header = ",".join(f"x_{m + 1}" for m in range(spec.M)) + ",f_true,f_pred"
    lines = [header]
    for point, f_true, f_pred in zip(grid, truth, predicted):
        coords = ",".join(_fmt(v) for v in point)
        lines.append(f"{coords},{_fmt(f_true)},{_fmt(f_pred)}")
    _write_text(outdir / "predictions.csv", "\n".join(lines) + "\n")
    trace_lines = ["iteration,best_cost"]
    for iteration, value in result.trace:
        trace_lines.append(f"{iteration},{_fmt(value)}")
    _write_text(outdir / "trace.csv", "\n".join(trace_lines) + "\n")
    print(
        f"train_mse={_fmt(result.train_mse)} test_mse={_fmt(result.test_mse)} "
        f"accuracy={_fmt(result.accuracy)}"
    )
    return EXIT_OK


def _demo_collapsed(seed: int) -> dict:
    spec = AnsatzSpec(kind="collapsed_line", d=2, M=2, L=3)
    rng = np.random.default_rng(seed)
    worst_shift = 0.0
    worst_swap = 0.0
    for _ in range(100):
        params = ParameterVector.random(spec, rng)
        a, b = rng.uniform(-np.pi, np.pi, 2)
        points = np.array([[a, b], [a + b, 0.0], [b, a]])
        f_ab, f_sum, f_ba = expectation_many(spec, params, points)
        worst_shift = max(worst_shift, abs(f_ab - f_sum))
        worst_swap = max(worst_swap, abs(f_ab - f_ba))
    return {
        "demo": "collapsed",
        "n_triples": 100,
        "max_shift_residual": worst_shift,
        "max_swap_residual": worst_swap,
    }


def _demo_product(seed: int) -> dict:
    spec = AnsatzSpec(
        kind="product_parallel", d=2, M=2, L=1, observable=(1.0, -1.0, -1.0, 1.0)
    )
    worst = 0.0
    for offset in range(10):
        rng = np.random.default_rng(seed + offset)
        params = ParameterVector.random(spec, rng)
        series = extract_sampling(spec, params)
        factors = []
        for qudit in range(2):
            thetas = []
            for slot in range(2):
                base = slot * 6 + qudit * 3
                thetas.extend(params.thetas[base : base + 3])
            sub = AnsatzSpec(kind="line", d=2, M=1, L=1)
            factors.append(extract_sampling(sub, ParameterVector(tuple(thetas))))
        for w1 in range(-1, 2):
            for w2 in range(-1, 2):
                product = factors[0].coefficient((w1,)) * factors[1].coefficient((w2,))
                worst = max(worst, abs(series.coefficient((w1, w2)) - product))
    return {"demo": "product", "n_seeds": 10, "max_factorization_residual": worst}


def _demo_noncommuting(seed: int) -> dict:
    spec = AnsatzSpec(kind="noncommuting", d=2, M=2, L=1)
    report = noncommuting_spectrum_check(spec, n_seeds=20, seed=seed)
    return {
        "demo": "noncommuting",
        "entries": [
            {"seed": s, "out_of_model": flag, "max_out_of_model_magnitude": mag}
            for s, flag, mag in zip(report.seeds, report.out_of_model, report.max_magnitudes)
        ],
        "fraction_out_of_model": report.fraction,
    }


def cmd_demo(args) -> int:
    runners = {
        "collapsed": _demo_collapsed,
        "product": _demo_product,
        "noncommuting": _demo_noncommuting,
    }
    payload = runners[args.name](args.seed)
    _write_json(args.output, payload)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fourier-circuits",
        description="Qudit re-uploading circuits: audits, spectra, coefficients, fits",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_audit = sub.add_parser("audit", help="degrees-of-freedom condition table")
    p_audit.add_argument("--kind", required=True, choices=["line", "parallel", "mixed"])
    p_audit.add_argument("--d", type=int, required=True)
    p_audit.add_argument("--m", type=int, required=True)
    p_audit.add_argument("--p", type=int, default=None)
    p_audit.add_argument("--lmax", type=int, default=10)
    p_audit.add_argument("--output", required=True)
    p_audit.set_defaults(func=cmd_audit)

    p_spec = sub.add_parser("spectrum", help="frequency spectrum with degeneracies")
    p_spec.add_argument("--d", type=int, required=True)
    p_spec.add_argument("--l", type=int, required=True)
    p_spec.add_argument("--eta", type=float, default=1.0)
    p_spec.add_argument("--output", required=True)
    p_spec.set_defaults(func=cmd_spectrum)

    p_ext = sub.add_parser("extract", help="Fourier coefficients of a circuit")
    p_ext.add_argument("--config", required=True)
    p_ext.add_argument("--method", choices=["analytic", "sampling"], default="analytic")
    p_ext.add_argument("--verify", action="store_true")
    p_ext.add_argument("--seed", type=int, default=None)
    p_ext.add_argument("--output", required=True)
    p_ext.set_defaults(func=cmd_extract)

    p_fit = sub.add_parser("fit", help="fit a target function with a circuit")
    p_fit.add_argument("--config", required=True)
    p_fit.add_argument("--seed", type=int, default=None)
    p_fit.add_argument("--output", required=True)
    p_fit.set_defaults(func=cmd_fit)

    p_demo = sub.add_parser("demo", help="variant-circuit property experiments")
    p_demo.add_argument("--name", required=True, choices=["collapsed", "product", "noncommuting"])
    p_demo.add_argument("--seed", type=int, default=0)
    p_demo.add_argument("--output", required=True)
    p_demo.set_defaults(func=cmd_demo)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (CircuitTooLargeError, UnsupportedEncodingError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAPABILITY


if __name__ == "__main__":
    sys.exit(main())
