"""Frequency spectra, degeneracies, Fourier-series extraction and the
degrees-of-freedom audit for the circuit models."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .circuits import AnsatzSpec, ParameterVector, circuit_structure, expectation_many, param_count
from .errors import CircuitTooLargeError, UnsupportedEncodingError, ValidationError

COEFF_FLOOR = 1e-14
ANALYTIC_GUARD = 1e8

FrequencyKey = tuple[int, ...]


@dataclass
class FourierSeries:
    """Sparse truncated Fourier series with Hermitian-symmetric coefficients.

    Frequency keys are integer tuples in units of `unit`: the physical
    frequency is the key itself for "integer" and key/2 for "half".
    """

    M: int
    terms: dict[FrequencyKey, complex] = field(default_factory=dict)
    unit: str = "integer"

    def __post_init__(self) -> None:
        if self.unit not in ("integer", "half"):
            raise ValidationError(f"unknown frequency unit {self.unit!r}")
        cleaned = {}
        for key, value in self.terms.items():
            key = tuple(int(k) for k in key)
            if len(key) != self.M:
                raise ValidationError(
                    f"frequency vector {key} does not have dimension {self.M}"
                )
            if abs(value) >= COEFF_FLOOR:
                cleaned[key] = complex(value)
        self.terms = cleaned

    @property
    def scale(self) -> float:
        return 1.0 if self.unit == "integer" else 0.5

    def coefficient(self, key: FrequencyKey) -> complex:
        return self.terms.get(tuple(int(k) for k in key), 0j)

    def max_symmetry_violation(self) -> float:
        worst = 0.0
        for key, value in self.terms.items():
            mirror = tuple(-k for k in key)
            worst = max(worst, abs(value - np.conj(self.terms.get(mirror, 0j))))
        return worst

    def to_json_dict(self) -> dict:
        entries = []
        for key in sorted(self.terms):
            if not _is_canonical(key):
                continue
            value = self.terms[key]
            entries.append(
                {"freq": list(key), "re": float(value.real), "im": float(value.imag)}
            )
        return {"M": self.M, "unit": self.unit, "terms": entries}

    @classmethod
    def from_json_dict(cls, data: dict) -> "FourierSeries":
        terms: dict[FrequencyKey, complex] = {}
        for entry in data["terms"]:
            key = tuple(int(k) for k in entry["freq"])
            value = complex(entry["re"], entry["im"])
            terms[key] = terms.get(key, 0j) + value
            mirror = tuple(-k for k in key)
            if mirror != key:
                terms[mirror] = terms.get(mirror, 0j) + np.conj(value)
        return cls(M=int(data["M"]), terms=terms, unit=data["unit"])


def _is_canonical(key: FrequencyKey) -> bool:
    """Zero vector, or first nonzero component positive."""
    for k in key:
        if k != 0:
            return k > 0
    return True


def evaluate_series(series: FourierSeries, x: np.ndarray) -> float:
    """Real value of the series at x; symmetry keeps the imaginary part tiny."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if x.shape != (series.M,):
        raise ValidationError(f"expected {series.M} features, got shape {x.shape}")
    total = 0j
    for key, value in series.terms.items():
        total += value * np.exp(1j * series.scale * float(np.dot(key, x)))
    if abs(total.imag) > 1e-10:
        raise ValidationError(
            f"series is not Hermitian-symmetric: imaginary residual {total.imag:.3e}"
        )
    return float(total.real)


def trig_to_exp(terms, M: int | None = None) -> FourierSeries:
    """Convert (kind, amplitude, frequency-vector) trig terms to exponential form.

    kind is one of "const", "cos", "sin". Frequencies may be integers or
    half-integers; the unit of the resulting series is chosen accordingly.
    """
    terms = list(terms)
    if M is None:
        if not terms:
            raise ValidationError("cannot infer dimension from an empty term list")
        M = len(terms[0][2])
    doubled: dict[FrequencyKey, complex] = {}
    for kind, amplitude, freq in terms:
        freq = tuple(float(f) for f in freq)
        if len(freq) != M:
            raise ValidationError(f"frequency vector {freq} does not have dimension {M}")
        key = tuple(int(round(2 * f)) for f in freq)
        if any(abs(2 * f - k) > 1e-9 for f, k in zip(freq, key)):
            raise ValidationError(
                f"frequencies must lie on the half-integer grid, got {freq}"
            )
        mirror = tuple(-k for k in key)
        amplitude = float(amplitude)
        if kind == "const":
            if any(key):
                raise ValidationError("const terms must carry a zero frequency")
            doubled[key] = doubled.get(key, 0j) + amplitude
        elif kind == "cos":
            doubled[key] = doubled.get(key, 0j) + amplitude / 2.0
            doubled[mirror] = doubled.get(mirror, 0j) + amplitude / 2.0
        elif kind == "sin":
            doubled[key] = doubled.get(key, 0j) - 1j * amplitude / 2.0
            doubled[mirror] = doubled.get(mirror, 0j) + 1j * amplitude / 2.0
        else:
            raise ValidationError(f"unknown trig term kind {kind!r}")
    if all(all(k % 2 == 0 for k in key) for key in doubled):
        return FourierSeries(
            M=M, terms={tuple(k // 2 for k in key): v for key, v in doubled.items()}
        )
    return FourierSeries(M=M, terms=doubled, unit="half")


# ---------------------------------------------------------------------------
# degree, spectrum, degeneracies, audit


def _require_spin(spec: AnsatzSpec) -> None:
    if spec.kind == "noncommuting":
        raise UnsupportedEncodingError(
            "the non-commuting encoding has no integer frequency spectrum"
        )
    if not spec.encoding.is_spin:
        raise UnsupportedEncodingError(
            "degree and spectrum are defined for the spin-like encoding only"
        )


def model_degree(spec: AnsatzSpec) -> int:
    """Degree (d-1)L of the series generated with the spin-like encoding."""
    _require_spin(spec)
    return (spec.d - 1) * spec.L


def spectrum(spec: AnsatzSpec, eta: float = 1.0) -> list[float]:
    """Symmetric per-feature frequency set {eta*k : |k| <= (d-1)L}."""
    _require_spin(spec)
    degree = model_degree(spec)
    values = sorted({eta * k for k in range(-degree, degree + 1)})
    return [float(v) for v in values]


def _restricted_counts(draws: int, n_levels: int) -> list[int]:
    """Counts of each total over `draws` draws from {0, ..., n_levels-1}."""
    counts = [1]
    for _ in range(draws):
        nxt = [0] * (len(counts) + n_levels - 1)
        for s, c in enumerate(counts):
            for v in range(n_levels):
                nxt[s + v] += c
        counts = nxt
    return counts


def degeneracy(omega: int, L: int, N: int) -> int:
    """Number of eigenvalue-index pairs contributing to frequency omega.

    Counts 2L draws from the equispaced N-level spectrum whose signed sum
    difference equals omega; zero outside the band |omega| <= (N-1)L.
    """
    if L < 1 or N < 2:
        raise ValidationError("degeneracy needs L >= 1 and N >= 2")
    omega = int(omega)
    if abs(omega) > (N - 1) * L:
        return 0
    counts = _restricted_counts(2 * L, N)
    return counts[(N - 1) * L + omega]


def degeneracy_multi(omega_vec, L: int, N: int) -> int:
    """Product of per-dimension degeneracies."""
    result = 1
    for omega in omega_vec:
        result *= degeneracy(int(omega), L, N)
        if result == 0:
            return 0
    return result


def num_coefficients(D: int, M: int) -> int:
    """Independent coefficients of a degree-D, M-dimensional series."""
    if D < 0 or M < 1:
        raise ValidationError("need D >= 0 and M >= 1")
    return ((2 * D + 1) ** M - 1) // 2 + 1


def dof(D: int, M: int) -> int:
    """Real degrees of freedom (2D+1)^M of a degree-D, M-dimensional series."""
    if D < 0 or M < 1:
        raise ValidationError("need D >= 0 and M >= 1")
    return (2 * D + 1) ** M


@dataclass(frozen=True)
class AuditRow:
    L: int
    D: int
    N_p: int
    N_c: int
    nu: int
    satisfied: bool


@dataclass(frozen=True)
class AuditReport:
    kind: str
    d: int
    M: int
    p: int | None
    rows: tuple[AuditRow, ...]


def audit(kind: str, d: int, M: int, p: int | None = None, L_max: int = 10) -> AuditReport:
    """Degrees-of-freedom condition N_p >= nu for L = 1..L_max."""
    if kind not in ("line", "parallel", "mixed"):
        raise ValidationError(f"audit covers line/parallel/mixed, got {kind!r}")
    rows = []
    for L in range(1, L_max + 1):
        spec = AnsatzSpec(kind=kind, d=d, M=M, L=L, p=p if kind == "mixed" else None)
        D = model_degree(spec)
        N_p = param_count(spec)
        N_c = num_coefficients(D, M)
        nu = dof(D, M)
        rows.append(AuditRow(L=L, D=D, N_p=N_p, N_c=N_c, nu=nu, satisfied=N_p >= nu))
    return AuditReport(kind=kind, d=d, M=M, p=p if kind == "mixed" else None, rows=tuple(rows))


def crossover_degree(
    kind: str, d: int, M: int, p: int | None = None, L_max: int = 100
) -> int | None:
    """Largest degree D = (d-1)L with N_p >= nu, scanning L up to L_max."""
    report = audit(kind, d, M, p, L_max)
    best = None
    for row in report.rows:
        if row.satisfied:
            best = row.D
    return best


# ---------------------------------------------------------------------------
# coefficient extraction


def _check_unit_etas(spec: AnsatzSpec, params: ParameterVector) -> None:
    if any(abs(eta - 1.0) > 1e-12 for eta in params.etas):
        raise UnsupportedEncodingError(
            "coefficient extraction requires unit rescaling factors"
        )


def extract_analytic(spec: AnsatzSpec, params: ParameterVector) -> FourierSeries:
    """Exact coefficients from the trainable-gate matrix elements.

    Propagates, through the circuit, the map from per-feature frequency
    vectors to amplitude vectors (the grouped multi-index sum), then pairs
    frequency vectors to accumulate each coefficient.
    """
    _require_spin(spec)
    _check_unit_etas(spec, params)
    if float(spec.dim) ** (2 * spec.n_encoding_gates) > ANALYTIC_GUARD:
        raise CircuitTooLargeError(
            "analytic enumeration too large for this circuit; use extract_sampling"
        )
    zero = (0,) * spec.M
    start = np.zeros(spec.dim, dtype=complex)
    start[0] = 1.0
    # amplitudes keyed by doubled (half-integer-safe) frequency vectors
    waves: dict[FrequencyKey, np.ndarray] = {zero: start}
    for element in circuit_structure(spec, params):
        if element[0] == "A":
            gate = element[1]
            waves = {key: gate @ vec for key, vec in waves.items()}
        else:
            _, m, _eta, levels = element
            doubled = np.rint(2 * levels).astype(int)
            if np.max(np.abs(2 * levels - doubled)) > 1e-12:  # pragma: no cover
                raise UnsupportedEncodingError("spectrum is not half-integer")
            nxt: dict[FrequencyKey, np.ndarray] = {}
            for key, vec in waves.items():
                for value in np.unique(doubled):
                    masked = np.where(doubled == value, vec, 0)
                    if not np.any(masked):
                        continue
                    shifted = list(key)
                    shifted[m] += int(value)
                    shifted = tuple(shifted)
                    if shifted in nxt:
                        nxt[shifted] = nxt[shifted] + masked
                    else:
                        nxt[shifted] = masked
            waves = nxt
    observable = np.asarray(spec.observable)
    terms: dict[FrequencyKey, complex] = {}
    for key_a, vec_a in waves.items():
        for key_b, vec_b in waves.items():
            doubled_omega = tuple(a - b for a, b in zip(key_a, key_b))
            if any(k % 2 for k in doubled_omega):  # pragma: no cover - parity safety
                raise UnsupportedEncodingError("non-integer frequency difference")
            omega = tuple(k // 2 for k in doubled_omega)
            value = complex(np.dot(observable, vec_a * np.conj(vec_b)))
            terms[omega] = terms.get(omega, 0j) + value
    return FourierSeries(M=spec.M, terms=terms)


def _dft_grid(values: np.ndarray, grid_size: int, M: int) -> dict[FrequencyKey, complex]:
    """Direct (non-FFT) multi-dimensional DFT of a uniform periodic grid."""
    k = np.arange(grid_size)
    transform = np.exp(-2j * np.pi * np.outer(k, k) / grid_size) / grid_size
    for axis in range(M):
        values = np.moveaxis(np.tensordot(transform, values, axes=[1, axis]), 0, axis)
    half = grid_size // 2
    result: dict[FrequencyKey, complex] = {}
    for idx in itertools.product(range(grid_size), repeat=M):
        value = complex(values[idx])
        if abs(value) < COEFF_FLOOR:
            continue
        key = tuple(i if i <= half else i - grid_size for i in idx)
        result[key] = value
    return result


def extract_sampling(spec: AnsatzSpec, params: ParameterVector) -> FourierSeries:
    """Coefficients from expectation values on the minimal uniform grid.

    Band-limited models are recovered exactly by a (2D+1)-point grid per
    feature followed by a direct discrete Fourier transform.
    """
    degree = model_degree(spec)
    _check_unit_etas(spec, params)
    grid_size = 2 * degree + 1
    axis = 2.0 * np.pi * np.arange(grid_size) / grid_size
    mesh = np.stack(
        np.meshgrid(*([axis] * spec.M), indexing="ij"), axis=-1
    ).reshape(-1, spec.M)
    values = expectation_many(spec, params, mesh).reshape((grid_size,) * spec.M)
    return FourierSeries(M=spec.M, terms=_dft_grid(values, grid_size, spec.M))


@dataclass(frozen=True)
class NoncommutingReport:
    """Per-seed out-of-model frequency flags for the non-commuting encoding."""

    seeds: tuple[int, ...]
    out_of_model: tuple[bool, ...]
    max_magnitudes: tuple[float, ...]

    @property
    def fraction(self) -> float:
        return sum(self.out_of_model) / len(self.out_of_model)


def noncommuting_spectrum_check(
    spec: AnsatzSpec,
    n_seeds: int = 20,
    seed: int = 0,
    magnitude_tol: float = 1e-6,
) -> NoncommutingReport:
    """Sample the non-commuting model over a 4*pi period per feature and flag
    seeds whose spectrum contains frequencies outside the commuting-model
    integer set."""
    if spec.kind != "noncommuting":
        raise ValidationError("spectrum check applies to the noncommuting kind")
    degree = (spec.d - 1) * spec.L
    grid_size = 4 * degree + 1
    axis = 4.0 * np.pi * np.arange(grid_size) / grid_size
    mesh = np.stack(
        np.meshgrid(*([axis] * spec.M), indexing="ij"), axis=-1
    ).reshape(-1, spec.M)
    seeds, flags, magnitudes = [], [], []
    for offset in range(n_seeds):
        rng = np.random.default_rng(seed + offset)
        params = ParameterVector.random(spec, rng)
        values = expectation_many(spec, params, mesh).reshape((grid_size,) * spec.M)
        # doubled-unit frequencies: odd components are half-integers
        coeffs = _dft_grid(values, grid_size, spec.M)
        worst = 0.0
        for key, value in coeffs.items():
            if any(k % 2 for k in key):
                worst = max(worst, abs(value))
        seeds.append(seed + offset)
        flags.append(worst > magnitude_tol)
        magnitudes.append(worst)
    return NoncommutingReport(
        seeds=tuple(seeds), out_of_model=tuple(flags), max_magnitudes=tuple(magnitudes)
    )
