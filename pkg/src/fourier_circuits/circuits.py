"""Data re-uploading circuit ansatzes and their expectation values.

Builds the encoding and trainable gates, assembles the line / parallel /
mixed ansatzes together with the variant circuits (collapsed-line encoding,
unentangled parallel processing, non-commuting encoding), and evaluates the
model output <M(x)> from the exact statevector.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ValidationError
from .numerics import gellmann_basis, hermitian_eig

KINDS = (
    "line",
    "parallel",
    "mixed",
    "collapsed_line",
    "product_parallel",
    "noncommuting",
)
RESCALING_MODES = ("none", "global", "per_gate", "per_feature")

# Pauli-like 2x2 generators with eigenvalues +-1/2, used by the
# non-commuting encoding preset.
_SIGMA_Y_HALF = 0.5 * np.array([[0.0, -1j], [1j, 0.0]])
_SIGMA_Z_HALF = 0.5 * np.array([[1.0, 0.0], [0.0, -1.0]])


def spin_eigenvalues(dim: int) -> tuple[float, ...]:
    """Equispaced symmetric spectrum {(dim-1)/2, (dim-3)/2, ..., -(dim-1)/2}."""
    if dim < 2:
        raise ValidationError(f"spin eigenvalues need dim >= 2, got {dim}")
    return tuple((dim - 1) / 2.0 - k for k in range(dim))


@dataclass(frozen=True)
class EncodingSpec:
    """Spectrum of the encoding Hamiltonian plus the rescaling policy."""

    eigenvalues: tuple[float, ...]
    rescaling_mode: str = "none"

    def __post_init__(self) -> None:
        if len(self.eigenvalues) < 2:
            raise ValidationError("encoding needs at least two eigenvalues")
        if self.rescaling_mode not in RESCALING_MODES:
            raise ValidationError(
                f"unknown rescaling mode {self.rescaling_mode!r}; "
                f"expected one of {RESCALING_MODES}"
            )
        object.__setattr__(self, "eigenvalues", tuple(float(v) for v in self.eigenvalues))

    @classmethod
    def spin(cls, dim: int, rescaling_mode: str = "none") -> "EncodingSpec":
        return cls(spin_eigenvalues(dim), rescaling_mode)

    @property
    def is_spin(self) -> bool:
        return self.eigenvalues == spin_eigenvalues(len(self.eigenvalues))


def default_observable(d: int) -> tuple[float, ...]:
    """Single-qudit diagonal observable with eigenvalues 1 - 2j/(d-1)."""
    return tuple(1.0 - 2.0 * j / (d - 1) for j in range(d))


@dataclass(frozen=True)
class AnsatzSpec:
    """Full description of one circuit family instance."""

    kind: str
    d: int
    M: int
    L: int
    p: int | None = None
    encoding: EncodingSpec | None = None
    observable: tuple[float, ...] | None = None

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ValidationError(f"unknown ansatz kind {self.kind!r}")
        if self.d < 2 or self.M < 1 or self.L < 1:
            raise ValidationError("require d >= 2, M >= 1, L >= 1")
        if self.kind == "mixed":
            if self.p is None or not 1 <= self.p <= self.M:
                raise ValidationError("mixed ansatz needs 1 <= p <= M")
        elif self.p is not None:
            raise ValidationError(f"p is only meaningful for the mixed ansatz")
        if self.kind == "noncommuting" and self.d != 2:
            raise ValidationError("non-commuting preset is defined for d = 2 only")
        if self.encoding is None:
            object.__setattr__(self, "encoding", EncodingSpec.spin(self.d))
        if len(self.encoding.eigenvalues) != self.d:
            raise ValidationError("encoding spectrum length must equal d")
        obs = self.observable
        if obs is None:
            obs = default_observable(self.d)
        obs = tuple(float(v) for v in obs)
        if len(obs) == self.d and self.dim != self.d:
            # single-qudit observable on the first qudit, identities elsewhere
            obs = tuple(
                obs[i // (self.dim // self.d)] for i in range(self.dim)
            )
        if len(obs) != self.dim:
            raise ValidationError(
                f"observable length {len(obs)} matches neither d={self.d} "
                f"nor the register dimension {self.dim}"
            )
        object.__setattr__(self, "observable", obs)

    @property
    def n_qudits(self) -> int:
        if self.kind in ("line", "collapsed_line", "noncommuting"):
            return 1
        if self.kind in ("parallel", "product_parallel"):
            return self.M
        return self.p

    @property
    def dim(self) -> int:
        return self.d**self.n_qudits

    @property
    def n_encoding_gates(self) -> int:
        return self.M * self.L

    def n_etas(self) -> int:
        mode = self.encoding.rescaling_mode
        if mode == "none":
            return 0
        if mode == "global":
            return 1
        if mode == "per_feature":
            return self.M
        return self.n_encoding_gates


@dataclass(frozen=True)
class ParameterVector:
    """Trainable-gate angles plus rescaling factors, in circuit order."""

    thetas: tuple[float, ...]
    etas: tuple[float, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "thetas", tuple(float(v) for v in self.thetas))
        object.__setattr__(self, "etas", tuple(float(v) for v in self.etas))

    @classmethod
    def zeros(cls, spec: "AnsatzSpec") -> "ParameterVector":
        return cls((0.0,) * param_count(spec), (1.0,) * spec.n_etas())

    @classmethod
    def random(cls, spec: "AnsatzSpec", rng: np.random.Generator) -> "ParameterVector":
        thetas = rng.uniform(0.0, 2.0 * np.pi, param_count(spec))
        return cls(tuple(thetas), (1.0,) * spec.n_etas())


def encoding_gate(x: float, enc: EncodingSpec, eta: float = 1.0) -> np.ndarray:
    """Diagonal encoding gate diag(exp(i x eta lambda_k))."""
    if not math.isfinite(eta):
        raise ValidationError("rescaling factor must be finite")
    return np.diag(np.exp(1j * x * eta * np.asarray(enc.eigenvalues)))


def trainable_gate(theta: np.ndarray, basis: tuple[np.ndarray, ...]) -> np.ndarray:
    """exp(i sum_j theta_j G_j) over a generator basis."""
    theta = np.asarray(theta, dtype=float)
    if theta.shape != (len(basis),):
        raise ValidationError(
            f"expected {len(basis)} angles, got shape {theta.shape}"
        )
    generator = np.tensordot(theta, np.asarray(basis), axes=1)
    eigenvalues, eigenvectors = hermitian_eig(generator)
    return (eigenvectors * np.exp(1j * eigenvalues)) @ eigenvectors.conj().T


def _gate_slots(spec: AnsatzSpec) -> tuple[int, int]:
    """(number of trainable-gate slots, generator parameters per slot)."""
    d, M, L = spec.d, spec.M, spec.L
    if spec.kind == "line":
        return M * L + 1, d**2 - 1
    if spec.kind == "parallel":
        return L + 1, d ** (2 * M) - 1
    if spec.kind == "mixed":
        return math.ceil(M / spec.p) * L + 1, d ** (2 * spec.p) - 1
    if spec.kind in ("collapsed_line", "noncommuting"):
        return L + 1, d**2 - 1
    # product_parallel: each slot is M independent single-qudit gates
    return L + 1, M * (d**2 - 1)


def param_count(spec: AnsatzSpec) -> int:
    """Total number of trainable generator parameters in the circuit."""
    slots, per_slot = _gate_slots(spec)
    return slots * per_slot


def _feature_levels(spec: AnsatzSpec, qudit: int) -> np.ndarray:
    """Per-register-index encoding eigenvalue when the gate sits on `qudit`."""
    eigs = np.asarray(spec.encoding.eigenvalues)
    n, d = spec.n_qudits, spec.d
    idx = (np.arange(spec.dim) // d ** (n - 1 - qudit)) % d
    return eigs[idx]


def _resolve_eta(spec: AnsatzSpec, params: ParameterVector, feature: int, gate: int) -> float:
    mode = spec.encoding.rescaling_mode
    if mode == "none":
        return 1.0
    if mode == "global":
        return params.etas[0]
    if mode == "per_feature":
        return params.etas[feature]
    return params.etas[gate]


def circuit_structure(spec: AnsatzSpec, params: ParameterVector):
    """Ordered circuit elements.

    Yields ("A", matrix) for trainable gates, ("S", feature, eta, levels)
    for diagonal encodings (levels is the per-register-index eigenvalue
    array) and ("NC", feature, eta, generator) for the non-commuting preset.
    """
    slots, per_slot = _gate_slots(spec)
    if len(params.thetas) != slots * per_slot:
        raise ValidationError(
            f"expected {slots * per_slot} angles for {spec.kind} "
            f"(d={spec.d}, M={spec.M}, L={spec.L}), got {len(params.thetas)}"
        )
    if len(params.etas) != spec.n_etas():
        raise ValidationError(
            f"expected {spec.n_etas()} rescaling factors, got {len(params.etas)}"
        )
    thetas = np.asarray(params.thetas)

    def slot_gate(slot: int) -> np.ndarray:
        chunk = thetas[slot * per_slot : (slot + 1) * per_slot]
        if spec.kind == "product_parallel":
            k = spec.d**2 - 1
            basis = gellmann_basis(spec.d)
            gate = trainable_gate(chunk[:k], basis)
            for m in range(1, spec.M):
                gate = np.kron(gate, trainable_gate(chunk[m * k : (m + 1) * k], basis))
            return gate
        return trainable_gate(chunk, gellmann_basis(spec.dim))

    yield ("A", slot_gate(0))
    slot = 1
    enc_gate = 0
    for _ in range(spec.L):
        if spec.kind == "line":
            for m in range(spec.M):
                eta = _resolve_eta(spec, params, m, enc_gate)
                yield ("S", m, eta, _feature_levels(spec, 0))
                enc_gate += 1
                yield ("A", slot_gate(slot))
                slot += 1
        elif spec.kind == "collapsed_line":
            for m in range(spec.M):
                eta = _resolve_eta(spec, params, m, enc_gate)
                yield ("S", m, eta, _feature_levels(spec, 0))
                enc_gate += 1
            yield ("A", slot_gate(slot))
            slot += 1
        elif spec.kind == "noncommuting":
            for m in range(spec.M):
                eta = _resolve_eta(spec, params, m, enc_gate)
                generator = _SIGMA_Y_HALF if m % 2 == 0 else _SIGMA_Z_HALF
                yield ("NC", m, eta, generator)
                enc_gate += 1
            yield ("A", slot_gate(slot))
            slot += 1
        elif spec.kind in ("parallel", "product_parallel"):
            for m in range(spec.M):
                eta = _resolve_eta(spec, params, m, enc_gate)
                yield ("S", m, eta, _feature_levels(spec, m))
                enc_gate += 1
            yield ("A", slot_gate(slot))
            slot += 1
        else:  # mixed: features in blocks of p, last block may be shorter
            for block in range(math.ceil(spec.M / spec.p)):
                lo = block * spec.p
                hi = min(lo + spec.p, spec.M)
                for q, m in enumerate(range(lo, hi)):
                    eta = _resolve_eta(spec, params, m, enc_gate)
                    yield ("S", m, eta, _feature_levels(spec, q))
                    enc_gate += 1
                yield ("A", slot_gate(slot))
                slot += 1


def build_state(spec: AnsatzSpec, params: ParameterVector, x: np.ndarray) -> np.ndarray:
    """Statevector produced by the circuit on input point x."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if x.shape != (spec.M,):
        raise ValidationError(f"expected {spec.M} features, got shape {x.shape}")
    state = np.zeros(spec.dim, dtype=complex)
    state[0] = 1.0
    for element in circuit_structure(spec, params):
        if element[0] == "A":
            state = element[1] @ state
        elif element[0] == "S":
            _, m, eta, levels = element
            state = state * np.exp(1j * x[m] * eta * levels)
        else:
            _, m, eta, generator = element
            arg = x[m] * eta
            state = np.cos(arg / 2.0) * state + 2j * np.sin(arg / 2.0) * (generator @ state)
    return state


def expectation(spec: AnsatzSpec, params: ParameterVector, x: np.ndarray) -> float:
    """<psi(x)| M |psi(x)> for the diagonal observable of the spec."""
    state = build_state(spec, params, x)
    return float(np.dot(np.asarray(spec.observable), np.abs(state) ** 2))


def expectation_many(spec: AnsatzSpec, params: ParameterVector, points: np.ndarray) -> np.ndarray:
    """Vectorized expectation over a batch of input points (n, M)."""
    points = np.asarray(points, dtype=float)
    if points.ndim == 1:
        points = points[:, None]
    if points.shape[1] != spec.M:
        raise ValidationError(
            f"expected points of dimension {spec.M}, got {points.shape[1]}"
        )
    states = np.zeros((points.shape[0], spec.dim), dtype=complex)
    states[:, 0] = 1.0
    for element in circuit_structure(spec, params):
        if element[0] == "A":
            states = states @ element[1].T
        elif element[0] == "S":
            _, m, eta, levels = element
            states = states * np.exp(1j * eta * np.outer(points[:, m], levels))
        else:
            _, m, eta, generator = element
            arg = (points[:, m] * eta)[:, None]
            states = np.cos(arg / 2.0) * states + 2j * np.sin(arg / 2.0) * (
                states @ generator.T
            )
    return (np.abs(states) ** 2) @ np.asarray(spec.observable)
