"""Dense complex linear algebra kernel.

Hermitian eigendecompositions, unitary matrix exponentials, generalized
Gell-Mann generator bases and tensor-product gate application on
statevectors. Everything works on plain complex128 numpy arrays; the
dimensions involved stay tiny (N <= 81), so robustness wins over speed.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .errors import ConvergenceError, ValidationError

HERMITICITY_TOL = 1e-10
UNITARITY_TOL = 1e-10


def is_hermitian(matrix: np.ndarray, tol: float = HERMITICITY_TOL) -> bool:
    matrix = np.asarray(matrix)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        return False
    return np.max(np.abs(matrix - matrix.conj().T)) <= tol


def is_unitary(matrix: np.ndarray, tol: float = UNITARITY_TOL) -> bool:
    matrix = np.asarray(matrix)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        return False
    eye = np.eye(matrix.shape[0])
    return np.max(np.abs(matrix.conj().T @ matrix - eye)) <= tol


def hermitian_eig(matrix: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition H = V diag(w) V^dag of a Hermitian matrix.

    Returns (eigenvalues ascending, eigenvector matrix with eigenvectors in
    columns). Rejects non-Hermitian input.
    """
    matrix = np.asarray(matrix, dtype=complex)
    if not is_hermitian(matrix):
        raise ValidationError("matrix is not Hermitian within tolerance")
    try:
        eigenvalues, eigenvectors = np.linalg.eigh(matrix)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - defensive
        raise ConvergenceError(f"eigendecomposition failed: {exc}") from exc
    residual = np.max(
        np.abs(eigenvectors @ np.diag(eigenvalues) @ eigenvectors.conj().T - matrix)
    )
    if residual > 1e-9:  # pragma: no cover - defensive
        raise ConvergenceError(
            f"eigendecomposition residual {residual:.3e} exceeds 1e-9"
        )
    return eigenvalues.astype(float), eigenvectors.astype(complex)


def unitary_exp(matrix: np.ndarray, t: float) -> np.ndarray:
    """exp(i t H) for Hermitian H, computed through the eigendecomposition."""
    matrix = np.asarray(matrix, dtype=complex)
    if t == 0.0:
        return np.eye(matrix.shape[0], dtype=complex)
    eigenvalues, eigenvectors = hermitian_eig(matrix)
    phases = np.exp(1j * t * eigenvalues)
    return (eigenvectors * phases) @ eigenvectors.conj().T


@lru_cache(maxsize=None)
def gellmann_basis(dim: int) -> tuple[np.ndarray, ...]:
    """Generalized Gell-Mann generators of SU(dim).

    Ordering: symmetric pairs in lexicographic (row, col) order, then
    antisymmetric pairs, then the diagonal generators by increasing rank.
    All generators are Hermitian, traceless and trace-orthogonal; there are
    exactly dim^2 - 1 of them.
    """
    if dim < 2:
        raise ValidationError(f"generator basis needs dim >= 2, got {dim}")
    generators: list[np.ndarray] = []
    for j in range(dim):
        for k in range(j + 1, dim):
            sym = np.zeros((dim, dim), dtype=complex)
            sym[j, k] = sym[k, j] = 1.0
            generators.append(sym)
    for j in range(dim):
        for k in range(j + 1, dim):
            anti = np.zeros((dim, dim), dtype=complex)
            anti[j, k] = -1j
            anti[k, j] = 1j
            generators.append(anti)
    for rank in range(1, dim):
        diag = np.zeros(dim)
        diag[:rank] = 1.0
        diag[rank] = -rank
        diag *= np.sqrt(2.0 / (rank * (rank + 1)))
        generators.append(np.diag(diag).astype(complex))
    for g in generators:
        g.setflags(write=False)
    return tuple(generators)


def apply_gate(
    state: np.ndarray,
    gate: np.ndarray,
    targets: tuple[int, ...] | list[int],
    d: int,
) -> np.ndarray:
    """Apply a unitary on the given qudits of a d-ary register.

    `targets` are qudit indices (0 = most significant digit of the register
    index). The gate dimension must be d^len(targets).
    """
    state = np.asarray(state, dtype=complex)
    gate = np.asarray(gate, dtype=complex)
    size = state.shape[0]
    n = int(round(np.log(size) / np.log(d)))
    if d**n != size:
        raise ValidationError(f"state length {size} is not a power of d={d}")
    targets = tuple(int(t) for t in targets)
    if len(set(targets)) != len(targets):
        raise ValidationError(f"duplicate target qudits: {targets}")
    if any(t < 0 or t >= n for t in targets):
        raise ValidationError(f"target qudits {targets} outside register of {n}")
    if gate.shape != (d ** len(targets), d ** len(targets)):
        raise ValidationError(
            f"gate shape {gate.shape} does not match {len(targets)} qudits of dim {d}"
        )
    if len(targets) == n and targets == tuple(range(n)):
        return gate @ state
    tensor = state.reshape((d,) * n)
    rest = [ax for ax in range(n) if ax not in targets]
    tensor = tensor.transpose(targets + tuple(rest))
    tensor = gate @ tensor.reshape(d ** len(targets), -1)
    tensor = tensor.reshape((d,) * n)
    inverse = np.argsort(targets + tuple(rest))
    return tensor.transpose(tuple(inverse)).reshape(size)
