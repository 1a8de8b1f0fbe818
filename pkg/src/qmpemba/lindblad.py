"""Vectorized Liouvillian construction for d-level Lindblad dynamics.

The density matrix is flattened into the canonical element order: all
populations rho_ii for i = 1..d, then for each index pair i < j (lexicographic)
the coherences (rho_ij, rho_ji).  Superoperators are built as Kronecker
products in the row-major basis and permuted into that order, so generators
act on state vectors by plain matrix multiplication.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .exceptions import (
    DimensionMismatchError,
    NonHermitianError,
    NonPhysicalStateError,
)
from .policy import DEFAULT_POLICY, NumericPolicy

__all__ = [
    "JumpChannel",
    "element_order",
    "vectorize",
    "devectorize",
    "hermiticity_defect",
    "check_density_matrix",
    "population_trace",
    "trace_functional",
    "hamiltonian_superoperator",
    "dissipator_superoperator",
    "build_liouvillian",
]


@lru_cache(maxsize=None)
def element_order(dim: int) -> tuple[tuple[int, int], ...]:
    """Matrix-element order backing the state vector: populations first,
    then (i, j), (j, i) for each pair i < j."""
    if dim < 2:
        raise ValueError(f"dimension must be >= 2, got {dim}")
    order = [(i, i) for i in range(dim)]
    for i in range(dim):
        for j in range(i + 1, dim):
            order.append((i, j))
            order.append((j, i))
    return tuple(order)


def _dim_from_length(n: int) -> int:
    d = round(np.sqrt(n))
    if d * d != n or d < 2:
        raise DimensionMismatchError(
            f"vector length {n} is not d**2 for an integer d >= 2"
        )
    return d


@lru_cache(maxsize=None)
def _canonical_permutation(dim: int) -> np.ndarray:
    """Permutation P with column k carrying 1 at the row-major slot of the
    k-th canonical element, so W_canonical = P.T @ W_rowmajor @ P."""
    n = dim * dim
    P = np.zeros((n, n))
    for k, (i, j) in enumerate(element_order(dim)):
        P[i * dim + j, k] = 1.0
    return P


def hermiticity_defect(mat: np.ndarray) -> float:
    """Largest absolute deviation of mat from its conjugate transpose."""
    return float(np.abs(mat - mat.conj().T).max())


def check_density_matrix(
    rho: np.ndarray,
    *,
    policy: NumericPolicy = DEFAULT_POLICY,
    allow_nonphysical: bool = False,
) -> None:
    """Validate Hermiticity, unit trace and positivity of a density matrix.

    With ``allow_nonphysical`` the positivity requirement is waived (a
    warning is emitted); Hermiticity and unit trace are always enforced.
    """
    rho = np.asarray(rho)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise DimensionMismatchError(f"density matrix must be square, got {rho.shape}")
    if hermiticity_defect(rho) > policy.construction_tol:
        raise NonHermitianError(
            f"density matrix is not Hermitian: defect {hermiticity_defect(rho):.3e}"
        )
    tr = complex(np.trace(rho))
    if abs(tr - 1.0) > policy.construction_tol:
        raise NonPhysicalStateError(f"trace must be 1, got {tr}")
    min_ev = float(np.linalg.eigvalsh(0.5 * (rho + rho.conj().T)).min())
    if min_ev < policy.psd_floor:
        if not allow_nonphysical:
            raise NonPhysicalStateError(
                f"density matrix has negative eigenvalue {min_ev:.3e}; "
                "pass allow_nonphysical=True to accept it"
            )
        warnings.warn(
            f"accepting non-positive density matrix (min eigenvalue {min_ev:.3e})",
            stacklevel=3,
        )


def vectorize(
    rho: np.ndarray,
    *,
    policy: NumericPolicy = DEFAULT_POLICY,
    allow_nonphysical: bool = False,
) -> np.ndarray:
    """Flatten a density matrix into the canonical element order."""
    rho = np.asarray(rho, dtype=complex)
    check_density_matrix(rho, policy=policy, allow_nonphysical=allow_nonphysical)
    order = element_order(rho.shape[0])
    return np.array([rho[i, j] for i, j in order], dtype=complex)


def devectorize(p: np.ndarray) -> np.ndarray:
    """Inverse of :func:`vectorize`.

    The matrix is rebuilt exactly as stored; no Hermiticity is imposed, so
    callers can inspect :func:`hermiticity_defect` of the result.
    """
    p = np.asarray(p, dtype=complex).ravel()
    d = _dim_from_length(p.size)
    rho = np.zeros((d, d), dtype=complex)
    for k, (i, j) in enumerate(element_order(d)):
        rho[i, j] = p[k]
    return rho


def _split_size(size: int) -> tuple[int, bool]:
    """Return (n, extended) for a state-vector or generator size.

    Sizes are unambiguous: 2*d**2 is never a perfect square.
    """
    d = round(np.sqrt(size))
    if d * d == size:
        return size, False
    if size % 2 == 0:
        half = size // 2
        d = round(np.sqrt(half))
        if d * d == half:
            return half, True
    raise DimensionMismatchError(f"size {size} is neither d**2 nor 2*d**2")


def population_trace(p: np.ndarray) -> complex:
    """Sum of the population slots (first block only for extended vectors)."""
    p = np.asarray(p).ravel()
    n, _ = _split_size(p.size)
    d = _dim_from_length(n)
    return complex(p[:d].sum())


def trace_functional(size: int) -> np.ndarray:
    """Left vector representing the trace: 1 on the population slots of the
    first block, 0 elsewhere."""
    ell = np.zeros(size, dtype=complex)
    n, _ = _split_size(size)
    d = _dim_from_length(n)
    ell[:d] = 1.0
    return ell


@dataclass(frozen=True)
class JumpChannel:
    """Dissipative channel: jump operator L and nonnegative rate."""

    operator: np.ndarray
    rate: float

    def __post_init__(self):
        op = np.asarray(self.operator, dtype=complex)
        if op.ndim != 2 or op.shape[0] != op.shape[1]:
            raise DimensionMismatchError(
                f"jump operator must be square, got {op.shape}"
            )
        if self.rate < 0:
            raise ValueError(f"rate must be nonnegative, got {self.rate}")
        object.__setattr__(self, "operator", op)

    @property
    def dim(self) -> int:
        return self.operator.shape[0]


def _to_canonical(superop_rowmajor: np.ndarray, dim: int) -> np.ndarray:
    P = _canonical_permutation(dim)
    return P.T @ superop_rowmajor @ P


def hamiltonian_superoperator(
    H: np.ndarray,
    *,
    policy: NumericPolicy = DEFAULT_POLICY,
    allow_non_hermitian: bool = False,
) -> np.ndarray:
    """Generator of -i[H, .] acting on canonical state vectors (hbar = 1)."""
    H = np.asarray(H, dtype=complex)
    if H.ndim != 2 or H.shape[0] != H.shape[1]:
        raise DimensionMismatchError(f"Hamiltonian must be square, got {H.shape}")
    defect = hermiticity_defect(H)
    if defect > max(policy.propagation_tol, 1e-10) and not allow_non_hermitian:
        raise NonHermitianError(f"Hamiltonian is not Hermitian: defect {defect:.3e}")
    d = H.shape[0]
    eye = np.eye(d)
    # row-major convention: vec(A X B) = (A kron B^T) vec(X)
    rm = -1j * (np.kron(H, eye) - np.kron(eye, H.T))
    return _to_canonical(rm, d)


def dissipator_superoperator(channel: JumpChannel) -> np.ndarray:
    """Generator of gamma * (L . L^+ - {L^+ L, .}/2) on canonical vectors."""
    L = channel.operator
    d = channel.dim
    eye = np.eye(d)
    LdL = L.conj().T @ L
    rm = channel.rate * (
        np.kron(L, L.conj())
        - 0.5 * (np.kron(LdL, eye) + np.kron(eye, LdL.T))
    )
    return _to_canonical(rm, d)


def build_liouvillian(
    H0: np.ndarray,
    channels: list[JumpChannel] | tuple[JumpChannel, ...] = (),
    *,
    policy: NumericPolicy = DEFAULT_POLICY,
) -> np.ndarray:
    """Full generator: Hamiltonian part plus the sum of all dissipators."""
    W = hamiltonian_superoperator(H0, policy=policy)
    d = np.asarray(H0).shape[0]
    for ch in channels:
        if ch.dim != d:
            raise DimensionMismatchError(
                f"channel dimension {ch.dim} does not match system dimension {d}"
            )
        W = W + dissipator_superoperator(ch)
    return W
