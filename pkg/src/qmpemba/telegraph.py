"""Telegraph-noise coupling and the doubled (noise-correlated) state space.

A two-state noise variable eta = +/-1 with autocorrelation exp(-nu|t-s|)
multiplying a Hermitian perturbation J closes exactly on the doubled vector
G = (<rho elements>, <eta * rho elements>).  This module builds the coupling
block and the 2n x 2n generator of G, plus the embedding/projection between
the original and doubled spaces.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import DimensionMismatchError, NonHermitianError
from .lindblad import hamiltonian_superoperator, hermiticity_defect
from .policy import DEFAULT_POLICY, NumericPolicy

__all__ = ["RtnSpec", "coupling_matrix", "extended_generator", "embed", "project"]


@dataclass(frozen=True)
class RtnSpec:
    """Random-telegraph-noise perturbation: H_noise(t) = delta1 * eta(t) * J.

    J is Hermitian and dimensionless, delta1 the coupling strength, nu the
    inverse correlation time of eta (eta flips sign at rate nu/2).
    """

    J: np.ndarray
    delta1: float
    nu: float

    def __post_init__(self):
        J = np.asarray(self.J, dtype=complex)
        if J.ndim != 2 or J.shape[0] != J.shape[1]:
            raise DimensionMismatchError(f"J must be square, got {J.shape}")
        if hermiticity_defect(J) > 1e-12:
            raise NonHermitianError(
                f"J must be Hermitian: defect {hermiticity_defect(J):.3e}"
            )
        if self.delta1 < 0:
            raise ValueError(f"delta1 must be nonnegative, got {self.delta1}")
        if self.nu < 0:
            raise ValueError(f"nu must be nonnegative, got {self.nu}")
        object.__setattr__(self, "J", J)

    @property
    def dim(self) -> int:
        return self.J.shape[0]


def coupling_matrix(spec: RtnSpec) -> np.ndarray:
    """Block coupling the plain and noise-correlated sectors.

    Equals delta1 times the vectorization of -i[J, .]; both off-diagonal
    blocks of the doubled generator are this same matrix.
    """
    return spec.delta1 * hamiltonian_superoperator(spec.J)


def extended_generator(
    W0: np.ndarray,
    spec: RtnSpec,
    *,
    policy: NumericPolicy = DEFAULT_POLICY,
) -> np.ndarray:
    """2n x 2n generator of the doubled vector G.

    Top-left block is W0 unchanged; bottom-right is W0 - nu*I (the
    noise-correlated sector decays at the noise switching rate); the
    off-diagonal blocks both equal the coupling matrix.
    """
    W0 = np.asarray(W0, dtype=complex)
    n = W0.shape[0]
    if W0.ndim != 2 or W0.shape[1] != n:
        raise DimensionMismatchError(f"W0 must be square, got {W0.shape}")
    if n != spec.dim ** 2:
        raise DimensionMismatchError(
            f"W0 size {n} does not match J dimension {spec.dim} (need {spec.dim ** 2})"
        )
    delta = coupling_matrix(spec)
    return np.block([[W0, delta], [delta, W0 - spec.nu * np.eye(n)]])


def embed(p: np.ndarray) -> np.ndarray:
    """Doubled vector for noise switched on now: correlated block is zero."""
    p = np.asarray(p, dtype=complex).ravel()
    return np.concatenate([p, np.zeros_like(p)])


def project(G: np.ndarray) -> np.ndarray:
    """First block of a doubled vector: the physical state."""
    G = np.asarray(G, dtype=complex).ravel()
    if G.size % 2 != 0:
        raise DimensionMismatchError(f"extended vector length {G.size} is odd")
    return G[: G.size // 2]
