"""Biorthogonal spectral analysis of non-Hermitian generators.

Every generator here is diagonalizable to working precision; its spectrum
comes with paired left/right eigenvectors normalized so that
<l_j | r_k> = delta_jk under the conjugate-linear inner product
<x | y> = sum_i conj(x_i) y_i.  Right eigenvectors carry unit Euclidean
norm; left eigenvectors absorb the biorthogonal scale.  Eigenvalues are
sorted by descending real part, ties broken by descending imaginary part.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .exceptions import (
    DefectiveGeneratorError,
    DimensionMismatchError,
    MultipleSteadyStatesError,
)
from .lindblad import population_trace
from .policy import DEFAULT_POLICY, NumericPolicy

__all__ = [
    "SpectralData",
    "ModeCoefficients",
    "decompose",
    "steady_state",
    "mode_coefficients",
    "unit_left_overlaps",
    "propagate_spectral",
]


@dataclass(frozen=True)
class SpectralData:
    """Sorted eigenvalues with biorthonormal left/right eigenvector pairs.

    ``right[:, k]`` and ``left[:, k]`` belong to ``eigenvalues[k]``; the
    stored left vectors are eigenvectors of the adjoint generator, so the
    action of the k-th left functional on x is ``np.vdot(left[:, k], x)``.
    """

    eigenvalues: np.ndarray
    right: np.ndarray
    left: np.ndarray

    @property
    def size(self) -> int:
        return self.eigenvalues.size

    def coefficient(self, k: int, x: np.ndarray) -> complex:
        """Overlap <l_k | x>."""
        return complex(np.vdot(self.left[:, k], x))

    def coefficients(self, x: np.ndarray) -> np.ndarray:
        """All overlaps <l_k | x> at once."""
        return self.left.conj().T @ np.asarray(x, dtype=complex)

    def zero_mode_index(self, tol: float) -> int:
        """Index of the unique zero eigenvalue.

        Raises MultipleSteadyStatesError when the zero eigenvalue is
        degenerate or absent.
        """
        zeros = np.flatnonzero(np.abs(self.eigenvalues) < tol)
        if zeros.size != 1:
            raise MultipleSteadyStatesError(
                f"expected exactly one zero eigenvalue within {tol:g}, "
                f"found {zeros.size}"
            )
        return int(zeros[0])


def _group_indices(values: np.ndarray, tol: float) -> list[list[int]]:
    """Group already-sorted eigenvalue indices by mutual proximity."""
    groups: list[list[int]] = []
    used = np.zeros(values.size, dtype=bool)
    for i in range(values.size):
        if used[i]:
            continue
        group = [i]
        used[i] = True
        for j in range(i + 1, values.size):
            if not used[j] and abs(values[j] - values[i]) < tol:
                group.append(j)
                used[j] = True
        groups.append(group)
    return groups


def decompose(
    A: np.ndarray,
    *,
    policy: NumericPolicy = DEFAULT_POLICY,
) -> SpectralData:
    """Full biorthogonal eigendecomposition of a dense generator.

    Degenerate (but non-defective) eigenvalue clusters are re-paired by
    inverting the left-right overlap matrix inside each cluster.  A
    generator whose eigenvector matrix has condition number above
    ``policy.defective_cond``, or whose final decomposition fails the
    biorthonormality/completeness residuals, is rejected.
    """
    A = np.asarray(A, dtype=complex)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise DimensionMismatchError(f"generator must be square, got {A.shape}")
    w, vl, vr = scipy.linalg.eig(A, left=True, right=True)
    cond = np.linalg.cond(vr)
    if not np.isfinite(cond) or cond > policy.defective_cond:
        raise DefectiveGeneratorError(
            f"eigenvector matrix condition number {cond:.3e} exceeds "
            f"{policy.defective_cond:.0e}; generator treated as defective"
        )

    order = np.lexsort((-w.imag, -w.real))
    w, vl, vr = w[order], vl[:, order], vr[:, order]
    vr = vr / np.linalg.norm(vr, axis=0)

    scale = max(1.0, float(np.abs(w).max()))
    for group in _group_indices(w, 100 * policy.zero_tol * scale):
        g = np.array(group)
        M = vl[:, g].conj().T @ vr[:, g]
        Mcond = np.linalg.cond(M)
        if not np.isfinite(Mcond) or Mcond > policy.defective_cond:
            raise DefectiveGeneratorError(
                f"degenerate cluster at {w[g[0]]:.6g} is not diagonalizable "
                f"(overlap condition number {Mcond:.3e})"
            )
        vl[:, g] = vl[:, g] @ np.linalg.inv(M).conj().T

    data = SpectralData(eigenvalues=w, right=vr, left=vl)
    _validate(data, A, policy)
    return data


def _validate(data: SpectralData, A: np.ndarray, policy: NumericPolicy) -> None:
    gram = data.left.conj().T @ data.right
    bio = float(np.abs(gram - np.eye(data.size)).max())
    if bio > policy.biorthogonality_tol:
        raise DefectiveGeneratorError(
            f"biorthonormality residual {bio:.3e} exceeds "
            f"{policy.biorthogonality_tol:g}"
        )
    comp = float(np.abs(data.right @ data.left.conj().T - np.eye(data.size)).max())
    if comp > policy.completeness_tol:
        raise DefectiveGeneratorError(
            f"completeness residual {comp:.3e} exceeds {policy.completeness_tol:g}"
        )


def steady_state(
    A: np.ndarray,
    *,
    policy: NumericPolicy = DEFAULT_POLICY,
) -> np.ndarray:
    """Null vector of the generator, normalized to unit population trace.

    Requires a unique zero eigenvalue within ``policy.zero_tol``.
    """
    data = decompose(A, policy=policy)
    k = data.zero_mode_index(policy.zero_tol)
    v = data.right[:, k]
    tr = population_trace(v)
    if abs(tr) < policy.zero_tol:
        raise MultipleSteadyStatesError(
            "zero mode is traceless; cannot normalize a steady state from it"
        )
    return v / tr


@dataclass(frozen=True)
class ModeCoefficients:
    """Biorthogonal overlaps a_k = <l_k | p(0) - p_ss>.

    a[0] belongs to the steady mode and stays near zero for trace-one
    inputs; relaxation analysis uses a[1:].
    """

    a: np.ndarray


def mode_coefficients(
    data: SpectralData,
    p0: np.ndarray,
    pss: np.ndarray,
) -> ModeCoefficients:
    p0 = np.asarray(p0, dtype=complex).ravel()
    pss = np.asarray(pss, dtype=complex).ravel()
    if p0.size != data.size or pss.size != data.size:
        raise DimensionMismatchError(
            f"state length {p0.size}/{pss.size} does not match decomposition "
            f"size {data.size}"
        )
    return ModeCoefficients(a=data.coefficients(p0 - pss))


def unit_left_overlaps(
    data: SpectralData,
    p0: np.ndarray,
    pss: np.ndarray,
) -> np.ndarray:
    """Overlaps measured with unit-Euclidean-norm left vectors.

    This is the convention-independent way to compare how strongly two
    states load a given mode; the biorthogonal overlaps of
    :func:`mode_coefficients` depend on the right-vector normalization.
    """
    diff = np.asarray(p0, dtype=complex).ravel() - np.asarray(pss, dtype=complex).ravel()
    norms = np.linalg.norm(data.left, axis=0)
    return (data.left.conj().T @ diff) / norms


def propagate_spectral(
    data: SpectralData,
    G0: np.ndarray,
    pss: np.ndarray,
    times: np.ndarray,
    *,
    policy: NumericPolicy = DEFAULT_POLICY,
) -> np.ndarray:
    """Evolve G0 by the eigenmode expansion of its generator.

    Returns an array of shape (len(times), size):
    ``G(t) = pss + sum_{k != steady} exp(lambda_k t) <l_k|G0> r_k``.
    Supplying the steady state explicitly keeps the nonsteady sum free of
    cancellation error, so trajectories stay accurate far below the scale
    of pss itself.
    """
    G0 = np.asarray(G0, dtype=complex).ravel()
    pss = np.asarray(pss, dtype=complex).ravel()
    times = np.asarray(times, dtype=float).ravel()
    if G0.size != data.size or pss.size != data.size:
        raise DimensionMismatchError(
            f"state length {G0.size}/{pss.size} does not match decomposition "
            f"size {data.size}"
        )
    k0 = data.zero_mode_index(policy.zero_tol)
    amps = data.coefficients(G0)
    keep = np.arange(data.size) != k0
    lam = data.eigenvalues[keep]
    # (T, modes) phase table; underflow to 0 for strongly decayed modes is fine
    with np.errstate(under="ignore"):
        phases = np.exp(np.outer(times, lam))
    out = phases * amps[keep]
    return out @ data.right[:, keep].T + pss
