"""Weak-coupling perturbation theory for the doubled generator.

The doubled generator splits into blockdiag(W0, W0 - nu*I) plus the purely
off-diagonal coupling [[0, D], [D, 0]].  Because the perturbation has no
diagonal part in the unperturbed eigenbasis blocks, eigenvalues shift only
at second order, while first-order eigenvector corrections live entirely in
the opposite block.  All functions below take the decomposition of the bare
n-dimensional W0 and the n x n coupling block D.

Stored-vector convention: a left correction is returned as the vector L
such that the corrected functional acts as x -> vdot(L0 + L, x).  With this
convention the mixing coefficient of the shifted mode k is exactly
``vdot(shifted_left_correction, G0)`` for G0 = (p0, 0).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import DimensionMismatchError, SmallDenominatorError
from .policy import DEFAULT_POLICY, NumericPolicy
from .spectral import SpectralData

__all__ = [
    "PerturbationResult",
    "MixingCoefficients",
    "first_order_vectors",
    "mixing_coefficient",
    "mixing_coefficients",
    "second_order_eigenvalue",
    "normalization_factor",
    "perturbative_trajectory",
]


@dataclass(frozen=True)
class PerturbationResult:
    """First-order corrections for the mode pair (lambda_k, lambda_k - nu).

    ``left_correction``/``right_correction`` correct the unshifted mode and
    live in the noise-correlated block; ``shifted_left_correction``/
    ``shifted_right_correction`` correct the shifted mode and live in the
    physical block.  Each vector has length 2n.
    """

    k: int
    left_correction: np.ndarray
    right_correction: np.ndarray
    shifted_left_correction: np.ndarray
    shifted_right_correction: np.ndarray
    # bilinear overlap sum_n c_n d_n entering the normalization factor
    overlap: complex


@dataclass(frozen=True)
class MixingCoefficients:
    """Map from mode index k to the weight of the shifted mode lambda_k - nu
    in the projected dynamics."""

    C: dict[int, complex]


def _coupling_elements(data: SpectralData, delta: np.ndarray) -> np.ndarray:
    """Matrix of <l_a | D | r_b> over the unperturbed modes."""
    return data.left.conj().T @ delta @ data.right


def _check_denominators(
    dens: np.ndarray, k: int, floor: float
) -> None:
    bad = np.flatnonzero(np.abs(dens) < floor)
    if bad.size:
        j = int(bad[0])
        raise SmallDenominatorError(k, j, complex(dens[j]))


def first_order_vectors(
    data: SpectralData,
    delta: np.ndarray,
    nu: float,
    k: int,
    *,
    policy: NumericPolicy = DEFAULT_POLICY,
) -> PerturbationResult:
    """First-order eigenvector corrections for mode k of W0 and its shifted
    partner.

    The intermediate sums run over every mode of the opposite block,
    including the k-th one (its denominator is +/-nu, which is nonzero for
    nu > 0); for couplings with vanishing diagonal element the j = k term
    drops out automatically.
    """
    delta = np.asarray(delta, dtype=complex)
    n = data.size
    if delta.shape != (n, n):
        raise DimensionMismatchError(
            f"coupling block shape {delta.shape} does not match size {n}"
        )
    lam = data.eigenvalues
    V = _coupling_elements(data, delta)

    dens_plus = lam[k] - lam + nu    # unshifted mode k against shifted intermediates
    dens_minus = lam[k] - lam - nu   # shifted mode k against unshifted intermediates
    _check_denominators(dens_plus, k, policy.small_denominator)
    _check_denominators(dens_minus, k, policy.small_denominator)

    # functional coefficients c_j = <l_k|D|r_j>/den, vector coefficients
    # d_j = <l_j|D|r_k>/den; stored left vectors conjugate their coefficients
    c_plus = V[k, :] / dens_plus
    d_plus = V[:, k] / dens_plus
    c_minus = V[k, :] / dens_minus
    d_minus = V[:, k] / dens_minus

    zeros = np.zeros(n, dtype=complex)
    left_corr = np.concatenate([zeros, data.left @ c_plus.conj()])
    right_corr = np.concatenate([zeros, data.right @ d_plus])
    shifted_left = np.concatenate([data.left @ c_minus.conj(), zeros])
    shifted_right = np.concatenate([data.right @ d_minus, zeros])

    return PerturbationResult(
        k=k,
        left_correction=left_corr,
        right_correction=right_corr,
        shifted_left_correction=shifted_left,
        shifted_right_correction=shifted_right,
        overlap=complex(np.sum(c_plus * d_plus)),
    )


def mixing_coefficient(
    data: SpectralData,
    delta: np.ndarray,
    nu: float,
    G0: np.ndarray,
    k: int,
    *,
    policy: NumericPolicy = DEFAULT_POLICY,
) -> complex:
    """Weight C_k of the shifted mode lambda_k - nu in the projected dynamics.

    C_k = sum_j <l_k|D|r_j> / (lambda_k - lambda_j - nu) * <l_j|p(0)>,
    evaluated for a doubled initial vector G0 whose correlated block is zero.
    """
    G0 = np.asarray(G0, dtype=complex).ravel()
    n = data.size
    if G0.size != 2 * n:
        raise DimensionMismatchError(
            f"extended state length {G0.size} does not match 2n = {2 * n}"
        )
    p0 = G0[:n]
    lam = data.eigenvalues
    dens = lam[k] - lam - nu
    row = data.left[:, k].conj() @ np.asarray(delta, dtype=complex) @ data.right
    contributing = np.abs(row) > 1e-13 * max(1.0, float(np.abs(row).max()))
    _check_denominators(
        np.where(contributing, dens, np.inf), k, policy.small_denominator
    )
    overlaps = data.coefficients(p0)
    with np.errstate(invalid="ignore"):
        terms = np.where(contributing, row / np.where(contributing, dens, 1.0) * overlaps, 0.0)
    return complex(terms.sum())


def mixing_coefficients(
    data: SpectralData,
    delta: np.ndarray,
    nu: float,
    G0: np.ndarray,
    *,
    policy: NumericPolicy = DEFAULT_POLICY,
) -> MixingCoefficients:
    """All mixing coefficients keyed by mode index."""
    return MixingCoefficients(
        C={
            k: mixing_coefficient(data, delta, nu, G0, k, policy=policy)
            for k in range(data.size)
        }
    )


def second_order_eigenvalue(
    data: SpectralData,
    delta: np.ndarray,
    nu: float,
    k: int,
    *,
    policy: NumericPolicy = DEFAULT_POLICY,
) -> complex:
    """Second-order shift of the unshifted eigenvalue lambda_k.

    The coupling is block-off-diagonal, so the first-order shift vanishes
    and the leading shift sums over the shifted-block intermediates:
    sum_j <l_k|D|r_j><l_j|D|r_k> / (lambda_k - lambda_j + nu).
    """
    delta = np.asarray(delta, dtype=complex)
    lam = data.eigenvalues
    row = data.left[:, k].conj() @ delta @ data.right       # <l_k|D|r_j>
    col = data.left.conj().T @ (delta @ data.right[:, k])   # <l_j|D|r_k>
    dens = lam[k] - lam + nu
    prod = row * col
    contributing = np.abs(prod) > 1e-26 * max(1.0, float(np.abs(prod).max()))
    _check_denominators(
        np.where(contributing, dens, np.inf), k, policy.small_denominator
    )
    with np.errstate(invalid="ignore"):
        terms = np.where(contributing, prod / np.where(contributing, dens, 1.0), 0.0)
    return complex(terms.sum())


def normalization_factor(result: PerturbationResult) -> complex:
    """Biorthogonal normalization b_k = 1 / (1 + <L1 | R1>) of the corrected
    mode pair; equals 1 at zero coupling and deviates at second order."""
    return 1.0 / (1.0 + result.overlap)


def perturbative_trajectory(
    data: SpectralData,
    delta: np.ndarray,
    nu: float,
    p0: np.ndarray,
    times: np.ndarray,
    *,
    policy: NumericPolicy = DEFAULT_POLICY,
) -> np.ndarray:
    """Projected dynamics kept to first order in the coupling.

    p(t) = p_ss + sum_{k != steady} exp(lambda_k t) <l_k|p0> r_k
               + sum_k exp((lambda_k - nu) t) C_k * Pi R1_k,
    where Pi R1_k is the physical-block part of the first-order correction
    to the shifted mode.  Valid while the coupling is weak; the neglected
    terms are second order.
    """
    p0 = np.asarray(p0, dtype=complex).ravel()
    times = np.asarray(times, dtype=float).ravel()
    n = data.size
    if p0.size != n:
        raise DimensionMismatchError(f"state length {p0.size} != {n}")
    lam = data.eigenvalues
    k0 = data.zero_mode_index(policy.zero_tol)
    amps = data.coefficients(p0)
    pss = amps[k0] * data.right[:, k0]

    keep = np.arange(n) != k0
    with np.errstate(under="ignore"):
        phases = np.exp(np.outer(times, lam[keep]))
    out = (phases * amps[keep]) @ data.right[:, keep].T
    out += pss

    G0 = np.concatenate([p0, np.zeros(n, dtype=complex)])
    V = _coupling_elements(data, np.asarray(delta, dtype=complex))
    for k in range(n):
        C_k = mixing_coefficient(data, delta, nu, G0, k, policy=policy)
        if C_k == 0:
            continue
        dens = lam[k] - lam - nu
        col = V[:, k]
        active = np.abs(col) > 1e-13 * max(1.0, float(np.abs(col).max()))
        _check_denominators(
            np.where(active, dens, np.inf), k, policy.small_denominator
        )
        pi_r1 = data.right @ np.where(active, col / np.where(active, dens, 1.0), 0.0)
        with np.errstate(under="ignore"):
            out += np.outer(np.exp((lam[k] - nu) * times), C_k * pi_r1)
    return out
