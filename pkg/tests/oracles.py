"""Independent reference implementations used as test oracles.

Everything here works directly with matrix arithmetic (no Kronecker
products, no shared code with the package's superoperator construction),
so agreement between the two routes is a real check.
"""

from __future__ import annotations

import numpy as np

from qmpemba.lindblad import element_order


def master_equation_rhs(H, channels, rho):
    """Direct evaluation of the master equation right-hand side."""
    out = -1j * (H @ rho - rho @ H)
    for ch in channels:
        L = ch.operator
        LdL = L.conj().T @ L
        out = out + ch.rate * (
            L @ rho @ L.conj().T - 0.5 * (LdL @ rho + rho @ LdL)
        )
    return out


def commutator_rhs(A, rho):
    return -1j * (A @ rho - rho @ A)


def superoperator_by_columns(apply_map, dim):
    """Build a superoperator by applying a matrix map to each basis element
    of the canonical ordering."""
    order = element_order(dim)
    n = dim * dim
    W = np.zeros((n, n), dtype=complex)
    for col, (i, j) in enumerate(order):
        E = np.zeros((dim, dim), dtype=complex)
        E[i, j] = 1.0
        out = apply_map(E)
        W[:, col] = [out[a, b] for a, b in order]
    return W


def three_level_eigenvalues(g21=1.0, g31=8.0, g32=1.0, w2=1.0, w3=2.0):
    """Hand-derived spectrum of the three-level cascade generator.

    Populations: upper-triangular flow matrix with diagonal
    {0, -g21, -(g31+g32)}.  Each coherence (i, j) decays at half the summed
    outflow of its levels and rotates at the level splitting.
    """
    return np.array(
        [
            0.0,
            -g21,
            -(g31 + g32),
            -0.5 * g21 + 1j * w2,
            -0.5 * g21 - 1j * w2,
            -0.5 * (g31 + g32) + 1j * w3,
            -0.5 * (g31 + g32) - 1j * w3,
            -0.5 * (g21 + g31 + g32) + 1j * (w3 - w2),
            -0.5 * (g21 + g31 + g32) - 1j * (w3 - w2),
        ]
    )


def random_hermitian(rng, dim, scale=1.0):
    A = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return scale * 0.5 * (A + A.conj().T)


def random_density_matrix(rng, dim):
    A = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = A @ A.conj().T
    return rho / np.trace(rho)


def random_lindblad_system(rng, dim, num_channels=2):
    """Random Hermitian Hamiltonian plus random jump channels."""
    from qmpemba.lindblad import JumpChannel

    H = random_hermitian(rng, dim)
    channels = []
    for _ in range(num_channels):
        L = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
        channels.append(JumpChannel(L, float(rng.uniform(0.2, 1.5))))
    return H, channels


def match_eigenvalues(reference, values):
    """Greedy nearest-neighbour pairing; returns values reordered to match
    the reference list."""
    values = list(values)
    out = []
    for ref in reference:
        idx = int(np.argmin([abs(v - ref) for v in values]))
        out.append(values.pop(idx))
    return np.array(out)
