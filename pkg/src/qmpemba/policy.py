"""Numeric tolerance policy shared by construction and propagation checks."""

from dataclasses import dataclass


@dataclass(frozen=True)
class NumericPolicy:
    """Tolerances for state and generator validation.

    construction_tol applies to freshly built objects (Hermiticity, trace),
    propagation_tol to evolved quantities, psd_floor to the most negative
    admissible density-matrix eigenvalue, zero_tol to eigenvalues treated as
    zero, and defective_cond to the eigenvector-matrix condition number above
    which a generator is rejected as non-diagonalizable.
    """

    construction_tol: float = 1e-12
    propagation_tol: float = 1e-10
    psd_floor: float = -1e-9
    zero_tol: float = 1e-9
    biorthogonality_tol: float = 1e-10
    completeness_tol: float = 1e-9
    defective_cond: float = 1e10
    small_denominator: float = 1e-9


DEFAULT_POLICY = NumericPolicy()
