"""Exception types raised across the package."""


class QmpembaError(Exception):
    """Base class for package-specific errors."""


class NonHermitianError(QmpembaError, ValueError):
    """A matrix that must be Hermitian is not (beyond tolerance)."""


class NonPhysicalStateError(QmpembaError, ValueError):
    """A density matrix violates trace or positivity requirements."""


class DimensionMismatchError(QmpembaError, ValueError):
    """Operands have incompatible shapes."""


class DefectiveGeneratorError(QmpembaError, ValueError):
    """The generator is not diagonalizable to working precision."""


class MultipleSteadyStatesError(QmpembaError, ValueError):
    """The zero eigenvalue of the generator is degenerate."""


class SmallDenominatorError(QmpembaError, ValueError):
    """A perturbative energy denominator is (near-)singular.

    Carries the offending mode pair so callers can report which
    quasi-degeneracy broke the expansion.
    """

    def __init__(self, k: int, j: int, value: complex):
        self.pair = (k, j)
        self.value = value
        super().__init__(
            f"near-degenerate denominator for mode pair ({k}, {j}): |{value:.3e}|"
        )


class ConfigurationError(QmpembaError, ValueError):
    """A scenario configuration or solver option is invalid."""


class ConventionMismatchError(QmpembaError, RuntimeError):
    """Generic and closed-form generators disagree.

    Raised by the three-level reference build; indicates a bug in the
    element ordering or superoperator conventions.
    """
