"""Exception hierarchy shared by all modules.

Every error that can abort a pipeline run maps to one of these classes so
the command line layer can translate failures into distinct exit codes.
"""


class BeltramiWavesError(Exception):
    """Base class for all library errors."""


class ConfigError(BeltramiWavesError):
    """Invalid or inconsistent run configuration."""


class DegenerateLatticeError(BeltramiWavesError):
    """Lattice generators are (numerically) linearly dependent."""


class ArityError(BeltramiWavesError):
    """A calculus operation was applied to a field of the wrong arity."""


class OrderMismatchError(BeltramiWavesError):
    """Taylor-series orders of the supplied operands are incompatible."""


class ResonanceError(BeltramiWavesError):
    """A required Fourier multiplier is evaluated at a resonant radius."""


class ZeroFrequencyError(BeltramiWavesError):
    """A symbol or multiplier was requested at k = 0."""


class ZeroDenominatorError(BeltramiWavesError):
    """A mode combination makes a multiplier denominator vanish."""


class RangeViolationError(BeltramiWavesError):
    """Right-hand side has kernel-mode content; the linear solve is not defined."""


class NearResonantDivisorError(BeltramiWavesError):
    """A dispersion divisor is too close to zero (Wilton-type degeneracy)."""


class TransversalityError(BeltramiWavesError):
    """The transversality determinant is (numerically) singular."""


class NonConvergenceError(BeltramiWavesError):
    """An iterative solve failed to reach its tolerance."""


class SingularJacobianError(BeltramiWavesError):
    """Newton iteration met a singular Jacobian."""


class DegenerateFitError(BeltramiWavesError):
    """Too few data points for the requested fit."""


class FormalInverseWarning(UserWarning):
    """The inverse was computed without a decay guarantee (beta = 0).

    Carries the smallest dispersion divisor met during the solve in
    ``smallest_divisor``.
    """

    def __init__(self, message: str, smallest_divisor: float):
        super().__init__(message)
        self.smallest_divisor = smallest_divisor
