"""Exception and warning types shared across the package.

Every raised condition is a subclass of :class:`DeltaOpError` so callers (and
the CLI) can distinguish validation failures from genuine bugs with a single
``except``.  :class:`DivergenceWarning` is a ``Warning``: the offending value
is still returned, flagged through the ``warnings`` machinery.
"""

from __future__ import annotations


class DeltaOpError(Exception):
    """Base class for all input and state validation failures."""


class NotSquare(DeltaOpError):
    """Matrix input is not square."""


class NotHermitian(DeltaOpError):
    """Hermiticity deviation exceeds the caller's tolerance."""


class ConvergenceFailure(DeltaOpError):
    """The underlying eigensolver did not converge."""


class SingularSolve(DeltaOpError):
    """A shifted linear system was numerically singular.

    Cannot occur for a genuinely Hermitian matrix and a nonzero imaginary
    shift; signals corrupted input (NaN/Inf) upstream.
    """


class ParameterError(DeltaOpError):
    """A numeric parameter violates an operation's precondition."""


class GridError(DeltaOpError):
    """Evaluation grid is empty, non-ascending, or non-finite."""


class CoverageError(DeltaOpError):
    """Quadrature grid does not cover the spectrum plus the required margin."""


class DomainError(DeltaOpError):
    """Grid extends outside the operation's admissible domain."""


class SpectrumHit(DeltaOpError):
    """Requested point is within the singular tolerance of the spectrum."""


class ContourTooClose(DeltaOpError):
    """Integration contour passes too close to an eigenvalue for its node spacing."""


class DimensionMismatch(DeltaOpError):
    """Operands act on spaces of different dimensions."""


class MemoryBudgetError(DeltaOpError):
    """Requested tensor of samples would exceed the stated memory budget."""


class NotUnitary(DeltaOpError):
    """Conjugating matrix fails the unitarity check."""


class SupportError(DeltaOpError):
    """Grid function is not supported well inside the grid interior."""


class UnsupportedTransform(DeltaOpError):
    """The scalar function has no closed-form transform/series for this route."""


class DivergenceWarning(UserWarning):
    """Power series applied outside its radius of convergence."""
