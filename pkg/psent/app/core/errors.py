"""
Exception hierarchy for psent.

Every error raised on purpose by the package derives from `PsentError` and
carries the process exit code the command-line frontend reports for it:

    - 1: invalid input (malformed equation, outside the equation class, bad arguments)
    - 2: analysis negative (resonance obstruction, no branch class fits)
    - 3: numeric failure (step budget, chart breakdown, loop encounters)

Example:
    .. code-block:: python

        from psent.app.core.errors import ObstructionNonzero

        try:
            expand(canon, branch, beta=0, order=12, base=z0)
        except ObstructionNonzero as err:
            print(err.value, err.exit_code)
"""

from typing import Any, Optional


class PsentError(Exception):
    """ Base class of all psent errors. """

    exit_code = 1

    def payload(self) -> dict:
        """
        Machine-readable description of the error, used for error reports.

        Returns:
            dict: Error type, message and exit code.
        """
        return {"error": type(self).__name__, "message": str(self), "exit_code": self.exit_code}


# ---------------------------------------------------------------------------
# Input errors (exit code 1)
# ---------------------------------------------------------------------------

class InvalidEquationError(PsentError, ValueError):
    """ Equation data does not describe a member of the class y'' = sum a_n y^n with N >= 2. """


class OutsideClassError(PsentError, TypeError):
    """ An equation outside the polynomial class was handed to an analysis module. """


class NonCanonicalError(PsentError, ValueError):
    """ Exact-mode analysis requires a_N = 2(N+1)/(N-1)^2 and a_{N-1} = 0. """


class ScalarModeError(PsentError, TypeError):
    """ Exact and floating scalars were mixed without explicit conversion. """


class RamificationMismatchError(PsentError, ValueError):
    """ Puiseux operands differ in base point or ramification. """


class SeriesDomainError(PsentError, ValueError):
    """ Series operation outside its domain (base point evaluation, log term, zero leading coefficient). """


class SingularCoefficientError(PsentError, ValueError):
    """ a_N vanishes at the requested base point: a fixed singularity of the equation. """


class UnsupportedDegreeError(PsentError, ValueError):
    """ Closed-form condition requested for N outside {3, 5, 7}. """


class PreconditionError(PsentError, ValueError):
    """ Operation called outside its documented precondition. """


class UnknownDemoError(PsentError, KeyError):
    """ No built-in or registered demo equation with that name. """

    def __str__(self):
        return str(self.args[0]) if self.args else "unknown demo equation"


# ---------------------------------------------------------------------------
# Analysis-negative errors (exit code 2)
# ---------------------------------------------------------------------------

class ObstructionNonzero(PsentError):
    """
    The resonance obstruction P_{2(N+1)} does not vanish at this branch class.

    Attributes:
        value: The obstruction value (exact or complex).
        scale (float): Magnitude of the terms that contributed to it.
        branch: The branch class for which the expansion was attempted.
    """

    exit_code = 2

    def __init__(self, value: Any, scale: float = 1.0, branch: Optional[Any] = None):
        self.value = value
        self.scale = scale
        self.branch = branch
        super().__init__(f"resonance obstruction P = {value} (scale {scale:.3g}) at branch {branch}")

    def payload(self) -> dict:
        data = super().payload()
        data.update({"value": str(self.value), "scale": self.scale, "branch": str(self.branch)})
        return data


class NoBranchFitError(PsentError):
    """ No branch class of the equation matches the trajectory near the singularity. """

    exit_code = 2

    def __init__(self, residual: float, threshold: float):
        self.residual = residual
        self.threshold = threshold
        super().__init__(f"series match residual {residual:.3e} above threshold {threshold:.1e}")

    def payload(self) -> dict:
        data = super().payload()
        data.update({"residual": self.residual, "threshold": self.threshold})
        return data


# ---------------------------------------------------------------------------
# Numeric errors (exit code 3)
# ---------------------------------------------------------------------------

class NumericError(PsentError):
    """ Base class of numeric failures. """

    exit_code = 3


class MaxStepsExceeded(NumericError):
    """ The adaptive integrator used up its step budget. """


class ChartError(NumericError):
    """ The (u, v) chart cannot be evaluated at the requested point. """


class BranchAmbiguityError(ChartError):
    """ |y| is too small to pick the square-root branch of the chart reliably. """


class NonMonotoneTailError(NumericError):
    """ Trajectory tail unsuitable for exponent fitting. """


class LoopEncounterError(NumericError):
    """ Another singularity was met on a monodromy loop. """
