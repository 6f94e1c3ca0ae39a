"""
First-integral check for constant-coefficient equations.

Multiplying y'' = sum a_n y^n by 2y' and integrating shows that

    FI = y'^2 - 2 sum_n a_n y^{n+1} / (n+1)

is constant along every solution when all a_n are constants. Its drift
along a trajectory measures the accumulated integration error.
"""

from typing import Optional

import numpy as np

from psent.app.core.analysis.equation import require_class_member
from psent.app.core.continuation.types import Trajectory
from psent.app.core.errors import PreconditionError


def first_integral(a, y: np.ndarray, yp: np.ndarray) -> np.ndarray:
    """ FI evaluated on arrays of y and y' for constant coefficients a_0..a_N. """
    potential = np.zeros_like(y, dtype=complex)
    for n in reversed(range(len(a))):
        potential = (potential + a[n] / (n + 1)) * y
    return yp * yp - 2 * potential


def conserved_drift(eq, traj: Trajectory, relative: bool = False, scale: Optional[float] = None) -> float:
    """
    Largest |FI(z) - FI(z_start)| along `traj`.

    Args:
        eq (EquationSpec): Equation with constant coefficients.
        traj (Trajectory): The run to check.
        relative (bool): Divide by max(1, |y'|^2 along the run) unless `scale` is given.

    Raises:
        OutsideClassError: For equations outside the class.
        PreconditionError: If a coefficient depends on z.
    """
    eq = require_class_member(eq)
    if not eq.has_constant_coefficients:
        raise PreconditionError("the first integral exists only for constant coefficients")
    a = eq.coefficient_values(0j)
    _, y, yp = traj.arrays()
    fi = first_integral(a, y, yp)
    drift = float(np.max(np.abs(fi - fi[0])))
    if relative:
        drift /= scale if scale else max(1.0, float(np.max(np.abs(yp) ** 2)))
    return drift
