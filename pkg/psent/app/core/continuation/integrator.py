"""
Adaptive Cash-Karp 5(4) integration along complex paths.

Each leg of a `PathSpec` is parametrized by arclength s, so the complex ODE
y'' = F(z, y, y') becomes the system d/ds (y, y') = z'(s) (y', F) in a real
parameter. The same driver integrates the chart system of `locate`.

Steps are taken by `CashKarp`, a scipy `RungeKutta` solver driven one
`step()` at a time. Its embedded estimate is held below the tolerance per
unit step, so the global error shrinks at least in proportion to the
tolerance.

Termination rules for equation trajectories:
    - |y| above the blow-up threshold: singularity-encounter
    - step below min_step_factor * path length: step-collapse
    - step budget exhausted: `MaxStepsExceeded` (carrying the partial trajectory)
"""

from dataclasses import dataclass
from typing import Callable, List, Optional, Tuple

import numpy as np
from scipy.integrate._ivp.rk import RungeKutta, norm

from psent.app.core.analysis.equation import SecondOrderEquation
from psent.app.core.continuation.types import (
    ContinuationSettings, Leg, PathSpec, Sample, Termination, Trajectory)
from psent.app.core.errors import MaxStepsExceeded, PreconditionError
from psent.app.core.logger import get_logger


logger = get_logger(__name__)

Rhs = Callable[[float, np.ndarray], np.ndarray]


class _StepCollapse(Exception):
    pass


class CashKarp(RungeKutta):
    """
    Cash-Karp 5(4) pair propagating the fifth order solution.

    Differs from the stock scipy controllers in two ways: the error norm is
    taken per unit step (so the step exponent is -1/4), and a rejected step
    below `min_step` stops the solver instead of shrinking down to rounding
    level.
    """

    n_stages = 6
    order = 5
    error_estimator_order = 4

    C = np.array([0, 1 / 5, 3 / 10, 3 / 5, 1, 7 / 8])
    A = np.array([
        [0, 0, 0, 0, 0, 0],
        [1 / 5, 0, 0, 0, 0, 0],
        [3 / 40, 9 / 40, 0, 0, 0, 0],
        [3 / 10, -9 / 10, 6 / 5, 0, 0, 0],
        [-11 / 54, 5 / 2, -70 / 27, 35 / 27, 0, 0],
        [1631 / 55296, 175 / 512, 575 / 13824, 44275 / 110592, 253 / 4096, 0]])
    B_all = np.array([
        [2825 / 27648, 0, 18575 / 48384, 13525 / 55296, 277 / 14336, 1 / 4],     # order 4
        [37 / 378, 0, 250 / 621, 125 / 594, 0, 512 / 1771]])                     # order 5
    B = B_all[1]
    # the last stage slot holds f(t + h, y_new), which neither formula uses
    E = np.append(B_all[1] - B_all[0], 0.0)

    def __init__(self, fun, t0, y0, t_bound, min_step: float = 0.0, **options):
        super().__init__(fun, t0, y0, t_bound, **options)
        self.error_exponent = -1 / self.error_estimator_order
        self.min_step = min_step
        self.last_error_norm = 0.0

    def _estimate_error(self, K, h):
        return np.dot(K.T, self.E)

    def _estimate_error_norm(self, K, h, scale):
        error = norm(self._estimate_error(K, h) / scale)
        if not np.isfinite(error):
            error = np.inf
        if error >= 1 and abs(h) < self.min_step:
            raise _StepCollapse
        self.last_error_norm = float(error)
        return error


@dataclass
class _Budget:
    limit: int
    used: int = 0


def solve_leg(rhs: Rhs, length: float, x0: np.ndarray, cs: ContinuationSettings, min_step: float,
              budget: _Budget, h0: Optional[float] = None,
              stop: Optional[Callable[[np.ndarray], bool]] = None,
              record: Optional[Callable[[float, np.ndarray, float, float], None]] = None):
    """
    Adaptive integration of dx/ds = rhs(s, x) for s in [0, length].

    Returns:
        Tuple: (termination, final s, final x, next proposed step size).
    """
    solver = CashKarp(rhs, 0.0, np.asarray(x0, dtype=complex), length, min_step=min_step,
                      rtol=cs.rel_tol, atol=cs.abs_tol, first_step=h0)
    while solver.status == "running":
        if budget.used >= budget.limit:
            return Termination.MAX_STEPS, solver.t, solver.y, solver.h_abs
        budget.used += 1
        try:
            message = solver.step()
        except _StepCollapse:
            return Termination.STEP_COLLAPSE, solver.t, solver.y, solver.h_abs
        if solver.status == "failed":
            logger.debug(f"solver stopped at s = {solver.t:.6g}: {message}")
            return Termination.STEP_COLLAPSE, solver.t, solver.y, solver.h_abs
        x = solver.y.copy()
        if record:
            record(solver.t, x, solver.step_size, solver.last_error_norm)
        if stop and stop(x):
            return Termination.SINGULARITY, solver.t, x, solver.h_abs
    return Termination.COMPLETED, length, solver.y.copy(), solver.h_abs


def _equation_rhs(eq: SecondOrderEquation, leg: Leg) -> Rhs:
    def rhs(s, x):
        dz = leg.tangent(s)
        try:
            acc = eq.acceleration(leg.point(s), complex(x[0]), complex(x[1]))
        except (OverflowError, ZeroDivisionError):
            acc = complex(np.nan, np.nan)
        return np.array([dz * x[1], dz * acc], dtype=complex)
    return rhs


def integrate(eq: SecondOrderEquation, state0: Tuple[complex, complex, complex], path: PathSpec,
              cs: Optional[ContinuationSettings] = None) -> Trajectory:
    """
    Continue (y, y') from state0 along `path`.

    Args:
        eq (SecondOrderEquation): The equation.
        state0: (z, y, y') with z the first waypoint.
        path (PathSpec): The path.
        cs (ContinuationSettings): Numerical settings.

    Returns:
        Trajectory: Accepted samples and the termination reason.

    Raises:
        MaxStepsExceeded: If the step budget runs out; `err.trajectory` holds the partial run.
    """
    cs = cs or ContinuationSettings.from_settings()
    z0, y0, yp0 = (complex(v) for v in state0)
    if not (np.isfinite(y0) and np.isfinite(yp0)):
        raise PreconditionError("initial state must be finite")
    if abs(z0 - path.start) > 1e-12 * max(1.0, abs(z0)):
        raise PreconditionError(f"initial point {z0} is not the path start {path.start}")
    legs = path.legs()
    min_step = cs.min_step(sum(leg.length for leg in legs))
    budget = _Budget(cs.max_steps)
    samples = [Sample(z0, y0, yp0)]
    x = np.array([y0, yp0], dtype=complex)
    termination = Termination.COMPLETED
    h = None

    for leg in legs:
        def record(s, xs, step, norm, leg=leg):
            samples.append(Sample(leg.point(s), complex(xs[0]), complex(xs[1]), step, norm))

        termination, _, x, h = solve_leg(
            _equation_rhs(eq, leg), leg.length, x, cs, min_step, budget, h0=min(h, leg.length) if h else None,
            stop=lambda xs: abs(xs[0]) > cs.blowup_threshold, record=record)
        if termination is not Termination.COMPLETED:
            break

    trajectory = Trajectory(tuple(samples), termination)
    if termination is Termination.MAX_STEPS:
        logger.warning(f"💥 step budget of {cs.max_steps} exhausted after {len(samples) - 1} accepted steps")
        err = MaxStepsExceeded(f"step budget of {cs.max_steps} exhausted")
        err.trajectory = trajectory
        raise err
    logger.debug(f"integrate: {termination.value} after {len(samples) - 1} steps at z = {samples[-1].z:.6g}")
    return trajectory


def integrate_system(rhs: Callable[[float, np.ndarray], np.ndarray], length: float, x0,
                     cs: Optional[ContinuationSettings] = None) -> Tuple[Termination, np.ndarray, List[Tuple[float, np.ndarray]]]:
    """
    Integrate a first-order system in a real parameter over [0, length].

    Returns:
        Tuple: (termination, final state, accepted (s, x) pairs).
    """
    cs = cs or ContinuationSettings.from_settings()
    accepted: List[Tuple[float, np.ndarray]] = []
    termination, _, x, _ = solve_leg(
        rhs, length, np.asarray(x0, dtype=complex), cs, cs.min_step(length), _Budget(cs.max_steps),
        record=lambda s, xs, step, norm: accepted.append((s, xs.copy())))
    if termination is Termination.MAX_STEPS:
        raise MaxStepsExceeded("step budget exhausted in system integration")
    return termination, x, accepted
