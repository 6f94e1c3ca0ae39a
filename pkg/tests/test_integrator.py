import math

import numpy as np
import pytest
from scipy.integrate import solve_ivp

from psent.app.core.analysis.equation import EquationSpec
from psent.app.core.continuation.conservation import conserved_drift, first_integral
from psent.app.core.continuation.demos import WarningEquation
from psent.app.core.continuation.integrator import CashKarp, integrate, integrate_system
from psent.app.core.continuation.types import (
    ArcLeg, ContinuationSettings, LoopSpec, PathSpec, Termination, states_close)
from psent.app.core.errors import MaxStepsExceeded, PreconditionError


def test_cash_karp_is_fifth_order():
    errors = []
    for h in (0.2, 0.1):
        sol = solve_ivp(lambda s, x: x, (0.0, h), [1.0 + 0j], method=CashKarp,
                        first_step=h, rtol=1.0, atol=1.0)
        assert sol.t.size == 2
        errors.append(abs(sol.y[0, -1] - math.exp(h)))
    assert math.log2(errors[0] / errors[1]) > 5.0


def test_complex_states_in_scipy_driver():
    sol = solve_ivp(lambda s, x: 1j * x, (0.0, math.pi), [1.0 + 0j], method=CashKarp, rtol=1e-10, atol=1e-12)
    assert sol.success
    assert abs(sol.y[0, -1] + 1) < 1e-8


def _warning_error(tol):
    eq = WarningEquation()
    path = PathSpec((1, 1 + 2j, -1 + 1j))
    y0, yp0 = eq.solution(1)
    cs = ContinuationSettings.from_settings(rel_tol=tol, abs_tol=tol)
    traj = integrate(eq, (1, y0, yp0), path, cs)
    assert traj.termination is Termination.COMPLETED
    return abs(traj.last.y - eq.solution(-1 + 1j)[0])


def test_error_is_proportional_to_the_tolerance():
    tols = [1e-7 / 2 ** k for k in range(5)]
    errors = [_warning_error(tol) for tol in tols]
    slope = np.polyfit(np.log(tols), np.log(errors), 1)[0]
    assert slope >= 1.0
    assert errors[0] / errors[2] >= 4.0
    assert errors[2] / errors[4] >= 4.0


def test_exact_pole_solution(cubic, tight):
    traj = integrate(cubic, (0, -1, -1), PathSpec.segment(0, 0.9), tight)
    assert traj.termination is Termination.COMPLETED
    assert traj.last.z == pytest.approx(0.9)
    assert abs(traj.last.y - (-10)) <= 1e-6
    assert abs(traj.last.yp - (-100)) <= 1e-4
    assert all(s.err <= 1.0 for s in traj.samples[1:])


def test_blowup_is_reported(cubic):
    traj = integrate(cubic, (0, -1, -1), PathSpec.segment(0, 2))
    assert traj.termination is Termination.SINGULARITY
    assert abs(traj.last.y) > ContinuationSettings.from_settings().blowup_threshold
    assert traj.last.z.real < 1


def test_samples_follow_the_path(cubic):
    path = PathSpec((0, 0.5j, 0.5 + 0.5j))
    traj = integrate(cubic, (0, 0.2, 0.1), path)
    z = np.array([s.z for s in traj.samples])
    arclength = np.concatenate([[0], np.cumsum(np.abs(np.diff(z)))])
    assert np.all(np.diff(arclength) > 0)
    assert arclength[-1] == pytest.approx(path.length())


def test_full_loops_return_for_entire_solutions(tight):
    harmonic = EquationSpec.from_lists(2, [[0.0], [-1.0], [1e-30]])
    path = PathSpec((1,), loop=LoopSpec(0, 1, 2))
    traj = integrate(harmonic, (1, math.cos(1), -math.sin(1)), path, tight)
    assert traj.termination is Termination.COMPLETED
    assert states_close((math.cos(1), -math.sin(1)), (traj.last.y, traj.last.yp)) < 1e-8


def test_arc_legs():
    leg = ArcLeg(1j, 2.0, 0.0, math.pi)
    assert leg.length == pytest.approx(2 * math.pi)
    assert leg.end == pytest.approx(-2 + 1j)
    path = PathSpec.arc(0, 1, math.pi / 2)
    assert path.legs()[-1].end == pytest.approx(1j)


def test_initial_state_must_match_the_path(cubic):
    with pytest.raises(PreconditionError):
        integrate(cubic, (1, 0, 0), PathSpec.segment(0, 1))
    with pytest.raises(PreconditionError):
        integrate(cubic, (0, float("nan"), 0), PathSpec.segment(0, 1))
    with pytest.raises(PreconditionError):
        PathSpec((0, 0, 1))
    with pytest.raises(PreconditionError):
        LoopSpec(0, 0.0)


def test_step_budget(cubic):
    cs = ContinuationSettings.from_settings(max_steps=5)
    with pytest.raises(MaxStepsExceeded) as info:
        integrate(cubic, (0, -1, -1), PathSpec.segment(0, 0.9), cs)
    partial = info.value.trajectory
    assert partial.termination is Termination.MAX_STEPS
    assert partial.accepted_steps <= 5
    assert info.value.exit_code == 3


def test_first_order_systems():
    termination, x, accepted = integrate_system(lambda s, x: -x, 1.0, [1.0])
    assert termination is Termination.COMPLETED
    assert x[0] == pytest.approx(math.exp(-1), rel=1e-8)
    assert accepted[-1][0] == pytest.approx(1.0)


def test_settings_validation():
    with pytest.raises(ValueError):
        ContinuationSettings(rel_tol=0)
    with pytest.raises(ValueError):
        ContinuationSettings(min_step_factor=1.5)
    cs = ContinuationSettings.from_settings(rel_tol=1e-12, abs_tol=None)
    assert cs.rel_tol == 1e-12
    assert cs.min_step(2.0) == pytest.approx(2.0 * cs.min_step_factor)


def test_conservation_on_the_exact_solution(cubic, tight):
    traj = integrate(cubic, (0, -1, -1), PathSpec.segment(0, 0.9), tight)
    # FI = y'^2 - y^4 vanishes on y = 1/(z - 1)
    assert conserved_drift(cubic, traj, relative=True) <= 1e-8


def test_conservation_with_a_constant_term(tight):
    eq = EquationSpec.canonical(3, [[1], [0]])                # y'' = 2 y^3 + 1
    path = PathSpec((0, 1 + 1j, 2 + 0.5j, 4))
    traj = integrate(eq, (0, 0.5, 0.2), path, tight)
    assert path.length() <= 5
    assert conserved_drift(eq, traj, relative=True) <= 1e-6


def test_first_integral_values():
    fi = first_integral([0, 0, 0, 2], np.array([2.0 + 0j]), np.array([3.0 + 0j]))
    assert fi[0] == pytest.approx(9 - 16)


def test_conservation_needs_constant_coefficients(painleve1, tight):
    traj = integrate(painleve1, (0, 1, 0), PathSpec.segment(0, 0.2), tight)
    with pytest.raises(PreconditionError):
        conserved_drift(painleve1, traj)
