import cmath
import math

import pytest

from psent.app.core.analysis.equation import EquationSpec
from psent.app.core.continuation.integrator import integrate
from psent.app.core.continuation.locate import locate
from psent.app.core.continuation.monodromy import enclosed_singularities, loop_around, loop_start, monodromy
from psent.app.core.continuation.types import ContinuationSettings, PathSpec
from psent.app.core.errors import LoopEncounterError, PreconditionError

from tests.helpers import planted


def located(eq, state, cs):
    traj = integrate(eq, state, PathSpec.segment(state[0], 2), cs)
    return locate(eq, traj, cs)


def test_quartic_returns_after_three_turns(tight):
    eq = EquationSpec.canonical(4, [[0], [0], [0]])
    report = located(eq, planted(4), tight)
    result = monodromy(eq, report, 0.5, cs=tight)
    assert len(result.deviations) == 3
    assert result.ramification == 3
    assert result.deviations[0] >= 0.1
    assert result.deviations[1] >= 0.1
    assert result.deviations[2] <= 1e-5
    assert result.returns_after() == 3


@pytest.mark.parametrize("c, epsilon", [(1, 1), (1j, -1)])
def test_quintic_returns_after_two_turns(tight, c, epsilon):
    eq = EquationSpec.canonical(5, [[0], [0], [0], [0]])
    report = located(eq, planted(5, c), tight)
    assert report.branch_class.epsilon == epsilon
    result = monodromy(eq, report, 0.5, cs=tight)
    assert result.deviations[0] >= 0.1
    assert result.deviations[1] <= 1e-5


def test_poles_return_after_every_turn(cubic, tight):
    report = located(cubic, (0, -1, -1), tight)
    result = monodromy(cubic, report, 0.5, turns=2, cs=tight)
    assert all(d <= 1e-6 for d in result.deviations)
    assert result.returns_after() == 1
    assert len(result.trajectory.samples) > 2


def test_loop_through_another_singularity(cubic):
    # y = 1/(z - 1): the circle |z| = 1 passes through the pole
    with pytest.raises(LoopEncounterError) as info:
        loop_around(cubic, 0, (0.5, -2, -4), 1.0, 1)
    assert info.value.exit_code == 3


def test_loop_preconditions(cubic):
    with pytest.raises(PreconditionError):
        loop_around(cubic, 0.5, (0.5, -2, -4), 0.2, 1)
    with pytest.raises(PreconditionError):
        loop_around(cubic, 0, (0.5, -2, -4), 0.2, 0)


def test_loops_start_near_the_radius(cubic, tight):
    report = located(cubic, (0, -1, -1), tight)
    start = loop_start(report, 0.5)
    assert abs(abs(start.z - report.z_star) - 0.5) < 0.05
    assert abs(start.y) < 10
    assert loop_start(report, 0.5) == start


def test_logarithmic_point_does_not_return():
    eq = EquationSpec.canonical(3, [[0, 1], [0]])              # y'' = 2 y^3 + z
    cs = ContinuationSettings.from_settings(rel_tol=1e-11, abs_tol=1e-11, threads=1)
    report = located(eq, (0, -1, -1), cs)
    assert report.branch_class is None
    result = monodromy(eq, report, 0.3, turns=1, cs=cs)
    # the y' jump is 2 pi (3/5) zeta^2 against |y'| ~ zeta^-2
    assert result.deviations[0] >= 1e-2
    assert result.returns_after() is None


def test_second_pole_inside_the_loop(cubic, tight):
    # y = 1/(z - p) with p on the chord from 1 to exp(7 pi i / 8)
    p = (1 + cmath.exp(7j * math.pi / 8)) / 2
    state = (1, 1 / (1 - p), -1 / (1 - p) ** 2)
    found = enclosed_singularities(cubic, 0, state, 1.0, tight)
    assert len(found) >= 1
    assert abs(found[0] - p) < 1e-3
    with pytest.raises(PreconditionError):
        loop_around(cubic, 0, state, 1.0, 1, tight)
    unchecked = loop_around(cubic, 0, state, 1.0, 1, tight, check_enclosure=False)
    assert unchecked.deviations[0] <= 1e-6


def test_offset_center_still_closes(cubic, tight):
    report = located(cubic, (0, -1, -1), tight)
    start = loop_start(report, 0.5)
    shifted = loop_around(cubic, report.z_star + 0.02 + 0.01j, start.state, 0.5, 1, tight)
    assert shifted.deviations[0] <= 1e-6


def test_centers_follow_the_fit(cubic, tight):
    report = located(cubic, (0, -1, -1), tight)
    start = loop_start(report, 0.5)
    off = report.z_star + 0.02
    result = loop_around(cubic, off, start.state, 0.5, 1, tight, exponent=-1.0)
    assert len(result.centers) == 4
    assert result.centers[0] == off
    # each refit moves at most 5% of the radius toward the pole at 1
    assert all(abs(b - a) <= 0.025 + 1e-12 for a, b in zip(result.centers, result.centers[1:]))
    assert abs(result.centers[-1] - 1) < abs(off - 1)
    assert result.deviations[0] <= 1e-6
