import cmath
import random

import numpy as np
import pytest

from psent.app.core.analysis.equation import EquationSpec
from psent.app.core.analysis.expansion import BranchClass, expand
from psent.app.core.continuation.integrator import integrate
from psent.app.core.continuation.locate import (
    approach, fit_exponent, locate, log_derivative_estimate, series_match)
from psent.app.core.continuation.types import PathSpec, Sample, Termination
from psent.app.core.errors import NoBranchFitError, NonMonotoneTailError, PreconditionError

from tests.helpers import planted, random_canonical


def pole_samples(amplitude=1, count=20):
    zs = [1 - 0.3 * 0.8 ** k for k in range(count)]
    return [Sample(z, amplitude / (z - 1), -amplitude / (z - 1) ** 2) for z in zs]


def test_cubic_pole(cubic, tight):
    traj = integrate(cubic, (0, -1, -1), PathSpec.segment(0, 2), tight)
    report = locate(cubic, traj, tight)
    assert report.method == "uv-chart"
    assert abs(report.z_star - 1) <= 1e-8
    assert report.exponent_estimate == pytest.approx(-1, abs=0.01)
    assert report.branch_class.epsilon == 1
    assert abs(report.anchor.y) >= tight.chart_handoff_radius
    assert report.N == 3


def test_quartic_branch_point(tight):
    eq = EquationSpec.canonical(4, [[0], [0], [0]])            # y'' = (10/9) y^4
    traj = integrate(eq, planted(4), PathSpec.segment(0, 2), tight)
    assert traj.termination is Termination.SINGULARITY
    report = locate(eq, traj, tight)
    assert abs(report.z_star - 1) <= 1e-6
    assert report.exponent_estimate == pytest.approx(-2 / 3, abs=0.01)
    assert report.branch_class.ramification == 3


@pytest.mark.parametrize("c, epsilon", [(1, 1), (1j, -1)])
def test_quintic_classes(tight, c, epsilon):
    eq = EquationSpec.canonical(5, [[0], [0], [0], [0]])       # y'' = (3/4) y^5
    traj = integrate(eq, planted(5, c), PathSpec.segment(0, 2), tight)
    report = locate(eq, traj, tight)
    assert abs(report.z_star - 1) <= 1e-6
    assert report.exponent_estimate == pytest.approx(-0.5, abs=0.01)
    assert report.branch_class.epsilon == epsilon


def test_resonance_failure_falls_back_to_the_fit():
    eq = EquationSpec.canonical(3, [[0, 1], [0]])              # y'' = 2 y^3 + z
    traj = integrate(eq, (0, -1, -1), PathSpec.segment(0, 2))
    report = locate(eq, traj)
    assert report.method == "exponent-fit"
    assert report.flags == ("resonance-fallback",)
    assert report.branch_class is None
    assert report.exponent_estimate == pytest.approx(-1, abs=0.01)
    assert 0.9 < report.z_star.real < 1.1


def test_trajectory_without_a_singularity(cubic):
    traj = integrate(cubic, (0, 0.1, 0), PathSpec.segment(0, 0.5))
    with pytest.raises(PreconditionError):
        locate(cubic, traj)


def test_log_derivative_estimate(cubic):
    z_star, p = log_derivative_estimate(cubic, 0, -1, -1)
    assert z_star == pytest.approx(1)
    assert p == pytest.approx(-1)
    with pytest.raises(PreconditionError):
        log_derivative_estimate(cubic, 0, 1, 0)


def test_approach_reaches_the_handoff_radius(cubic):
    traj = approach(cubic, (0, -1, -1))
    assert abs(traj.samples[traj.peak_index()].y) >= 1e3


def test_exponent_fit_on_a_power_law():
    zs = [2 - 0.5 * 0.8 ** k for k in range(20)]
    samples = [Sample(z, 3 * (z - 2) ** (-2 / 3), 0) for z in zs]
    fit = fit_exponent(samples, 2.01)
    assert fit.exponent == pytest.approx(-2 / 3, abs=1e-6)
    assert abs(fit.z_star - 2) <= 1e-8
    assert fit.samples == 20
    with pytest.raises(NonMonotoneTailError):
        fit_exponent(samples[:5], 2)
    with pytest.raises(NonMonotoneTailError):
        fit_exponent(samples[::-1], 2)


@pytest.mark.parametrize("amplitude, epsilon", [(1, 1), (-1, -1)])
def test_series_match_recovers_beta(cubic, amplitude, epsilon):
    match = series_match(cubic, 1, BranchClass(3, epsilon), pole_samples(amplitude))
    assert abs(match.beta) <= 1e-8
    assert abs(match.z_star - 1) <= 1e-8
    assert match.samples == 20


def test_series_match_without_a_fitting_branch(cubic):
    with pytest.raises(NoBranchFitError) as info:
        series_match(cubic, 1, BranchClass(3, 1), pole_samples(2))
    assert info.value.exit_code == 2
    with pytest.raises(PreconditionError):
        series_match(cubic, 1, BranchClass(3, 1), pole_samples(1, count=4))


def test_series_match_on_an_exact_painleve_tail(painleve1, tight):
    # start on the truncated expansion about z* = 1 with beta = 0
    zeta = -0.05
    y = zeta ** -2 - zeta ** 2 / 10 - zeta ** 3 / 6
    yp = -2 * zeta ** -3 - zeta / 5 - zeta ** 2 / 2
    traj = integrate(painleve1, (1 + zeta, y, yp), PathSpec.segment(1 + zeta, 1 + cmath.exp(0.3j) * 0.01), tight)
    samples = [s for s in traj.samples if np.isfinite(s.y)]
    match = series_match(painleve1, 1, BranchClass(2), samples, tight)
    assert abs(match.beta) < 1e-2
    assert abs(match.z_star - 1) < 1e-5


def test_painleve_one_from_rest(painleve1, tight):
    traj = integrate(painleve1, (0, 0, 0), PathSpec.segment(0, 4), tight)
    report = locate(painleve1, traj, tight)
    assert report.method == "uv-chart"
    assert 2 < report.z_star.real < 3.5
    assert abs(report.z_star.imag) <= 1e-6
    assert report.discrepancy is not None and report.discrepancy <= 1e-4
    assert report.exponent_estimate == pytest.approx(-2, abs=0.05)


def test_exponent_law_on_random_passing_equations():
    rng = random.Random(2024)
    for k in range(20):
        N = 2 + k % 6
        eq = random_canonical(rng, N, passing=True)
        # start where the y^N term dominates the lower ones
        r = 20.0 ** (-(N - 1) / 2)
        traj = integrate(eq, planted(N, z0=1 - r), PathSpec.segment(1 - r, 1 + r))
        report = locate(eq, traj)
        assert report.exponent_estimate == pytest.approx(-2 / (N - 1), abs=0.05), (N, report)


@pytest.mark.parametrize("epsilon", [1, -1])
def test_series_match_recovers_a_planted_beta(cubic, epsilon):
    planted_series = expand(cubic, BranchClass(3, epsilon), 0.7, 16, base=1)
    zs = [1 - 0.3 * 0.8 ** k for k in range(20)]
    samples = [Sample(z, planted_series.evaluate(z), planted_series.series.evaluate_derivative(z)) for z in zs]
    match = series_match(cubic, 1, BranchClass(3, epsilon), samples)
    assert abs(match.beta - 0.7) <= 1e-4
    assert abs(match.z_star - 1) <= 1e-6
