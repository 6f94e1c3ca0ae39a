import cmath
import random
import time

import numpy as np
import pytest

from psent.app.core.analysis.equation import EquationSpec
from psent.app.core.analysis.resonance import check_resonance
from psent.app.core.analysis.wfunction import (
    UVChart, WFunction, build_PQRS, chart_from_state, chart_rhs, chart_to_state, eval_W,
    integrated_w_diagnostic, wdiff_defect)
from psent.app.core.continuation.integrator import integrate
from psent.app.core.continuation.types import PathSpec
from psent.app.core.errors import BranchAmbiguityError, PreconditionError

from tests.helpers import planted, random_canonical


def test_s_vanishes_for_resonant_equations():
    rng = random.Random(11)
    start = time.perf_counter()
    for k in range(20):
        N = 2 + k % 6
        eq = random_canonical(rng, N, passing=True)
        assert check_resonance(eq).passed
        pqrs = build_PQRS(WFunction(eq))
        assert pqrs.s_is_zero()
        assert all(c.is_zero() for c in pqrs.S.values())
    assert time.perf_counter() - start < 30


def test_pqr_are_powers_of_one_over_y(painleve1):
    pqrs = WFunction(painleve1).pqrs
    for name in ("P", "Q", "R"):
        assert all(p >= 0 for p in getattr(pqrs, name))
    assert pqrs.lowest_power("P") == 2


def test_derivative_identity_along_random_states():
    rng = random.Random(5)
    eq = random_canonical(rng, 5, passing=True)
    w = WFunction(eq)
    for _ in range(5):
        z = complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
        y = complex(rng.uniform(1, 3), rng.uniform(-1, 1))
        yp = complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
        scale = max(1.0, abs(eval_W(w, z, y, yp)), abs(y) ** (eq.N + 1))
        assert abs(wdiff_defect(w, z, y, yp)) <= 1e-10 * scale


def test_defect_equals_s_when_resonance_fails():
    eq = EquationSpec.canonical(3, [[0, 1], [0]])
    w = WFunction(eq)
    z, y, yp = 0.3 + 0.1j, 2.0 - 1.0j, 0.5j
    s = w.pqrs.evaluate(z, y)[3]
    assert wdiff_defect(w, z, y, yp) == pytest.approx(s, rel=1e-9, abs=1e-9)


def test_w_is_undefined_at_zero(cubic):
    with pytest.raises(PreconditionError):
        eval_W(WFunction(cubic), 0, 0, 1)


def test_w_is_constant_for_constant_coefficients(cubic, tight):
    # W reduces to the first integral y'^2 - y^4 for y'' = 2 y^3
    traj = integrate(cubic, (0, -1, -1), PathSpec.segment(0, 0.8), tight)
    z, y, yp = traj.arrays()
    diag = integrated_w_diagnostic(WFunction(cubic), z, y, yp)
    assert diag.max_relative_defect < 1e-6
    assert np.allclose(diag.E, 1)


def test_integrated_diagnostic_on_painleve_one(painleve1, tight):
    traj = integrate(painleve1, (0, 1, 0), PathSpec.segment(0, 0.3 + 0.2j), tight)
    z, y, yp = traj.arrays()
    diag = integrated_w_diagnostic(WFunction(painleve1), z, y, yp)
    assert diag.max_relative_defect < 1e-2


@pytest.mark.parametrize("sign", [1, -1])
def test_odd_chart_reads_the_class(cubic, sign):
    w = WFunction(cubic)
    zeta = -1e-3
    y, yp = sign / zeta, -sign / zeta ** 2
    state, chart = chart_from_state(UVChart(w), 1 + zeta, y, yp)
    assert chart.epsilon == sign
    assert state.G == pytest.approx(1, abs=1e-6)
    y_back, yp_back = chart_to_state(chart, 1 + zeta, state.u, state.v)
    assert y_back == pytest.approx(y, rel=1e-10)
    assert yp_back == pytest.approx(yp, rel=1e-10)


def test_even_chart_round_trip():
    eq = EquationSpec.canonical(4, [[0], [0], [0]])
    w = WFunction(eq)
    zeta = 1e-4 * cmath.exp(0.7j)
    y = zeta ** (-2 / 3)
    yp = -2 / 3 * y / zeta
    state, chart = chart_from_state(UVChart(w), 2 + zeta, y, yp)
    assert abs(state.v) < 1e-6 * abs(y) ** 2
    y_back, yp_back = chart_to_state(chart, 2 + zeta, state.u, state.v)
    assert y_back == pytest.approx(y, rel=1e-10)
    assert yp_back == pytest.approx(yp, rel=1e-10)


def test_chart_rhs_is_finite_at_the_singularity(cubic):
    chart = UVChart(WFunction(cubic), 1)
    dz, dv = chart_rhs(chart, 1.0, 0.0, 0.0)
    assert np.isfinite(dz) and np.isfinite(dv)
    assert abs(dz) == pytest.approx(1)


def test_small_states_are_ambiguous(cubic):
    with pytest.raises(BranchAmbiguityError):
        chart_from_state(UVChart(WFunction(cubic)), 0, 2, 1)


@pytest.mark.parametrize("N", [3, 4, 5, 6])
def test_chart_coordinate_scales_as_a_power_of_the_distance(N):
    # along y = zeta^(-2/(N-1)): |zeta| ~ |u|^(N-1) (even N) or |u|^K (odd N)
    eq = EquationSpec.canonical(N, [[0]] * (N - 1))
    w = WFunction(eq)
    distances = np.logspace(-4, -7, 12)
    us = []
    for r in distances:
        z, y, yp = planted(N, z0=1 - r)
        state, _ = chart_from_state(UVChart(w), z, y, yp)
        us.append(abs(state.u))
    slope = np.polyfit(np.log(us), np.log(distances), 1)[0]
    expected = N - 1 if N % 2 == 0 else (N - 1) // 2
    assert abs(slope - expected) <= 1e-3
