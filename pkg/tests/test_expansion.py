import cmath
import random

import pytest

from psent.app.core.algebra.puiseux import PuiseuxSeries
from psent.app.core.algebra.scalars import I_UNIT, ONE, gaussian, rational, to_complex
from psent.app.core.analysis.canonical import CanonicalEquation, canonicalize
from psent.app.core.analysis.equation import EquationSpec
from psent.app.core.analysis.expansion import (
    BranchClass, expand, obstruction, recurrence_prefactor, residual_valuation, resonance_index)
from psent.app.core.analysis.resonance import check_resonance
from psent.app.core.continuation.integrator import integrate
from psent.app.core.continuation.types import PathSpec
from psent.app.core.errors import ObstructionNonzero, PreconditionError
from tests.helpers import exact, random_canonical


def test_resonance_index_is_the_only_positive_root():
    for N in range(2, 9):
        assert resonance_index(N) == 2 * (N + 1)
        assert all(recurrence_prefactor(N, r) != 0 for r in range(1, 2 * N + 2))


def test_painleve_one_coefficients(painleve1):
    beta = rational(3, 7)
    result = expand(painleve1, BranchClass(2), beta, 8, base=1)
    assert result.resonance_index == 6
    assert [result.coefficient(j) for j in range(4)] == exact(1, 0, 0, 0)
    assert result.coefficient(4) == gaussian(rational(-1, 10))
    assert result.exponent(4) == 2
    assert result.coefficient(5) == gaussian(rational(-1, 6))
    assert result.exponent(5) == 3
    assert result.coefficient(6) == gaussian(beta)
    assert result.exponent(6) == 4
    assert not result.obstruction


def test_painleve_one_at_the_origin(painleve1):
    result = expand(painleve1, BranchClass(2), 0, 8, base=0)
    assert not result.coefficient(4)
    assert result.coefficient(5) == gaussian(rational(-1, 6))


def test_painleve_one_at_a_complex_base(painleve1):
    z0 = gaussian(1, 2)
    result = expand(painleve1, BranchClass(2), 0, 8, base=z0)
    assert result.coefficient(4) == -z0 / 10


def test_obstruction_for_both_odd_classes():
    eq = EquationSpec.canonical(3, [[0, 1], [0]])
    for epsilon in (1, -1):
        branch = BranchClass(3, epsilon)
        with pytest.raises(ObstructionNonzero) as info:
            expand(eq, branch, 0, 10, base=0)
        assert info.value.exit_code == 2
        assert info.value.value
        assert obstruction(eq, branch, base=0)


def test_passing_odd_equation_expands():
    eq = EquationSpec.canonical(3, [[5], [0, 1]])
    result = expand(eq, BranchClass(3, -1), rational(1, 2), 12, base=0)
    assert result.branch.c0 == -ONE
    assert result.coefficient(0) == -ONE
    assert result.coefficient(8) == gaussian(rational(1, 2))


def test_truncation_residual_valuation(painleve1):
    result = expand(painleve1, BranchClass(2), 0, 12, base=1)
    for M in (6, 9, 12):
        assert residual_valuation(painleve1, result, M) >= rational(M + 1 - 4)


def test_quartic_model_solution_has_vanishing_corrections():
    eq = EquationSpec.canonical(4, [[0], [0], [0]])
    result = expand(eq, BranchClass(4), 0, 14, base=0)
    assert result.coefficient(0) == ONE
    assert not any(result.coefficient(j) for j in range(1, 15))
    assert result.exponent(0) == rational(-2, 3)


def test_branch_classes():
    assert BranchClass(4).ramification == 3
    assert BranchClass(5, 1).ramification == 2
    assert BranchClass(5, -1).c0 == I_UNIT
    assert BranchClass.from_label(5, "-1").epsilon == -1
    assert BranchClass.from_label(4, "-1").epsilon is None
    assert [str(BranchClass(4)), str(BranchClass(5, 1)), str(BranchClass(5, -1))] == ["even", "+1", "-1"]
    with pytest.raises(PreconditionError):
        BranchClass(5)
    with pytest.raises(PreconditionError):
        BranchClass.from_label(3, "2")


def test_order_must_reach_the_resonance(painleve1):
    with pytest.raises(PreconditionError):
        expand(painleve1, BranchClass(2), 0, 5, base=1)


def test_series_coefficients_follow_the_base_of_the_canonical_form():
    eq = EquationSpec.from_lists(2, [[0, 2], [], [12]])
    canon, _ = canonicalize(eq, 0.5, 16)
    result = expand(canon, BranchClass(2), 0.25, 10)
    assert to_complex(result.base) == 0
    assert to_complex(result.coefficient(0)) == pytest.approx(1)
    assert to_complex(result.coefficient(6)) == pytest.approx(0.25)
    with pytest.raises(PreconditionError):
        expand(CanonicalEquation.from_spec(EquationSpec.canonical(2, [[0, 1]])), BranchClass(2), 0, 8)


def test_beta_only_enters_at_the_resonance(painleve1):
    first = expand(painleve1, BranchClass(2), rational(1, 3), 12, base=1)
    again = expand(painleve1, BranchClass(2), rational(1, 3), 12, base=1)
    other = expand(painleve1, BranchClass(2), rational(-2, 5), 12, base=1)
    assert first.table() == again.table()
    R = first.resonance_index
    assert all(first.coefficient(j) == other.coefficient(j) for j in range(R))
    assert first.coefficient(R) != other.coefficient(R)


def test_exact_and_floating_expansions_agree(painleve1):
    z0 = gaussian(rational(1, 2), rational(1, 3))
    exact_result = expand(painleve1, BranchClass(2), rational(3, 7), 14, base=z0)
    float_result = expand(painleve1, BranchClass(2), 3 / 7, 14, base=to_complex(z0))
    assert not float_result.series.is_exact
    for j in range(15):
        assert float_result.coefficient(j) == pytest.approx(to_complex(exact_result.coefficient(j)), rel=1e-10, abs=1e-12)
    z = to_complex(z0) + 0.05 * cmath.exp(0.4j)
    assert float_result.evaluate(z) == pytest.approx(exact_result.evaluate(z), rel=1e-12)


@pytest.mark.parametrize("N", [2, 3, 4, 5])
def test_resonance_verdict_matches_the_obstruction(N):
    rng = random.Random(40 + N)
    branches = [BranchClass(N)] if N % 2 == 0 else [BranchClass(N, 1), BranchClass(N, -1)]
    for _ in range(3):
        eq = random_canonical(rng, N)
        passed = check_resonance(eq).passed
        for _ in range(5):
            base = gaussian(rational(rng.randint(-9, 9), 7), rational(1, 3))
            vanishes = all(not obstruction(eq, branch, base=base) for branch in branches)
            assert vanishes == passed


def test_partial_sums_approach_the_continued_solution(painleve1, tight):
    result = expand(painleve1, BranchClass(2), 0, 30, base=1)
    start = 1 - 0.05
    y0, yp0 = result.evaluate(start), result.series.evaluate_derivative(start)
    traj = integrate(painleve1, (start, y0, yp0), PathSpec.segment(start, 0.5), tight)
    end = traj.samples[-1]
    assert end.z == pytest.approx(0.5)
    errors = []
    for M in (4, 8, 12):
        partial = PuiseuxSeries(result.base, 1, -2, [result.coefficient(j) for j in range(M + 1)], M - 2)
        errors.append(abs(partial.evaluate(end.z) - end.y))
    assert all(later < earlier for earlier, later in zip(errors, errors[1:]))
    assert errors[-1] < 1e-6
