import pytest

from psent.app.core.algebra.scalars import (
    I_UNIT, ONE, ZERO, coerce_scalar, conjugate, gaussian, in_mode, is_exact, is_zero, normalize_scalars, parse,
    principal_root, rational, to_complex, to_strings)
from psent.app.core.errors import ScalarModeError


def test_gaussian_arithmetic_is_exact():
    a = gaussian(rational(1, 2), 1)
    b = conjugate(a)
    assert a * b == gaussian(rational(5, 4))
    assert (a + b) == ONE
    assert a / a == ONE
    assert a - a == ZERO
    assert I_UNIT ** 2 == -ONE
    assert a ** -1 * a == ONE


def test_parse_and_strings():
    x = parse("3/4", "-1/2")
    assert x == gaussian(rational(3, 4), rational(-1, 2))
    assert to_strings(x) == ("3/4", "-1/2")
    assert to_strings(gaussian(2)) == ("2", "0")


@pytest.mark.parametrize("text", ["1/x", "", "1/0", "0.5.1"])
def test_parse_rejects_malformed_input(text):
    with pytest.raises(ValueError):
        parse(text)


def test_mixing_with_floats_is_rejected():
    with pytest.raises(ScalarModeError):
        in_mode(0.5, exact=True)
    with pytest.raises(ScalarModeError):
        gaussian(0.5)
    with pytest.raises(ScalarModeError):
        normalize_scalars([I_UNIT, 1.5])
    with pytest.raises(ScalarModeError):
        to_strings(0.5j)


def test_in_mode_moves_rationals_to_complex():
    assert in_mode(rational(1, 2), exact=False) == 0.5 + 0j
    assert in_mode(3, exact=True) == gaussian(3)


def test_division_by_exact_zero():
    with pytest.raises(ZeroDivisionError):
        ONE / ZERO


def test_normalization_modes():
    exact = normalize_scalars([1, rational(1, 3)])
    assert all(is_exact(v) for v in exact)
    floating = normalize_scalars([1, 0.5j])
    assert floating == (1 + 0j, 0.5j)
    assert coerce_scalar(2) == gaussian(2)
    assert isinstance(coerce_scalar(2.0), complex)
    assert not is_exact(True)


def test_is_zero_and_principal_root():
    assert is_zero(ZERO)
    assert not is_zero(gaussian(0, rational(1, 10**30)))
    assert is_zero(1e-14, tol=1e-12)
    root = principal_root(-8, 3)
    assert root ** 3 == pytest.approx(-8)
    assert root.imag > 0
    assert to_complex(parse("1/4", "-2")) == 0.25 - 2j
