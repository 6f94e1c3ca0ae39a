"""
Exact and approximate scalars.

Exact scalars are elements of sympy's Gaussian rational field `QQ_I`
(`GaussianRational`, with rational parts `.x` and `.y`); approximate scalars
are plain Python `complex` values. sympy converts floats into `QQ_I` without
complaint, so the mode checks live here: `coerce_scalar` and
`normalize_scalars` reject mixtures and the series containers refuse to
combine operands of different modes.

Example:
    .. code-block:: python

        from psent.app.core.algebra.scalars import parse, to_complex

        c = parse("1/2", "-3")
        print(c * c, to_complex(c))
"""

import cmath
import numbers
from typing import Iterable, Tuple, Union

from sympy import Rational as SymRational
from sympy.polys.domains import QQ, QQ_I
from sympy.polys.domains.gaussiandomains import GaussianRational
from sympy.polys.polyerrors import CoercionFailed

from psent.app.core.errors import ScalarModeError


ZERO = QQ_I.zero
ONE = QQ_I.one
I_UNIT = QQ_I.imag_unit

Scalar = Union[GaussianRational, complex]

# QQ elements are gmpy2 or python backed depending on the install
QQElement = _QQ = QQ.dtype

SCALAR_TYPES = (GaussianRational, _QQ, numbers.Number)


def _is_rational(x) -> bool:
    return isinstance(x, (_QQ, numbers.Rational)) and not isinstance(x, bool)


def rational(p, q=1):
    """ The element p/q of QQ. """
    if not (_is_rational(p) and _is_rational(q)):
        raise ScalarModeError(f"not a rational: {p!r}/{q!r}")
    return _to_qq(p) / _to_qq(q)


def _to_qq(x):
    if isinstance(x, _QQ):
        return x
    if isinstance(x, int):
        return QQ(x)
    return QQ(int(x.numerator), int(x.denominator))


def gaussian(re=0, im=0) -> GaussianRational:
    """
    The Gaussian rational re + i*im.

    Raises:
        ScalarModeError: If a part is not rational.
    """
    for part in (re, im):
        if not _is_rational(part):
            raise ScalarModeError(f"Gaussian rational parts must be rational, got {part!r}")
    return QQ_I(_to_qq(re), _to_qq(im))


def parse(re: str, im: str = "0") -> GaussianRational:
    """
    Build from rational strings such as "3", "-1/2".

    Raises:
        ValueError: If a string is not a well-formed rational.
    """
    parts = []
    for text in (re, im):
        try:
            parts.append(QQ.from_sympy(SymRational(str(text).strip())))
        except (TypeError, ValueError, ZeroDivisionError, CoercionFailed) as exc:
            raise ValueError(f"not a rational number: {text!r}") from exc
    return QQ_I(*parts)


def to_strings(x) -> Tuple[str, str]:
    """ (real, imaginary) parts of an exact scalar as rational strings. """
    x = coerce_scalar(x)
    if not isinstance(x, GaussianRational):
        raise ScalarModeError("only exact scalars have rational strings")
    return str(x.x), str(x.y)


def conjugate(x: GaussianRational) -> GaussianRational:
    return QQ_I.new(x.x, -x.y)


def is_exact(x) -> bool:
    """ True for Gaussian rationals and plain rationals. """
    return isinstance(x, GaussianRational) or _is_rational(x)


def coerce_scalar(x) -> Scalar:
    """ Rationals -> GaussianRational, float/complex -> complex. """
    if isinstance(x, GaussianRational):
        return x
    if _is_rational(x):
        return gaussian(x)
    if isinstance(x, numbers.Complex):
        return complex(x)
    raise ScalarModeError(f"not a scalar: {x!r}")


def normalize_scalars(values: Iterable) -> Tuple[Scalar, ...]:
    """
    Bring a list of numbers to a single mode.

    Rationals become exact unless a floating value is present, in which case
    every entry becomes complex. Gaussian rationals next to floats are rejected.
    """
    values = list(values)
    floating = any(not is_exact(v) for v in values)
    if not floating:
        return tuple(coerce_scalar(v) for v in values)
    if any(isinstance(v, GaussianRational) for v in values):
        raise ScalarModeError("mixed exact and floating coefficients")
    return tuple(to_complex(v) for v in values)


def in_mode(x, exact: bool) -> Scalar:
    """
    `x` in the requested mode: rationals go either way, floats only to complex.

    Raises:
        ScalarModeError: If a floating value is asked for exactly.
    """
    x = coerce_scalar(x)
    if exact and not isinstance(x, GaussianRational):
        raise ScalarModeError("cannot combine an exact scalar with a floating value; convert explicitly")
    return x if exact else to_complex(x)


def to_complex(x) -> complex:
    if isinstance(x, GaussianRational):
        return complex(float(x.x), float(x.y))
    if isinstance(x, _QQ):
        return complex(float(x))
    return complex(x)


def is_zero(x, tol: float = 0.0) -> bool:
    """ Exact test for exact scalars, |x| <= tol otherwise. """
    if is_exact(x):
        return not x
    return abs(x) <= tol


def magnitude(x) -> float:
    return abs(to_complex(x))


def principal_root(x, n: int) -> complex:
    """ Principal n-th root, Arg in (-pi, pi]. """
    x = to_complex(x)
    if x == 0:
        return 0j
    return cmath.exp(cmath.log(x) / n)
