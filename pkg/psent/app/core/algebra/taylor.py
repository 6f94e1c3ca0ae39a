"""
Truncated Taylor series about a base point.

`TaylorSeries(base, coeffs)` represents sum_k coeffs[k] (z - base)^k known
through order M = len(coeffs) - 1. Arithmetic never reports coefficients
beyond the common truncation order of its operands.

The canonical-form construction needs more than ring operations: fractional
powers (for f = (c / a_N)^{1/(N+3)}), antiderivatives (for z~ = int f^-2),
composition and reversion (for z(z~)). All of them, and the products and
inverses, are sympy `ring_series` operations on the series ring of
`psent.app.core.algebra.rings`.
"""

import cmath
from dataclasses import dataclass
from typing import Iterable, Optional, Tuple

from sympy import Rational as SymRational
from sympy.polys.domains.gaussiandomains import GaussianRational
from sympy.polys.ring_series import (
    rs_diff, rs_integrate, rs_mul, rs_pow, rs_series_inversion, rs_series_reversion, rs_subs, rs_trunc)
from sympy.polys.rings import PolyElement

from psent.app.core.algebra.poly import Poly
from psent.app.core.algebra.rings import from_element, series_ring, to_element
from psent.app.core.algebra.scalars import (
    SCALAR_TYPES, Scalar, ZERO, coerce_scalar, in_mode, is_exact, is_zero, normalize_scalars, to_complex)
from psent.app.core.errors import ScalarModeError, SeriesDomainError


def _exponent(alpha) -> SymRational:
    if isinstance(alpha, int):
        return SymRational(alpha)
    try:
        return SymRational(int(alpha.numerator), int(alpha.denominator))
    except AttributeError:
        raise ScalarModeError(f"series powers need a rational exponent, got {alpha!r}") from None


@dataclass(frozen=True, init=False)
class TaylorSeries:
    """
    Attributes:
        base: Expansion point z0.
        coeffs (tuple): Taylor coefficients c_0..c_M.
    """

    base: Scalar
    coeffs: Tuple[Scalar, ...]

    def __init__(self, base, coeffs: Iterable, order: Optional[int] = None):
        values = normalize_scalars(list(coeffs) + [base])
        base, coeffs = values[-1], list(values[:-1])
        zero = ZERO if is_exact(base) else 0j
        if order is not None:
            if order < 0:
                raise SeriesDomainError("truncation order must be non-negative")
            coeffs = (coeffs + [zero] * (order + 1))[:order + 1]
        if not coeffs:
            coeffs = [zero]
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "coeffs", tuple(coeffs))

    # ------------------------------------------------------------------
    # constructors
    # ------------------------------------------------------------------

    @classmethod
    def from_poly(cls, p: Poly, base, order: int) -> "TaylorSeries":
        base = coerce_scalar(base)
        if p.is_exact and not is_exact(base):
            p = p.to_float()
        elif not p.is_exact and is_exact(base):
            base = to_complex(base)
        return cls(base, p.taylor_coefficients(base, order + 1), order)

    @classmethod
    def constant(cls, base, c, order: int) -> "TaylorSeries":
        return cls(base, [c], order)

    # ------------------------------------------------------------------
    # properties
    # ------------------------------------------------------------------

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_exact(self) -> bool:
        return isinstance(self.base, GaussianRational)

    def _zero(self):
        return ZERO if self.is_exact else 0j

    def coefficient(self, k: int) -> Scalar:
        if k > self.order:
            raise SeriesDomainError(f"coefficient {k} beyond truncation order {self.order}")
        return self.coeffs[k] if k >= 0 else self._zero()

    def is_zero(self, tol: float = 0.0) -> bool:
        return all(is_zero(c, tol) for c in self.coeffs)

    def truncate(self, order: int) -> "TaylorSeries":
        return TaylorSeries(self.base, self.coeffs[:order + 1], min(order, self.order))

    def to_float(self) -> "TaylorSeries":
        return TaylorSeries(to_complex(self.base), [to_complex(c) for c in self.coeffs])

    def max_abs(self) -> float:
        return max(abs(to_complex(c)) for c in self.coeffs)

    # ------------------------------------------------------------------
    # series ring
    # ------------------------------------------------------------------

    @property
    def element(self) -> PolyElement:
        """ The series as a polynomial in t = z - base. """
        return to_element(self.coeffs, self.is_exact)

    def _gen(self) -> PolyElement:
        return series_ring(self.is_exact)[1]

    def _wrap(self, p: PolyElement, order: int, base=None) -> "TaylorSeries":
        base = self.base if base is None else base
        return TaylorSeries(base, from_element(p, order + 1, self.is_exact), order)

    def _check(self, other: "TaylorSeries"):
        if self.is_exact != other.is_exact:
            raise ScalarModeError("cannot combine exact and floating Taylor series")
        if self.base != other.base:
            raise SeriesDomainError(f"base points differ: {self.base} != {other.base}")

    # ------------------------------------------------------------------
    # ring operations
    # ------------------------------------------------------------------

    def __add__(self, other):
        if isinstance(other, SCALAR_TYPES):
            other = in_mode(other, self.is_exact)
            return TaylorSeries(self.base, (self.coeffs[0] + other,) + self.coeffs[1:])
        if not isinstance(other, TaylorSeries):
            return NotImplemented
        self._check(other)
        m = min(self.order, other.order)
        return self._wrap(self.element + other.element, m)

    __radd__ = __add__

    def __neg__(self):
        return TaylorSeries(self.base, [-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, SCALAR_TYPES):
            other = in_mode(other, self.is_exact)
            return TaylorSeries(self.base, [c * other for c in self.coeffs])
        if not isinstance(other, TaylorSeries):
            return NotImplemented
        self._check(other)
        m = min(self.order, other.order)
        return self._wrap(rs_mul(self.element, other.element, self._gen(), m + 1), m)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, SCALAR_TYPES):
            other = in_mode(other, self.is_exact)
            return TaylorSeries(self.base, [c / other for c in self.coeffs])
        if not isinstance(other, TaylorSeries):
            return NotImplemented
        return self * other.reciprocal()

    def __rtruediv__(self, other):
        if isinstance(other, SCALAR_TYPES):
            return self.reciprocal() * other
        return NotImplemented

    def __pow__(self, n: int):
        if n == 0:
            return TaylorSeries.constant(self.base, 1, self.order)
        if n < 0 and is_zero(self.coeffs[0]):
            raise SeriesDomainError("negative power of a series with zero constant term")
        return self._wrap(rs_pow(self.element, int(n), self._gen(), self.order + 1), self.order)

    def reciprocal(self) -> "TaylorSeries":
        if is_zero(self.coeffs[0]):
            raise SeriesDomainError("reciprocal of a series with zero constant term")
        return self._wrap(rs_series_inversion(self.element, self._gen(), self.order + 1), self.order)

    def power(self, alpha, leading=None) -> "TaylorSeries":
        """
        Series of s^alpha, with s(base) != 0.

        The root is taken of s / s(base), whose constant term is one, and
        scaled by `leading`.

        Args:
            alpha: Rational exponent (int or a QQ element).
            leading: The value a_0^alpha to use; defaults to the principal
                power in floating mode. Exact non-integer powers need it.
        """
        a0 = self.coeffs[0]
        if is_zero(a0):
            raise SeriesDomainError("fractional power of a series vanishing at its base point")
        alpha = _exponent(alpha)
        if alpha.q == 1:
            return self ** int(alpha.p)
        if leading is None:
            if self.is_exact:
                raise ScalarModeError("exact fractional power needs an explicit leading coefficient")
            leading = cmath.exp(float(alpha) * cmath.log(a0))
        leading = in_mode(leading, self.is_exact)
        R, t, _ = series_ring(self.is_exact)
        unit = self.element * (R.domain.one / R.domain.convert(a0))
        unit[R.zero_monom] = R.domain.one
        root = rs_pow(unit, alpha, t, self.order + 1)
        return self._wrap(root, self.order) * leading

    # ------------------------------------------------------------------
    # calculus
    # ------------------------------------------------------------------

    def derivative(self) -> "TaylorSeries":
        if self.order < 1:
            raise SeriesDomainError("derivative of an order-0 series carries no information")
        return self._wrap(rs_diff(self.element, self._gen()), self.order - 1)

    def antiderivative(self, constant=0) -> "TaylorSeries":
        """ Termwise antiderivative with value `constant` at the base point. """
        integral = self._wrap(rs_integrate(self.element, self._gen()), self.order + 1)
        return integral + constant

    def evaluate(self, z) -> Scalar:
        z = coerce_scalar(z)
        base, coeffs = self.base, self.coeffs
        if self.is_exact and not is_exact(z):
            base, coeffs = to_complex(base), [to_complex(c) for c in coeffs]
        elif not self.is_exact and is_exact(z):
            z = to_complex(z)
        w = z - base
        acc = coeffs[-1]
        for c in reversed(coeffs[:-1]):
            acc = acc * w + c
        return acc

    __call__ = evaluate

    # ------------------------------------------------------------------
    # composition and reversion
    # ------------------------------------------------------------------

    def compose(self, inner: "TaylorSeries") -> "TaylorSeries":
        """
        Series of self(inner(x)) about inner's base point.

        inner's constant term must equal self's base point.
        """
        if self.is_exact != inner.is_exact:
            raise ScalarModeError("cannot compose exact and floating series")
        shift = inner.coeffs[0] - self.base
        if not is_zero(shift, 1e-12 * max(1.0, abs(to_complex(self.base)))):
            raise SeriesDomainError("inner series does not start at the outer base point")
        m = min(self.order, inner.order)
        t = self._gen()
        w = to_element((self._zero(),) + inner.coeffs[1:m + 1], self.is_exact)
        outer = rs_trunc(self.element, t, m + 1)
        return self._wrap(rs_subs(outer, {t: w}, t, m + 1), m, base=inner.base)

    def reversion(self) -> "TaylorSeries":
        """
        Inverse function.

        For s(z) = s_0 + s_1 (z - base) + ... with s_1 != 0 the result r satisfies
        s(r(w)) = w to truncation; r is expanded about w = s_0 and r(s_0) = base.
        """
        if self.order < 1 or is_zero(self.coeffs[1]):
            raise SeriesDomainError("reversion needs a nonzero linear coefficient")
        _, t, u = series_ring(self.is_exact)
        m = self.order
        shifted = to_element((self._zero(),) + self.coeffs[1:], self.is_exact)
        r = rs_series_reversion(shifted, t, m + 1, u)
        coeffs = from_element(r, m + 1, self.is_exact, gen=1)
        coeffs[0] = self.base
        return TaylorSeries(self.coeffs[0], coeffs)
