"""
Truncated Puiseux series in t = (z - z0)^{1/m}.

A `PuiseuxSeries` holds the coefficients c_s..c_M of sum_j c_j t^j, where s is
the start index (possibly negative) and M the truncation order: every index
up to M is known, nothing beyond it is. A nonzero series has c_s != 0; the
zero series stores no coefficients and has s = M + 1.

Truncation bookkeeping follows the valuations of the operands:
    - a + b is known through min(M_a, M_b)
    - a * b is known through min(M_a + s_b, M_b + s_a)
    - d/dz shifts indices and order by -m

Products shift both operands to start at t^0 and multiply them with sympy
`rs_mul`; only the index bookkeeping is kept here.

Branch convention: t = |z - z0|^{1/m} exp(i (Arg(z - z0) + 2 pi k) / m) with
Arg in (-pi, pi]; the branch index k advances counterclockwise.

Example:
    .. code-block:: python

        from psent.app.core.algebra.poly import Poly
        from psent.app.core.algebra.puiseux import lift_poly

        s = lift_poly(Poly([0, 0, 1]), 1, 3, 6)    # 1 + 2t^3 + t^6
        print(s.evaluate(9, 0))
"""

import cmath
import math
from dataclasses import dataclass
from typing import Iterable, List, Optional, Tuple

from sympy.polys.domains.gaussiandomains import GaussianRational
from sympy.polys.ring_series import rs_mul

from psent.app.core.algebra.poly import Poly
from psent.app.core.algebra.rings import from_element, series_ring, to_element
from psent.app.core.algebra.scalars import (
    SCALAR_TYPES, QQElement, Scalar, ZERO, coerce_scalar, in_mode, is_exact, is_zero, normalize_scalars, rational, to_complex)
from psent.app.core.algebra.taylor import TaylorSeries
from psent.app.core.errors import RamificationMismatchError, ScalarModeError, SeriesDomainError


@dataclass(frozen=True, init=False)
class PuiseuxSeries:
    """
    Attributes:
        base: Base point z0.
        m (int): Ramification.
        start (int): Index of the first stored coefficient.
        coeffs (tuple): c_start..c_order.
        order (int): Truncation index M.
    """

    base: Scalar
    m: int
    start: int
    coeffs: Tuple[Scalar, ...]
    order: int

    def __init__(self, base, m: int, start: int, coeffs: Iterable, order: Optional[int] = None):
        if m < 1:
            raise SeriesDomainError("ramification must be a positive integer")
        values = normalize_scalars(list(coeffs) + [base])
        base, coeffs = values[-1], list(values[:-1])
        if order is None:
            order = start + len(coeffs) - 1
        coeffs = coeffs[:max(0, order - start + 1)]
        zero = ZERO if is_exact(base) else 0j
        coeffs += [zero] * (order - start + 1 - len(coeffs))
        lead = 0
        while lead < len(coeffs) and is_zero(coeffs[lead]):
            lead += 1
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "m", m)
        start = start + lead if lead < len(coeffs) else order + 1
        object.__setattr__(self, "start", start)
        object.__setattr__(self, "coeffs", tuple(coeffs[lead:]))
        object.__setattr__(self, "order", order)

    # ------------------------------------------------------------------
    # constructors
    # ------------------------------------------------------------------

    @classmethod
    def monomial(cls, base, m: int, j: int, c, order: int) -> "PuiseuxSeries":
        return cls(base, m, j, [c], order)

    @classmethod
    def zero(cls, base, m: int, order: int) -> "PuiseuxSeries":
        return cls(base, m, order + 1, [], order)

    # ------------------------------------------------------------------
    # properties
    # ------------------------------------------------------------------

    @property
    def is_exact(self) -> bool:
        return isinstance(self.base, GaussianRational)

    def _zero(self):
        return ZERO if self.is_exact else 0j

    def _ratio(self, p: int, q: int) -> Scalar:
        return in_mode(rational(p, q), self.is_exact)

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def valuation(self) -> QQElement:
        """ Exponent of the leading term, start / m, as a QQ element. """
        return rational(self.start, self.m)

    def exponent(self, j: int) -> QQElement:
        return rational(j, self.m)

    def coefficient(self, j: int) -> Scalar:
        if j > self.order:
            raise SeriesDomainError(f"index {j} beyond truncation order {self.order}")
        if j < self.start:
            return self._zero()
        return self.coeffs[j - self.start]

    def terms(self) -> List[Tuple[int, Scalar]]:
        """ (index, coefficient) pairs of the stored coefficients. """
        return [(self.start + i, c) for i, c in enumerate(self.coeffs)]

    def first_nonzero(self, tol: float = 0.0) -> Optional[int]:
        """ Smallest index whose coefficient exceeds tol in modulus (exactly nonzero in exact mode). """
        for j, c in self.terms():
            if not is_zero(c, tol):
                return j
        return None

    def to_float(self) -> "PuiseuxSeries":
        return PuiseuxSeries(to_complex(self.base), self.m, self.start,
                             [to_complex(c) for c in self.coeffs], self.order)

    def with_order(self, order: int) -> "PuiseuxSeries":
        """
        Same coefficients, truncation index moved to `order`.

        Raising the order declares the missing coefficients zero; callers use it
        for finite sums that are exact as written.
        """
        return PuiseuxSeries(self.base, self.m, self.start, self.coeffs, order)

    def with_ramification(self, m: int) -> "PuiseuxSeries":
        """ Re-express in t' = (z - z0)^{1/m} with m a multiple of self.m. """
        if m % self.m:
            raise RamificationMismatchError(f"{m} is not a multiple of {self.m}")
        k = m // self.m
        if k == 1:
            return self
        coeffs = [self._zero()] * ((len(self.coeffs) - 1) * k + 1 if self.coeffs else 0)
        for i, c in enumerate(self.coeffs):
            coeffs[i * k] = c
        return PuiseuxSeries(self.base, m, self.start * k, coeffs, (self.order + 1) * k - 1)

    # ------------------------------------------------------------------
    # arithmetic
    # ------------------------------------------------------------------

    def _check(self, other: "PuiseuxSeries"):
        if self.is_exact != other.is_exact:
            raise ScalarModeError("cannot combine exact and floating Puiseux series")
        if self.base != other.base:
            raise RamificationMismatchError(f"base points differ: {self.base} != {other.base}")
        if self.m != other.m:
            raise RamificationMismatchError(f"ramifications differ: {self.m} != {other.m}")

    def __add__(self, other):
        if isinstance(other, SCALAR_TYPES):
            other = PuiseuxSeries(self.base, self.m, 0, [in_mode(other, self.is_exact)], max(self.order, 0))
        if not isinstance(other, PuiseuxSeries):
            return NotImplemented
        self._check(other)
        order = min(self.order, other.order)
        lo = min(self.start, other.start)
        if lo > order:
            return PuiseuxSeries.zero(self.base, self.m, order)
        coeffs = [self.coefficient(j) + other.coefficient(j) for j in range(lo, order + 1)]
        return PuiseuxSeries(self.base, self.m, lo, coeffs, order)

    __radd__ = __add__

    def __neg__(self):
        return PuiseuxSeries(self.base, self.m, self.start, [-c for c in self.coeffs], self.order)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, SCALAR_TYPES):
            other = in_mode(other, self.is_exact)
            return PuiseuxSeries(self.base, self.m, self.start, [c * other for c in self.coeffs], self.order)
        if not isinstance(other, PuiseuxSeries):
            return NotImplemented
        self._check(other)
        order = min(self.order + other.start, other.order + self.start)
        lo = self.start + other.start
        if lo > order or self.is_zero() or other.is_zero():
            return PuiseuxSeries.zero(self.base, self.m, order)
        count = order - lo + 1
        t = series_ring(self.is_exact)[1]
        product = rs_mul(to_element(self.coeffs[:count], self.is_exact),
                         to_element(other.coeffs[:count], self.is_exact), t, count)
        out = from_element(product, count, self.is_exact)
        return PuiseuxSeries(self.base, self.m, lo, out, order)

    __rmul__ = __mul__

    def int_pow(self, n: int) -> "PuiseuxSeries":
        """ Non-negative integer power by repeated squaring over mul. """
        if n < 0:
            raise SeriesDomainError("negative powers are not supported")
        result = PuiseuxSeries(self.base, self.m, 0, [1], self.order - self.start)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    __pow__ = int_pow

    # ------------------------------------------------------------------
    # calculus
    # ------------------------------------------------------------------

    def differentiate(self) -> "PuiseuxSeries":
        """ d/dz termwise: t^j -> (j/m) t^{j-m}. """
        coeffs = [c * self._ratio(j, self.m) for j, c in self.terms()]
        return PuiseuxSeries(self.base, self.m, self.start - self.m, coeffs, self.order - self.m)

    def antiderivative(self) -> "PuiseuxSeries":
        """
        Termwise antiderivative t^j -> m/(j+m) t^{j+m}, zero at the base point.

        Raises:
            SeriesDomainError: If the t^{-m} coefficient is nonzero (a logarithm).
        """
        out = []
        for j, c in self.terms():
            if j == -self.m:
                if not is_zero(c):
                    raise SeriesDomainError("antiderivative of a t^{-m} term is logarithmic")
                out.append(c)
                continue
            out.append(c * self._ratio(self.m, j + self.m))
        return PuiseuxSeries(self.base, self.m, self.start + self.m, out, self.order + self.m)

    def evaluate(self, z, k: int = 0) -> complex:
        """ Value of the truncated sum on branch k. """
        zeta = to_complex(z) - to_complex(self.base)
        if zeta == 0:
            if self.start < 0 and not self.is_zero():
                raise SeriesDomainError("evaluation at the base point of a series with negative start index")
            return to_complex(self.coefficient(0)) if self.order >= 0 else 0j
        t = math.pow(abs(zeta), 1.0 / self.m) * cmath.exp(1j * (cmath.phase(zeta) + 2 * math.pi * k) / self.m)
        return _horner_laurent([to_complex(c) for c in self.coeffs], self.start, t)

    def evaluate_derivative(self, z, k: int = 0) -> complex:
        return self.differentiate().evaluate(z, k)


def _horner_laurent(coeffs: List[complex], start: int, t: complex) -> complex:
    acc = 0j
    for c in reversed(coeffs):
        acc = acc * t + c
    return acc * t ** start


def puiseux_eval(a: PuiseuxSeries, z, k: int = 0) -> complex:
    return a.evaluate(z, k)


def puiseux_differentiate(a: PuiseuxSeries) -> PuiseuxSeries:
    return a.differentiate()


def lift_poly(p: Poly, z0, m: int, M: int) -> PuiseuxSeries:
    """
    Re-expand a polynomial about z0 in t = (z - z0)^{1/m}.

    Only indices divisible by m are populated: c_{km} is the k-th Taylor
    coefficient of p at z0.
    """
    if m < 1 or M < 0:
        raise SeriesDomainError("lift_poly needs m >= 1 and M >= 0")
    z0 = coerce_scalar(z0)
    if not (p.is_exact and is_exact(z0)):
        z0, p = to_complex(z0), p.to_float()
    taylor = p.taylor_coefficients(z0, M // m + 1)
    zero = ZERO if is_exact(z0) else 0j
    coeffs = [zero] * (M + 1)
    for k, c in enumerate(taylor):
        if k * m <= M:
            coeffs[k * m] = c
    return PuiseuxSeries(z0, m, 0, coeffs, M)


def lift_taylor(series: TaylorSeries, m: int, M: int) -> PuiseuxSeries:
    """ Lift a Taylor series into t = (z - base)^{1/m}; the order is capped by the series' own order. """
    order = min(M, (series.order + 1) * m - 1)
    coeffs = [series._zero()] * (order + 1)
    for k, c in enumerate(series.coeffs):
        if k * m <= order:
            coeffs[k * m] = c
    return PuiseuxSeries(series.base, m, 0, coeffs, order)
