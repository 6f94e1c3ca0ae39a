"""
Univariate polynomials over exact or floating scalars.

A `Poly` wraps a sympy `Poly` in z over `QQ_I` (exact) or `CC` (floating)
and exposes its coefficients by increasing power of z with the trailing
coefficient nonzero; the zero polynomial has no coefficients and counts as
exact. Coefficient functions a_n(z) of the equation class are `Poly`
instances.
"""

from dataclasses import dataclass, field
from typing import Iterable, List, Tuple

from sympy import Poly as SymPoly, Symbol
from sympy.polys.domains import CC, QQ_I
from sympy.polys.polyclasses import DMP

from psent.app.core.algebra.scalars import (
    SCALAR_TYPES, Scalar, ZERO, coerce_scalar, in_mode, is_exact, is_zero, normalize_scalars, to_complex)
from psent.app.core.errors import ScalarModeError


_Z = Symbol("z")


def _domain(exact: bool):
    return QQ_I if exact else CC


def _sym_poly(coeffs: Tuple[Scalar, ...], exact: bool) -> SymPoly:
    K = _domain(exact)
    rep = DMP.from_list([K.convert(c) for c in reversed(coeffs)], 0, K)
    return SymPoly.new(rep, _Z)


def _coeffs_of(rep: SymPoly) -> Tuple[Scalar, ...]:
    values = list(reversed(rep.rep.to_list()))
    if rep.get_domain() != QQ_I:
        values = [complex(c) for c in values]
    end = len(values)
    while end and is_zero(values[end - 1]):
        end -= 1
    return tuple(values[:end])


@dataclass(frozen=True, init=False)
class Poly:
    """
    Polynomial sum_k coeffs[k] z^k.

    Attributes:
        coeffs (tuple): Coefficients, all exact or all complex.
    """

    coeffs: Tuple[Scalar, ...]
    rep: SymPoly = field(repr=False, compare=False)

    def __init__(self, coeffs: Iterable = ()):
        values = normalize_scalars(coeffs)
        exact = all(is_exact(c) for c in values)
        self._set(_sym_poly(values, exact))

    def _set(self, rep: SymPoly):
        object.__setattr__(self, "rep", rep)
        object.__setattr__(self, "coeffs", _coeffs_of(rep))

    @classmethod
    def _from_rep(cls, rep: SymPoly) -> "Poly":
        out = cls.__new__(cls)
        out._set(rep)
        return out

    # ------------------------------------------------------------------
    # constructors
    # ------------------------------------------------------------------

    @classmethod
    def zero(cls) -> "Poly":
        return cls(())

    @classmethod
    def constant(cls, c) -> "Poly":
        return cls((c,))

    @classmethod
    def identity(cls) -> "Poly":
        """ The polynomial z. """
        return cls((0, 1))

    @classmethod
    def monomial(cls, k: int, c=1) -> "Poly":
        c = coerce_scalar(c)
        zero = ZERO if is_exact(c) else 0j
        return cls((zero,) * k + (c,))

    # ------------------------------------------------------------------
    # properties
    # ------------------------------------------------------------------

    @property
    def degree(self) -> int:
        """ Highest populated power; -1 for the zero polynomial. """
        return len(self.coeffs) - 1

    @property
    def is_exact(self) -> bool:
        return self.rep.get_domain() == QQ_I

    def is_zero(self, tol: float = 0.0) -> bool:
        return all(is_zero(c, tol) for c in self.coeffs)

    def is_constant(self) -> bool:
        return self.degree <= 0

    def coefficient(self, k: int) -> Scalar:
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return ZERO if self.is_exact else 0j

    def to_float(self) -> "Poly":
        return Poly._from_rep(_sym_poly(tuple(to_complex(c) for c in self.coeffs), False))

    # ------------------------------------------------------------------
    # evaluation and calculus
    # ------------------------------------------------------------------

    def __call__(self, z):
        return poly_eval(self, z)

    def derivative(self) -> "Poly":
        return Poly._from_rep(self.rep.diff())

    def taylor_coefficients(self, z0, count: int = None) -> List[Scalar]:
        """
        Coefficients of p(z0 + w) in powers of w.

        Args:
            z0: Expansion point (exact with exact coefficients, complex otherwise).
            count (int): Number of coefficients wanted; missing ones are zero.
        """
        p, z0 = _match_mode(self, z0)
        c = list(p.shift(z0).coeffs)
        zero = ZERO if is_exact(z0) else 0j
        if count is not None:
            c = (c + [zero] * count)[:count]
        return c

    def shift(self, z0) -> "Poly":
        """ The polynomial w -> p(z0 + w). """
        p, z0 = _match_mode(self, z0)
        return Poly._from_rep(p.rep.shift(z0))

    # ------------------------------------------------------------------
    # ring operations
    # ------------------------------------------------------------------

    def _pair(self, other: "Poly") -> Tuple[SymPoly, SymPoly]:
        """ Both operands over one domain; the zero polynomial adapts to the other side. """
        if not self.coeffs:
            return _sym_poly((), other.rep.get_domain() == QQ_I), other.rep
        if not other.coeffs:
            return self.rep, _sym_poly((), self.rep.get_domain() == QQ_I)
        if self.is_exact != other.is_exact:
            raise ScalarModeError("cannot combine exact and floating polynomials")
        return self.rep, other.rep

    def __add__(self, other):
        if isinstance(other, SCALAR_TYPES):
            other = Poly.constant(other)
        elif not isinstance(other, Poly):
            return NotImplemented
        a, b = self._pair(other)
        return Poly._from_rep(a + b)

    __radd__ = __add__

    def __neg__(self):
        return Poly._from_rep(-self.rep)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Poly):
            a, b = self._pair(other)
            return Poly._from_rep(a * b)
        if isinstance(other, SCALAR_TYPES):
            if not self.coeffs:
                return self
            return Poly._from_rep(self.rep.mul_ground(in_mode(other, self.is_exact)))
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, SCALAR_TYPES):
            if is_zero(other):
                raise ZeroDivisionError("polynomial division by zero")
            return Poly._from_rep(self.rep.quo_ground(in_mode(other, self.is_exact)))
        return NotImplemented

    def __pow__(self, n: int):
        return Poly._from_rep(self.rep.pow(int(n)))

    def __repr__(self):
        if not self.coeffs:
            return "Poly(0)"
        terms = [f"({c})z^{k}" for k, c in enumerate(self.coeffs) if not is_zero(c)]
        return "Poly(" + " + ".join(terms) + ")"


def _match_mode(p: Poly, z):
    """ Pair a polynomial with an evaluation point of the same mode. """
    z = coerce_scalar(z)
    if p.is_exact and not is_exact(z):
        return p.to_float(), z
    if not p.is_exact and is_exact(z):
        return p, to_complex(z)
    return p, z


def poly_eval(p: Poly, z):
    """
    Value of p at z.

    Exact when both the polynomial and the point are exact. An exact polynomial
    evaluated at a complex point is converted to floating coefficients first.
    """
    p, z = _match_mode(p, z)
    if not p.coeffs:
        return ZERO if is_exact(z) else 0j
    value = p.rep.rep.eval(p.rep.get_domain().convert(z))
    return value if p.is_exact else complex(value)
