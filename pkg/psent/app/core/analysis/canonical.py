"""
Canonical form of the equation class.

Substituting y = f(z) y~ + g(z) and dz~/dz = f(z)^-2 into
y'' = sum_n a_n(z) y^n with

    f = (2(N+1) / ((N-1)^2 a_N))^{1/(N+3)},    g = -a_{N-1} / (N a_N)

gives y~'' = sum_n a~_n(z~) y~^n with a~_N = 2(N+1)/(N-1)^2 and a~_{N-1} = 0.
For N = 2 the y~ coefficient also picks up -f^3 f'' and g is shifted by
f''/(2 f a_2) to cancel it. Both top coefficients are computed and checked.
Because f carries a fractional power of a_N, the canonical coefficients are
Taylor series about the canonical base point z~ = 0.

Equations supplied already in canonical form take the identity path: the
record is exact and the canonical coefficients are exact re-expansions.

Example:
    .. code-block:: python

        from psent.app.core.analysis.canonical import canonicalize, pushforward_state
        from psent.app.core.analysis.equation import EquationSpec

        eq = EquationSpec.from_lists(2, [[0], [], [12]])
        canon, rec = canonicalize(eq, 0, 12)
        print(pushforward_state(rec, 0.1, 2.0, 1.0))
"""

import cmath
import math
from dataclasses import dataclass
from typing import List, Tuple, Union

from psent.app.core.algebra.poly import Poly, poly_eval
from psent.app.core.algebra.puiseux import PuiseuxSeries, lift_poly, lift_taylor
from psent.app.core.algebra.scalars import (
    ZERO, QQElement, Scalar, coerce_scalar, is_exact, is_zero, magnitude, principal_root, rational, to_complex)
from psent.app.core.algebra.taylor import TaylorSeries
from psent.app.core.analysis.equation import EquationSpec, canonical_constant, require_class_member
from psent.app.core.errors import NonCanonicalError, PreconditionError, SingularCoefficientError
from psent.app.core.logger import get_logger


logger = get_logger(__name__)

# relative tolerance on the transformed top coefficients in floating mode
CANONICAL_TOL = 1e-9

Coefficient = Union[Poly, TaylorSeries]


@dataclass(frozen=True)
class CanonicalEquation:
    """
    y'' = sum_{n=0}^{N-2} a_n y^n + 2(N+1)/(N-1)^2 y^N.

    Coefficients are either exact polynomials (equations given in canonical
    form) or Taylor series about `base` (after numeric canonicalization).

    Attributes:
        N (int): Degree in y.
        coeffs (tuple): a_0..a_{N-2}.
        base: Expansion point of series coefficients, None for polynomials.
    """

    N: int
    coeffs: Tuple[Coefficient, ...]
    base: Scalar = None

    def __post_init__(self):
        if len(self.coeffs) != self.N - 1:
            raise PreconditionError(f"canonical N = {self.N} needs {self.N - 1} coefficients")

    @classmethod
    def from_spec(cls, eq: EquationSpec) -> "CanonicalEquation":
        """ Exact polynomial canonical equation; raises NonCanonicalError otherwise. """
        require_class_member(eq)
        if not eq.is_canonical:
            raise NonCanonicalError("equation is not in canonical form (a_N = 2(N+1)/(N-1)^2, a_{N-1} = 0)")
        return cls(eq.N, tuple(eq.a[:eq.N - 1]))

    @property
    def is_polynomial(self) -> bool:
        return self.base is None

    @property
    def is_exact(self) -> bool:
        return all(c.is_exact or c.is_zero() for c in self.coeffs) if self.is_polynomial \
            else is_exact(self.base)

    @property
    def order(self):
        """ Truncation order of series coefficients, None for polynomials. """
        if self.is_polynomial:
            return None
        return min(c.order for c in self.coeffs)

    @property
    def leading_constant(self) -> QQElement:
        return canonical_constant(self.N)

    def zero(self) -> Coefficient:
        if self.is_polynomial:
            return Poly.zero()
        return TaylorSeries.constant(self.base, 0, self.order)

    def constant(self, c) -> Coefficient:
        if self.is_polynomial:
            return Poly.constant(c)
        return TaylorSeries.constant(self.base, c, self.order)

    def a(self, n: int) -> Coefficient:
        """ Coefficient of y^n for 0 <= n <= N, including the implicit ones. """
        if n == self.N:
            return self.constant(self.leading_constant)
        if n == self.N - 1:
            return self.zero()
        return self.coeffs[n]

    def scale(self) -> float:
        """ Magnitude of the largest stored coefficient, at least 1. """
        values = [magnitude(c) for p in self.coeffs for c in p.coeffs]
        return max([1.0] + values)

    def to_float(self) -> "CanonicalEquation":
        base = None if self.base is None else to_complex(self.base)
        return CanonicalEquation(self.N, tuple(c.to_float() for c in self.coeffs), base)

    def to_equation(self) -> EquationSpec:
        """ The polynomial canonical equation as an `EquationSpec`. """
        if not self.is_polynomial:
            raise PreconditionError("series coefficients have no global equation")
        return EquationSpec(self.N, tuple(self.a(n) for n in range(self.N + 1)))

    def lifted(self, z0, m: int, M: int) -> List[PuiseuxSeries]:
        """ a_0..a_{N-2} re-expanded in t = (z - z0)^{1/m} through index M. """
        if self.is_polynomial:
            z0 = coerce_scalar(z0)
            if not self.is_exact:
                z0 = to_complex(z0)
            return [lift_poly(p, z0, m, M) for p in self.coeffs]
        if z0 is not None and to_complex(z0) != to_complex(self.base):
            raise PreconditionError("series coefficients can only be lifted at their own base point")
        return [lift_taylor(c, m, M) for c in self.coeffs]

    def coefficient_values(self, z: complex) -> List[complex]:
        """ a_0(z)..a_N(z) in floating point. """
        values = [to_complex(poly_eval(c, z) if self.is_polynomial else c.evaluate(complex(z))) for c in self.coeffs]
        return values + [0j, to_complex(self.leading_constant)]

    def acceleration(self, z: complex, y: complex, yp: complex) -> complex:
        acc = 0j
        for c in reversed(self.coefficient_values(z)):
            acc = acc * y + c
        return acc


@dataclass(frozen=True)
class TransformRecord:
    """
    Change of variables y = f y~ + g, dz~/dz = f^-2 about z0.

    Attributes:
        z0: Base point in original coordinates.
        f, g (TaylorSeries): Series about z0.
        ztilde (TaylorSeries): z~(z) with z~(z0) = 0.
        ztilde_inverse (TaylorSeries): z(z~) about z~ = 0.
        identity (bool): True when the equation was already canonical.
    """

    z0: Scalar
    f: TaylorSeries
    g: TaylorSeries
    ztilde: TaylorSeries
    ztilde_inverse: TaylorSeries
    identity: bool = False

    @classmethod
    def identity_at(cls, z0, order: int) -> "TransformRecord":
        z0 = coerce_scalar(z0)
        origin = ZERO if is_exact(z0) else 0j
        return cls(
            z0=z0,
            f=TaylorSeries.constant(z0, 1, order),
            g=TaylorSeries.constant(z0, 0, order),
            ztilde=TaylorSeries(z0, [origin, 1], order),
            ztilde_inverse=TaylorSeries(origin, [z0, 1], order),
            identity=True,
        )

    def _jets(self, z: complex):
        f, g = self.f.to_float(), self.g.to_float()
        return f(z), f.derivative()(z), g(z), g.derivative()(z)

    def z_of(self, zt: complex, newton_steps: int = 4) -> complex:
        """ Inverse of z~(z), series reversion refined by Newton on z~. """
        zt = complex(zt)
        z = to_complex(self.ztilde_inverse.to_float()(zt))
        if self.identity:
            return z
        forward = self.ztilde.to_float()
        slope = forward.derivative()
        for _ in range(newton_steps):
            d = slope(z)
            if d == 0:
                break
            z -= (forward(z) - zt) / d
        return z


def is_canonical(eq: EquationSpec) -> bool:
    return require_class_member(eq).is_canonical


def leading_coefficients(eq: EquationSpec, z0) -> List[complex]:
    """
    The N-1 admissible leading coefficients c0 at z0 in original variables.

    They solve c0^{N-1} = 2(N+1) / ((N-1)^2 a_N(z0)).

    Raises:
        SingularCoefficientError: If a_N(z0) = 0.
    """
    require_class_member(eq)
    aN = to_complex(poly_eval(eq.a[eq.N], z0))
    if aN == 0:
        raise SingularCoefficientError(f"a_N vanishes at {z0}")
    target = to_complex(canonical_constant(eq.N)) / aN
    root = principal_root(target, eq.N - 1)
    return [root * cmath.exp(2j * math.pi * k / (eq.N - 1)) for k in range(eq.N - 1)]


def check_top_coefficients(sub: TaylorSeries, top: TaylorSeries, N: int, scale: float = 1.0):
    """
    Verify a~_{N-1} = 0 and a~_N = 2(N+1)/(N-1)^2 to truncation.

    Exact series must match exactly; floating ones within CANONICAL_TOL * scale.

    Raises:
        NonCanonicalError: If either coefficient is off.
    """
    tol = 0.0 if sub.is_exact else CANONICAL_TOL * scale
    if not sub.is_zero(tol):
        raise NonCanonicalError(f"transformed a_{N - 1} does not vanish: max |coefficient| {sub.max_abs():.3e}")
    off = top - canonical_constant(N)
    if not off.is_zero(tol):
        raise NonCanonicalError(f"transformed a_{N} is not {canonical_constant(N)}: off by {off.max_abs():.3e}")


def transformed_coefficients(eq: EquationSpec, z0, M: int) -> Tuple[List[TaylorSeries], TaylorSeries, TaylorSeries]:
    """
    a~_0..a~_N as Taylor series in the original variable about z0, with f and g.

    For N = 2 the y~ coefficient also collects -f^3 f'', so g absorbs f''/f
    there: g = (f''/f - a_1) / (2 a_2).
    """
    N = eq.N
    z0 = to_complex(z0)
    L = M + 4
    A = [TaylorSeries.from_poly(p.to_float(), z0, L) for p in eq.a]
    c = canonical_constant(N)
    f0 = principal_root(to_complex(c) / A[N].coeffs[0], N + 3)
    f = (A[N].reciprocal() * c).power(rational(1, N + 3), leading=f0)
    f3 = f ** 3
    fpp = f.derivative().derivative()
    if N == 2:
        g = (fpp / f - A[1]) / (A[2] * 2)
    else:
        g = -A[N - 1] / (A[N] * N)
    gpp = g.derivative().derivative()

    out = []
    for j in range(N + 1):
        acc = A[j] * 0
        for n in range(j, N + 1):
            acc = acc + A[n] * (math.comb(n, j) * g ** (n - j))
        term = f3 * f ** j * acc
        if j == 0:
            term = term - f3 * gpp
        elif j == 1:
            term = term - f3 * fpp
        out.append(term.truncate(M))
    return out, f.truncate(M), g.truncate(M)


def canonicalize(eq: EquationSpec, z0, M: int) -> Tuple[CanonicalEquation, TransformRecord]:
    """
    Canonical form of `eq` near z0, to Taylor order M.

    Args:
        eq (EquationSpec): Equation of the class.
        z0: Base point with a_N(z0) != 0.
        M (int): Truncation order of the canonical coefficients.

    Returns:
        Tuple[CanonicalEquation, TransformRecord]: Series coefficients about z~ = 0 and the record.

    Raises:
        SingularCoefficientError: If a_N(z0) = 0 (a fixed singularity).
        NonCanonicalError: If the transformed a~_{N-1} or a~_N come out wrong.
    """
    require_class_member(eq)
    N = eq.N
    if is_zero(poly_eval(eq.a[N], z0), 0.0):
        raise SingularCoefficientError(f"a_N vanishes at {z0}: fixed singularity of the equation")

    if eq.is_canonical:
        z0 = coerce_scalar(z0)
        record = TransformRecord.identity_at(z0, M + 1)
        origin = record.ztilde_inverse.base
        series = [TaylorSeries(origin, TaylorSeries.from_poly(p, z0, M).coeffs, M) for p in eq.a]
        check_top_coefficients(series[N - 1], series[N], N)
        logger.debug(f"identity canonical form at z0 = {z0}")
        return CanonicalEquation(N, tuple(series[:N - 1]), origin), record

    z0 = to_complex(z0)
    transformed, f, g = transformed_coefficients(eq, z0, M)
    scale = max([1.0] + [t.max_abs() for t in transformed])
    check_top_coefficients(transformed[N - 1], transformed[N], N, scale)

    ztilde = (f * f).reciprocal().antiderivative(0j).truncate(M)
    inverse = ztilde.reversion()
    coeffs = tuple(b.compose(inverse) for b in transformed[:N - 1])
    record = TransformRecord(z0=z0, f=f, g=g, ztilde=ztilde, ztilde_inverse=inverse)
    logger.debug(f"numeric canonical form at z0 = {z0}, order {M}")
    return CanonicalEquation(N, coeffs, 0j), record


def pushforward_state(rec: TransformRecord, z, y, yp) -> Tuple[complex, complex, complex]:
    """ (z, y, y') -> (z~, y~, y~') with y~ = (y - g)/f and y~' = f (y' - g') - f' (y - g). """
    z = to_complex(z)
    f, fp, g, gp = rec._jets(z)
    if f == 0:
        raise SingularCoefficientError(f"f vanishes at {z}")
    zt = to_complex(rec.ztilde.to_float()(z))
    return zt, (y - g) / f, f * (yp - gp) - fp * (y - g)


def pullback_state(rec: TransformRecord, zt, yt, ytp) -> Tuple[complex, complex, complex]:
    """ Inverse of `pushforward_state`: y = f y~ + g, y' = y~'/f + f' y~ + g'. """
    z = rec.z_of(zt)
    f, fp, g, gp = rec._jets(z)
    if f == 0:
        raise SingularCoefficientError(f"f vanishes at {z}")
    return z, f * yt + g, ytp / f + fp * yt + gp
