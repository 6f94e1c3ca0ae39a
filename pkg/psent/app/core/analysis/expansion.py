"""
Formal Puiseux solutions about a movable singularity.

In t = (z - z0)^{1/(N-1)} the canonical equation admits

    y = sum_{j>=0} c_j t^{j-2},        c_0^{N-1} = 1,

with the coefficients fixed one by one by

    (r+N-1)(r-2N-2) c_r = (N-1)^2 P_r(c_0..c_{r-1}).

At r = 2(N+1) the prefactor vanishes: P_r must vanish (the resonance
obstruction) and c_r = beta is free. Series are stored by t-power, so the
coefficient index j lives at t-index j - 2; `ExpansionResult.coefficient`
and `table` expose the j view.

P_r is obtained by substitution: with c_r provisionally zero the residual
of the truncated series has its first unknown coefficient at t-index r - 2N,
and that coefficient equals -P_r.
"""

import cmath
import math
from dataclasses import dataclass
from typing import List, Optional, Tuple

from psent.app.config import settings
from psent.app.core.algebra.puiseux import PuiseuxSeries
from psent.app.core.algebra.scalars import (
    I_UNIT, ONE, QQElement, Scalar, coerce_scalar, in_mode, is_exact, is_zero, magnitude, rational, to_complex)
from psent.app.core.analysis.canonical import CanonicalEquation
from psent.app.core.analysis.equation import canonical_constant
from psent.app.core.analysis.resonance import _as_canonical
from psent.app.core.errors import ObstructionNonzero, PreconditionError
from psent.app.core.logger import get_logger


logger = get_logger(__name__)


@dataclass(frozen=True)
class BranchClass:
    """
    Leading-coefficient class of a singularity.

    Even N has a single class (c0 = 1). Odd N = 2K+1 has two, labelled by
    epsilon = c0^K; `c0` is the representative used by expansions.

    Attributes:
        N (int): Degree.
        epsilon (int): +1 or -1 for odd N, None for even N.
    """

    N: int
    epsilon: Optional[int] = None

    def __post_init__(self):
        if self.N % 2 == 0:
            if self.epsilon not in (None, 1):
                raise PreconditionError("even N has the single branch class c0 = 1")
            object.__setattr__(self, "epsilon", None)
        elif self.epsilon not in (1, -1):
            raise PreconditionError("odd N needs epsilon = +1 or -1")

    @classmethod
    def from_label(cls, N: int, label: Optional[str]) -> "BranchClass":
        """ Parse a CLI branch label: "1", "+1", "-1" or a sheet index "k" (even N). """
        if N % 2 == 0:
            return cls(N)
        text = (label or "+1").strip()
        if text not in ("1", "+1", "-1"):
            raise PreconditionError(f"odd N branch label must be +1 or -1, got {label!r}")
        return cls(N, -1 if text == "-1" else 1)

    @property
    def K(self) -> int:
        return (self.N - 1) // 2

    @property
    def ramification(self) -> int:
        """ Number of loops after which the solution returns: N-1 (even) or K (odd). """
        return self.N - 1 if self.N % 2 == 0 else self.K

    @property
    def label(self) -> str:
        if self.epsilon is None:
            return "even"
        return "+1" if self.epsilon == 1 else "-1"

    def __str__(self) -> str:
        return self.label

    @property
    def c0(self) -> Scalar:
        """ Representative leading coefficient: exact where a Gaussian-rational one exists. """
        if self.epsilon in (None, 1):
            return ONE
        K = self.K
        if K % 2 == 1:
            return -ONE
        if K % 4 == 2:
            return I_UNIT
        return cmath.exp(1j * math.pi / K)


@dataclass(frozen=True)
class ExpansionResult:
    """
    Attributes:
        N (int): Degree.
        branch (BranchClass): Class of the leading coefficient.
        beta: The free coefficient c_{2(N+1)}.
        series (PuiseuxSeries): Sum of c_j t^{j-2}, ramification N-1.
        obstruction: Value of P_{2(N+1)}.
        obstruction_scale (float): Size of the terms that produced it.
    """

    N: int
    branch: BranchClass
    beta: Scalar
    series: PuiseuxSeries
    obstruction: Scalar
    obstruction_scale: float

    @property
    def base(self):
        return self.series.base

    @property
    def order(self) -> int:
        """ Highest coefficient index j computed. """
        return self.series.order + 2

    @property
    def resonance_index(self) -> int:
        return 2 * (self.N + 1)

    def coefficient(self, j: int) -> Scalar:
        return self.series.coefficient(j - 2)

    def exponent(self, j: int) -> QQElement:
        """ Exponent of zeta carried by c_j, as a QQ element. """
        return rational(j - 2, self.N - 1)

    def table(self) -> List[Tuple[int, QQElement, Scalar]]:
        """ (j, exponent of zeta, c_j) for j = 0..order. """
        return [(j, self.exponent(j), self.coefficient(j)) for j in range(self.order + 1)]

    def evaluate(self, z, k: int = 0) -> complex:
        return self.series.evaluate(z, k)


def recurrence_prefactor(N: int, r: int) -> int:
    return (r + N - 1) * (r - 2 * N - 2)


def resonance_index(N: int) -> int:
    """ The unique positive r where the recurrence prefactor vanishes. """
    roots = [r for r in (1 - N, 2 * N + 2) if r > 0 and recurrence_prefactor(N, r) == 0]
    assert roots == [2 * (N + 1)], f"unexpected resonance set {roots} for N = {N}"
    return roots[0]


def _resolve_mode(canon: CanonicalEquation, base, beta, c0):
    """ Exact when every ingredient is exact; otherwise everything is floating. """
    if base is None:
        if canon.is_polynomial:
            raise PreconditionError("a base point is required for polynomial coefficients")
        base = canon.base
    exact = canon.is_exact and all(is_exact(v) for v in (base, beta, c0))
    if exact:
        return canon, coerce_scalar(base), coerce_scalar(beta), coerce_scalar(c0)
    return canon.to_float(), to_complex(base), to_complex(beta), to_complex(c0)


class _Substitution:
    """ Residual pieces y'', a_n y^n and c y^N of a candidate series at one index. """

    def __init__(self, canon: CanonicalEquation, base, order: int):
        self.N = canon.N
        self.m = canon.N - 1
        self.constant = canon.leading_constant
        self.lifted = canon.lifted(base, self.m, order + 2)

    def pieces(self, y: PuiseuxSeries, q: int) -> List[Scalar]:
        out = [y.differentiate().differentiate().coefficient(q)]
        power = y.int_pow(0)
        for n in range(self.N + 1):
            if n > 0:
                power = power * y
            if n < self.N - 1:
                out.append(-(self.lifted[n] * power).coefficient(q))
            elif n == self.N:
                out.append(-(power * self.constant).coefficient(q))
        return out


def _run(canon, branch: BranchClass, beta, order: int, base, stop_at_resonance: bool, tol: Optional[float]):
    canon = _as_canonical(canon)
    N = canon.N
    if branch.N != N:
        raise PreconditionError(f"branch class for N = {branch.N} used with N = {N}")
    R = resonance_index(N)
    canon, base, beta, c0 = _resolve_mode(canon, base, beta, branch.c0)
    exact = canon.is_exact and is_exact(base)
    tol = settings.obstruction_tol if tol is None else tol
    m = N - 1
    sub = _Substitution(canon, base, order)
    zero = c0 * 0
    coeffs = [c0]
    obstruction, scale = zero, 0.0
    for r in range(1, order + 1):
        y = PuiseuxSeries(base, m, -2, coeffs + [zero], r - 2)
        pieces = sub.pieces(y, r - 2 * N)
        residual = sum(pieces[1:], pieces[0])
        if r == R:
            obstruction = -residual
            scale = max(magnitude(p) for p in pieces)
            vanishes = is_zero(obstruction, 0.0 if exact else tol * max(scale, 1e-300))
            if stop_at_resonance:
                return obstruction, scale, None
            if not vanishes:
                logger.info(f"💥 obstruction {obstruction} at branch {branch}")
                raise ObstructionNonzero(obstruction, scale, branch)
            coeffs.append(beta)
            continue
        coeffs.append(-residual * in_mode(rational((N - 1) ** 2, recurrence_prefactor(N, r)), exact))
    series = PuiseuxSeries(base, m, -2, coeffs, order - 2)
    return obstruction, scale, series


def expand(canon, branch: BranchClass, beta, order: int, base=None, tol: Optional[float] = None) -> ExpansionResult:
    """
    Formal series solution about `base` through coefficient index `order`.

    Args:
        canon: Canonical equation (or canonical `EquationSpec`).
        branch (BranchClass): Leading-coefficient class.
        beta: Free coefficient at index 2(N+1).
        order (int): Last index j computed, at least 2(N+1).
        base: Singularity location; defaults to the series base of `canon`.
        tol (float): Relative gauge of the floating obstruction test.

    Raises:
        ObstructionNonzero: If P_{2(N+1)} does not vanish.
    """
    canon = _as_canonical(canon)
    if order < 2 * (canon.N + 1):
        raise PreconditionError(f"order must reach the resonance index {2 * (canon.N + 1)}")
    obstruction, scale, series = _run(canon, branch, beta, order, base, False, tol)
    return ExpansionResult(canon.N, branch, series.coefficient(2 * canon.N), series, obstruction, scale)


def obstruction(canon, branch: BranchClass, base=None) -> Scalar:
    """ P_{2(N+1)} for this branch class; zero iff `expand` succeeds. """
    canon = _as_canonical(canon)
    value, _, _ = _run(canon, branch, 0, 2 * (canon.N + 1), base, True, None)
    return value


def residual(canon, series: PuiseuxSeries) -> PuiseuxSeries:
    """ y'' - sum a_n y^n - 2(N+1)/(N-1)^2 y^N for a candidate series. """
    canon = _as_canonical(canon)
    if series.m != canon.N - 1:
        raise PreconditionError(f"series ramification must be N-1 = {canon.N - 1}")
    if canon.is_exact != series.is_exact:
        canon = canon.to_float()
        series = series.to_float()
    lifted = canon.lifted(series.base, series.m, series.order + 2 * canon.N)
    out = series.differentiate().differentiate()
    power = series.int_pow(0)
    for n in range(canon.N + 1):
        if n > 0:
            power = power * series
        if n < canon.N - 1:
            out = out - lifted[n] * power
    return out - power * canonical_constant(canon.N)


def residual_valuation(canon, result: ExpansionResult, M: int) -> QQElement:
    """
    Valuation, as an exponent of zeta, of the residual of the truncation c_0..c_M.

    The truncation is padded with zeros so the residual is resolved well past
    its first nonzero coefficient; the result is at least (M+1-2N)/(N-1).
    """
    canon = _as_canonical(canon)
    N = canon.N
    if M > result.order:
        raise PreconditionError(f"expansion only reaches index {result.order}")
    coeffs = [result.coefficient(j) for j in range(M + 1)]
    truncated = PuiseuxSeries(result.base, N - 1, -2, coeffs, M - 2).with_order(M + 2 * N + 2)
    res = residual(canon, truncated)
    tol = 0.0 if res.is_exact else 1e-12 * max([1.0] + [magnitude(c) for c in coeffs])
    first = res.first_nonzero(tol)
    index = res.order + 1 if first is None else first
    return rational(index, N - 1)
