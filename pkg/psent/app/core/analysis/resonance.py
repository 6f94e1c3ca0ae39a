"""
Resonance conditions of the canonical equation.

The b_k sequence solves, for n = 1..N-1,

    ((N+1-2n)/(N-1)^2) b_n = a'_{N-n-1}/(N-n)
                             - 1/2 sum_{m<n} ((N-n-m+1)/(N-n+m+1)) b_m a_{N+m-n}

which makes the polynomial part S of W' + P W = Q y' + R + S vanish. For odd
N = 2K+1 the left side is zero at n = K+1: the right side becomes the second
constraint and b_{K+1} is set to zero.

A canonical equation passes when a''_{N-2} = 0 and, for odd N, when

    rho = sum_{m=1}^{K} ((K+1-m)/(K+1+m)) b_m a_{m+K} - (2/K) a'_{K-1}

vanishes as well. Exact polynomial input gives certificates; series input
(after numeric canonicalization) gives "pass to order M" verdicts.
"""

from dataclasses import dataclass, field
from typing import Any, Dict, Iterable, List, Optional, Tuple

from psent.app.config import settings
from psent.app.core.algebra.scalars import rational
from psent.app.core.analysis.canonical import CanonicalEquation, canonicalize
from psent.app.core.analysis.equation import EquationSpec, require_class_member
from psent.app.core.errors import NonCanonicalError, UnsupportedDegreeError
from psent.app.core.logger import get_logger


logger = get_logger(__name__)


@dataclass(frozen=True)
class BSequence:
    """
    Attributes:
        N (int): Degree of the equation.
        b (tuple): b_1..b_{N-1} (index 0 of the tuple is b_1).
        constraint: Odd N only, the right side at n = K+1 (equals -rho/2).
        skipped (int): Odd N only, the index K+1 whose b was chosen zero.
    """

    N: int
    b: Tuple[Any, ...]
    constraint: Any = None
    skipped: Optional[int] = None

    def __getitem__(self, k: int):
        if not 1 <= k <= self.N - 1:
            raise IndexError(f"b_k is defined for 1 <= k <= {self.N - 1}")
        return self.b[k - 1]

    def items(self) -> List[Tuple[int, Any]]:
        return [(k, self.b[k - 1]) for k in range(1, self.N)]


@dataclass(frozen=True)
class ConditionCheck:
    """ One resonance condition with its verdict; `base_point` is set in series mode. """

    name: str
    expression: Any
    passed: bool
    base_point: Any = None


@dataclass(frozen=True)
class ResonanceReport:
    """
    Attributes:
        N (int): Degree.
        mode (str): "exact" or "series".
        order (int): Series truncation order, None in exact mode.
        conditions (tuple): All checks performed.
        b (BSequence): The b sequence, None in aggregated series reports.
    """

    N: int
    mode: str
    conditions: Tuple[ConditionCheck, ...]
    order: Optional[int] = None
    b: Optional[BSequence] = None
    base_points: Tuple[Any, ...] = field(default_factory=tuple)

    @property
    def parity(self) -> str:
        return "even" if self.N % 2 == 0 else "odd"

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.conditions)

    @property
    def witnesses(self) -> List[ConditionCheck]:
        return [c for c in self.conditions if not c.passed]

    def _first(self, name: str) -> Optional[ConditionCheck]:
        return next((c for c in self.conditions if c.name == name), None)

    @property
    def condition_aN2(self) -> Optional[ConditionCheck]:
        return self._first("a''_{N-2}")

    @property
    def condition_rho(self) -> Optional[ConditionCheck]:
        return self._first("rho")

    @property
    def verdict(self) -> str:
        if self.mode == "series":
            return f"PASS to order {self.order}" if self.passed else "FAIL"
        return "PASS" if self.passed else "FAIL"


def _as_canonical(canon) -> CanonicalEquation:
    if isinstance(canon, CanonicalEquation):
        return canon
    eq = require_class_member(canon)
    if not eq.is_canonical:
        raise NonCanonicalError("resonance analysis needs canonical input; canonicalize first or use series mode")
    return CanonicalEquation.from_spec(eq)


def _tolerance(canon: CanonicalEquation) -> float:
    return 0.0 if canon.is_exact else 1e-8 * canon.scale()


def b_sequence(canon) -> BSequence:
    """
    Solve the b recurrence.

    Args:
        canon: `CanonicalEquation` or a canonical `EquationSpec`.

    Returns:
        BSequence: b_1..b_{N-1} in the coefficients' own representation.
    """
    canon = _as_canonical(canon)
    N = canon.N
    a = [canon.a(n) for n in range(N + 1)]
    ap = [x.derivative() for x in a]
    b: List[Any] = []
    constraint, skipped = None, None
    for n in range(1, N):
        rhs = ap[N - n - 1] * rational(1, N - n)
        for m in range(1, n):
            rhs = rhs - b[m - 1] * a[N + m - n] * rational(N - n - m + 1, 2 * (N - n + m + 1))
        lhs = rational(N + 1 - 2 * n, (N - 1) ** 2)
        if lhs == 0:
            constraint, skipped = rhs, n
            b.append(rhs * 0)
        else:
            b.append(rhs * (1 / lhs))
    return BSequence(N, tuple(b), constraint, skipped)


def rho(canon, b: Optional[BSequence] = None):
    """ Odd-N second condition, sum_{m<=K} ((K+1-m)/(K+1+m)) b_m a_{m+K} - (2/K) a'_{K-1}. """
    canon = _as_canonical(canon)
    if canon.N % 2 == 0:
        raise UnsupportedDegreeError("rho is only defined for odd N")
    b = b or b_sequence(canon)
    K = (canon.N - 1) // 2
    acc = canon.a(K - 1).derivative() * rational(-2, K)
    for m in range(1, K + 1):
        acc = acc + b[m] * canon.a(m + K) * rational(K + 1 - m, K + 1 + m)
    return acc


def second_constraint(canon):
    """ Left side of the odd-N second constraint; equals -rho/2. """
    seq = b_sequence(canon)
    if seq.constraint is None:
        raise UnsupportedDegreeError("the second constraint only exists for odd N")
    return seq.constraint


def check_resonance(canon) -> ResonanceReport:
    """
    Check the resonance conditions of a canonical equation.

    Raises:
        NonCanonicalError: For an `EquationSpec` not in canonical form.
        OutsideClassError: For equations outside the class.
    """
    canon = _as_canonical(canon)
    N = canon.N
    tol = _tolerance(canon)
    seq = b_sequence(canon)
    cond = canon.a(N - 2).derivative().derivative()
    checks = [ConditionCheck("a''_{N-2}", cond, cond.is_zero(tol))]
    if N % 2 == 1:
        value = rho(canon, seq)
        checks.append(ConditionCheck("rho", value, value.is_zero(tol)))
    mode = "exact" if canon.is_polynomial and canon.is_exact else "series"
    report = ResonanceReport(N, mode, tuple(checks), canon.order, seq)
    logger.debug(f"resonance N = {N}: {report.verdict}")
    return report


def check_resonance_series(eq: EquationSpec, base_points: Iterable, M: Optional[int] = None) -> ResonanceReport:
    """
    Series-mode check after numeric canonicalization at several base points.

    Args:
        eq (EquationSpec): Any member of the class.
        base_points: At least three points with a_N != 0.
        M (int): Taylor order; defaults to `settings.series_order`.

    Returns:
        ResonanceReport: Aggregated checks, each tagged with its base point.
    """
    require_class_member(eq)
    M = M or settings.series_order
    points = list(base_points)
    if len(points) < 3:
        raise NonCanonicalError("series-mode resonance needs at least three base points")
    checks: List[ConditionCheck] = []
    for z0 in points:
        canon, _ = canonicalize(eq, z0, M)
        for c in check_resonance(canon).conditions:
            checks.append(ConditionCheck(c.name, c.expression, c.passed, z0))
    return ResonanceReport(eq.N, "series", tuple(checks), M - 2, None, tuple(points))


_CLOSED_FORMS = {
    3: ("a_0'", lambda a: a[0].derivative()),
    5: ("(4 a_1 - a_3^2)'", lambda a: (a[1] * 4 - a[3] * a[3]).derivative()),
    7: ("(10 a_2 - 9 a_4 a_5)'", lambda a: (a[2] * 10 - a[4] * a[5] * 9).derivative()),
}


@dataclass(frozen=True)
class ClosedFormResult:
    label: str
    expression: Any
    passed: bool


def closed_form_condition(canon) -> ClosedFormResult:
    """
    Closed-form odd-N condition for N in {3, 5, 7}.

    Raises:
        UnsupportedDegreeError: For any other N.
    """
    canon = _as_canonical(canon)
    if canon.N not in _CLOSED_FORMS:
        raise UnsupportedDegreeError(f"closed forms exist for N in {sorted(_CLOSED_FORMS)}, got {canon.N}")
    label, build = _CLOSED_FORMS[canon.N]
    a = [canon.a(n) for n in range(canon.N + 1)]
    expr = build(a)
    return ClosedFormResult(label, expr, expr.is_zero(_tolerance(canon)))


def describe(expression) -> Dict[str, Any]:
    """ Printable form of a condition expression (polynomial or Taylor coefficients). """
    kind = "taylor" if hasattr(expression, "base") else "poly"
    return {"kind": kind, "coefficients": [str(c) for c in expression.coeffs]}
