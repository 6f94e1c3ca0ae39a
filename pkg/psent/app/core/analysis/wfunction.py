"""
The auxiliary function W and the regularizing (u, v) charts.

For a canonical equation with b sequence b_1..b_{N-1},

    W = y'^2 + B y' - 2A,    B = sum_k b_k y^{-k},    A = sum_{k=1}^{N+1} a_{k-1} y^k / k,

satisfies W' + P W = Q y' + R + S along every solution, with P, Q, R
finite sums in 1/y and S a polynomial in y that vanishes identically when
b solves the resonance recurrence.

Near a singularity y is large and W stays bounded. The chart trades
(y, y') for (u, v):

    - even N:      y = u^-2, s = 2
    - odd N = 2K+1: y = u^-1, s = 1, with a class sign epsilon

and with h = s(N+1)/2, F^2 = u^{2h}(B^2 + 8A), phi = u^{2h}/F^2,

    y' = u^{-h} (sigma F/2 - B u^h / 2 + sigma u^{2h} v / F),    W = v + phi v^2.

sigma is +1 for even N and -epsilon for odd N. The system for (z, v) as
functions of u is regular at u = 0; z(0) is the singularity and v(0) the
value of W there.

Sign conventions: dz/du -> -(N-1) u^{N-2} for even N (on the model
solution u = -zeta^{1/(N-1)}) and dz/du -> epsilon K u^{K-1} for odd N.
"""

import cmath
from dataclasses import dataclass
from typing import Callable, Dict, Optional, Sequence, Tuple

import numpy as np
from numpy.polynomial.polynomial import polyval
from scipy.integrate import cumulative_trapezoid

from psent.app.core.algebra.poly import Poly
from psent.app.core.algebra.scalars import rational, to_complex
from psent.app.core.analysis.canonical import CanonicalEquation
from psent.app.core.analysis.resonance import BSequence, _as_canonical, b_sequence
from psent.app.core.errors import BranchAmbiguityError, ChartError, PreconditionError
from psent.app.core.logger import get_logger


logger = get_logger(__name__)

Terms = Dict[int, object]


def _evaluator(coefficient) -> Callable[[complex], complex]:
    """ Fast floating evaluation of a Poly or TaylorSeries coefficient. """
    if isinstance(coefficient, Poly):
        coeffs = np.array([to_complex(c) for c in coefficient.coeffs] or [0j])
        return lambda z: complex(polyval(complex(z), coeffs))
    series = coefficient.to_float()
    return lambda z: complex(series.evaluate(complex(z)))


def _add(terms: Terms, power: int, value) -> None:
    terms[power] = terms[power] + value if power in terms else value


def _mul(left: Terms, right: Terms) -> Terms:
    out: Terms = {}
    for p, a in left.items():
        for q, b in right.items():
            _add(out, p + q, a * b)
    return out


def _prune(terms: Terms) -> Terms:
    return {p: c for p, c in sorted(terms.items()) if not c.is_zero()}


@dataclass(frozen=True)
class PQRSDecomposition:
    """
    Coefficient functions of W' + P W = Q y' + R + S.

    Attributes:
        P, Q, R (dict): Powers of 1/y mapped to coefficient functions.
        S (dict): Positive powers of y mapped to coefficient functions.
    """

    N: int
    P: Terms
    Q: Terms
    R: Terms
    S: Terms

    def s_is_zero(self, tol: float = 0.0) -> bool:
        return all(c.is_zero(tol) for c in self.S.values())

    def lowest_power(self, name: str) -> Optional[int]:
        terms = getattr(self, name)
        return min(terms) if terms else None

    def evaluate(self, z: complex, y: complex) -> Tuple[complex, complex, complex, complex]:
        """ Values of P, Q, R, S at (z, y). """
        def total(terms, sign):
            return sum((_evaluator(c)(z) * y ** (sign * p) for p, c in terms.items()), 0j)
        return total(self.P, -1), total(self.Q, -1), total(self.R, -1), total(self.S, 1)


class WFunction:
    """
    W for a canonical equation, with floating evaluators cached at construction.

    Args:
        canon: Canonical equation (or canonical `EquationSpec`).
        b (BSequence): Optional precomputed b sequence.
    """

    def __init__(self, canon, b: Optional[BSequence] = None):
        self.canon: CanonicalEquation = _as_canonical(canon)
        self.N = self.canon.N
        self.b = b or b_sequence(self.canon)
        a = [self.canon.a(n) for n in range(self.N + 1)]
        self._a = [_evaluator(x) for x in a]
        self._ap = [_evaluator(x.derivative()) for x in a]
        self._b = [_evaluator(x) for _, x in self.b.items()]
        self._bp = [_evaluator(x.derivative()) for _, x in self.b.items()]
        self.pqrs = build_PQRS(self)
        self._P = [(p, _evaluator(c)) for p, c in self.pqrs.P.items()]
        self._Q = [(p, _evaluator(c)) for p, c in self.pqrs.Q.items() if p >= 2]
        self._R = [(p, _evaluator(c)) for p, c in self.pqrs.R.items()]

    def values(self, z: complex):
        """ a_0..a_N, a'_0..a'_N, b_1..b_{N-1}, b'_1..b'_{N-1} at z (b lists start at index 1). """
        a = [f(z) for f in self._a]
        ap = [f(z) for f in self._ap]
        b = [0j] + [f(z) for f in self._b]
        bp = [0j] + [f(z) for f in self._bp]
        return a, ap, b, bp

    def pqr_values(self, z: complex):
        return ([(p, f(z)) for p, f in self._P],
                [(p, f(z)) for p, f in self._Q],
                [(p, f(z)) for p, f in self._R])


def eval_W(w: WFunction, z, y, yp) -> complex:
    """ y'^2 + (sum b_k y^-k) y' - 2 sum a_{k-1} y^k / k. """
    if y == 0:
        raise PreconditionError("W is undefined at y = 0")
    a, _, b, _ = w.values(complex(z))
    B = sum((b[k] * y ** (-k) for k in range(1, w.N)), 0j)
    A = sum((a[k - 1] * y ** k / k for k in range(1, w.N + 2)), 0j)
    return yp * yp + B * yp - 2 * A


def build_PQRS(w: WFunction) -> PQRSDecomposition:
    """
    Split W' + P W into Q y' + R + S.

    With B = sum b_k y^-k and A as in W:
        P = sum k b_k y^{-(k+1)}
        Q = sum b'_k y^-k + P B
        R + S = B sum_j a_j y^j - 2 sum a'_{k-1} y^k / k - 2 P A
    Non-positive powers of y go to R, positive ones to S.
    """
    canon, N = w.canon, w.N
    a = [canon.a(n) for n in range(N + 1)]
    B: Terms = {-k: bk for k, bk in w.b.items()}
    Bz: Terms = {-k: bk.derivative() for k, bk in w.b.items()}
    P: Terms = {-(k + 1): bk * k for k, bk in w.b.items()}
    A: Terms = {k: a[k - 1] * rational(1, k) for k in range(1, N + 2)}
    Ay: Terms = {j: a[j] for j in range(N + 1)}
    Az: Terms = {k: a[k - 1].derivative() * rational(1, k) for k in range(1, N + 2)}

    Q = dict(Bz)
    for p, c in _mul(P, B).items():
        _add(Q, p, c)
    RS = _mul(B, Ay)
    for p, c in Az.items():
        _add(RS, p, c * -2)
    for p, c in _mul(P, A).items():
        _add(RS, p, c * -2)

    def flip(terms: Terms) -> Terms:
        return _prune({-p: c for p, c in terms.items()})

    R = flip({p: c for p, c in RS.items() if p <= 0})
    S = _prune({p: c for p, c in RS.items() if p > 0})
    return PQRSDecomposition(N, flip(P), flip(Q), R, S)


def wdiff_defect(w: WFunction, z, y, yp) -> complex:
    """
    dW/dz along the equation minus (-P W + Q y' + R).

    Equals S(z, y), so it vanishes when the b sequence is resonant.
    """
    z = complex(z)
    a, ap, b, bp = w.values(z)
    N = w.N
    ypp = sum((a[j] * y ** j for j in range(N + 1)), 0j)
    B = sum((b[k] * y ** (-k) for k in range(1, N)), 0j)
    Bz = sum((bp[k] * y ** (-k) for k in range(1, N)), 0j)
    By = sum((-k * b[k] * y ** (-k - 1) for k in range(1, N)), 0j)
    Az = sum((ap[k - 1] * y ** k / k for k in range(1, N + 2)), 0j)
    dW = 2 * yp * ypp + (Bz + By * yp) * yp + B * ypp - 2 * Az - 2 * ypp * yp
    P, Q, R, _ = w.pqrs.evaluate(z, y)
    return dW - (-P * eval_W(w, z, y, yp) + Q * yp + R)


@dataclass(frozen=True)
class WDiagnostic:
    """ Integrating factor E = exp(int P) along samples and the relative defect of W E - kappa - int (Q y' + R) E. """

    E: np.ndarray
    defect: np.ndarray
    max_relative_defect: float


def integrated_w_diagnostic(w: WFunction, z: Sequence[complex], y: Sequence[complex],
                            yp: Sequence[complex]) -> WDiagnostic:
    """
    Integrated form of the W identity along a sampled trajectory.

    Args:
        w (WFunction): W of the canonical equation the samples solve.
        z, y, yp: Sample arrays ordered along the path.
    """
    z, y, yp = (np.asarray(v, dtype=complex) for v in (z, y, yp))
    if len(z) < 3:
        raise PreconditionError("the integrated diagnostic needs at least three samples")
    values = [w.pqrs.evaluate(zi, yi) for zi, yi in zip(z, y)]
    P = np.array([v[0] for v in values])
    forcing = np.array([v[1] * ypi + v[2] for v, ypi in zip(values, yp)])
    W = np.array([eval_W(w, zi, yi, ypi) for zi, yi, ypi in zip(z, y, yp)])
    E = np.exp(cumulative_trapezoid(P, z, initial=0))
    integral = cumulative_trapezoid(forcing * E, z, initial=0)
    defect = W * E - W[0] - integral
    scale = np.maximum(1.0, np.abs(W * E))
    return WDiagnostic(E, defect, float(np.max(np.abs(defect) / scale)))


# ----------------------------------------------------------------------
# (u, v) charts
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class ChartState:
    """ A point of the chart: u, v and the class sign it was read with (odd N). """

    u: complex
    v: complex
    epsilon: Optional[int]
    G: complex


@dataclass(frozen=True)
class UVChart:
    """
    Attributes:
        w (WFunction): W of the canonical equation.
        epsilon (int): Odd N only; None until read from a state.
    """

    w: WFunction
    epsilon: Optional[int] = None

    @property
    def N(self) -> int:
        return self.w.N

    @property
    def parity(self) -> str:
        return "even" if self.N % 2 == 0 else "odd"

    @property
    def s(self) -> int:
        return 2 if self.N % 2 == 0 else 1

    @property
    def h(self) -> int:
        return self.s * (self.N + 1) // 2

    @property
    def sigma(self) -> int:
        if self.N % 2 == 0:
            return 1
        if self.epsilon is None:
            raise ChartError("odd-N chart used before its class sign is known")
        return -self.epsilon

    def with_epsilon(self, epsilon: Optional[int]) -> "UVChart":
        return UVChart(self.w, epsilon)

    def _F2(self, z: complex, u: complex, with_derivatives: bool = False):
        N, s, two_h = self.N, self.s, 2 * self.h
        a, ap, b, bp = self.w.values(z)
        B = sum((b[k] * u ** (s * k) for k in range(1, N)), 0j)
        uh2 = u ** two_h
        F2 = sum((8 * a[k - 1] / k * u ** (s * (N + 1 - k)) for k in range(1, N + 2)), 0j) + B * B * uh2
        if not with_derivatives:
            return F2, B
        Bu = sum((s * k * b[k] * u ** (s * k - 1) for k in range(1, N)), 0j)
        Bz = sum((bp[k] * u ** (s * k) for k in range(1, N)), 0j)
        F2u = sum((8 * a[k - 1] / k * s * (N + 1 - k) * u ** (s * (N + 1 - k) - 1) for k in range(1, N + 1)), 0j)
        F2u += 2 * B * Bu * uh2 + two_h * B * B * u ** (two_h - 1)
        F2z = sum((8 * ap[k - 1] / k * u ** (s * (N + 1 - k)) for k in range(1, N + 2)), 0j) + 2 * B * Bz * uh2
        return F2, B, F2u, F2z

    def F(self, z: complex, u: complex) -> complex:
        F2, _ = self._F2(z, u)
        return _root(F2)


def _root(F2: complex) -> complex:
    if F2.real <= 0:
        raise ChartError(f"F^2 = {F2:.3g} left the right half-plane; chart invalid here")
    return cmath.sqrt(F2)


def chart_from_state(chart: UVChart, z, y, yp, min_abs_y: float = 10.0) -> Tuple[ChartState, UVChart]:
    """
    Read (u, v) from a state near a singularity.

    Even N tries both square roots of 1/y; odd N takes u = 1/y and tries both
    class signs unless the chart has one. The candidate with
    G = 2 u^h (y' + B/2) / (sigma F) closest to +1 wins and v = 2W / (1 + G).

    Returns:
        Tuple[ChartState, UVChart]: The state and the chart with its class sign fixed.

    Raises:
        BranchAmbiguityError: If |y| is below `min_abs_y` or no candidate has |G - 1| < 0.5.
    """
    z, y, yp = complex(z), complex(y), complex(yp)
    if abs(y) < min_abs_y:
        raise BranchAmbiguityError(f"|y| = {abs(y):.3g} too small to fix the chart branch (need {min_abs_y:g})")
    if chart.N % 2 == 0:
        root = cmath.sqrt(1 / y)
        candidates = [(root, chart), (-root, chart)]
    else:
        signs = [chart.epsilon] if chart.epsilon is not None else [1, -1]
        candidates = [(1 / y, chart.with_epsilon(e)) for e in signs]

    best = None
    for u, c in candidates:
        F2, B = c._F2(z, u)
        F = _root(F2)
        G = 2 * u ** c.h * (yp + B / 2) / (c.sigma * F)
        if best is None or abs(G - 1) < abs(best[2] - 1):
            best = (u, c, G)
    u, c, G = best
    if abs(G - 1) >= 0.5:
        raise BranchAmbiguityError(f"no chart branch matches the state (|G - 1| = {abs(G - 1):.3g})")
    v = 2 * eval_W(c.w, z, y, yp) / (1 + G)
    return ChartState(u, v, c.epsilon, G), c


def chart_to_state(chart: UVChart, z, u, v) -> Tuple[complex, complex]:
    """ (y, y') from a chart point with u != 0. """
    z, u, v = complex(z), complex(u), complex(v)
    if u == 0:
        raise ChartError("u = 0 is the singularity itself")
    F2, B = chart._F2(z, u)
    F = _root(F2)
    D = chart.sigma * F / 2 - B * u ** chart.h / 2 + chart.sigma * u ** (2 * chart.h) * v / F
    return u ** (-chart.s), u ** (-chart.h) * D


def chart_rhs(chart: UVChart, z, u, v) -> Tuple[complex, complex]:
    """
    (dz/du, dv/du), finite at u = 0.

    Raises:
        ChartError: If F^2 leaves the right half-plane or dz/du blows up.
    """
    z, u, v = complex(z), complex(u), complex(v)
    N, s, h = chart.N, chart.s, chart.h
    two_h = 2 * h
    sigma = chart.sigma
    F2, B, F2u, F2z = chart._F2(z, u, with_derivatives=True)
    F = _root(F2)
    uh2 = u ** two_h
    phi = uh2 / F2
    D = sigma * F / 2 - B * u ** h / 2 + sigma * uh2 * v / F
    if D == 0:
        raise ChartError("chart degenerates (D = 0)")
    dzdu = -s * u ** (h - s - 1) / D

    P, Q, R = chart.w.pqr_values(z)
    Pval = sum((c * u ** (s * p) for p, c in P), 0j)
    Rval = sum((c * u ** (s * p) for p, c in R), 0j)
    Qterm = -s * sum((c * u ** (s * (p - 1) - 1) for p, c in Q), 0j)

    W = v + phi * v * v
    dphi = (two_h * u ** (two_h - 1) * F2 - uh2 * F2u) / (F2 * F2) - uh2 * F2z / (F2 * F2) * dzdu
    denom = 1 + 2 * phi * v
    if denom == 0:
        raise ChartError("chart degenerates (1 + 2 phi v = 0)")
    dvdu = ((-Pval * W + Rval) * dzdu + Qterm - v * v * dphi) / denom
    return dzdu, dvdu

