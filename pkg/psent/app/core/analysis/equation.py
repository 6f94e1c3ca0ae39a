"""
Second-order equations handled by psent.

`SecondOrderEquation` is the interface the continuation engine integrates:
anything that returns y'' from (z, y, y'). `EquationSpec` is the analysable
class y'' = sum_{n=0}^{N} a_n(z) y^n with polynomial coefficients and N >= 2;
the demo equations of the continuation package implement the same interface
but are rejected by the analysis modules.
"""

from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Iterable, List, Sequence, Tuple

from psent.app.core.algebra.poly import Poly
from psent.app.core.algebra.scalars import QQElement, rational, to_complex
from psent.app.core.errors import InvalidEquationError, OutsideClassError, ScalarModeError


def canonical_constant(N: int) -> QQElement:
    """ The canonical leading coefficient 2(N+1)/(N-1)^2, a QQ element. """
    return rational(2 * (N + 1), (N - 1) ** 2)


class SecondOrderEquation(ABC):
    """
    Interface of an explicit second-order ODE y'' = F(z, y, y').

    Important:
        Subclasses must implement `acceleration` and `name`.
    """

    @property
    @abstractmethod
    def name(self) -> str:
        raise NotImplementedError("name must be implemented by subclasses.")

    @abstractmethod
    def acceleration(self, z: complex, y: complex, yp: complex) -> complex:
        """
        Evaluate y'' at a state.

        Args:
            z (complex): Independent variable.
            y (complex): Solution value.
            yp (complex): First derivative.

        Returns:
            complex: The second derivative prescribed by the equation.
        """
        raise NotImplementedError("acceleration must be implemented by subclasses.")


@dataclass(frozen=True)
class EquationSpec(SecondOrderEquation):
    """
    The equation y'' = sum_{n=0}^{N} a_n(z) y^n.

    Attributes:
        N (int): Degree in y, at least 2.
        a (tuple): Coefficient polynomials a_0..a_N.
    """

    N: int
    a: Tuple[Poly, ...]
    _numeric: Tuple[Tuple[complex, ...], ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not isinstance(self.N, int) or self.N < 2:
            raise InvalidEquationError(f"N must be an integer >= 2 (N <= 1 is linear), got {self.N!r}")
        coeffs = tuple(p if isinstance(p, Poly) else Poly(p) for p in self.a)
        if len(coeffs) != self.N + 1:
            raise InvalidEquationError(f"expected {self.N + 1} coefficient polynomials, got {len(coeffs)}")
        if coeffs[-1].is_zero():
            raise InvalidEquationError("a_N must not vanish identically")
        modes = {p.is_exact for p in coeffs if not p.is_zero()}
        if len(modes) > 1:
            raise ScalarModeError("coefficient polynomials mix exact and floating values")
        object.__setattr__(self, "a", coeffs)
        object.__setattr__(self, "_numeric", tuple(tuple(to_complex(c) for c in p.coeffs) for p in coeffs))

    # ------------------------------------------------------------------
    # constructors
    # ------------------------------------------------------------------

    @classmethod
    def from_lists(cls, N: int, coeffs: Iterable[Sequence]) -> "EquationSpec":
        """ Build from plain coefficient lists, e.g. `EquationSpec.from_lists(2, [[0, 1], [], [6]])`. """
        return cls(N, tuple(Poly(c) for c in coeffs))

    @classmethod
    def canonical(cls, N: int, lower: Iterable[Sequence]) -> "EquationSpec":
        """
        Canonical equation from its free coefficients a_0..a_{N-2}.

        a_{N-1} = 0 and a_N = 2(N+1)/(N-1)^2 are filled in.
        """
        lower = [c if isinstance(c, Poly) else Poly(c) for c in lower]
        if len(lower) != N - 1:
            raise InvalidEquationError(f"canonical N = {N} needs {N - 1} free coefficients, got {len(lower)}")
        return cls(N, tuple(lower) + (Poly.zero(), Poly.constant(canonical_constant(N))))

    # ------------------------------------------------------------------
    # properties
    # ------------------------------------------------------------------

    @property
    def name(self) -> str:
        terms = [f"({p})y^{n}" for n, p in enumerate(self.a) if not p.is_zero()]
        return "y'' = " + " + ".join(terms)

    @property
    def is_exact(self) -> bool:
        return all(p.is_exact for p in self.a)

    @property
    def is_canonical(self) -> bool:
        """ a_N is exactly 2(N+1)/(N-1)^2 and a_{N-1} vanishes identically. """
        return (self.is_exact
                and self.a[self.N - 1].is_zero()
                and self.a[self.N] == Poly.constant(canonical_constant(self.N)))

    @property
    def has_constant_coefficients(self) -> bool:
        return all(p.is_constant() for p in self.a)

    def coefficient(self, n: int) -> Poly:
        return self.a[n]

    def to_float(self) -> "EquationSpec":
        return EquationSpec(self.N, tuple(p.to_float() for p in self.a))

    # ------------------------------------------------------------------
    # numerics
    # ------------------------------------------------------------------

    def coefficient_values(self, z: complex) -> List[complex]:
        """ a_0(z)..a_N(z) in floating point. """
        values = []
        for coeffs in self._numeric:
            acc = 0j
            for c in reversed(coeffs):
                acc = acc * z + c
            values.append(acc)
        return values

    def acceleration(self, z: complex, y: complex, yp: complex) -> complex:
        values = self.coefficient_values(z)
        acc = 0j
        for c in reversed(values):
            acc = acc * y + c
        return acc


def require_class_member(eq) -> EquationSpec:
    """
    Guard used by the analysis modules.

    Raises:
        OutsideClassError: If `eq` is not an `EquationSpec`.
    """
    if not isinstance(eq, EquationSpec):
        name = getattr(eq, "name", type(eq).__name__)
        raise OutsideClassError(f"{name} is outside the class y'' = sum a_n(z) y^n; analysis modules reject it")
    return eq
