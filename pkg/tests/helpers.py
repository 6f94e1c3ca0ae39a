""" Equation and state builders shared by the tests. """

from psent.app.core.algebra.poly import Poly
from psent.app.core.algebra.scalars import coerce_scalar, rational
from psent.app.core.analysis.equation import EquationSpec


def random_rational(rng):
    return rational(rng.randint(-6, 6), rng.randint(1, 4))


def random_poly(rng, degree):
    return Poly([random_rational(rng) for _ in range(degree + 1)])


def random_canonical(rng, N, passing=None):
    """
    Random canonical equation with a linear a_{N-2}.

    For odd N the closed-form expression is made constant (pass) or left
    random (usually fail) according to `passing`, decided at random if None.
    """
    if passing is None:
        passing = rng.random() < 0.5
    lower = [random_poly(rng, rng.randint(0, 3)) for _ in range(N - 1)]
    lower[N - 2] = random_poly(rng, 1)
    const = Poly.constant(random_rational(rng))
    if N == 3 and passing:
        lower[0] = const
    elif N == 5 and passing:
        lower[1] = lower[3] * lower[3] * rational(1, 4) + const
    elif N == 7 and passing:
        lower[4] = random_poly(rng, 2)
        lower[2] = lower[4] * lower[5] * rational(9, 10) + const
    return EquationSpec.canonical(N, lower)


def planted(N, c=1, z_star=1, z0=0):
    """ (z0, y, y') on y = c (z - z*)^(-2/(N-1)), principal branch. """
    p = -2 / (N - 1)
    zeta = complex(z0 - z_star)
    y = c * zeta ** p
    return complex(z0), y, p * y / zeta


def exact(*values):
    """ Integers and rationals as exact scalars, for comparing series coefficients. """
    return [coerce_scalar(v) for v in values]
