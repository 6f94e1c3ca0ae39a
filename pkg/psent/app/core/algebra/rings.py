"""
Power series rings behind the truncated series types.

Series arithmetic runs on sympy sparse polynomial rings with `ring_series`
truncation: coefficient k of a series is the t^k term of a `PolyElement`.
The ring has a second generator u that receives series reversions. Exact
series live over `QQ_I`, floating ones over `CC`.
"""

from typing import List, Sequence, Tuple

from sympy.polys.domains import CC, QQ_I
from sympy.polys.rings import PolyElement, PolyRing, ring

from psent.app.core.algebra.scalars import ZERO


EXACT_RING, _T_EXACT, _U_EXACT = ring("t, u", QQ_I)
FLOAT_RING, _T_FLOAT, _U_FLOAT = ring("t, u", CC)


def series_ring(exact: bool) -> Tuple[PolyRing, PolyElement, PolyElement]:
    """ (ring, t, u) for the requested scalar mode. """
    if exact:
        return EXACT_RING, _T_EXACT, _U_EXACT
    return FLOAT_RING, _T_FLOAT, _U_FLOAT


def to_element(coeffs: Sequence, exact: bool, gen: int = 0) -> PolyElement:
    """ sum_k coeffs[k] g^k with g the generator at position `gen`. """
    R = series_ring(exact)[0]
    convert = R.domain.convert
    terms = {}
    for k, c in enumerate(coeffs):
        if c:
            monom = (k, 0) if gen == 0 else (0, k)
            terms[monom] = convert(c)
    return R(terms)


def from_element(p: PolyElement, count: int, exact: bool, gen: int = 0) -> List:
    """ Coefficients of g^0..g^{count-1} as plain scalars. """
    out = [ZERO if exact else 0j] * count
    for monom, c in p.items():
        k = monom[gen]
        if 0 <= k < count:
            out[k] = c if exact else complex(c)
    return out
