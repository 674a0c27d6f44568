"""Complex gamma function via the Lanczos approximation (g=7, n=9).

Kept independent of the quadrature stack on purpose: the tests use it as
an oracle for Mellin integrals computed by quadrature, so the two code
paths must not share machinery.
"""

from __future__ import annotations

import cmath
import math

_LANCZOS_G = 7.0
_LANCZOS_P = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)

_SQRT_TWO_PI = math.sqrt(2.0 * math.pi)


def lanczos_gamma(z):
    """Gamma(z) for complex z (poles at non-positive integers raise)."""
    z = complex(z)
    if z.imag == 0.0 and z.real <= 0.0 and z.real == int(z.real):
        raise ValueError("gamma pole at %r" % z)
    if z.real < 0.5:
        # reflection formula
        return math.pi / (cmath.sin(math.pi * z) * lanczos_gamma(1.0 - z))
    z -= 1.0
    acc = _LANCZOS_P[0]
    for i, p in enumerate(_LANCZOS_P[1:], start=1):
        acc += p / (z + i)
    t = z + _LANCZOS_G + 0.5
    out = _SQRT_TWO_PI * t ** (z + 0.5) * cmath.exp(-t) * acc
    if out.imag == 0.0:
        return out
    return out
