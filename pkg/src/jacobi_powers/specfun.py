"""Complex Gamma, reciprocal Gamma and the Gauss hypergeometric function.

Gamma uses the Lanczos approximation with g=7 and nine coefficients, plus
the reflection formula on the left half-plane. The 2F1 routine sums the
Gauss series directly and uses the 1-z connection formula once when z
sits close to 1.
"""

from __future__ import annotations

import cmath
import math

from .errors import NoConvergence, ParameterPole, PoleAt

POLE_TOL = 1e-12
SERIES_RADIUS = 0.75
SERIES_RTOL = 1e-17
MAX_TERMS = 100_000

_LANCZOS_G = 7.0
_LANCZOS_COEF = (
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
_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)


def _nonpositive_integer(z: complex, tol: float = POLE_TOL) -> int | None:
    """Return m when z is within tol of the non-positive integer -m."""
    z = complex(z)
    k = round(z.real)
    if k <= 0 and abs(z - k) <= tol:
        return -k
    return None


def _sinpi(z: complex) -> complex:
    # reduce the real part first so that sin(pi z) keeps relative accuracy near integers
    k = round(z.real)
    s = cmath.sin(math.pi * (z - k))
    return -s if k % 2 else s


def _lanczos_log_gamma(z: complex) -> complex:
    """log Gamma(z) for Re z >= 0.5, without branch normalisation."""
    z = z - 1.0
    acc = _LANCZOS_COEF[0]
    for i in range(1, len(_LANCZOS_COEF)):
        acc += _LANCZOS_COEF[i] / (z + i)
    t = z + _LANCZOS_G + 0.5
    return _HALF_LOG_2PI + (z + 0.5) * cmath.log(t) - t + cmath.log(acc)


def gamma_complex(z: complex) -> complex:
    """Gamma function for complex argument.

    Raises PoleAt when z is within 1e-12 of a non-positive integer.
    """
    z = complex(z)
    if _nonpositive_integer(z) is not None:
        raise PoleAt(z)
    if z.real < 0.5:
        return math.pi / (_sinpi(z) * cmath.exp(_lanczos_log_gamma(1.0 - z)))
    return cmath.exp(_lanczos_log_gamma(z))


def reciprocal_gamma(z: complex) -> complex:
    """1/Gamma(z), an entire function; exactly 0 at the poles of Gamma."""
    z = complex(z)
    if _nonpositive_integer(z) is not None:
        return 0j
    if z.real < 0.5:
        return _sinpi(z) * cmath.exp(_lanczos_log_gamma(1.0 - z)) / math.pi
    return cmath.exp(-_lanczos_log_gamma(z))


def _series(a: complex, b: complex, c: complex, z: complex) -> complex:
    total = 1.0 + 0j
    term = 1.0 + 0j
    small = 0
    for k in range(MAX_TERMS):
        term *= (a + k) * (b + k) / ((c + k) * (k + 1)) * z
        total += term
        if term == 0:
            return total
        # two consecutive negligible increments before stopping
        if abs(term) <= SERIES_RTOL * abs(total):
            small += 1
            if small >= 2:
                return total
        else:
            small = 0
    raise NoConvergence(f"2F1 series did not converge in {MAX_TERMS} terms at z={z!r}")


def _connection(a: complex, b: complex, c: complex, z: complex) -> complex:
    # F(a,b;c;z) in terms of series around z=1
    w = 1.0 - z
    d = c - a - b
    g_c = gamma_complex(c)
    first = g_c * gamma_complex(d) * reciprocal_gamma(c - a) * reciprocal_gamma(c - b)
    second = g_c * gamma_complex(-d) * reciprocal_gamma(a) * reciprocal_gamma(b)
    out = 0j
    if first != 0:
        out += first * _series(a, b, 1.0 - d, w)
    if second != 0:
        out += second * w**d * _series(c - a, c - b, 1.0 + d, w)
    return out


def hyp2f1(a: complex, b: complex, c: complex, z: complex) -> complex:
    """Gauss hypergeometric function F(a,b;c;z).

    Direct series for |z| <= 0.75. Beyond that the 1-z connection formula
    is applied once when |1-z| <= 0.75; otherwise the direct series is used
    while |z| < 1. Pochhammer symbols are accumulated inside the loop, so
    terminating series (a or b a non-positive integer) are exact.
    """
    a, b, c, z = complex(a), complex(b), complex(c), complex(z)
    if _nonpositive_integer(c) is not None:
        raise ParameterPole(f"c={c!r} is a non-positive integer")
    if z == 0:
        return 1.0 + 0j
    terminating = _nonpositive_integer(a, 0.0) is not None or _nonpositive_integer(b, 0.0) is not None
    if abs(z) <= SERIES_RADIUS or terminating:
        return _series(a, b, c, z)
    d = c - a - b
    on_cut = z.imag == 0 and z.real > 1.0
    d_integer = abs(d - round(d.real)) <= POLE_TOL
    if abs(1.0 - z) <= SERIES_RADIUS and not on_cut and not d_integer:
        return _connection(a, b, c, z)
    if abs(z) < 1.0:
        return _series(a, b, c, z)
    raise NoConvergence(f"no convergent representation for 2F1 at z={z!r}")


def rising_factorial(x: complex, k: int) -> complex:
    out = 1.0 + 0j
    for i in range(k):
        out *= x + i
    return out


def hyp2f1_derivative(a: complex, b: complex, c: complex, z: complex, order: int) -> complex:
    """k-th z-derivative of F(a,b;c;z) via the parameter-shift formula."""
    if order < 0:
        raise ValueError("derivative order must be non-negative")
    if order == 0:
        return hyp2f1(a, b, c, z)
    c = complex(c)
    if _nonpositive_integer(c) is not None:
        raise ParameterPole(f"c={c!r} is a non-positive integer")
    scale = rising_factorial(a, order) * rising_factorial(b, order) / rising_factorial(c, order)
    if scale == 0:
        return 0j
    return scale * hyp2f1(complex(a) + order, complex(b) + order, c + order, z)
