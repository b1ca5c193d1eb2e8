"""Endpoint asymptotic algebra for sums of c (1-x)^p (1+x)^q.

Exponents are kept as exact integer triples (i, s, t) standing for
i + s*alpha + t*beta, so cancellations between divergent pieces are tracked
structurally. Coefficients are double precision complex numbers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

import mpmath

from .errors import DivergentLimit, EndpointMismatch, ExtrapolationUnstable

GROUP_TOL = 1e-12
CANCEL_RTOL = 1e-9


@dataclass(frozen=True)
class Parameters:
    """Jacobi weight exponents alpha, beta in (0, 1) and the power n >= 1.

    ``coefficient_overrides`` optionally scales a_k by C(n, k); the default
    is C = 1 for every k.
    """

    alpha: float
    beta: float
    n: int
    coefficient_overrides: tuple[float, ...] | None = None

    def __post_init__(self):
        if not (0.0 < self.alpha < 1.0) or not (0.0 < self.beta < 1.0):
            raise ValueError(f"alpha and beta must lie in (0, 1), got {self.alpha}, {self.beta}")
        if int(self.n) != self.n or self.n < 1:
            raise ValueError(f"power n must be a positive integer, got {self.n}")
        object.__setattr__(self, "alpha", float(self.alpha))
        object.__setattr__(self, "beta", float(self.beta))
        object.__setattr__(self, "n", int(self.n))
        if self.coefficient_overrides is not None:
            c = tuple(float(v) for v in self.coefficient_overrides)
            if len(c) != self.n:
                raise ValueError(f"expected {self.n} coefficient overrides, got {len(c)}")
            object.__setattr__(self, "coefficient_overrides", c)

    def coefficient(self, k: int) -> float:
        if self.coefficient_overrides is None:
            return 1.0
        return self.coefficient_overrides[k - 1]


@dataclass(frozen=True, order=True)
class Exponent:
    """The real number i + s*alpha + t*beta."""

    i: int
    s: int = 0
    t: int = 0

    def __add__(self, other: "Exponent") -> "Exponent":
        return Exponent(self.i + other.i, self.s + other.s, self.t + other.t)

    def shift(self, k: int) -> "Exponent":
        return Exponent(self.i + k, self.s, self.t)

    def value(self, alpha: float, beta: float) -> float:
        return self.i + self.s * alpha + self.t * beta

    def is_zero(self) -> bool:
        return self.i == 0 and self.s == 0 and self.t == 0


ZERO = Exponent(0, 0, 0)


@dataclass(frozen=True)
class Term:
    coeff: complex
    p: Exponent  # power of (1 - x)
    q: Exponent  # power of (1 + x)


def _canonical(terms: Iterable[Term]) -> tuple[Term, ...]:
    merged: dict[tuple[Exponent, Exponent], complex] = {}
    for t in terms:
        key = (t.p, t.q)
        merged[key] = merged.get(key, 0j) + complex(t.coeff)
    return tuple(Term(c, p, q) for (p, q), c in sorted(merged.items()) if c != 0)


@dataclass(frozen=True)
class EndpointExpansion:
    """A finite sum of terms describing a function near x = +1 or x = -1.

    The pair (alpha, beta) travels with the expansion because termwise
    differentiation needs numeric exponent values.
    """

    endpoint: int
    terms: tuple[Term, ...]
    alpha: float
    beta: float

    def __post_init__(self):
        if self.endpoint not in (1, -1):
            raise ValueError("endpoint must be +1 or -1")
        object.__setattr__(self, "terms", _canonical(self.terms))

    def __bool__(self) -> bool:
        return bool(self.terms)

    def scaled(self, c: complex) -> "EndpointExpansion":
        return EndpointExpansion(self.endpoint, tuple(Term(t.coeff * c, t.p, t.q) for t in self.terms), self.alpha, self.beta)

    def conjugate(self) -> "EndpointExpansion":
        return EndpointExpansion(
            self.endpoint, tuple(Term(complex(t.coeff).conjugate(), t.p, t.q) for t in self.terms), self.alpha, self.beta
        )

    def __add__(self, other: "EndpointExpansion") -> "EndpointExpansion":
        _check_compatible(self, other)
        return EndpointExpansion(self.endpoint, self.terms + other.terms, self.alpha, self.beta)

    def __sub__(self, other: "EndpointExpansion") -> "EndpointExpansion":
        return self + other.scaled(-1.0)


def expansion(endpoint: int, params: Parameters, terms: Iterable[tuple[complex, Exponent, Exponent]] = ()) -> EndpointExpansion:
    return EndpointExpansion(endpoint, tuple(Term(complex(c), p, q) for c, p, q in terms), params.alpha, params.beta)


@dataclass(frozen=True)
class MaximalDomainElement:
    """A function of the maximal domain, known only through its two endpoint expansions."""

    at_plus: EndpointExpansion
    at_minus: EndpointExpansion

    def __post_init__(self):
        if self.at_plus.endpoint != 1 or self.at_minus.endpoint != -1:
            raise EndpointMismatch("at_plus must be tagged +1 and at_minus -1")

    def at(self, endpoint: int) -> EndpointExpansion:
        return self.at_plus if endpoint == 1 else self.at_minus

    def __add__(self, other: "MaximalDomainElement") -> "MaximalDomainElement":
        return MaximalDomainElement(self.at_plus + other.at_plus, self.at_minus + other.at_minus)

    def __sub__(self, other: "MaximalDomainElement") -> "MaximalDomainElement":
        return MaximalDomainElement(self.at_plus - other.at_plus, self.at_minus - other.at_minus)

    def scaled(self, c: complex) -> "MaximalDomainElement":
        return MaximalDomainElement(self.at_plus.scaled(c), self.at_minus.scaled(c))


def zero_element(params: Parameters) -> MaximalDomainElement:
    return MaximalDomainElement(expansion(1, params), expansion(-1, params))


def _check_compatible(e1: EndpointExpansion, e2: EndpointExpansion) -> None:
    if e1.endpoint != e2.endpoint:
        raise EndpointMismatch(f"cannot combine expansions at {e1.endpoint:+d} and {e2.endpoint:+d}")
    if e1.alpha != e2.alpha or e1.beta != e2.beta:
        raise EndpointMismatch("expansions were built for different (alpha, beta)")


def differentiate(e: EndpointExpansion) -> EndpointExpansion:
    """Termwise d/dx; terms whose exponent is exactly zero drop out."""
    out = []
    for t in e.terms:
        if not t.p.is_zero():
            out.append(Term(-t.coeff * t.p.value(e.alpha, e.beta), t.p.shift(-1), t.q))
        if not t.q.is_zero():
            out.append(Term(t.coeff * t.q.value(e.alpha, e.beta), t.p, t.q.shift(-1)))
    return EndpointExpansion(e.endpoint, tuple(out), e.alpha, e.beta)


def differentiate_n(e: EndpointExpansion, k: int) -> EndpointExpansion:
    for _ in range(k):
        e = differentiate(e)
    return e


def multiply(e1: EndpointExpansion, e2: EndpointExpansion) -> EndpointExpansion:
    _check_compatible(e1, e2)
    out = [Term(a.coeff * b.coeff, a.p + b.p, a.q + b.q) for a in e1.terms for b in e2.terms]
    return EndpointExpansion(e1.endpoint, tuple(out), e1.alpha, e1.beta)


def _binom(r: float, m: int) -> float:
    out = 1.0
    for i in range(m):
        out *= (r - i) / (i + 1)
    return out


def _local_powers(e: EndpointExpansion) -> list[tuple[float, complex]]:
    """Rewrite each term as a series in the local variable y = 1 -/+ x.

    At x = 1 the far factor is (1+x)^q = 2^q (1 - y/2)^q; only the pieces
    with non-positive local exponent are returned, which is all a limit needs.
    """
    a, b = e.alpha, e.beta
    pieces = []
    for t in e.terms:
        if e.endpoint == 1:
            local, far = t.p.value(a, b), t.q.value(a, b)
        else:
            local, far = t.q.value(a, b), t.p.value(a, b)
        base = t.coeff * 2.0**far
        m = 0
        while local + m <= GROUP_TOL:
            c = base * _binom(far, m) * (-0.5) ** m
            if c != 0:
                pieces.append((local + m, c))
            m += 1
    return pieces


def endpoint_limit(e: EndpointExpansion) -> complex:
    """Limit of the expansion at its endpoint.

    Raises DivergentLimit when a group of negative local exponent does not
    cancel to 1e-9 relative to its largest member. Lone round-off residues
    (terms below 1e-9 of the largest piece anywhere in the expansion) are
    treated as cancelled too, since upstream subtractions leave them behind.
    """
    pieces = sorted(_local_powers(e), key=lambda pc: pc[0])
    overall = max((abs(t.coeff) for t in e.terms), default=0.0)
    groups: list[list[tuple[float, complex]]] = []
    for pc in pieces:
        if groups and abs(pc[0] - groups[-1][0][0]) <= GROUP_TOL:
            groups[-1].append(pc)
        else:
            groups.append([pc])
    result = 0j
    for g in groups:
        expo = g[0][0]
        total = sum(c for _, c in g)
        if abs(expo) <= GROUP_TOL:
            result += total
            continue
        biggest = max(abs(c) for _, c in g)
        if abs(total) > CANCEL_RTOL * biggest and abs(total) > CANCEL_RTOL * overall:
            raise DivergentLimit(expo, abs(total))
    return result


def weight_expansion(k: int, endpoint: int, params: Parameters) -> EndpointExpansion:
    """a_k(x) = C_k (1-x)^(alpha+k) (1+x)^(beta+k)."""
    return expansion(endpoint, params, [(params.coefficient(k), Exponent(k, 1, 0), Exponent(k, 0, 1))])


def _local(f, endpoint: int) -> EndpointExpansion:
    if isinstance(f, MaximalDomainElement):
        return f.at(endpoint)
    if f.endpoint != endpoint:
        raise EndpointMismatch(f"expansion is tagged {f.endpoint:+d}, requested {endpoint:+d}")
    return f


def sesquilinear_expression(fe: EndpointExpansion, ge: EndpointExpansion, params: Parameters) -> EndpointExpansion:
    """The un-limited double sum [f, g]_n(x) as an expansion near one endpoint."""
    _check_compatible(fe, ge)
    gc = ge.conjugate()
    n = params.n
    fd = [fe]
    gd = [gc]
    for _ in range(n):
        fd.append(differentiate(fd[-1]))
        gd.append(differentiate(gd[-1]))
    total = []
    for k in range(1, n + 1):
        w = weight_expansion(k, fe.endpoint, params)
        ag = multiply(w, gd[k])
        af = multiply(w, fd[k])
        for j in range(1, k + 1):
            sign = (-1) ** (k + j)
            first = multiply(differentiate_n(ag, k - j), fd[j - 1])
            second = multiply(differentiate_n(af, k - j), gd[j - 1])
            total.extend(Term(sign * t.coeff, t.p, t.q) for t in first.terms)
            total.extend(Term(-sign * t.coeff, t.p, t.q) for t in second.terms)
    return EndpointExpansion(fe.endpoint, tuple(total), fe.alpha, fe.beta)


def sesquilinear_form(f, g, params: Parameters, endpoint: int) -> complex:
    """[f, g]_n evaluated at x = endpoint, conjugating g."""
    fe, ge = _local(f, endpoint), _local(g, endpoint)
    if not fe or not ge:
        return 0j
    return endpoint_limit(sesquilinear_expression(fe, ge, params))


def quasi_derivative_expression(fe: EndpointExpansion, k: int, params: Parameters) -> EndpointExpansion:
    """f^[k] from the quasi-derivative recursion, before taking a limit."""
    n = params.n
    if k < 0 or k > 2 * n - 1:
        raise ValueError(f"quasi-derivative order must lie in 0..{2 * n - 1}")
    if k < n:
        return differentiate_n(fe, k)
    cur = multiply(weight_expansion(n, fe.endpoint, params), differentiate_n(fe, n))
    for i in range(1, k - n + 1):
        cur = multiply(weight_expansion(n - i, fe.endpoint, params), differentiate_n(fe, n - i)) - differentiate(cur)
    return cur


def quasi_derivative_symbolic(f, k: int, params: Parameters, endpoint: int) -> complex:
    """Endpoint value of f^[k]; finite on the maximal domain for n <= k <= 2n-1."""
    fe = _local(f, endpoint)
    if not fe:
        return 0j
    return endpoint_limit(quasi_derivative_expression(fe, k, params))


# ---------------------------------------------------------------------------
# numeric oracle: Taylor jets in extended precision plus Richardson extrapolation

ORACLE_LEVELS = tuple(range(8, 25))
ORACLE_DPS = 50
ORACLE_RTOL = 1e-6


def _jet_mul(a, b):
    n = len(a)
    return [mpmath.fsum(a[i] * b[r - i] for i in range(r + 1)) for r in range(n)]


def _jet_diff(a):
    return [a[r + 1] * (r + 1) for r in range(len(a) - 1)] + [mpmath.mpf(0)]


def _power_jet(base, power, sign, order):
    # Taylor coefficients in d of (base + sign*d)^power
    out = []
    c = base**power
    ratio = sign / base
    for r in range(order + 1):
        out.append(c)
        c = c * (power - r) / (r + 1) * ratio
    return out


def _expansion_jet(e: EndpointExpansion, x0, order: int):
    a, b = mpmath.mpf(e.alpha), mpmath.mpf(e.beta)
    total = [mpmath.mpc(0)] * (order + 1)
    for t in e.terms:
        p = t.p.i + t.p.s * a + t.p.t * b
        q = t.q.i + t.q.s * a + t.q.t * b
        jet = _jet_mul(_power_jet(1 - x0, p, -1, order), _power_jet(1 + x0, q, 1, order))
        c = mpmath.mpc(t.coeff.real, t.coeff.imag)
        total = [u + c * v for u, v in zip(total, jet)]
    return total


def _numeric_form(fe, ge, params: Parameters, x0):
    """Value of the double sum at an interior point, from Taylor jets."""
    n = params.n
    order = 2 * n
    fj = [_expansion_jet(fe, x0, order)]
    gj = [_expansion_jet(ge.conjugate(), x0, order)]
    for _ in range(n):
        fj.append(_jet_diff(fj[-1]))
        gj.append(_jet_diff(gj[-1]))
    a, b = mpmath.mpf(params.alpha), mpmath.mpf(params.beta)
    total = mpmath.mpc(0)
    for k in range(1, n + 1):
        wk = [params.coefficient(k) * v for v in _jet_mul(_power_jet(1 - x0, a + k, -1, order), _power_jet(1 + x0, b + k, 1, order))]
        ag = _jet_mul(wk, gj[k])
        af = _jet_mul(wk, fj[k])
        for j in range(1, k + 1):
            dag, daf = ag, af
            for _ in range(k - j):
                dag, daf = _jet_diff(dag), _jet_diff(daf)
            total += (-1) ** (k + j) * (dag[0] * fj[j - 1][0] - daf[0] * gj[j - 1][0])
    return total


def _candidate_exponents(fe, ge, params: Parameters, cap: float = 6.0) -> list[float]:
    """Positive powers of the local variable that can appear in the double sum."""
    weight = params.alpha if fe.endpoint == 1 else params.beta
    a, b = params.alpha, params.beta

    def local(t):
        return (t.p if fe.endpoint == 1 else t.q).value(a, b)

    base = {local(s) + local(t) + weight for s in fe.terms for t in ge.terms}
    cands = []
    for v in base:
        k = math.floor(-v)  # shifts by any integer occur, so start from the smallest positive member
        while v + k <= cap:
            if v + k > GROUP_TOL:
                cands.append(v + k)
            k += 1
    cands.sort()
    unique: list[float] = []
    for c in cands:
        if not unique or c - unique[-1] > 1e-9:
            unique.append(c)
    return unique


def numeric_limit_oracle(f, g, params: Parameters, endpoint: int) -> complex:
    """Independent numeric estimate of [f, g]_n at an endpoint.

    The double sum is evaluated in 50-digit arithmetic from Taylor jets at
    x_m = endpoint*(1 - 2^-m), m = 8..24, then Richardson-extrapolated over
    the powers of (1 -/+ x) that can occur.
    """
    fe, ge = _local(f, endpoint), _local(g, endpoint)
    if not fe or not ge:
        return 0j
    with mpmath.workdps(ORACLE_DPS):
        samples = []
        for m in ORACLE_LEVELS:
            h = mpmath.mpf(2) ** (-m)
            x0 = endpoint * (1 - h)
            samples.append(_numeric_form(fe, ge, params, x0))
        exps = _candidate_exponents(fe, ge, params)[: len(samples) - 2]
        column = samples
        diagonal = [column[-1]]
        for e in exps:
            r = mpmath.mpf(2) ** e
            column = [(r * column[i + 1] - column[i]) / (r - 1) for i in range(len(column) - 1)]
            diagonal.append(column[-1])
        est = diagonal[-1]
        scale = max(mpmath.mpf(1), abs(est))
        if len(diagonal) >= 2 and abs(diagonal[-1] - diagonal[-2]) > ORACLE_RTOL * scale:
            raise ExtrapolationUnstable(
                f"successive Richardson estimates differ by {float(abs(diagonal[-1] - diagonal[-2])):.3e}"
            )
        return complex(est)
