"""Spectral parameter plumbing, connection constants and the 2n x 2n Weyl functions.

Block layout: slot i (0-based) of each n-block belongs to root number n-1-i,
so slot 0 carries the last root and the pair (i, n+i) forms one 2x2 block.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence, Union

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from .asymptotics import ZERO, Exponent, Parameters, differentiate, endpoint_limit, expansion, multiply, weight_expansion
from .errors import (
    DegenerateSpectralPoint,
    ExceptionalParameter,
    OnSpectrum,
    SingularMatrix,
)
from .specfun import hyp2f1, reciprocal_gamma

ROOT_COLLISION_TOL = 1e-10
EXCEPTIONAL_TOL = 1e-8
ON_SPECTRUM_TOL = 1e-12
ACCEPT_TOL = 1e-8
ZERO_EXCLUSION = 1e-8
GRID_POINTS = 2000


# ---------------------------------------------------------------------------
# spectral parameter


@dataclass(frozen=True)
class SpectralPoint:
    lam: complex
    roots: tuple[complex, ...]  # lambda_j, j = 0..n-1
    mus: tuple[complex, ...]  # mu_j (mu_j + alpha + beta + 1) = lambda_j


def _mu(root: complex, params: Parameters) -> complex:
    s = params.alpha + params.beta + 1.0
    return (-s + cmath.sqrt(s * s + 4.0 * root)) / 2.0


def _roots(lam: complex, n: int) -> list[complex]:
    lam = complex(lam)
    if lam == 0:
        return [0j] * n
    if lam.imag < 0:
        # conjugates of the upper half-plane ordering, so that M(conj lam) = M(lam)^*
        return [r.conjugate() for r in _roots(lam.conjugate(), n)]
    mod = abs(lam) ** (1.0 / n)
    arg = cmath.phase(lam)
    return [mod * cmath.exp(1j * (arg + 2.0 * math.pi * j) / n) for j in range(n)]


def spectral_decompose(lam: complex, params: Parameters) -> SpectralPoint:
    """Split lambda into its n-th roots and the matching mu_j."""
    lam = complex(lam)
    if lam == 0:
        raise DegenerateSpectralPoint("lambda = 0 makes all roots coincide")
    roots = _roots(lam, params.n)
    mus = [_mu(r, params) for r in roots]
    for a in range(len(mus)):
        for b in range(a + 1, len(mus)):
            if abs(mus[a] - mus[b]) <= ROOT_COLLISION_TOL:
                raise DegenerateSpectralPoint(f"mu_{a} and mu_{b} coincide at lambda={lam!r}")
    return SpectralPoint(lam, tuple(roots), tuple(mus))


# ---------------------------------------------------------------------------
# connection constants


@dataclass(frozen=True)
class ConnectionConstants:
    gamma: np.ndarray
    eps: np.ndarray
    delta: np.ndarray
    eta: np.ndarray
    e: float
    c: tuple[complex, complex, complex, complex] | None = None  # c1..c4, n = 1 only

    def normalization_residual(self) -> np.ndarray:
        return np.abs(self.gamma * self.eta - self.delta * self.eps - 1.0)


def normalization_constant(params: Parameters) -> float:
    a, b = params.alpha, params.beta
    return math.sin(math.pi * b) / (2.0**b * math.sin(math.pi * a))


def _constants_at(mu: complex, params: Parameters) -> tuple[complex, complex, complex, complex]:
    """(gamma, eps, delta, eta) at one mu; entire in mu, no guard."""
    a, b = params.alpha, params.beta
    s = a + b + 1.0
    sb = math.sin(-b * math.pi)
    e = normalization_constant(params)
    rg = reciprocal_gamma
    gam = -math.pi * e * 2.0**b * rg(-mu) * rg(mu + s) / sb
    eps = -math.pi * 2.0**b * rg(-mu - a) * rg(mu + b + 1.0) / sb
    dlt = math.pi * e * rg(mu + a + 1.0) * rg(-mu - b) / sb
    eta = math.pi * rg(1.0 + mu) * rg(-mu - a - b) / sb
    return gam, eps, dlt, eta


def first_section_constants(mu: complex, params: Parameters) -> tuple[complex, complex, complex, complex]:
    """c1..c4 of the uncomposed (n = 1) connection problem."""
    a, b = params.alpha, params.beta
    s = a + b + 1.0
    sb = math.sin(-b * math.pi)
    sa = math.sin(a * math.pi)
    rg = reciprocal_gamma
    c1 = -math.pi * rg(mu + a + 1.0) * rg(-mu - b) / sb
    c2 = -math.pi * b * 2.0**s * rg(-mu) * rg(mu + s) / sb
    c3 = -math.pi * rg(1.0 + mu) * rg(-mu - a - b) / (a * 2.0**s * sa)
    c4 = -b * math.pi * rg(-mu - a) * rg(mu + b + 1.0) / (a * sa)
    return c1, c2, c3, c4


def _exceptional(mu: complex, params: Parameters) -> bool:
    a, b = params.alpha, params.beta
    for z in (mu + a + 1.0, mu + b + 1.0, 1.0 + mu, mu + a + b + 1.0):
        if abs(z - round(z.real)) <= EXCEPTIONAL_TOL:
            return True
    return False


def connection_constants(sp: SpectralPoint, params: Parameters) -> ConnectionConstants:
    """gamma_j, eps_j, delta_j, eta_j for every root, plus e and (n = 1) c1..c4.

    Raises ExceptionalParameter when some mu_j sits on the lattice where the
    closed form of e is not established.
    """
    bad = [mu for mu in sp.mus if _exceptional(mu, params)]
    if bad:
        raise ExceptionalParameter(bad)
    vals = np.array([_constants_at(mu, params) for mu in sp.mus], dtype=complex)
    c = first_section_constants(sp.mus[0], params) if params.n == 1 else None
    return ConnectionConstants(vals[:, 0], vals[:, 1], vals[:, 2], vals[:, 3], normalization_constant(params), c)


# ---------------------------------------------------------------------------
# extensions


@dataclass(frozen=True)
class KernelGamma0:
    name = "friedrichs"


@dataclass(frozen=True)
class KernelGamma1:
    name = "gamma1"


@dataclass(frozen=True)
class Separated:
    theta_diag: tuple[float, ...]
    name = "separated"

    def __post_init__(self):
        object.__setattr__(self, "theta_diag", tuple(float(c) for c in self.theta_diag))


@dataclass(frozen=True)
class Periodic:
    name = "periodic"


@dataclass(frozen=True, eq=False)
class GeneralRelation:
    """Self-adjoint relation given by 2n x 2n matrices A, B (transform W = [[B*, -A*], [A*, B*]])."""

    A: np.ndarray
    B: np.ndarray
    name = "general"

    def __post_init__(self):
        A = np.asarray(self.A, dtype=complex)
        B = np.asarray(self.B, dtype=complex)
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "B", B)
        if max(relation_residuals(A, B).values()) > 1e-10:
            raise ValueError("A, B do not satisfy the self-adjoint relation conditions")


ExtensionSpec = Union[KernelGamma0, KernelGamma1, Separated, Periodic, GeneralRelation]


def relation_residuals(A: np.ndarray, B: np.ndarray) -> dict[str, float]:
    A, B = np.asarray(A, dtype=complex), np.asarray(B, dtype=complex)
    I = np.eye(A.shape[0])
    H = lambda m: m.conj().T  # noqa: E731
    return {
        "A*B = B*A": float(np.max(np.abs(H(A) @ B - H(B) @ A))),
        "AB* = BA*": float(np.max(np.abs(A @ H(B) - B @ H(A)))),
        "AA* + BB* = I": float(np.max(np.abs(A @ H(A) + B @ H(B) - I))),
        "A*A + B*B = I": float(np.max(np.abs(H(A) @ A + H(B) @ B - I))),
    }


def periodic_relation(n: int) -> tuple[np.ndarray, np.ndarray]:
    """(A, B) whose transform couples each quasi-derivative across the two endpoints."""
    I = np.eye(n)
    Z = np.zeros((n, n))
    r = 1.0 / math.sqrt(2.0)
    A_star = r * np.block([[Z, Z], [-I, I]])
    B_star = r * np.block([[I, I], [Z, Z]])
    return A_star.conj().T.astype(complex), B_star.conj().T.astype(complex)


def transform_matrix(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    A_s, B_s = np.asarray(A).conj().T, np.asarray(B).conj().T
    return np.block([[B_s, -A_s], [A_s, B_s]]).astype(complex)


def boundary_j(n2: int) -> np.ndarray:
    """J = [[0, -iI], [iI, 0]] on C^{n2} x C^{n2}."""
    I = np.eye(n2)
    Z = np.zeros((n2, n2))
    return np.block([[Z, -1j * I], [1j * I, Z]])


def transform_residuals(W: np.ndarray) -> tuple[float, float]:
    J = boundary_j(W.shape[0] // 2)
    Wh = W.conj().T
    return float(np.max(np.abs(Wh @ J @ W - J))), float(np.max(np.abs(W @ J @ Wh - J)))


def transform_weyl(M: np.ndarray, W: np.ndarray) -> np.ndarray:
    """Weyl function of the transformed triple: (W21 + W22 M)(W11 + W12 M)^-1."""
    k = M.shape[0]
    W11, W12, W21, W22 = W[:k, :k], W[:k, k:], W[k:, :k], W[k:, k:]
    den = W11 + W12 @ M
    try:
        return (W21 + W22 @ M) @ np.linalg.inv(den)
    except np.linalg.LinAlgError as exc:
        raise SingularMatrix(str(exc)) from exc


# ---------------------------------------------------------------------------
# Weyl functions


@dataclass(frozen=True, eq=False)
class WeylMatrix:
    lam: complex
    ext: ExtensionSpec
    m: np.ndarray


def _blocks(n: int, block: Callable[[int, int], np.ndarray]) -> np.ndarray:
    m = np.zeros((2 * n, 2 * n), dtype=complex)
    for i in range(n):
        b = block(i, n - 1 - i)
        idx = [i, n + i]
        m[np.ix_(idx, idx)] = b
    return m


def _separated_condition(ca: float, cb: float, g, e, d, h):
    # D/gamma with D = (ca g + e)(cb g - d) - 1, using g h - d e = 1
    return ca * cb * g - ca * d + cb * e - h


def weyl_m(lam: complex, ext: ExtensionSpec, params: Parameters) -> WeylMatrix:
    """Assemble the 2n x 2n Weyl function of one extension family at lambda."""
    sp = spectral_decompose(lam, params)
    cc = connection_constants(sp, params)
    n = params.n
    g, e, d, h = cc.gamma, cc.eps, cc.delta, cc.eta

    def guard(val, what):
        if abs(val) < ON_SPECTRUM_TOL:
            raise OnSpectrum(complex(lam), what)

    if isinstance(ext, KernelGamma0):

        def block(i, r):
            guard(g[r], f"gamma_{r}")
            return np.array([[-e[r], 1.0], [1.0, d[r]]]) / g[r]

    elif isinstance(ext, KernelGamma1):
        # Weyl function of the triple {Gamma_1, -Gamma_0}, i.e. -(M_0)^-1

        def block(i, r):
            guard(h[r], f"eta_{r}")
            return np.array([[d[r], -1.0], [-1.0, -e[r]]]) / h[r]

    elif isinstance(ext, Separated):
        th = ext.theta_diag
        if len(th) != 2 * n:
            raise ValueError(f"theta needs {2 * n} entries, got {len(th)}")

        def block(i, r):
            ca, cb = th[i], th[n + i]
            q = _separated_condition(ca, cb, g[r], e[r], d[r], h[r])
            guard(q, f"separated condition, slot {i}")
            return np.array([[cb * g[r] - d[r], 1.0], [1.0, ca * g[r] + e[r]]]) / q

    elif isinstance(ext, Periodic):

        def block(i, r):
            den = e[r] - d[r] + 2.0
            guard(den, f"delta_{r} - eps_{r} = 2")
            return np.array([[2.0 * h[r], e[r] + d[r]], [e[r] + d[r], 2.0 * g[r]]]) / den

    elif isinstance(ext, GeneralRelation):
        m0 = weyl_m(lam, KernelGamma0(), params).m
        return WeylMatrix(complex(lam), ext, transform_weyl(m0, transform_matrix(ext.A, ext.B)))
    else:
        raise TypeError(f"unknown extension {ext!r}")
    return WeylMatrix(complex(lam), ext, _blocks(n, block))


def theta_inverse_probe(lam: complex, theta: np.ndarray, params: Parameters) -> np.ndarray:
    """(theta - M_0(lambda))^-1; SingularMatrix marks an eigenvalue of the theta-extension."""
    theta = np.asarray(theta, dtype=complex)
    if np.max(np.abs(theta - theta.conj().T)) > 1e-12:
        raise ValueError("theta must be self-adjoint")
    m0 = weyl_m(lam, KernelGamma0(), params).m
    a = theta - m0
    if np.linalg.cond(a) > 1e12:
        raise SingularMatrix(f"theta - M_0 is singular at lambda={lam!r}")
    return np.linalg.inv(a)


# ---------------------------------------------------------------------------
# spectra


@dataclass(frozen=True)
class Eigenvalue:
    lam: float
    residual: float
    source: str
    index: int | None = None


@dataclass
class SpectrumResult:
    eigenvalues: list[Eigenvalue]
    failures: list[str] = field(default_factory=list)

    @property
    def values(self) -> list[float]:
        return [ev.lam for ev in self.eigenvalues]


def _kernel_condition(lam: complex, params: Parameters, which: int) -> complex:
    # product over roots of gamma_j (which=0) or eta_j (which=3); real on the real axis
    out = 1.0 + 0j
    for r in _roots(lam, params.n):
        out *= _constants_at(_mu(r, params), params)[which]
    return out


def closed_form_spectrum(family: str, m_max: int, params: Parameters) -> SpectrumResult:
    """sigma0 = {m^n (m+a+b+1)^n}, sigma1 = {(m+1)^n (m-a-b)^n}, m = 0..m_max."""
    if m_max < 0:
        raise ValueError("m_max must be non-negative")
    a, b, n = params.alpha, params.beta, params.n
    out = []
    for m in range(m_max + 1):
        if family == "sigma0":
            lam, which = (m * (m + a + b + 1.0)) ** n, 0
        elif family == "sigma1":
            lam, which = ((m + 1.0) * (m - a - b)) ** n, 3
        else:
            raise ValueError(f"unknown family {family!r}")
        out.append(Eigenvalue(lam, abs(_kernel_condition(lam, params, which)), "closed_form", m))
    return SpectrumResult(out)


def condition_functions(ext: ExtensionSpec, params: Parameters) -> list[Callable[[float], complex]]:
    """Entire functions of lambda whose zeros are the poles of the extension's Weyl function."""
    n = params.n
    if isinstance(ext, KernelGamma0):
        return [lambda lam: _kernel_condition(lam, params, 0)]
    if isinstance(ext, KernelGamma1):
        return [lambda lam: _kernel_condition(lam, params, 3)]

    def slot(i, fn):
        r = n - 1 - i

        def cond(lam):
            return fn(i, _constants_at(_mu(_roots(lam, n)[r], params), params))

        return cond

    if isinstance(ext, Separated):
        th = ext.theta_diag
        if len(th) != 2 * n:
            raise ValueError(f"theta needs {2 * n} entries, got {len(th)}")
        return [slot(i, lambda i, c: _separated_condition(th[i], th[n + i], *c)) for i in range(n)]
    if isinstance(ext, Periodic):
        return [slot(i, lambda i, c: c[2] - c[1] - 2.0) for i in range(n)]
    raise TypeError(f"no scan condition for {ext!r}")


def _scan_one(cond, grid: np.ndarray, failures: list[float]) -> list[tuple[float, float]]:
    vals = np.array([cond(x) for x in grid])
    mags = np.abs(vals)
    real = np.abs(vals.imag) <= 1e-9 * np.maximum(mags, 1e-300)
    found: list[tuple[float, float]] = []
    for k in range(len(grid) - 1):
        if vals[k] == 0:
            found.append((grid[k], 0.0))
            continue
        if real[k] and real[k + 1] and vals[k].real * vals[k + 1].real < 0:
            x = brentq(lambda t: cond(t).real, grid[k], grid[k + 1], xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=200)
            found.append((x, abs(cond(x))))
    # zeros without a real sign change: local minima of |condition|
    for k in range(1, len(grid) - 1):
        if mags[k] <= mags[k - 1] and mags[k] <= mags[k + 1] and not (real[k - 1] and real[k + 1] and vals[k - 1].real * vals[k + 1].real < 0):
            res = minimize_scalar(lambda t: abs(cond(t)), bounds=(grid[k - 1], grid[k + 1]), method="bounded", options={"xatol": 1e-14})
            x = float(res.x)
            r = abs(cond(x))
            if r < ACCEPT_TOL:
                found.append((x, r))
            elif r < 1e-4 * max(1.0, float(np.median(mags))):
                failures.append((x, r))
    return found


def pole_scan(ext: ExtensionSpec, interval: tuple[float, float], params: Parameters, points: int = GRID_POINTS) -> SpectrumResult:
    """Locate real eigenvalues of an extension inside [lo, hi] from its condition functions."""
    lo, hi = float(interval[0]), float(interval[1])
    if not lo < hi:
        raise ValueError("interval must satisfy lo < hi")
    grid = np.linspace(lo, hi, points)
    if lo < 0.0 < hi:
        # lambda = 0 is evaluated exactly; nearby grid points inside the exclusion radius are dropped
        grid = np.sort(np.concatenate([grid[np.abs(grid) > ZERO_EXCLUSION], [0.0]]))
    stalled: list[tuple[float, float]] = []
    found: list[tuple[float, float]] = []
    for cond in condition_functions(ext, params):
        found.extend(_scan_one(cond, grid, stalled))
    found.sort()
    merged: list[tuple[float, float]] = []
    for x, r in found:
        if merged and abs(x - merged[-1][0]) <= 1e-9 * max(1.0, abs(x)):
            if r < merged[-1][1]:
                merged[-1] = (x, r)
            continue
        merged.append((x, r))
    # a stalled minimum next to an accepted root is the same root seen from a neighbouring window
    failures = [
        f"candidate near lambda={x:.12g} stalled at |condition|={r:.3e}"
        for x, r in stalled
        if not any(abs(x - y) <= 1e-6 * max(1.0, abs(y)) for y, _ in merged)
    ]
    return SpectrumResult([Eigenvalue(float(x), float(r), "scan") for x, r in merged], failures)


# ---------------------------------------------------------------------------
# Herglotz validation


@dataclass(frozen=True)
class HerglotzEntry:
    lam: complex
    min_imag_eig: float
    symmetry_error: float
    ok: bool


def herglotz_check(ext: ExtensionSpec, lambda_samples: Sequence[complex], params: Parameters, positivity_tol: float = 1e-9, symmetry_tol: float = 1e-10) -> list[HerglotzEntry]:
    out = []
    for lam in lambda_samples:
        lam = complex(lam)
        if lam.imag == 0:
            raise ValueError("Herglotz samples need a nonzero imaginary part")
        up = lam if lam.imag > 0 else lam.conjugate()
        m = weyl_m(up, ext, params).m
        mc = weyl_m(up.conjugate(), ext, params).m
        im = (m - m.conj().T) / 2j
        min_eig = float(np.min(np.linalg.eigvalsh((im + im.conj().T) / 2)))
        sym = float(np.max(np.abs(mc - m.conj().T)))
        out.append(HerglotzEntry(lam, min_eig, sym, min_eig >= -positivity_tol and sym < symmetry_tol))
    return out


def herglotz_from_matrices(records: Sequence[tuple[complex, np.ndarray]], positivity_tol: float = 1e-9, symmetry_tol: float = 1e-10) -> list[HerglotzEntry]:
    """Same verdicts from stored (lambda, M) pairs; symmetry is checked where conj(lambda) is also present."""
    lookup = {complex(l): np.asarray(m) for l, m in records}
    out = []
    for lam, m in records:
        lam = complex(lam)
        if lam.imag <= 0:
            continue
        m = np.asarray(m)
        im = (m - m.conj().T) / 2j
        min_eig = float(np.min(np.linalg.eigvalsh((im + im.conj().T) / 2)))
        partner = lookup.get(lam.conjugate())
        sym = float(np.max(np.abs(partner - m.conj().T))) if partner is not None else 0.0
        out.append(HerglotzEntry(lam, min_eig, sym, min_eig >= -positivity_tol and sym < symmetry_tol))
    return out


# ---------------------------------------------------------------------------
# the uncomposed operator (n = 1): solutions, gamma-field, first-section m-functions


def fundamental_solutions_n1(lam: complex, x: float, params: Parameters) -> tuple[complex, complex]:
    """(w1, w2) at x from their representations around x = -1."""
    if params.n != 1:
        raise ValueError("the fundamental system is only available for n = 1")
    a, b = params.alpha, params.beta
    s = a + b + 1.0
    mu = _mu(complex(lam), params)
    z = (1.0 + x) / 2.0
    w1 = -hyp2f1(-mu, mu + s, b + 1.0, z)
    w2 = z ** (-b) / (b * 2.0**s) * hyp2f1(-mu - b, mu + a + 1.0, 1.0 - b, z)
    return w1, w2


def frobenius_expansions_n1(lam: complex, params: Parameters, terms: int = 3):
    """Leading terms of w1, w2 near x = -1 as endpoint expansions."""
    if params.n != 1:
        raise ValueError("only available for n = 1")
    a, b = params.alpha, params.beta
    s = a + b + 1.0
    mu = _mu(complex(lam), params)

    def series(p, q, c, lead, scale, base_q):
        out = []
        coef = 1.0 + 0j
        for m in range(terms):
            out.append((scale * coef * 2.0 ** (-m), ZERO, base_q.shift(m)))
            coef *= (p + m) * (q + m) / ((c + m) * (m + 1))
        return expansion(-1, params, out)

    w1 = series(-mu, mu + s, b + 1.0, None, -1.0, ZERO)
    w2 = series(-mu - b, mu + a + 1.0, 1.0 - b, None, 2.0**b / (b * 2.0**s), Exponent(0, 0, -1))
    return w1, w2


def first_section_operations_minus(fe, params: Parameters) -> tuple[complex, complex]:
    """(f^[0](-1), f^[1](-1)) of the uncomposed operator: lim -f - (1+x) f'/beta and lim -a_1 f'."""
    b = params.beta
    df = differentiate(fe)
    one_plus = expansion(-1, params, [(1.0, ZERO, Exponent(1))])
    f0 = endpoint_limit(fe.scaled(-1.0) - multiply(one_plus, df).scaled(1.0 / b))
    f1 = endpoint_limit(multiply(weight_expansion(1, -1, params), df).scaled(-1.0))
    return f0, f1


def gamma_field_n1(lam: complex, x: float, params: Parameters) -> tuple[complex, complex]:
    """(w1, w2) times (1/c3) [[c3, 0], [-c1, 1]]."""
    if params.n != 1:
        raise ValueError("the gamma-field is only available for n = 1")
    mu = _mu(complex(lam), params)
    c1, _, c3, _ = first_section_constants(mu, params)
    if abs(c3) < ON_SPECTRUM_TOL:
        raise OnSpectrum(complex(lam), "c3 = 0")
    w1, w2 = fundamental_solutions_n1(lam, x, params)
    return w1 - c1 / c3 * w2, w2 / c3


def first_section_m_function(lam: complex, params: Parameters, which: str = "A0") -> np.ndarray:
    """2x2 m-functions of the uncomposed operator in the c1..c4 convention.

    A0 (kernel of f^[0]) has poles at the zeros of c3, A1 at the zeros of c2.
    """
    if params.n != 1:
        raise ValueError("only available for n = 1")
    mu = _mu(complex(lam), params)
    c1, c2, c3, c4 = first_section_constants(mu, params)
    if which == "A0":
        if abs(c3) < ON_SPECTRUM_TOL:
            raise OnSpectrum(complex(lam), "c3 = 0")
        return np.array([[-c1, 1.0], [1.0, -c4]]) / c3
    if which == "A1":
        if abs(c2) < ON_SPECTRUM_TOL:
            raise OnSpectrum(complex(lam), "c2 = 0")
        return np.array([[-c4, 1.0], [1.0, -c1]]) / c2
    raise ValueError("which must be 'A0' or 'A1'")
