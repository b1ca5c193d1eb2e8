"""Defect-space basis, modified Gram-Schmidt and the boundary maps Gamma_0, Gamma_1."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .asymptotics import (
    ZERO,
    Exponent,
    MaximalDomainElement,
    Parameters,
    expansion,
    quasi_derivative_symbolic,
    sesquilinear_form,
)
from .errors import DegenerateDenominator

DENOMINATOR_TOL = 1e-12


def _one_sided(params: Parameters, endpoint: int, coeff: complex, local: Exponent) -> MaximalDomainElement:
    # a single power of (1 -/+ x) at one endpoint, identically zero at the other
    if endpoint == 1:
        plus = expansion(1, params, [(coeff, local, ZERO)])
        minus = expansion(-1, params)
    else:
        plus = expansion(1, params)
        minus = expansion(-1, params, [(coeff, ZERO, local)])
    return MaximalDomainElement(plus, minus)


@dataclass(frozen=True)
class BasisFamily:
    """phi_j, v_k and (after Gram-Schmidt) u_k at both endpoints, 1-based in the docs, 0-based here.

    ``u_coeffs_plus[k][i]`` is the weight of v_{i+1}^+ in u_{k+1}^+.
    """

    params: Parameters
    phi_plus: tuple[MaximalDomainElement, ...]
    phi_minus: tuple[MaximalDomainElement, ...]
    v_plus: tuple[MaximalDomainElement, ...]
    v_minus: tuple[MaximalDomainElement, ...]
    u_plus: tuple[MaximalDomainElement, ...] = ()
    u_minus: tuple[MaximalDomainElement, ...] = ()
    u_coeffs_plus: tuple[tuple[complex, ...], ...] = ()
    u_coeffs_minus: tuple[tuple[complex, ...], ...] = ()

    @property
    def has_u(self) -> bool:
        return len(self.u_plus) == self.params.n

    def phi(self, endpoint: int):
        return self.phi_plus if endpoint == 1 else self.phi_minus

    def v(self, endpoint: int):
        return self.v_plus if endpoint == 1 else self.v_minus

    def u(self, endpoint: int):
        return self.u_plus if endpoint == 1 else self.u_minus

    def ordered(self) -> list[MaximalDomainElement]:
        """phi^- then u^- (descending), phi^+ then u^+ (descending)."""
        n = self.params.n
        out = []
        for e in (-1, 1):
            out.extend(self.phi(e))
            out.extend(self.u(e)[k] for k in range(n - 1, -1, -1))
        return out


def build_basis(params: Parameters) -> BasisFamily:
    n = params.n
    phi_p = tuple(_one_sided(params, 1, 1.0, Exponent(j - 1)) for j in range(1, n + 1))
    phi_m = tuple(_one_sided(params, -1, 1.0, Exponent(j - 1)) for j in range(1, n + 1))
    v_p = tuple(_one_sided(params, 1, 1.0, Exponent(n - k, -1, 0)) for k in range(1, n + 1))
    v_m = tuple(_one_sided(params, -1, 1.0, Exponent(n - k, 0, -1)) for k in range(1, n + 1))
    return BasisFamily(params, phi_p, phi_m, v_p, v_m)


def _gram_schmidt_side(basis: BasisFamily, endpoint: int):
    params = basis.params
    n = params.n
    phi, v = basis.phi(endpoint), basis.v(endpoint)
    us: list[MaximalDomainElement] = []
    coeffs: list[np.ndarray] = []
    for k in range(n):
        denom = sesquilinear_form(phi[k], v[k], params, endpoint)
        if abs(denom) < DENOMINATOR_TOL:
            raise DegenerateDenominator(k + 1, endpoint, denom)
        acc = v[k]
        c = np.zeros(n, dtype=complex)
        c[k] = 1.0
        for j in range(k):
            w = sesquilinear_form(phi[j], v[k], params, endpoint) / sesquilinear_form(phi[j], us[j], params, endpoint)
            acc = acc - us[j].scaled(w)
            c = c - w * coeffs[j]
        us.append(acc.scaled(1.0 / denom))
        coeffs.append(c / denom)
    return tuple(us), tuple(tuple(complex(x) for x in c) for c in coeffs)


def modified_gram_schmidt(basis: BasisFamily, params: Parameters | None = None) -> BasisFamily:
    """Populate u_k^+ and u_k^- by the modified Gram-Schmidt recursion, k = 1..n in order."""
    if params is not None and params != basis.params:
        basis = build_basis(params)
    up, cp = _gram_schmidt_side(basis, 1)
    um, cm = _gram_schmidt_side(basis, -1)
    return BasisFamily(
        basis.params, basis.phi_plus, basis.phi_minus, basis.v_plus, basis.v_minus, up, um, cp, cm
    )


def regularized_basis(params: Parameters) -> BasisFamily:
    return modified_gram_schmidt(build_basis(params))


def endpoint_interaction(basis: BasisFamily, endpoint: int) -> np.ndarray:
    """2n x 2n forms over (phi_1..phi_n, u_n..u_1) at one endpoint."""
    n = basis.params.n
    funcs = list(basis.phi(endpoint)) + [basis.u(endpoint)[k] for k in range(n - 1, -1, -1)]
    m = np.zeros((2 * n, 2 * n), dtype=complex)
    for r, f in enumerate(funcs):
        for c, g in enumerate(funcs):
            m[r, c] = sesquilinear_form(f, g, basis.params, endpoint)
    return m


def expected_interaction_pattern(n: int) -> np.ndarray:
    """Zero diagonal blocks, anti-identity upper right, minus anti-identity lower left.

    The lower-left sign follows from antisymmetry of the form on real functions.
    """
    anti = np.fliplr(np.eye(n))
    z = np.zeros((n, n))
    return np.block([[z, anti], [-anti, z]]).astype(complex)


@dataclass(frozen=True)
class InteractionMatrix:
    matrix: np.ndarray  # 4n x 4n, endpoint -1 block first
    deviation: np.ndarray  # entrywise |matrix - expected pattern|

    @property
    def max_deviation(self) -> float:
        return float(np.max(self.deviation))


def interaction_matrix(basis: BasisFamily, params: Parameters | None = None) -> InteractionMatrix:
    n = basis.params.n
    z = np.zeros((2 * n, 2 * n), dtype=complex)
    full = np.block([[endpoint_interaction(basis, -1), z], [z, endpoint_interaction(basis, 1)]])
    pat = expected_interaction_pattern(n)
    expected = np.block([[pat, z], [z, pat]])
    return InteractionMatrix(full, np.abs(full - expected))


def gamma0(f: MaximalDomainElement, basis: BasisFamily, params: Parameters | None = None) -> np.ndarray:
    """(-f^[n](-1), ..., -f^[2n-1](-1), f^[n](1), ..., f^[2n-1](1)) via the phi_s pairings."""
    p = basis.params
    n = p.n
    out = np.zeros(2 * n, dtype=complex)
    for i in range(n):
        s = n - i
        scale = 1.0 / math.factorial(s - 1)
        out[i] = scale * sesquilinear_form(f, basis.phi_minus[s - 1], p, -1)
        out[n + i] = (-1) ** s * scale * sesquilinear_form(f, basis.phi_plus[s - 1], p, 1)
    return out


def gamma1(f: MaximalDomainElement, basis: BasisFamily, params: Parameters | None = None) -> np.ndarray:
    """(f^{n-1}(-1), ..., f^{0}(-1), f^{n-1}(1), ..., f^{0}(1)), regularized by the u_j pairings."""
    p = basis.params
    n = p.n
    out = np.zeros(2 * n, dtype=complex)
    for i in range(n):
        j = n - i
        fac = math.factorial(j - 1)
        out[i] = fac * sesquilinear_form(f, basis.u_minus[j - 1], p, -1)
        out[n + i] = (-1) ** (j - 1) * fac * sesquilinear_form(f, basis.u_plus[j - 1], p, 1)
    return out


def gamma0_from_recursion(f: MaximalDomainElement, basis: BasisFamily) -> np.ndarray:
    """Gamma_0 assembled from the quasi-derivative recursion instead of the phi pairings."""
    p = basis.params
    n = p.n
    out = np.zeros(2 * n, dtype=complex)
    for i in range(n):
        out[i] = -quasi_derivative_symbolic(f, n + i, p, -1)
        out[n + i] = quasi_derivative_symbolic(f, n + i, p, 1)
    return out


def green_identity_residual(f, g, basis: BasisFamily, params: Parameters | None = None) -> float:
    p = basis.params
    lhs = sesquilinear_form(f, g, p, 1) - sesquilinear_form(f, g, p, -1)
    g0f, g1f = gamma0(f, basis), gamma1(f, basis)
    g0g, g1g = gamma0(g, basis), gamma1(g, basis)
    rhs = np.vdot(g0g, g1f) - np.vdot(g1g, g0f)  # <x, y> = sum x_i conj(y_i)
    return float(abs(lhs - rhs))


def surjectivity_certificate(basis: BasisFamily, params: Parameters | None = None) -> tuple[np.ndarray, complex]:
    """Columns: (Gamma_0 f; Gamma_1 f) for the 4n ordered basis functions."""
    cols = [np.concatenate([gamma0(f, basis), gamma1(f, basis)]) for f in basis.ordered()]
    m = np.column_stack(cols)
    return m, complex(np.linalg.det(m))
