import itertools

import numpy as np
import pytest

from jacobi_powers.asymptotics import Parameters, sesquilinear_form
from jacobi_powers.triple import (
    build_basis,
    expected_interaction_pattern,
    gamma0,
    gamma0_from_recursion,
    gamma1,
    green_identity_residual,
    interaction_matrix,
    modified_gram_schmidt,
    regularized_basis,
    surjectivity_certificate,
)

PARAMS = [Parameters(a, b, n) for n in (1, 2, 3) for a, b in ((0.3, 0.7), (0.5, 0.5), (0.25, 0.75))]
ids = [f"n{p.n}-a{p.alpha}-b{p.beta}" for p in PARAMS]


@pytest.mark.parametrize("p", PARAMS, ids=ids)
def test_gram_schmidt_biorthogonality(p):
    basis = regularized_basis(p)
    for e in (-1, 1):
        phi, u = basis.phi(e), basis.u(e)
        for j, k in itertools.product(range(p.n), repeat=2):
            assert abs(sesquilinear_form(phi[j], u[k], p, e) - (j == k)) < 1e-12
            assert abs(sesquilinear_form(u[j], u[k], p, e)) < 1e-12


def test_u1_coefficients_n1():
    p = Parameters(0.3, 0.7, 1)
    basis = regularized_basis(p)
    assert basis.u_coeffs_plus[0][0].real == pytest.approx(1 / (0.3 * 2**1.7), rel=1e-13)
    # the form at -1 carries the opposite orientation, so the normalising coefficient is negative
    assert basis.u_coeffs_minus[0][0].real == pytest.approx(-1 / (0.7 * 2**1.3), rel=1e-13)


def test_u_coefficients_half_half():
    basis = regularized_basis(Parameters(0.5, 0.5, 1))
    assert basis.u_coeffs_plus[0][0].real == pytest.approx(0.7071067811865476, rel=1e-14)


def test_modified_gram_schmidt_rebuilds_for_new_params():
    b = build_basis(Parameters(0.3, 0.7, 1))
    out = modified_gram_schmidt(b, Parameters(0.5, 0.5, 1))
    assert out.params == Parameters(0.5, 0.5, 1) and out.has_u


@pytest.mark.parametrize("p", PARAMS, ids=ids)
def test_interaction_pattern(p):
    im = interaction_matrix(regularized_basis(p))
    assert im.matrix.shape == (4 * p.n, 4 * p.n)
    assert im.max_deviation < 1e-12


def test_pattern_shape_n2():
    pat = expected_interaction_pattern(2).real
    assert pat[0, 3] == 1 and pat[1, 2] == 1 and pat[3, 0] == -1 and pat[2, 1] == -1
    assert np.count_nonzero(pat) == 4


@pytest.mark.parametrize("p", PARAMS, ids=ids)
def test_green_identity_and_quasi_derivatives(p):
    basis = regularized_basis(p)
    funcs = basis.ordered()
    assert max(green_identity_residual(f, g, basis) for f in funcs for g in funcs) < 1e-12
    for f in funcs:
        assert np.max(np.abs(gamma0(f, basis) - gamma0_from_recursion(f, basis))) < 1e-12


@pytest.mark.parametrize("p", PARAMS, ids=ids)
def test_boundary_maps_are_surjective(p):
    m, det = surjectivity_certificate(regularized_basis(p))
    assert m.shape == (4 * p.n, 4 * p.n)
    assert abs(abs(det) - 1) < 1e-12


def test_boundary_values_of_basis_n1():
    p = Parameters(0.3, 0.7, 1)
    basis = regularized_basis(p)
    assert np.allclose(gamma0(basis.u_plus[0], basis), [0, 1])
    assert np.allclose(gamma1(basis.phi_plus[0], basis), [0, 1])
    assert np.allclose(gamma0(basis.phi_plus[0], basis), [0, 0])


def test_gamma1_picks_derivative_n2():
    p = Parameters(0.3, 0.7, 2)
    basis = regularized_basis(p)
    # phi_2^+ = (1 - x) has derivative -1 at +1
    assert np.allclose(gamma1(basis.phi_plus[1], basis), [0, 0, -1, 0])
