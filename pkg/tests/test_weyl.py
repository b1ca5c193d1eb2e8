import cmath

import numpy as np
import pytest

from jacobi_powers.asymptotics import Parameters
from jacobi_powers.errors import DegenerateSpectralPoint, ExceptionalParameter, OnSpectrum, SingularMatrix
from jacobi_powers.weyl import (
    GeneralRelation,
    KernelGamma0,
    KernelGamma1,
    Periodic,
    Separated,
    boundary_j,
    closed_form_spectrum,
    connection_constants,
    first_section_constants,
    first_section_m_function,
    first_section_operations_minus,
    frobenius_expansions_n1,
    fundamental_solutions_n1,
    gamma_field_n1,
    herglotz_check,
    periodic_relation,
    pole_scan,
    relation_residuals,
    spectral_decompose,
    theta_inverse_probe,
    transform_matrix,
    transform_residuals,
    transform_weyl,
    weyl_m,
)

P1 = Parameters(0.3, 0.7, 1)
P2 = Parameters(0.3, 0.7, 2)
SAMPLES = (1j, 1 + 2j, -3 + 0.5j, 10 + 0.1j)


@pytest.mark.parametrize("n", [1, 2, 3])
@pytest.mark.parametrize("lam", [2.0, -5 + 1j, 0.3 - 4j])
def test_spectral_decomposition(n, lam):
    p = Parameters(0.3, 0.7, n)
    sp = spectral_decompose(lam, p)
    s = 2.0
    for r, mu in zip(sp.roots, sp.mus):
        assert abs(r**n - lam) < 1e-12 * abs(lam)
        assert abs(mu * (mu + s) - r) < 1e-12 * max(1, abs(r))


def test_spectral_decomposition_degenerate():
    with pytest.raises(DegenerateSpectralPoint):
        spectral_decompose(0, P2)
    with pytest.raises(DegenerateSpectralPoint):
        spectral_decompose(1e-30, P2)


def test_roots_conjugation_consistent():
    a = spectral_decompose(1 + 2j, P2)
    b = spectral_decompose(1 - 2j, P2)
    assert np.allclose(np.conj(a.roots), b.roots, atol=0)


def test_normalization_identity_moderate_strip():
    rng = np.random.default_rng(7)
    for _ in range(50):
        lam = complex(rng.uniform(-20, 20), rng.uniform(-5, 5))
        cc = connection_constants(spectral_decompose(lam, P2), P2)
        assert np.max(cc.normalization_residual()) < 1e-10


def test_exceptional_parameter_guard():
    # mu = 1 is an integer: lambda = 1 * (1 + 2) = 3 for n = 1
    with pytest.raises(ExceptionalParameter):
        connection_constants(spectral_decompose(3.0, P1), P1)


def test_weyl_matrices_are_complex_symmetric():
    for ext in (KernelGamma0(), KernelGamma1(), Separated((0.2, -1, 0.4, 0.0)), Periodic()):
        m = weyl_m(1 + 2j, ext, P2).m
        assert m.shape == (4, 4)
        assert np.max(np.abs(m - m.T)) < 1e-14


def test_kernel_gamma1_is_minus_inverse_of_kernel_gamma0():
    m0 = weyl_m(0.5 + 1j, KernelGamma0(), P2).m
    m1 = weyl_m(0.5 + 1j, KernelGamma1(), P2).m
    assert np.max(np.abs(m1 + np.linalg.inv(m0))) < 1e-12


@pytest.mark.parametrize("ext", [KernelGamma0(), KernelGamma1(), Separated((0.0, 0.0)), Separated((1.5, -0.7)), Periodic()], ids=lambda e: e.name)
def test_herglotz_n1(ext):
    assert all(h.ok for h in herglotz_check(ext, SAMPLES, P1))


def test_herglotz_fails_for_n2_lower_half_plane_root():
    # the second square root of lambda sits in the lower half-plane
    sp = spectral_decompose(1j, P2)
    assert min(r.imag for r in sp.roots) < 0
    res = herglotz_check(KernelGamma0(), [1j], P2)
    assert res[0].min_imag_eig < 0 and res[0].symmetry_error < 1e-10


def test_separated_equals_theta_inverse_probe():
    theta = np.diag([0.4, -1.0, 2.0, 0.25])
    m = weyl_m(-2 + 0.7j, Separated(tuple(np.diag(theta))), P2).m
    assert np.max(np.abs(m - theta_inverse_probe(-2 + 0.7j, theta, P2))) < 1e-13


def test_probe_singular_at_theta_eigenvalue():
    th = (0.5, -0.3)
    lam = pole_scan(Separated(th), (0.5, 20), P1).values[0]
    with pytest.raises(SingularMatrix):
        theta_inverse_probe(lam, np.diag(th), P1)


def test_probe_rejects_non_selfadjoint():
    with pytest.raises(ValueError):
        theta_inverse_probe(1j, np.array([[0, 1j], [0, 0]]), P1)


def test_periodic_blocks_match_transform():
    A, B = periodic_relation(2)
    W = transform_matrix(A, B)
    lam = 3 + 0.4j
    m0 = weyl_m(lam, KernelGamma0(), P2).m
    direct = weyl_m(lam, Periodic(), P2).m
    assert np.max(np.abs(transform_weyl(m0, W) - direct)) < 1e-13
    assert np.max(np.abs(weyl_m(lam, GeneralRelation(A, B), P2).m - direct)) < 1e-13


def test_transform_is_j_unitary():
    for n in (1, 2, 3):
        A, B = periodic_relation(n)
        assert max(transform_residuals(transform_matrix(A, B))) < 1e-15
        assert max(relation_residuals(A, B).values()) < 1e-15
    J = boundary_j(2)
    assert np.allclose(J @ J, np.eye(4))


def test_general_relation_validation():
    with pytest.raises(ValueError):
        GeneralRelation(np.eye(2), np.eye(2))


def test_on_spectrum():
    with pytest.raises((OnSpectrum, ExceptionalParameter)):
        weyl_m(8.0, KernelGamma0(), P1)


def test_separated_theta_length():
    with pytest.raises(ValueError):
        weyl_m(1j, Separated((0.0,)), P2)


def test_closed_forms():
    s0 = closed_form_spectrum("sigma0", 4, P1)
    assert s0.values == pytest.approx([0, 3, 8, 15, 24])
    s1 = closed_form_spectrum("sigma1", 4, P2)
    assert s1.values == pytest.approx([1, 0, 9, 64, 225])
    assert max(ev.residual for ev in s0.eigenvalues + s1.eigenvalues) < 1e-14
    with pytest.raises(ValueError):
        closed_form_spectrum("sigma2", 3, P1)


def test_closed_forms_distinct_parameters():
    p = Parameters(0.2, 0.45, 1)
    scan0 = pole_scan(KernelGamma0(), (-1, 30), p).values
    scan1 = pole_scan(KernelGamma1(), (-1, 30), p).values
    assert scan0 == pytest.approx([m * (m + 1.65) for m in range(5)], abs=1e-8)
    assert scan1 == pytest.approx([(m + 1) * (m - 0.65) for m in range(6)], abs=1e-8)


def test_pole_scan_periodic_residuals():
    res = pole_scan(Periodic(), (-1.5, 30), P1)
    assert len(res.values) >= 4
    assert all(ev.residual < 1e-8 for ev in res.eigenvalues)
    for lam in res.values[:3]:
        sp = spectral_decompose(lam, P1)
        cc = connection_constants(sp, P1)
        assert abs(cc.delta[0] - cc.eps[0] - 2) < 1e-8


def test_pole_scan_interval_validation():
    with pytest.raises(ValueError):
        pole_scan(KernelGamma0(), (3, 1), P1)


def test_fundamental_system_initial_conditions():
    for lam in (2 + 1j, -0.7, 5.5):
        w1, w2 = frobenius_expansions_n1(lam, P1)
        assert first_section_operations_minus(w1, P1) == pytest.approx((1, 0), abs=1e-13)
        assert first_section_operations_minus(w2, P1) == pytest.approx((0, 1), abs=1e-13)


def test_fundamental_solutions_match_expansions_near_minus_one():
    lam = 2 + 1j
    x = -1 + 1e-4
    w1, w2 = fundamental_solutions_n1(lam, x, P1)
    e1, e2 = frobenius_expansions_n1(lam, P1, terms=4)

    def ev(e):
        return sum(t.coeff * (1 - x) ** t.p.value(0.3, 0.7) * (1 + x) ** t.q.value(0.3, 0.7) for t in e.terms)

    assert abs(w1 - ev(e1)) < 1e-12
    assert abs(w2 - ev(e2)) < 1e-12 * abs(w2)


def test_polynomial_solution_when_mu_is_one():
    # lambda = 1 * (1 + s) gives a degree-one w1
    xs = np.linspace(-0.9, 0.9, 7)
    vals = np.array([fundamental_solutions_n1(3.0, x, P1)[0] for x in xs])
    coef = np.polyfit(xs, vals.real, 3)
    assert abs(coef[0]) < 1e-12 and abs(coef[1]) < 1e-12
    assert np.max(np.abs(vals.imag)) < 1e-14


def test_gamma_field_combination():
    lam, x = 1.5 + 0.5j, 0.2
    g1, g2 = gamma_field_n1(lam, x, P1)
    w1, w2 = fundamental_solutions_n1(lam, x, P1)
    mu = spectral_decompose(lam, P1).mus[0]
    c1, _, c3, _ = first_section_constants(mu, P1)
    assert g2 == pytest.approx(w2 / c3)
    assert g1 == pytest.approx(w1 - c1 * w2 / c3)
    with pytest.raises(ValueError):
        gamma_field_n1(lam, x, P2)


def test_first_section_pole_sets():
    # A0 poles (zeros of c3) lie on sigma1, A1 poles (zeros of c2) on sigma0
    p = Parameters(0.2, 0.45, 1)
    for lam in [(m + 1) * (m - 0.65) for m in range(4)]:
        with pytest.raises(OnSpectrum):
            first_section_m_function(lam, p, "A0")
    for lam in [m * (m + 1.65) for m in range(4)]:
        with pytest.raises(OnSpectrum):
            first_section_m_function(lam, p, "A1")
    m = first_section_m_function(1 + 1j, p, "A0")
    assert m.shape == (2, 2) and abs(m[0, 1] - m[1, 0]) == 0
