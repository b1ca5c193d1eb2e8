import cmath
import math

import numpy as np
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from jacobi_powers.asymptotics import Parameters, sesquilinear_form
from jacobi_powers.cli import _num
from jacobi_powers.specfun import gamma_complex, hyp2f1, reciprocal_gamma
from jacobi_powers.triple import green_identity_residual, regularized_basis
from jacobi_powers.weyl import (
    KernelGamma0,
    KernelGamma1,
    Periodic,
    Separated,
    _constants_at,
    spectral_decompose,
    weyl_m,
)

reals = st.floats(-6, 6, allow_nan=False)
unit = st.floats(0.05, 0.95)
settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")


def _off_integers(z: complex, gap: float = 1e-3) -> bool:
    return abs(z - round(z.real)) > gap


@given(reals, st.floats(-3, 3))
def test_gamma_reflection(x, y):
    z = complex(x, y)
    assume(_off_integers(z))
    lhs = gamma_complex(z) * gamma_complex(1 - z)
    rhs = math.pi / cmath.sin(math.pi * z)
    assert abs(lhs - rhs) <= 1e-10 * abs(rhs)


@given(reals, st.floats(-3, 3))
def test_gamma_recurrence(x, y):
    z = complex(x, y)
    assume(_off_integers(z) and _off_integers(z + 1))
    g = gamma_complex(z)
    assert abs(gamma_complex(z + 1) - z * g) <= 1e-10 * abs(z * g)
    assert abs(reciprocal_gamma(z) * g - 1) < 1e-10


@given(st.floats(-2, 2), st.floats(-2, 2), st.floats(0.3, 3), st.floats(-0.7, 0.7), st.floats(-0.2, 0.2))
def test_hyp2f1_euler_transformation(a, b, c, x, y):
    z = complex(x, y)
    assume(abs(z) < 0.7)
    lhs = hyp2f1(a, b, c, z)
    rhs = (1 - z) ** (c - a - b) * hyp2f1(c - a, c - b, c, z)
    assert abs(lhs - rhs) <= 1e-10 * max(1.0, abs(lhs))


@st.composite
def combos(draw):
    n = draw(st.integers(1, 2))
    p = Parameters(draw(unit), draw(unit), n)
    basis = regularized_basis(p)
    funcs = basis.ordered()
    coef = st.complex_numbers(max_magnitude=2, allow_nan=False, allow_infinity=False)
    f = g = None
    for b in funcs:
        cf, cg = draw(coef), draw(coef)
        f = b.scaled(cf) if f is None else f + b.scaled(cf)
        g = b.scaled(cg) if g is None else g + b.scaled(cg)
    return p, basis, f, g


@given(combos())
@settings(max_examples=25)
def test_form_is_skew_hermitian(data):
    p, _, f, g = data
    for e in (-1, 1):
        fg = sesquilinear_form(f, g, p, e)
        gf = sesquilinear_form(g, f, p, e)
        assert abs(fg + gf.conjugate()) <= 1e-9 * max(1.0, abs(fg))


@given(combos())
@settings(max_examples=25)
def test_green_identity_on_combinations(data):
    p, basis, f, g = data
    assert green_identity_residual(f, g, basis) < 1e-9


@given(st.floats(-50, 50), st.floats(0.05, 20), st.integers(1, 3))
def test_roots_reproduce_lambda(x, y, n):
    p = Parameters(0.3, 0.7, n)
    lam = complex(x, y)
    sp = spectral_decompose(lam, p)
    assert all(abs(r**n - lam) <= 1e-11 * abs(lam) for r in sp.roots)


@given(st.floats(-30, 30), st.floats(-2, 2), unit, unit)
def test_normalization_identity(x, y, a, b):
    p = Parameters(a, b, 1)
    mu = complex(x, y)
    g, e, d, h = _constants_at(mu, p)
    scale = max(1.0, abs(g * h), abs(d * e))
    assert abs(g * h - d * e - 1) <= 1e-10 * scale


@given(st.floats(-20, 20), st.floats(0.05, 10), st.integers(1, 2), st.sampled_from(["k0", "k1", "sep", "per"]))
def test_conjugation_symmetry(x, y, n, kind):
    p = Parameters(0.3, 0.7, n)
    ext = {"k0": KernelGamma0(), "k1": KernelGamma1(), "sep": Separated((0.3, -1.2, 0.0, 2.0)[: 2 * n]), "per": Periodic()}[kind]
    lam = complex(x, y)
    try:
        m = weyl_m(lam, ext, p).m
        mc = weyl_m(lam.conjugate(), ext, p).m
    except Exception:
        assume(False)
    scale = max(1.0, float(np.max(np.abs(m))))
    assert np.max(np.abs(mc - m.conj().T)) <= 1e-10 * scale


@given(st.floats(allow_nan=False, allow_infinity=False))
def test_seventeen_digit_round_trip(x):
    assert float(_num(x)) == x
