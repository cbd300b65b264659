import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qesextic.poly import ComplexPoly as P
from qesextic.poly import PoleTerm, poly_roots, poly_shift, pt_image


def random_poly(rng, deg):
    return P(rng.normal(size=deg + 1) + 1j * rng.normal(size=deg + 1))


def test_canonical_form():
    assert P([1, 2, 0, 0]).degree == 1
    assert P([0, 0]).is_zero and P().degree == -1
    assert P([1.0, 1e-20]).degree == 0
    with pytest.raises(ValueError):
        P([1.0, float("nan")])


def test_derivative_power_rule():
    assert P.monomial(4, 0.25).deriv() == P.monomial(3)
    assert P([5.0]).deriv().is_zero


def test_exact_factor_division():
    q, r = divmod(P([0, 2j, 1]), P([2j, 1]))
    assert q == P([0, 1]) and r.is_zero


def test_division_by_zero():
    with pytest.raises(ZeroDivisionError):
        divmod(P([1, 1]), P())


def test_evaluate():
    assert P([0, 0, -1.5, 0, 0, 0, 0.5])(1.0) == -1


def test_arithmetic_family():
    p, q = P([1, 2j]), P([0, 1, 1])
    assert (p + q) == P([1, 1 + 2j, 1])
    assert (p - p).is_zero
    assert (p * q) == P([0, 1, 1 + 2j, 2j])
    x = np.linspace(-1, 1, 7)
    assert np.allclose((p * q)(x), p(x) * q(x))


def test_divmod_reconstructs(rng):
    for _ in range(50):
        a = random_poly(rng, rng.integers(0, 9))
        b = random_poly(rng, rng.integers(0, 5))
        q, r = divmod(a, b)
        assert r.degree < b.degree
        assert (q * b + r).max_coeff_diff(a) <= 1e-13 * max(1.0, a.max_abs(), (q * b).max_abs())


def test_shift_examples():
    assert poly_shift(P([0, 0, 1]), 1) == P([1, 2, 1])
    p = P([1, 2, 3])
    assert poly_shift(p, 0) == p
    # coefficient of x^5 in (x + i)^6 / 2 is 6 i / 2
    assert poly_shift(P.monomial(6, 0.5), 1j).coeff(5) == 3j


def test_shift_round_trip(rng):
    for _ in range(100):
        p = random_poly(rng, rng.integers(0, 7))
        b = 2.0 * np.sqrt(rng.uniform()) * np.exp(2j * np.pi * rng.uniform())
        back = poly_shift(poly_shift(p, b), -b)
        assert back.max_coeff_diff(p) <= 1e-13 * p.max_abs()
        x = rng.normal(size=5)
        assert np.allclose(poly_shift(p, b)(x), p(x + b), rtol=1e-12, atol=1e-12)


def test_roots_linear_condition_examples():
    # a0^3 - 3 i a0^2 + 2 a0 = a0 (a0^2 - 3 i a0 + 2)
    roots = poly_roots(P([0, 2, -3j, 1]))
    expect = [0, 1j * (3 + math.sqrt(17)) / 2, 1j * (3 - math.sqrt(17)) / 2]
    assert all(m == 1 for _, m in roots)
    for e in expect:
        assert min(abs(r - e) for r, _ in roots) < 1e-13
    roots = poly_roots(P([0, 2, 0, 1]))
    for e in (0, 1j * math.sqrt(2), -1j * math.sqrt(2)):
        assert min(abs(r - e) for r, _ in roots) < 1e-13


def test_roots_double_and_triple():
    assert poly_roots(P([1, -2, 1])) == [(1 + 0j, 2)]
    (r, m), = [t for t in poly_roots(P.from_roots([1, 1, 1, 2j])) if t[1] > 1]
    assert m == 3 and abs(r - 1) < 1e-12
    # a split double root at a branch boundary of the linear condition
    b3 = 1.0
    roots = poly_roots(P([0, 2 * (9 * b3**2 / 8), -3 * b3, 1]))
    assert (1.5 + 0j, 2) in [(complex(round(r.real, 12), round(r.imag, 12)), m) for r, m in roots]


def test_roots_reconstruct(rng):
    for _ in range(100):
        deg = rng.integers(1, 5)
        # well separated roots
        true = []
        while len(true) < deg:
            z = complex(*rng.uniform(-2, 2, 2))
            if all(abs(z - w) > 0.2 for w in true):
                true.append(z)
        lead = complex(*rng.uniform(0.5, 2, 2))
        p = P.from_roots(true, lead)
        roots = poly_roots(p)
        assert sum(m for _, m in roots) == deg
        rebuilt = P.from_roots([r for r, m in roots for _ in range(m)], p.lead)
        assert rebuilt.max_coeff_diff(p) <= 1e-10 * p.max_abs()


def test_roots_of_real_poly_stay_real():
    roots = poly_roots(P([-1.0, 0.0, 1.0]))
    assert all(r.imag == 0.0 for r, _ in roots)


def test_roots_needs_degree():
    with pytest.raises(ValueError):
        poly_roots(P([3.0]))


def test_pt_image_examples():
    p = P([0, 0, 1, 1j])
    assert pt_image(p) == p and p.is_pt_symmetric()
    assert pt_image(P([0, 1])) == P([0, -1])
    assert pt_image(P()).is_zero


coef = st.complex_numbers(max_magnitude=1e6, allow_nan=False, allow_infinity=False)


@settings(max_examples=200, deadline=None)
@given(st.lists(coef, max_size=8))
def test_pt_image_is_involution(cs):
    p = P(cs)
    assert pt_image(pt_image(p)) == p


def test_pole_term_order():
    with pytest.raises(ValueError):
        PoleTerm(1j, 1, 3)
    assert PoleTerm(-1j, 2, 2)(0.0) == 2 / (1j) ** 2
