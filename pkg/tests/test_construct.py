import math

import numpy as np
import pytest

from conftest import draw_params
from qesextic import (AnsatzParams, ComplexPoly, InvalidParameters, classify_symmetry,
                      construct_constant, construct_linear, construct_quadratic, derive_general,
                      poly_shift, turbiner_reduce)
from qesextic.construct import (linear_condition, linear_roots_closed, linear_roots_generic,
                                shift_constant)
from qesextic.verify import residual_coefficients

SQ2 = math.sqrt(2)


def coeffs_close(got, want, tol=1e-14):
    return max(abs(complex(a) - complex(b)) for a, b in zip(got, want)) <= tol


def by_a0(sols):
    return {complex(s.provenance["a0"]): s for s in sols}


# -- constant prefactor -------------------------------------------------------

def test_constant_all_zero():
    sol = construct_constant(AnsatzParams(0, 0, 0))
    assert coeffs_close(sol.potential.c, (0, -1.5, 0, 0, 0, 0.5))
    assert sol.energies == [0]
    x = np.linspace(-2, 2, 9)
    assert np.allclose(sol.eigenpairs[0].state(x), np.exp(-x**4 / 4), rtol=1e-15)


def test_constant_pt_example():
    sol = construct_constant(AnsatzParams(1j, 1, 0))
    assert coeffs_close(sol.potential.c, (2j, 0.5, 1j, 2, 0, 0.5))
    assert sol.energies[0] == 1.5
    assert sol.symmetry.potential_pt and sol.symmetry.state_pt_parity == (1,)


def test_constant_half_imaginary_b3():
    sol = construct_constant(AnsatzParams(0, 1, 0.5j))
    assert coeffs_close(sol.potential.c, (-1.5j, 0.5, 3j, 0.875, 1.5j, 0.5))
    assert sol.energies[0] == 1


# -- linear prefactor ---------------------------------------------------------

def test_linear_b2_one_three_branches():
    sols = construct_linear(AnsatzParams(0, 1, 0))
    assert len(sols) == 3
    found = by_a0(sols)
    zero = found[0j]
    assert zero.energies[0] == 3
    assert all(c.imag == 0 for c in zero.potential.c)
    for sign in (1, -1):
        a0 = next(a for a in found if abs(a - sign * SQ2 * 1j) < 1e-15)
        sol = found[a0]
        assert abs(sol.energies[0] - 1) <= 1e-14
        assert coeffs_close(sol.potential.c, (sign * SQ2 * 1j, -0.5, 0, 2, 0, 0.5))
        assert sol.symmetry.potential_pt
        x = np.linspace(-2, 2, 11)
        want = (x + sign * SQ2 * 1j) * np.exp(-x**2 - x**4 / 4)
        assert np.allclose(sol.eigenpairs[0].state(x), want, rtol=1e-14)
    # the two complex branches are different potentials with one shared level
    p, m = (found[a] for a in found if a != 0)
    assert not p.potential.poly.allclose(m.potential.poly, atol=1e-3)
    assert abs(p.energies[0] - m.energies[0]) <= 1e-12


def test_linear_negative_b2_is_broken():
    sols = construct_linear(AnsatzParams(0, -1, 0))
    real = [s for s in sols if s.provenance["a0"] != 0]
    assert len(real) == 2
    for s in real:
        a0 = s.provenance["a0"]
        assert a0.imag == 0 and abs(abs(a0) - SQ2) < 1e-15
        assert s.potential.c1 == a0 and s.potential.c1.imag == 0
        assert abs(s.energies[0] + 1) <= 1e-14
        assert s.symmetry.explicitly_broken and not s.symmetry.potential_pt


def test_linear_imaginary_b3_branches():
    sols = construct_linear(AnsatzParams(0, 1, 1j))
    found = by_a0(sols)
    s17 = math.sqrt(17)
    for alpha in ((3 + s17) / 2, (3 - s17) / 2):
        a0 = next(a for a in found if abs(a - 1j * alpha) < 1e-14)
        assert abs(found[a0].energies[0] - 1) <= 1e-12
    assert found[0j].energies[0] == 3


def test_linear_double_root_gives_one_solution():
    # b1 = 0, b3 = 0, b2 = 0: cubic a0^3 = 0
    sols = construct_linear(AnsatzParams(0, 0, 0))
    assert len(sols) == 1 and sols[0].provenance["degenerate_root"]
    # 9 b3^2 = 8 b2 merges the two nonzero roots
    b3 = 1.0
    sols = construct_linear(AnsatzParams(0, 9 / 8, b3))
    assert len(sols) == 2
    assert sum(s.provenance["degenerate_root"] for s in sols) == 1


def test_closed_form_roots_match_companion(rng):
    for _ in range(100):
        mode = rng.choice(["pt", "broken"])
        p = draw_params(rng, mode)
        p = AnsatzParams(0, p.b2, p.b3)
        closed = sorted(linear_roots_closed(p), key=lambda t: (t[0].real, t[0].imag))
        generic = sorted(linear_roots_generic(p), key=lambda t: (t[0].real, t[0].imag))
        assert [m for _, m in closed] == [m for _, m in generic]
        for (a, _), (b, _) in zip(closed, generic):
            assert abs(a - b) <= 1e-12 * max(1, abs(a))


def test_pt_roots_stay_imaginary_or_pair(rng):
    for _ in range(100):
        p = draw_params(rng, "pt")
        roots = linear_roots_generic(p)
        assert sum(m for _, m in roots) == 3
        cubic = linear_condition(p)
        for r, _ in roots:
            assert abs(cubic(r)) <= 1e-10 * max(1, abs(r)) ** 3
        # the image of a root under a0 -> -conj(a0) is again a root
        for r, _ in roots:
            assert min(abs(-r.conjugate() - s) for s, _ in roots) <= 1e-9


# -- quadratic prefactor ------------------------------------------------------

def test_quadratic_real_b3_zero():
    sol = construct_quadratic(1, 0)
    assert coeffs_close(sol.potential.c, (0, -1.5, 0, 2, 0, 0.5))
    up, lo = sol.eigenpairs
    assert abs(up.energy - (3 + math.sqrt(6))) <= 1e-14
    assert abs(lo.energy - (3 - math.sqrt(6))) <= 1e-14
    assert up.state.f.allclose(ComplexPoly([0.5 * (2 - math.sqrt(6)), 0, 1]), atol=1e-15)
    assert lo.state.f.allclose(ComplexPoly([0.5 * (2 + math.sqrt(6)), 0, 1]), atol=1e-15)


def test_quadratic_imaginary_b3():
    sol = construct_quadratic(0, 1j)
    assert coeffs_close(sol.potential.c, (-7j, -9.5, 2j, -4.5, 3j, 0.5))
    up, lo = sol.eigenpairs
    assert abs(up.energy - (3 + math.sqrt(11))) <= 1e-14
    assert abs(lo.energy - (3 - math.sqrt(11))) <= 1e-14
    assert up.energy.imag == 0 and lo.energy.imag == 0
    assert sol.symmetry.potential_pt
    assert sol.params.b1 == 2j * (0 + 1)


def test_quadratic_gap(rng):
    for _ in range(100):
        b2, b3 = rng.uniform(-2, 2, 2)
        for b3c in (b3, 1j * b3):
            up, lo = construct_quadratic(b2, b3c).eigenpairs
            gap = up.energy - lo.energy
            want = 2 * math.sqrt((2 * b2 - 3 * b3c**2).real ** 2 + 2)
            assert abs(gap - want) <= 1e-12 * want
            assert gap.real >= 2 * SQ2 - 1e-12


def test_quadratic_rejects_mixed_b3():
    with pytest.raises(InvalidParameters):
        construct_quadratic(1, 1 + 1j)
    with pytest.raises(InvalidParameters):
        construct_quadratic(1j, 0)


# -- parameter validation -----------------------------------------------------

@pytest.mark.parametrize("args", [(0, 1j, 0), (1j, 1, 1), (1, 0, 1j), (1 + 1j, 0, 0),
                                  (float("nan"), 0, 0)])
def test_invalid_params(args):
    with pytest.raises(InvalidParameters):
        AnsatzParams(*args)


def test_zero_counts_for_either_mode():
    assert AnsatzParams(0, 1, 0).mode == "pt"
    assert AnsatzParams(1j, 1, 0).mode == "pt"
    assert AnsatzParams(1, 1, 0).mode == "broken"


# -- invariants over random draws ---------------------------------------------

def test_residual_and_reality(rng):
    for _ in range(150):
        p = draw_params(rng, "pt")
        for sol in [construct_constant(p), *construct_linear(p)]:
            assert sol.max_residual() <= 1e-10
        for sol in [construct_constant(p), *construct_linear(AnsatzParams(0, p.b2, p.b3))]:
            if sol.symmetry.potential_pt:
                for E in sol.energies:
                    assert abs(E.imag) <= 1e-12 * max(1, abs(E.real))
        q = construct_quadratic(p.b2, p.b3)
        assert q.max_residual() <= 1e-10
        up, lo = q.energies
        assert up.imag == 0 and lo.imag == 0 and up.real > lo.real


def test_shift_covariance(rng):
    for _ in range(100):
        b2 = rng.uniform(-2, 2)
        b3 = 1j * rng.uniform(-1.5, 1.5)
        b2s = b2 - 1.5 * b3 * b3
        full = construct_quadratic(b2, b3)
        even = construct_quadratic(b2s, 0)
        moved = poly_shift(even.potential.poly, b3)
        K = moved.coeff(0)  # computed from the shift, then compared with the closed form
        closed = 2 * b3**2 * (b2 - b3**2) ** 2 - 3.5 * b3**2
        assert abs(K - closed) <= 1e-11
        assert abs(K - shift_constant(b2, b3)) <= 1e-11
        assert (moved - K).max_coeff_diff(full.potential.poly) <= 1e-11
        for e_full, e_even in zip(full.energies, even.energies):
            assert abs(e_full - (e_even - K)) <= 1e-11


def test_symmetry_pointwise_agreement(rng):
    x = np.linspace(-3, 3, 64)
    sols = [construct_quadratic(1, 0), construct_quadratic(0, 1j), construct_quadratic(0.5, 0.7)]
    for mode in ("pt", "broken"):
        for _ in range(10):
            p = draw_params(rng, mode)
            sols += [construct_constant(p), *construct_linear(p)]
    for sol in sols:
        V = sol.potential
        pointwise = np.max(np.abs(np.conj(V(-x)) - V(x))) <= 1e-10 * max(1, np.max(np.abs(V(x))))
        assert pointwise == sol.symmetry.potential_pt
        for ep, eta in zip(sol.eigenpairs, sol.symmetry.state_pt_parity):
            psi = ep.state
            scale = np.max(np.abs(psi(x)))
            reflected = np.conj(psi(-x))
            flags = [e for e in (1, -1) if np.max(np.abs(reflected - e * psi(x))) <= 1e-10 * scale]
            assert (flags[0] if flags else None) == eta


def test_classify_examples():
    sol = construct_constant(AnsatzParams(1j, 1, 0))
    rep = classify_symmetry(sol)
    assert rep.potential_pt and rep.state_pt_parity == (1,) and not rep.explicitly_broken
    plus = next(s for s in construct_linear(AnsatzParams(0, 1, 0))
                if abs(s.provenance["a0"] - SQ2 * 1j) < 1e-15)
    assert plus.symmetry.potential_pt and plus.symmetry.state_pt_parity == (-1,)
    real = next(s for s in construct_linear(AnsatzParams(0, -1, 0))
                if abs(s.provenance["a0"] - SQ2) < 1e-15)
    assert not real.symmetry.potential_pt and real.symmetry.explicitly_broken


# -- general remainder engine -------------------------------------------------

def test_derive_general_constant_matches(rng):
    for _ in range(20):
        p = draw_params(rng, rng.choice(["pt", "broken"]))
        V, E, rem = derive_general(ComplexPoly([1.0]), p.g)
        sol = construct_constant(p)
        assert rem.is_zero
        assert coeffs_close(V.c, sol.potential.c, 1e-13) and abs(E - sol.energies[0]) <= 1e-13


def test_derive_general_forced_linear():
    V, E, rem = derive_general(ComplexPoly([1.0, 1.0]), AnsatzParams(0, 1, 0).g)
    assert rem.degree == 0 and abs(rem.coeff(0) - 3) <= 1e-15
    assert residual_coefficients(V, E, construct_linear(AnsatzParams(0, 1, 0))[0]
                                 .eigenpairs[0].state)[0] > 0


def test_derive_general_remainder_is_linear_condition(rng):
    # for f = x + a0 the remainder is the cubic condition evaluated at a0; fit it
    for _ in range(10):
        p = draw_params(rng, rng.choice(["pt", "broken"]))
        samples = rng.normal(size=4) + 1j * rng.normal(size=4)
        rems = [derive_general(ComplexPoly([a, 1.0]), p.g)[2].coeff(0) for a in samples]
        fit = np.linalg.solve(np.vander(samples, 4, increasing=True), rems)
        assert np.allclose(fit, linear_condition(p).coeffs, atol=1e-11)


def test_derive_general_quadratic_matches(rng):
    for _ in range(20):
        b2 = rng.uniform(-2, 2)
        b3 = rng.uniform(-1.5, 1.5) * rng.choice([1, 1j])
        sol = construct_quadratic(b2, b3)
        for ep in sol.eigenpairs:
            V, E, rem = derive_general(ep.state.f, ep.state.g)
            assert rem.max_abs() <= 1e-12 * max(1, sol.potential.poly.max_abs())
            assert coeffs_close(V.c, sol.potential.c, 1e-12 * max(1, sol.potential.poly.max_abs()))
            assert abs(E - ep.energy) <= 1e-12 * max(1, abs(E))


def test_derive_general_higher_degree_remainder_nonzero():
    f = ComplexPoly([1.0, 0.0, 0.5, 1.0])
    V, E, rem = derive_general(f, AnsatzParams(0, 1, 0).g)
    assert rem.degree <= 2 and not rem.is_zero


# -- even-power reduction -----------------------------------------------------

@pytest.mark.parametrize("gamma", [-1.0, 0.5, 2.0, 3.0])
def test_turbiner_quadratic(gamma):
    t = turbiner_reduce(construct_quadratic(gamma / 2, 0))
    assert abs(t.gamma - gamma) <= 1e-14 and abs(t.mu + 7) <= 1e-14
    assert (t.n, t.r) == (1, 0)


@pytest.mark.parametrize("b2", [-1.0, 0.5, 1.0, 2.0])
def test_turbiner_linear(b2):
    sol = by_a0(construct_linear(AnsatzParams(0, b2, 0)))[0j]
    t = turbiner_reduce(sol)
    assert abs(t.gamma - 2 * b2) <= 1e-14 and abs(t.mu + 5) <= 1e-14
    assert (t.n, t.r) == (0, 1)


def test_turbiner_constant_and_odd_terms():
    t = turbiner_reduce(construct_constant(AnsatzParams(0, 0.75, 0)))
    assert abs(t.mu + 3) <= 1e-14 and (t.n, t.r) == (0, 0)
    assert turbiner_reduce(construct_quadratic(0, 1j)) is None
    assert turbiner_reduce(construct_constant(AnsatzParams(0, 1, 0.5j))) is None
