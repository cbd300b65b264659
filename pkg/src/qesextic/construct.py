"""Quasi-exactly-solvable sextic families built from ``psi = f(x) exp(-g(x))``.

The exponent is always ``g = b1 x + b2 x^2 + b3 x^3 + x^4/4`` and the
prefactor ``f`` is monic of degree 0, 1 or 2.  Each constructor returns a
:class:`QESSolution` whose eigenpairs have been checked against the exact
polynomial residual before being handed out.
"""
from __future__ import annotations

import cmath
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import InvalidParameters, PairingDefect
from .poly import CANON_RTOL, CLUSTER_RTOL, ComplexPoly, poly_roots
from .verify.residual import residual_coefficients

B4 = 0.25
RESIDUAL_TOL = 1e-10


def _is_real(z: complex) -> bool:
    return complex(z).imag == 0.0


def _is_imag(z: complex) -> bool:
    return complex(z).real == 0.0


@dataclass(frozen=True)
class AnsatzParams:
    """Exponent coefficients ``b1, b2, b3``; ``b4`` is pinned to 1/4.

    ``b2`` must be real.  ``b1`` and ``b3`` must either both be purely
    imaginary (PT mode) or both be purely real (broken mode); zero counts
    as either.
    """

    b1: complex = 0j
    b2: complex = 0j
    b3: complex = 0j

    def __post_init__(self):
        for name in ("b1", "b2", "b3"):
            v = complex(getattr(self, name))
            if not cmath.isfinite(v):
                raise InvalidParameters(f"{name} must be finite, got {v}")
            object.__setattr__(self, name, v)
        if not _is_real(self.b2):
            raise InvalidParameters(f"b2 must be real, got {self.b2}")
        self.mode  # validates

    @property
    def b4(self) -> float:
        return B4

    @property
    def mode(self) -> str:
        if _is_imag(self.b1) and _is_imag(self.b3):
            return "pt"
        if _is_real(self.b1) and _is_real(self.b3):
            return "broken"
        raise InvalidParameters(
            f"b1={self.b1}, b3={self.b3}: b1 and b3 must both be purely imaginary "
            "(PT mode) or both purely real (broken mode)"
        )

    @property
    def g(self) -> ComplexPoly:
        return ComplexPoly([0.0, self.b1, self.b2, self.b3, B4])


@dataclass(frozen=True)
class SexticPotential:
    """``V(x) = c1 x + ... + c6 x^6`` (no constant term)."""

    c1: complex
    c2: complex
    c3: complex
    c4: complex
    c5: complex
    c6: complex

    def __post_init__(self):
        for name in ("c1", "c2", "c3", "c4", "c5", "c6"):
            v = complex(getattr(self, name))
            if not cmath.isfinite(v):
                raise ValueError(f"{name} must be finite")
            object.__setattr__(self, name, v)

    @classmethod
    def from_poly(cls, p: ComplexPoly) -> "SexticPotential":
        if p.degree > 6:
            raise ValueError(f"degree {p.degree} exceeds six")
        return cls(*(p.coeff(k) for k in range(1, 7)))

    @property
    def c(self) -> tuple[complex, ...]:
        return (self.c1, self.c2, self.c3, self.c4, self.c5, self.c6)

    @property
    def poly(self) -> ComplexPoly:
        return ComplexPoly((0.0,) + self.c)

    def __call__(self, x):
        return self.poly(x)

    def is_pt_symmetric(self) -> bool:
        return self.poly.is_pt_symmetric()


@dataclass(frozen=True)
class PolyExpState:
    """``psi(x) = f(x) * exp(-g(x))`` with monic ``f`` and quartic ``g`` (C = 1)."""

    f: ComplexPoly
    g: ComplexPoly

    def __post_init__(self):
        f, g = self.f, self.g
        if g.degree != 4:
            raise ValueError(f"g must be quartic, got degree {g.degree}")
        if g.coeff(0) != 0:
            raise ValueError("g must have zero constant term")
        if g.lead.imag != 0 or g.lead.real <= 0:
            raise ValueError("leading coefficient of g must be real positive")
        if f.is_zero or abs(f.lead - 1) > 1e-14:
            raise ValueError("f must be monic")

    @property
    def n(self) -> int:
        return self.f.degree

    def __call__(self, x):
        x = np.asarray(x, dtype=complex)
        return self.f(x) * np.exp(-self.g(x))

    def log_derivative(self, x):
        """``psi'/psi = f'/f - g'``."""
        x = np.asarray(x, dtype=complex)
        return self.f.deriv()(x) / self.f(x) - self.g.deriv()(x)

    def derivative(self, x):
        x = np.asarray(x, dtype=complex)
        return (self.f.deriv()(x) - self.f(x) * self.g.deriv()(x)) * np.exp(-self.g(x))

    def second_derivative(self, x):
        x = np.asarray(x, dtype=complex)
        f, g = self.f, self.g
        g1 = g.deriv()(x)
        val = f.deriv(2)(x) - 2 * f.deriv()(x) * g1 - f(x) * g.deriv(2)(x) + f(x) * g1 * g1
        return val * np.exp(-g(x))

    def shift(self, b: complex) -> "PolyExpState":
        """State in the coordinate ``x + b``; the constant of ``g`` goes into C."""
        g = self.g.shift(b)
        return PolyExpState(self.f.shift(b), g - g.coeff(0))


@dataclass(frozen=True)
class Eigenpair:
    energy: complex
    state: PolyExpState

    def __post_init__(self):
        object.__setattr__(self, "energy", complex(self.energy))


@dataclass(frozen=True)
class SymmetryReport:
    potential_pt: bool
    state_pt_parity: tuple[Optional[int], ...]
    explicitly_broken: bool


@dataclass(frozen=True)
class QESSolution:
    case: str
    params: AnsatzParams
    potential: SexticPotential
    eigenpairs: tuple[Eigenpair, ...]
    symmetry: SymmetryReport
    provenance: dict = field(default_factory=dict, compare=False)

    @property
    def energies(self) -> list[complex]:
        return [ep.energy for ep in self.eigenpairs]

    def max_residual(self) -> float:
        return max(residual_coefficients(self.potential, ep.energy, ep.state)[0]
                   for ep in self.eigenpairs)


# -- symmetry -------------------------------------------------------------

def state_parity(state: PolyExpState) -> Optional[int]:
    """``eta`` with ``conj(psi(-x)) = eta * psi(x)`` on the real axis, or None."""
    if not state.g.is_pt_symmetric():
        return None
    eta = -1 if state.f.degree % 2 else 1
    if state.f.allclose(eta * state.f.pt_image(), atol=CANON_RTOL * state.f.max_abs()):
        return eta
    return None


def _explicitly_broken(p: ComplexPoly) -> bool:
    """Real coefficients with an odd power present: a real symmetry-breaking term."""
    c = p.coeffs
    real = bool(np.all(c.imag == 0))
    odd = bool(np.any(c[1::2] != 0))
    return real and odd and not p.is_pt_symmetric()


def classify_symmetry(sol: QESSolution) -> SymmetryReport:
    v = sol.potential.poly
    pt = v.is_pt_symmetric()
    return SymmetryReport(
        potential_pt=pt,
        state_pt_parity=tuple(state_parity(ep.state) for ep in sol.eigenpairs),
        explicitly_broken=(not pt) and _explicitly_broken(v),
    )


def _finish(case, params, potential, eigenpairs, provenance) -> QESSolution:
    sol = QESSolution(case, params, potential, tuple(eigenpairs),
                      SymmetryReport(False, (), False), provenance)
    for ep in sol.eigenpairs:
        res, _ = residual_coefficients(potential, ep.energy, ep.state)
        if res > RESIDUAL_TOL:
            raise PairingDefect(f"{case}: residual {res:.3e} exceeds {RESIDUAL_TOL:g}")
    return QESSolution(case, params, potential, sol.eigenpairs, classify_symmetry(sol), provenance)


# -- the three families ---------------------------------------------------

def construct_constant(params: AnsatzParams) -> QESSolution:
    """``f = 1``: a single level ``E = b2 - b1^2/2``."""
    b1, b2, b3 = params.b1, params.b2, params.b3
    V = SexticPotential(
        -3 * b3 + 2 * b1 * b2,
        -1.5 + 3 * b1 * b3 + 2 * b2 * b2,
        b1 + 6 * b2 * b3,
        2 * b2 + 4.5 * b3 * b3,
        3 * b3,
        0.5,
    )
    E = b2 - 0.5 * b1 * b1
    state = PolyExpState(ComplexPoly([1.0]), params.g)
    return _finish("const", params, V, [Eigenpair(E, state)], {"case": "const"})


def linear_condition(params: AnsatzParams) -> ComplexPoly:
    """Cubic ``a0^3 - 3 b3 a0^2 + 2 b2 a0 - b1`` whose roots admit ``f = x + a0``."""
    return ComplexPoly([-params.b1, 2 * params.b2, -3 * params.b3, 1.0])


def _merge_close(values: Sequence[complex]) -> list[tuple[complex, int]]:
    out: list[list] = []
    for z in values:
        for item in out:
            if abs(z - item[0]) <= CLUSTER_RTOL * max(1.0, abs(item[0])):
                item[1] += 1
                break
        else:
            out.append([z, 1])
    return [(complex(z), m) for z, m in out]


def linear_roots_closed(params: AnsatzParams) -> list[tuple[complex, int]]:
    """Roots for ``b1 = 0``: ``a0 = 0`` and ``a0 = (3 b3 +- sqrt(9 b3^2 - 8 b2)) / 2``."""
    if params.b1 != 0:
        raise ValueError("closed form needs b1 = 0")
    b2, b3 = params.b2, params.b3
    s = cmath.sqrt(9 * b3 * b3 - 8 * b2)
    return _merge_close([0j, 0.5 * (3 * b3 + s), 0.5 * (3 * b3 - s)])


def linear_roots_generic(params: AnsatzParams) -> list[tuple[complex, int]]:
    """Companion-matrix roots; in PT mode the cubic is solved in ``y = a0 / i``,
    where it has real coefficients, so imaginary roots stay exactly imaginary."""
    cubic = linear_condition(params)
    if params.mode == "pt":
        rot = cubic.scale(1j)
        rot = ComplexPoly(rot.coeffs / rot.lead)
        return [(1j * y, m) for y, m in poly_roots(rot)]
    return poly_roots(cubic)


def construct_linear(params: AnsatzParams) -> list[QESSolution]:
    """``f = x + a0``: one solution per distinct root ``a0`` of the cubic condition."""
    b1, b2, b3 = params.b1, params.b2, params.b3
    roots = linear_roots_closed(params) if b1 == 0 else linear_roots_generic(params)
    out = []
    for a0, mult in sorted(roots, key=lambda t: (t[0].imag, t[0].real)):
        V = SexticPotential(
            -6 * b3 + 2 * b1 * b2 + a0,
            -2.5 + 3 * b1 * b3 + 2 * b2 * b2,
            b1 + 6 * b2 * b3,
            2 * b2 + 4.5 * b3 * b3,
            3 * b3,
            0.5,
        )
        E = -0.5 * b1 * b1 + 3 * b2 - 3 * a0 * b3 + a0 * a0
        state = PolyExpState(ComplexPoly([a0, 1.0]), params.g)
        prov = {"case": "linear", "a0": a0, "degenerate_root": mult > 1}
        out.append(_finish("linear", params, V, [Eigenpair(E, state)], prov))
    return out


def quadratic_discriminant(b2: complex, b3: complex) -> complex:
    """``sqrt((2 b2 - 3 b3^2)^2 + 2)``; real and at least sqrt(2) for admissible input."""
    return cmath.sqrt((2 * b2 - 3 * b3 * b3) ** 2 + 2)


def construct_quadratic(b2: complex, b3: complex) -> QESSolution:
    """``f = x^2 + a1 x + a0``: two levels ``E+ > E-`` with ``b1 = 2 b3 (b2 - b3^2)``.

    ``b2`` must be real and ``b3`` either real or purely imaginary.  The
    upper level pairs with the minus sign in ``a0`` and the lower level
    with the plus sign.
    """
    b2, b3 = complex(b2), complex(b3)
    if not _is_real(b2):
        raise InvalidParameters(f"b2 must be real, got {b2}")
    if not (_is_real(b3) or _is_imag(b3)):
        raise InvalidParameters(f"b3 must be real or purely imaginary, got {b3}")
    b1 = 2 * b3 * (b2 - b3 * b3)
    params = AnsatzParams(b1, b2, b3)
    s = quadratic_discriminant(b2, b3)
    a1 = 2 * b3
    b3sq = b3 * b3
    V = SexticPotential(
        b3 * (4 * b2 * b2 - 4 * b2 * b3sq - 7),
        2 * (b2 * b2 + 3 * b2 * b3sq - 3 * b3sq * b3sq) - 3.5,
        2 * b3 * (4 * b2 - b3sq),
        2 * b2 + 4.5 * b3sq,
        3 * b3,
        0.5,
    )
    base = -2 * b3sq * (b2 - b3sq) ** 2 + 3 * b2 - b3sq
    g = params.g
    upper = Eigenpair(base + s, PolyExpState(ComplexPoly([0.5 * (2 * b2 - b3sq - s), a1, 1.0]), g))
    lower = Eigenpair(base - s, PolyExpState(ComplexPoly([0.5 * (2 * b2 - b3sq + s), a1, 1.0]), g))
    prov = {"case": "quad", "a1": a1, "sqrt": s}
    return _finish("quad", params, V, [upper, lower], prov)


# -- generic degree-n engine ------------------------------------------------

def derive_general(f: ComplexPoly, g: ComplexPoly) -> tuple[SexticPotential, complex, ComplexPoly]:
    """Potential and energy forced by the ansatz, plus the divisibility remainder.

    ``V - E = (g'^2 - g'')/2 + (f''/2 - f' g') / f``; the quotient of the
    last division supplies the low-order part of ``V`` and ``E`` is fixed
    by ``V`` having no constant term.  The pair is an eigenpair exactly
    when the returned remainder vanishes.  Works for any degree of ``f``;
    only degrees 0-2 have closed-form parameter solutions here.
    """
    PolyExpState(f, g)  # validates shape
    g1 = g.deriv()
    q, rem = divmod(0.5 * f.deriv(2) - f.deriv() * g1, f)
    v_minus_e = 0.5 * (g1 * g1 - g.deriv(2)) + q
    E = -v_minus_e.coeff(0)
    V = SexticPotential.from_poly(v_minus_e + E)
    return V, E, rem


# -- even-power reduction ---------------------------------------------------

@dataclass(frozen=True)
class TurbinerForm:
    """``V = x^6/2 + gamma x^4 + (gamma^2 + mu) x^2 / 2`` with ``mu = -3 - 4n - 2r``."""

    gamma: complex
    mu: complex
    n: Optional[int]
    r: Optional[int]


def turbiner_reduce(sol: QESSolution, tol: float = 1e-9) -> Optional[TurbinerForm]:
    """Even-power normal form, or None when an odd power is present.

    ``n`` counts the closed-form levels minus one and ``r`` is the parity
    exponent, so ``deg(f) = 2n + r`` for every eigenpair; they are left as
    None when ``mu`` is not of that form or disagrees with ``f``.
    """
    V = sol.potential
    if any(c != 0 for c in (V.c1, V.c3, V.c5)) or V.c6 != 0.5:
        return None
    gamma = V.c4
    mu = 2 * V.c2 - gamma * gamma
    n = r = None
    m = -(mu + 3) / 2
    if abs(m.imag) <= tol and abs(m.real - round(m.real)) <= tol and round(m.real) >= 0:
        k = int(round(m.real))
        if all(ep.state.f.degree == k for ep in sol.eigenpairs):
            n, r = k // 2, k % 2
    return TurbinerForm(gamma, mu, n, r)


def shift_constant(b2: complex, b3: complex) -> complex:
    """Constant dropped when the even-power family is translated by ``b3``.

    ``V_{b2,b3}(x) = V_{b2*,0}(x + b3) - K`` with ``b2* = b2 - 3 b3^2/2``;
    ``K = V_{b2*,0}(b3)`` since ``V_{b2,b3}`` has no constant term.
    """
    b2s = b2 - 1.5 * b3 * b3
    return construct_quadratic(b2s, 0).potential(b3)
