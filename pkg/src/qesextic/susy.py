"""Superpotentials, SUSY partners and the transparent pole potentials they contain.

For ``psi = f exp(-g)`` with ``f = prod (x - r_i)^{m_i}`` everything is
available in closed form::

    W        = -psi'/psi           = g' - sum m_i / (x - r_i)
    V_tilde  = V - (ln psi)''      = V + g'' + sum m_i / (x - r_i)^2

The pole sum is the reflectionless piece.  It is only well posed when no
``r_i`` lies on the real axis.
"""
from __future__ import annotations

import cmath
from dataclasses import dataclass

import numpy as np

from .errors import RealAxisPole
from .poly import ComplexPoly, PoleTerm, as_poly, poly_roots

AXIS_TOL = 1e-8


def _check_off_axis(r: complex, tol: float) -> None:
    if abs(complex(r).imag) <= tol:
        raise RealAxisPole(r, tol)


@dataclass(frozen=True)
class RationalPotential:
    """Polynomial part plus second-order poles ``s_i / (x - r_i)^2``."""

    poly: ComplexPoly
    poles: tuple[PoleTerm, ...] = ()
    axis_tol: float = AXIS_TOL

    def __post_init__(self):
        object.__setattr__(self, "poles", tuple(self.poles))
        for p in self.poles:
            if p.order != 2:
                raise ValueError("potential poles must be second order")
            _check_off_axis(p.location, self.axis_tol)

    def __call__(self, x):
        x = np.asarray(x, dtype=complex)
        out = self.poly(x)
        for p in self.poles:
            out = out + p(x)
        return out

    def derivative(self, x):
        x = np.asarray(x, dtype=complex)
        out = self.poly.deriv()(x)
        for p in self.poles:
            out = out - 2 * p.strength / (x - p.location) ** 3
        return out

    def pole_part(self) -> "RationalPotential":
        return RationalPotential(ComplexPoly(), self.poles, self.axis_tol)

    def shift(self, b: float) -> "RationalPotential":
        """Potential in the coordinate ``x + b``; poles move to ``r - b``."""
        return RationalPotential(
            self.poly.shift(b),
            tuple(PoleTerm(p.location - b, p.strength, 2) for p in self.poles),
            self.axis_tol,
        )


@dataclass(frozen=True)
class Superpotential:
    """``W = poly + sum s_i / (x - r_i)`` with ``s_i = -m_i``."""

    poly: ComplexPoly
    poles: tuple[PoleTerm, ...] = ()

    def __call__(self, x):
        x = np.asarray(x, dtype=complex)
        out = self.poly(x)
        for p in self.poles:
            out = out + p(x)
        return out

    def derivative(self, x):
        x = np.asarray(x, dtype=complex)
        out = self.poly.deriv()(x)
        for p in self.poles:
            out = out - p.strength / (x - p.location) ** 2
        return out


def _roots_of_f(state, axis_tol: float) -> list[tuple[complex, int]]:
    f = state.f
    if f.degree < 1:
        return []
    roots = poly_roots(f)
    for r, _ in roots:
        _check_off_axis(r, axis_tol)
    return roots


def superpotential(state, axis_tol: float = AXIS_TOL) -> Superpotential:
    """``W = -psi'/psi`` for ``psi = f exp(-g)``; raises RealAxisPole for real roots of f."""
    roots = _roots_of_f(state, axis_tol)
    return Superpotential(state.g.deriv(), tuple(PoleTerm(r, -m, 1) for r, m in roots))


def partner_potential(V, state, axis_tol: float = AXIS_TOL) -> RationalPotential:
    """SUSY partner ``V + g'' + sum m_i / (x - r_i)^2`` of ``V`` built on ``state``.

    ``V`` may be a SexticPotential or any polynomial.  The additive
    constant coming from ``g''`` is kept as is.
    """
    roots = _roots_of_f(state, axis_tol)
    poly = as_poly(V) + state.g.deriv(2)
    return RationalPotential(poly, tuple(PoleTerm(r, m, 2) for r, m in roots), axis_tol)


@dataclass(frozen=True)
class ZeroMode:
    """``U = l(l+1)/2 (x - r)^-2`` with the zero-energy solution ``(x - r)^-l``."""

    location: complex
    l: int

    @property
    def potential(self) -> RationalPotential:
        return RationalPotential(ComplexPoly(),
                                 (PoleTerm(self.location, 0.5 * self.l * (self.l + 1), 2),))

    def __call__(self, x):
        return (np.asarray(x, dtype=complex) - self.location) ** (-self.l)

    def second_derivative(self, x):
        u = np.asarray(x, dtype=complex) - self.location
        return self.l * (self.l + 1) * u ** (-self.l - 2)

    def residual(self, x):
        """``-psi''/2 + U psi``, identically zero."""
        return -0.5 * self.second_derivative(x) + self.potential(x) * self(x)


def zero_mode(r: complex, l: int, axis_tol: float = AXIS_TOL) -> ZeroMode:
    if l < 1 or int(l) != l:
        raise ValueError(f"l must be a positive integer, got {l}")
    _check_off_axis(r, axis_tol)
    return ZeroMode(complex(r), int(l))


@dataclass(frozen=True)
class JostSolution:
    """``psi_k(x) = exp(i k x) (1 + i / (k (x - r)))``.

    Exact solution of ``-psi''/2 + (x - r)^-2 psi = k^2 psi / 2`` that is a
    pure unit-amplitude wave ``exp(i k x)`` at both ends, so ``R = 0`` and
    ``T = 1``.
    """

    k: float
    location: complex

    def __call__(self, x):
        u = np.asarray(x, dtype=complex) - self.location
        return np.exp(1j * self.k * np.asarray(x)) * (1 + 1j / (self.k * u))

    def derivative(self, x):
        x = np.asarray(x, dtype=complex)
        u = x - self.location
        k = self.k
        return np.exp(1j * k * x) * (1j * k * (1 + 1j / (k * u)) - 1j / (k * u * u))


def jost_exact(k: float, r: complex, axis_tol: float = AXIS_TOL) -> JostSolution:
    if not k > 0:
        raise ValueError(f"k must be positive, got {k}")
    _check_off_axis(r, axis_tol)
    return JostSolution(float(k), complex(r))


def tail_waves(k: float, centre: complex, strength: complex, terms: int = 24):
    """Asymptotic solutions ``exp(+-i k u) sum a_n u^-n`` of ``-psi''/2 + s u^-2 psi = k^2 psi/2``.

    ``u = x - centre``.  The recursion ``a_{n+1} = (n(n+1) - 2s) a_n / (+-2ik(n+1))``
    terminates when ``2s = l(l+1)`` for integer ``l``, in which case both
    waves are exact (``l = 1`` reproduces :class:`JostSolution`).  Returns
    a function of ``x`` giving ``(value, derivative)`` for each sign.
    """
    def coeffs(sign):
        a = [1.0 + 0j]
        for n in range(terms):
            nxt = (n * (n + 1) - 2 * strength) * a[-1] / (sign * 2j * k * (n + 1))
            if nxt == 0:
                break
            a.append(nxt)
        return a

    series = {+1: coeffs(+1), -1: coeffs(-1)}

    def evaluate(x: float, sign: int):
        u = complex(x) - centre
        w = dw = 0j
        last = np.inf
        # optimal truncation: stop at the smallest term of the asymptotic series
        for n, an in enumerate(series[sign]):
            term = an * u ** (-n)
            if abs(term) > last:
                break
            last = abs(term)
            w += term
            dw += -n * term / u
        e = cmath.exp(sign * 1j * k * x)
        return e * w, e * (sign * 1j * k * w + dw)

    return evaluate
