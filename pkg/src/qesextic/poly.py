"""Dense complex polynomials with exact-shape arithmetic.

Coefficients are stored lowest power first.  Every public constructor
canonicalizes: real and imaginary parts whose size falls below
``CANON_RTOL`` times the largest coefficient magnitude are zeroed, and
trailing zero coefficients are dropped, so the zero polynomial has an
empty coefficient vector.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .errors import NonConvergence

CANON_RTOL = 1e-14
CLUSTER_RTOL = 1e-8
# eigenvalues split an m-fold root by about eps**(1/m); groups closer than
# this are merged when the merged point is a root of p, p', ..., p^(m-1)
def _near_multiple_rtol(m: int) -> float:
    return 10.0 * np.finfo(float).eps ** (1.0 / m)


def _canonical(coeffs: Iterable[complex]) -> np.ndarray:
    c = np.array(list(coeffs) if not isinstance(coeffs, np.ndarray) else coeffs,
                 dtype=complex).ravel()
    if c.size == 0:
        return c
    if not np.all(np.isfinite(c)):
        raise ValueError("polynomial coefficients must be finite")
    scale = np.max(np.abs(c))
    if scale == 0.0:
        return np.zeros(0, dtype=complex)
    cut = CANON_RTOL * scale
    re = np.where(np.abs(c.real) < cut, 0.0, c.real)
    im = np.where(np.abs(c.imag) < cut, 0.0, c.imag)
    c = re + 1j * im
    nz = np.flatnonzero(c)
    return c[: nz[-1] + 1].copy() if nz.size else np.zeros(0, dtype=complex)


class ComplexPoly:
    """Immutable polynomial ``sum_k coeffs[k] * x**k`` over the complex numbers."""

    __slots__ = ("_c",)

    def __init__(self, coeffs: Iterable[complex] = ()):
        c = _canonical(coeffs)
        c.setflags(write=False)
        self._c = c

    # -- construction -----------------------------------------------------
    @classmethod
    def monomial(cls, power: int, coeff: complex = 1.0) -> "ComplexPoly":
        c = np.zeros(power + 1, dtype=complex)
        c[power] = coeff
        return cls(c)

    @classmethod
    def from_roots(cls, roots: Iterable[complex], lead: complex = 1.0) -> "ComplexPoly":
        p = cls([lead])
        for r in roots:
            p = p * cls([-r, 1.0])
        return p

    x: "ComplexPoly"  # set below

    # -- inspection -------------------------------------------------------
    @property
    def coeffs(self) -> np.ndarray:
        return self._c

    @property
    def degree(self) -> int:
        """Degree, with ``-1`` for the zero polynomial."""
        return self._c.size - 1

    @property
    def is_zero(self) -> bool:
        return self._c.size == 0

    @property
    def lead(self) -> complex:
        return complex(self._c[-1]) if self._c.size else 0j

    def coeff(self, k: int) -> complex:
        return complex(self._c[k]) if 0 <= k < self._c.size else 0j

    def max_abs(self) -> float:
        return float(np.max(np.abs(self._c))) if self._c.size else 0.0

    # -- arithmetic -------------------------------------------------------
    @staticmethod
    def _coerce(other) -> "ComplexPoly":
        if isinstance(other, ComplexPoly):
            return other
        if isinstance(other, (int, float, complex, np.number)):
            return ComplexPoly([other])
        return NotImplemented

    def _padded(self, other: "ComplexPoly"):
        n = max(self._c.size, other._c.size)
        a = np.zeros(n, dtype=complex)
        b = np.zeros(n, dtype=complex)
        a[: self._c.size] = self._c
        b[: other._c.size] = other._c
        return a, b

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self._padded(other)
        return ComplexPoly(a + b)

    __radd__ = __add__

    def __neg__(self):
        return ComplexPoly(-self._c)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self._padded(other)
        return ComplexPoly(a - b)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.is_zero or other.is_zero:
            return ComplexPoly()
        return ComplexPoly(np.convolve(self._c, other._c))

    __rmul__ = __mul__

    def __pow__(self, n: int):
        out = ComplexPoly([1.0])
        for _ in range(n):
            out = out * self
        return out

    def deriv(self, m: int = 1) -> "ComplexPoly":
        c = self._c
        for _ in range(m):
            if c.size <= 1:
                return ComplexPoly()
            c = c[1:] * np.arange(1, c.size)
        return ComplexPoly(c)

    def __divmod__(self, divisor: "ComplexPoly"):
        """Long division; returns ``(quotient, remainder)`` with deg(rem) < deg(divisor)."""
        divisor = self._coerce(divisor)
        if divisor.is_zero:
            raise ZeroDivisionError("division by the zero polynomial")
        num = self._c.astype(complex).copy()
        den = divisor._c
        dn = den.size - 1
        if num.size - 1 < dn:
            return ComplexPoly(), self
        q = np.zeros(num.size - dn, dtype=complex)
        for k in range(num.size - 1, dn - 1, -1):
            t = num[k] / den[-1]
            q[k - dn] = t
            num[k - dn: k + 1] -= t * den
        return ComplexPoly(q), ComplexPoly(num[:dn])

    def __floordiv__(self, divisor):
        return divmod(self, divisor)[0]

    def __mod__(self, divisor):
        return divmod(self, divisor)[1]

    def __call__(self, x):
        """Horner evaluation; accepts scalars or numpy arrays."""
        if np.isscalar(x):
            acc = 0j
            for c in self._c[::-1]:
                acc = acc * x + c
            return acc
        x = np.asarray(x)
        acc = np.zeros(x.shape, dtype=complex)
        for c in self._c[::-1]:
            acc = acc * x + c
        return acc

    def shift(self, b: complex) -> "ComplexPoly":
        return poly_shift(self, b)

    def scale(self, s: complex) -> "ComplexPoly":
        """Return ``p(s * x)``."""
        return ComplexPoly(self._c * np.power(complex(s), np.arange(self._c.size)))

    def pt_image(self) -> "ComplexPoly":
        return pt_image(self)

    def is_pt_symmetric(self, rtol: float = CANON_RTOL) -> bool:
        return self.allclose(pt_image(self), atol=rtol * max(self.max_abs(), 1e-300))

    def roots(self):
        return poly_roots(self)

    # -- comparison -------------------------------------------------------
    def __eq__(self, other):
        if not isinstance(other, ComplexPoly):
            return NotImplemented
        return self._c.size == other._c.size and bool(np.all(self._c == other._c))

    def __hash__(self):
        return hash(tuple(self._c.tolist()))

    def allclose(self, other: "ComplexPoly", atol: float = 0.0, rtol: float = 0.0) -> bool:
        a, b = self._padded(self._coerce(other))
        tol = atol + rtol * max(np.max(np.abs(a), initial=0.0), np.max(np.abs(b), initial=0.0))
        return bool(np.all(np.abs(a - b) <= tol))

    def max_coeff_diff(self, other: "ComplexPoly") -> float:
        a, b = self._padded(self._coerce(other))
        return float(np.max(np.abs(a - b), initial=0.0))

    def __repr__(self):
        return f"ComplexPoly({self._c.tolist()!r})"


ComplexPoly.x = ComplexPoly([0.0, 1.0])


@dataclass(frozen=True)
class PoleTerm:
    """``strength / (x - location)**order``."""

    location: complex
    strength: complex
    order: int

    def __post_init__(self):
        if self.order not in (1, 2):
            raise ValueError(f"pole order must be 1 or 2, got {self.order}")
        object.__setattr__(self, "location", complex(self.location))
        object.__setattr__(self, "strength", complex(self.strength))
        if not (np.isfinite(self.location) and np.isfinite(self.strength)):
            raise ValueError("pole data must be finite")

    def __call__(self, x):
        return self.strength / (np.asarray(x, dtype=complex) - self.location) ** self.order


def poly_shift(p: ComplexPoly, b: complex) -> ComplexPoly:
    """Return ``p(x + b)`` by binomial expansion.

    The sums are formed in exact rational arithmetic on the binary values
    of the inputs and rounded once, so each output coefficient is the
    correctly rounded value of the exact shift.
    """
    c = p.coeffs
    n = c.size
    if n == 0 or b == 0:
        return p
    b = complex(b)
    br, bi = Fraction(b.real), Fraction(b.imag)
    powers = [(Fraction(1), Fraction(0))]
    for _ in range(n - 1):
        r, i = powers[-1]
        powers.append((r * br - i * bi, r * bi + i * br))
    exact = [(Fraction(z.real), Fraction(z.imag)) for z in c.tolist()]
    out = []
    for k in range(n):
        sr = si = Fraction(0)
        for j in range(k, n):
            cr, ci = exact[j]
            pr, pi = powers[j - k]
            m = math.comb(j, k)
            sr += m * (cr * pr - ci * pi)
            si += m * (cr * pi + ci * pr)
        out.append(complex(float(sr), float(si)))
    return ComplexPoly(out)


def pt_image(p: ComplexPoly) -> ComplexPoly:
    """Coefficient map ``c_k -> (-1)**k * conj(c_k)``, i.e. ``conj(p(-conj(x)))``."""
    c = p.coeffs
    sign = np.where(np.arange(c.size) % 2 == 0, 1.0, -1.0)
    return ComplexPoly(sign * np.conj(c))


def _newton_polish(p: ComplexPoly, dp: ComplexPoly, z: complex, max_iter: int = 60) -> complex:
    best, best_res = z, abs(p(z))
    for _ in range(max_iter):
        d = dp(z)
        if d == 0:
            break
        z_new = z - p(z) / d
        res = abs(p(z_new))
        if res < best_res:
            best, best_res = z_new, res
        if abs(z_new - z) <= 4e-16 * max(1.0, abs(z_new)):
            break
        z = z_new
    return best


def _noise_bound(p: ComplexPoly, z: complex) -> float:
    return float(np.sum(np.abs(p.coeffs) * abs(z) ** np.arange(p.coeffs.size)))


def poly_roots(p: ComplexPoly, cluster_rtol: float = CLUSTER_RTOL) -> list[tuple[complex, int]]:
    """Roots with multiplicities.

    Companion-matrix eigenvalues are polished by Newton steps on ``p``;
    roots within ``cluster_rtol * max(1, |r|)`` merge.  Slightly wider
    pairs are merged too when their midpoint polishes to a root of
    ``p'`` that is also a root of ``p`` (a numerically split double root).
    """
    if p.degree < 1:
        raise ValueError("poly_roots needs degree >= 1")
    c = p.coeffs
    n = p.degree
    real = bool(np.all(c.imag == 0))
    mon = (c.real if real else c)[:-1] / (c.real[-1] if real else c[-1])
    comp = np.zeros((n, n), dtype=float if real else complex)
    comp[1:, :-1] = np.eye(n - 1)
    comp[:, -1] = -mon
    raw = np.linalg.eigvals(comp).astype(complex)

    dp = p.deriv()
    polished = [_newton_polish(p, dp, complex(z)) for z in raw]
    for z in polished:
        if abs(p(z)) > 1e-6 * max(_noise_bound(p, z), 1e-300):
            raise NonConvergence("root polishing failed", residual=abs(p(z)))

    # greedy clustering in order of |r|
    groups: list[list[complex]] = []
    for z in sorted(polished, key=lambda w: (abs(w), w.real, w.imag)):
        for g in groups:
            centre = sum(g) / len(g)
            if abs(z - centre) <= cluster_rtol * max(1.0, abs(centre)):
                g.append(z)
                break
        else:
            groups.append([z])

    merged = True
    while merged and len(groups) > 1:
        merged = False
        for i, gi in enumerate(groups):
            ci = sum(gi) / len(gi)
            order = sorted((j for j in range(len(groups)) if j != i),
                           key=lambda j: abs(sum(groups[j]) / len(groups[j]) - ci))
            # try the largest admissible union first
            for k in range(len(order), 0, -1):
                members = [i] + order[:k]
                pts = [z for j in members for z in groups[j]]
                m = len(pts)
                centre = sum(pts) / m
                if max(abs(z - centre) for z in pts) > _near_multiple_rtol(m) * max(1.0, abs(centre)):
                    continue
                pm = p.deriv(m - 1)
                z = _newton_polish(pm, pm.deriv(), centre)
                if all(abs(p.deriv(q)(z)) <= 1e-12 * max(_noise_bound(p.deriv(q), z), 1e-300)
                       for q in range(m)):
                    groups = [g for j, g in enumerate(groups) if j not in members]
                    groups.append([z] * m)
                    merged = True
                    break
            if merged:
                break

    out = []
    for g in groups:
        centre = sum(g) / len(g)
        if len(g) > 1:
            pm = p.deriv(len(g) - 1)
            centre = _newton_polish(pm, pm.deriv(), centre)
        out.append((complex(centre), len(g)))
    out.sort(key=lambda t: (t[0].real, t[0].imag))
    return out


def as_poly(obj) -> ComplexPoly:
    """Accept a ComplexPoly, anything with a ``.poly`` attribute, or a coefficient sequence."""
    if isinstance(obj, ComplexPoly):
        return obj
    if hasattr(obj, "poly"):
        return obj.poly
    return ComplexPoly(obj)


def cfmt(z: complex) -> list[float]:
    """Serialize a complex number as ``[re, im]``."""
    z = complex(z)
    return [float(z.real), float(z.imag)]


def cparse(pair: Sequence[float]) -> complex:
    re, im = pair
    return complex(float(re), float(im))
