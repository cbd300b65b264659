"""Bound-state shooting with a Wronskian mismatch and complex Newton refinement."""
from __future__ import annotations

import cmath
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from ..errors import NonConvergence, QESError, StepTooCoarse
from ..poly import ComplexPoly, as_poly
from ._rk4 import chain_product, step_matrices

STAGNATION_RTOL = 1e-9


@dataclass(frozen=True)
class ShootOptions:
    L: float = 4.5
    step: float = 1e-3
    match_point: float = 0.0
    tol: float = 1e-10
    max_iter: int = 50
    check_step: bool = True

    def __post_init__(self):
        if not self.L > 0:
            raise ValueError("L must be positive")
        if not self.step > 0:
            raise ValueError("step must be positive")
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        if not -self.L < self.match_point < self.L:
            raise ValueError("match_point must lie inside (-L, L)")


@dataclass(frozen=True)
class ShootResult:
    energy: complex
    mismatch: float
    iterations: int
    step_error: float = float("nan")


def _confining(V) -> ComplexPoly:
    p = as_poly(V)
    if p.degree < 2 or p.degree % 2 or p.lead.real <= 0:
        raise ValueError("shooting needs an even-degree polynomial with Re(lead) > 0")
    return p


class _Shooter:
    """Precomputes the potential on both integration legs for one step size."""

    def __init__(self, V: ComplexPoly, opts: ShootOptions):
        self.V = V
        self.dV = V.deriv()
        self.L = opts.L
        m = opts.match_point
        self.legs = []
        for start in (-opts.L, opts.L):
            n = max(2, int(round(abs(m - start) / opts.step)))
            xs = np.linspace(start, m, 2 * n + 1)
            self.legs.append((start, (m - start) / n, self.V(xs)))

    def _boundary(self, start, E):
        q = 2 * (self.V(start) - E)
        kappa = np.sqrt(q)
        kappa = np.where(kappa.real < 0, -kappa, kappa)
        corr = self.dV(start) / (2 * q)
        # decaying away from the interior on each side, first WKB correction included
        slope = (kappa - corr) if start < 0 else (-kappa - corr)
        return np.stack([np.ones_like(slope), slope], axis=-1)

    def states(self, E):
        """Solutions at the match point: ``(yL, yR, exponent)`` for an array of energies."""
        E = np.atleast_1d(np.asarray(E, dtype=complex))
        ys, exps = [], []
        for start, h, vals in self.legs:
            q = 2 * (vals[None, :] - E[:, None])
            T = step_matrices(q[:, 0:-1:2], q[:, 1::2], q[:, 2::2], h)
            M, e = chain_product(T)
            y = np.einsum("eij,ej->ei", M, self._boundary(start, E))
            ys.append(y)
            exps.append(e)
        return ys[0], ys[1], exps[0] + exps[1]

    def mismatch(self, E):
        """Wronskian ``uL uR' - uL' uR`` as ``(mantissa, exponent)`` plus its normalized size."""
        yl, yr, e = self.states(E)
        w = yl[:, 0] * yr[:, 1] - yl[:, 1] * yr[:, 0]
        norm = np.abs(w) / (np.linalg.norm(yl, axis=1) * np.linalg.norm(yr, axis=1))
        return w, e, norm


def shooting_mismatch(V, E, opts: ShootOptions = ShootOptions()) -> complex:
    """Unnormalized Wronskian ``M(E)``; analytic in ``E`` (may be huge or tiny)."""
    w, e, _ = _Shooter(_confining(V), opts).mismatch([E])
    return complex(math.ldexp(w[0].real, int(e[0])), math.ldexp(w[0].imag, int(e[0])))


def _newton(shooter: _Shooter, E0: complex, opts: ShootOptions):
    E = complex(E0)
    norm = np.inf
    prev = np.inf
    for it in range(1, opts.max_iter + 1):
        h = 1e-6 * max(1.0, abs(E))
        w, e, nrm = shooter.mismatch([E, E + h, E - h])
        norm = float(nrm[0])
        # bring the three values to a common power of two before combining
        rel = np.ldexp(1.0, (e - e[0]).astype(int))
        w = w * rel
        dM = (w[1] - w[2]) / (2 * h)
        if dM == 0 or not np.isfinite(dM):
            raise NonConvergence("vanishing mismatch derivative", residual=norm)
        delta = w[0] / dM
        E_new = E - delta
        if not cmath.isfinite(E_new):
            raise NonConvergence("Newton iterate left the finite range", residual=norm)
        scale = max(1.0, abs(E))
        if norm <= opts.tol or abs(delta) <= 1e-14 * scale:
            return E_new, norm, it
        # steps that stop shrinking while already tiny mean the mismatch has hit
        # its rounding floor (deep wells cancel heavily in the Wronskian)
        if abs(delta) <= STAGNATION_RTOL * scale and abs(delta) > 0.5 * prev:
            return E_new, norm, it
        prev = abs(delta)
        E = E_new
    raise NonConvergence(f"no convergence in {opts.max_iter} Newton steps", residual=norm)


def shoot_eigenvalue(V, E0: complex, opts: ShootOptions = ShootOptions()) -> ShootResult:
    """Refine a level of ``-psi''/2 + V psi = E psi`` starting from the guess ``E0``.

    Both legs are integrated inward from ``-L`` and ``+L`` to the match
    point.  With ``opts.check_step`` the search is repeated at half the
    step; a shift larger than ``10 * tol`` raises StepTooCoarse.
    """
    p = _confining(V)
    E, norm, it = _newton(_Shooter(p, opts), E0, opts)
    err = float("nan")
    if opts.check_step:
        half = replace(opts, step=opts.step / 2)
        E_half, _, _ = _newton(_Shooter(p, half), E, half)
        err = abs(E_half - E)
        if err > 10 * opts.tol * max(1.0, abs(E)):
            raise StepTooCoarse(f"level near {E:.8g}", err)
    return ShootResult(E, norm, it, err)


def spectrum_scan(V, window, opts: ShootOptions = ShootOptions(), n_re: int = 16, n_im: int = 1,
                  dedupe: float = 1e-6, workers: int | None = None) -> list[complex]:
    """Levels found by seeding Newton over ``window = (re_lo, re_hi, im_lo, im_hi)``.

    Seeds that fail to converge or land outside the window are dropped.
    Output is sorted by real then imaginary part.
    """
    re_lo, re_hi, im_lo, im_hi = window
    p = _confining(V)
    seeds = [complex(a, b) for a in np.linspace(re_lo, re_hi, n_re)
             for b in np.linspace(im_lo, im_hi, n_im)]
    shooter = _Shooter(p, opts)

    def attempt(seed):
        try:
            return _newton(shooter, seed, opts)[0]
        except QESError:
            return None

    with ThreadPoolExecutor(max_workers=workers) as pool:
        found = list(pool.map(attempt, seeds))
    levels: list[complex] = []
    for E in found:
        if E is None or not (re_lo <= E.real <= re_hi and im_lo <= E.imag <= im_hi):
            continue
        if all(abs(E - other) > dedupe for other in levels):
            levels.append(E)
    return sorted(levels, key=lambda z: (z.real, z.imag))
