"""Central-difference Hamiltonian on a uniform grid with Dirichlet ends."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np
import scipy.linalg as sla
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from ..errors import NonConvergence
from ..poly import as_poly

DENSE_LIMIT = 600


@dataclass(frozen=True)
class GridResult:
    """Lowest ``count`` eigenvalues at ``N`` points.

    ``richardson`` estimates the discretization error of each value from
    the shift between ``N`` and ``2N`` points (error ~ dx^2), or is None
    when the comparison was not requested.
    """

    eigenvalues: tuple[complex, ...]
    N: int
    L: float
    richardson: Optional[tuple[float, ...]] = None
    eigenvalues_2N: Optional[tuple[complex, ...]] = None

    @property
    def extrapolated(self) -> tuple[complex, ...]:
        """Richardson-extrapolated values ``E_2N + (E_2N - E_N) / 3`` (or the raw ones)."""
        if self.eigenvalues_2N is None:
            return self.eigenvalues
        return tuple(f + (f - c) / 3 for c, f in zip(self.eigenvalues, self.eigenvalues_2N))


def hamiltonian(V, L: float, N: int):
    """Sparse ``-1/2 d^2/dx^2 + V`` on ``N`` interior points of ``[-L, L]``."""
    x = np.linspace(-L, L, N + 2)[1:-1]
    dx = x[1] - x[0]
    diag = 1.0 / dx**2 + as_poly(V)(x)
    off = np.full(N - 1, -0.5 / dx**2, dtype=complex)
    return sp.diags([off, diag, off], [-1, 0, 1], format="csc", dtype=complex), x


def _lowest(V, L: float, N: int, count: int) -> np.ndarray:
    H, x = hamiltonian(V, L, N)
    if N <= DENSE_LIMIT:
        vals = sla.eigvals(H.toarray())
    else:
        # real parts of the spectrum lie above min Re V, so shift-invert just
        # below it returns the levels of smallest real part
        sigma = float(np.min(as_poly(V)(x).real)) - 1.0
        k = min(N - 2, count + 6)
        try:
            vals = spla.eigs(H, k=k, sigma=sigma, which="LM", return_eigenvectors=False,
                             tol=1e-13, maxiter=20 * N)
        except spla.ArpackNoConvergence as exc:  # pragma: no cover - rare
            raise NonConvergence("ARPACK did not converge") from exc
    vals = sorted(vals, key=lambda z: (z.real, z.imag))
    if len(vals) < count:
        raise NonConvergence(f"only {len(vals)} eigenvalues available")
    return np.array(vals[:count])


def grid_diagonalize(V, L: float = 4.5, N: int = 1600, count: int = 3,
                     richardson: bool = True) -> GridResult:
    """Eigenvalues of smallest real part of the discretized operator.

    With ``richardson`` the problem is also solved with ``2N`` points and the
    error of the ``N``-point values is estimated as ``4/3 |E_N - E_2N|``.
    """
    if N < 200:
        raise ValueError("N must be at least 200")
    vals = _lowest(V, L, N, count)
    if not richardson:
        return GridResult(tuple(complex(v) for v in vals), N, L)
    fine = _lowest(V, L, 2 * N, count)
    # pair each coarse value with the nearest fine one
    paired = np.array([fine[np.argmin(np.abs(fine - v))] for v in vals])
    est = 4.0 / 3.0 * np.abs(vals - paired)
    return GridResult(tuple(complex(v) for v in vals), N, L,
                      tuple(float(e) for e in est), tuple(complex(v) for v in paired))
