"""Exact Schrodinger residual for polynomial-times-exponential states."""
from __future__ import annotations

from ..poly import ComplexPoly, as_poly


def residual_coefficients(V, E: complex, state) -> tuple[float, ComplexPoly]:
    """Return ``(max |coeff|, residual)`` for ``(E - H) psi`` with the exponential stripped.

    With ``psi = f exp(-g)`` and ``H = -1/2 d^2/dx^2 + V``::

        residual = 1/2 (f'' - 2 f' g' - f g'' + f g'^2) - (V - E) f

    which vanishes identically exactly when ``(E, psi)`` is an eigenpair.
    Raising ``E`` by ``delta`` adds ``delta * f`` to the residual.
    """
    if getattr(V, "poles", ()):
        raise ValueError("residual_coefficients needs a polynomial potential")
    v = as_poly(V)
    f, g = state.f, state.g
    g1 = g.deriv()
    kinetic = f.deriv(2) - 2 * f.deriv() * g1 - f * g.deriv(2) + f * g1 * g1
    res = 0.5 * kinetic - (v - complex(E)) * f
    return res.max_abs(), res
