"""PT-symmetric quasi-exactly-solvable sextic potentials.

Closed-form constructions for ``psi = f(x) exp(-g(x))`` with ``f`` of
degree 0, 1, 2, their SUSY partners, and independent numerical checks.
"""
from .construct import (AnsatzParams, Eigenpair, PolyExpState, QESSolution, SexticPotential,
                        SymmetryReport, TurbinerForm, classify_symmetry, construct_constant,
                        construct_linear, construct_quadratic, derive_general, turbiner_reduce)
from .errors import (InvalidParameters, NonConvergence, PairingDefect, QESError, RealAxisPole,
                     StepTooCoarse)
from .poly import ComplexPoly, PoleTerm, poly_roots, poly_shift, pt_image
from .susy import (JostSolution, RationalPotential, Superpotential, ZeroMode, jost_exact,
                   partner_potential, superpotential, zero_mode)

__version__ = "0.1.0"

__all__ = [
    "AnsatzParams", "ComplexPoly", "Eigenpair", "InvalidParameters", "JostSolution",
    "NonConvergence", "PairingDefect", "PoleTerm", "PolyExpState", "QESError", "QESSolution",
    "RationalPotential", "RealAxisPole", "SexticPotential", "StepTooCoarse", "Superpotential",
    "SymmetryReport", "TurbinerForm", "ZeroMode", "classify_symmetry", "construct_constant",
    "construct_linear", "construct_quadratic", "derive_general", "jost_exact",
    "partner_potential", "poly_roots", "poly_shift", "pt_image", "superpotential",
    "turbiner_reduce", "zero_mode",
]
