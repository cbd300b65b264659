"""Independent numerical oracles for the analytic constructions."""
from .residual import residual_coefficients
from .shooting import ShootOptions, ShootResult, shoot_eigenvalue, shooting_mismatch, spectrum_scan
from .grid import GridResult, grid_diagonalize
from .scattering import ScatterResult, integrate_scattering, scattering_coefficients

__all__ = [
    "residual_coefficients",
    "ShootOptions",
    "ShootResult",
    "shoot_eigenvalue",
    "shooting_mismatch",
    "spectrum_scan",
    "GridResult",
    "grid_diagonalize",
    "ScatterResult",
    "scattering_coefficients",
    "integrate_scattering",
]
