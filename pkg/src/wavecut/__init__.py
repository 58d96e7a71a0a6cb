"""wavecut: exactly solvable 1D two-body decoupling scattering model.

Wiener-Hopf factorization of the scattering kernel, branch-cut contour
integrals for the two-particle wave function in both regions, closed-form
special-function identities and far-field asymptotics, all cross-validated
against independent brute-force quadrature.
"""

from ._backend import BACKEND
from .model import (PhysicalParams, ReducedParams, branch_sqrt, green0,
                    kernel_S, kernel_sigma, reduce_params, reflection)
from .specfun import dilog, im_ti2, ti2
from .wavefunction import (Method, WaveGrid, WaveSample, expected_displacement,
                           far_field, phi_integral, psi_atom, psi_free,
                           psi_unified, psi_unified_extrapolated, scan_grid,
                           steepest_descent, tail_exponent)
from .wiener_hopf import (appendix_b_closed, b3_identity_check, j_direct,
                          sigma_plus, splus, splus_at_K,
                          splus_product_identity)

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "__version__",
    "PhysicalParams", "ReducedParams", "reduce_params", "branch_sqrt",
    "kernel_sigma", "kernel_S", "reflection", "green0",
    "dilog", "ti2", "im_ti2",
    "splus", "splus_at_K", "splus_product_identity", "sigma_plus",
    "j_direct", "appendix_b_closed", "b3_identity_check",
    "Method", "WaveSample", "WaveGrid", "psi_free", "psi_atom",
    "phi_integral", "psi_unified", "psi_unified_extrapolated", "far_field",
    "steepest_descent", "expected_displacement", "tail_exponent", "scan_grid",
]
