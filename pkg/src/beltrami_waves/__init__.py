"""Pseudo-spectral toolkit for doubly periodic steady water waves over Beltrami flows.

Subpackage map:

    lattice        lattice geometry, physical parameters, depth multipliers,
                   nonresonance scan
    fields         truncated Fourier fields and their exact calculus
    expansion      Taylor expansions of the surface operators H, M, S, T
    differentials  evaluable operator differentials (consistency oracles)
    symbols        principal / sub-principal pseudodifferential symbols
    dispersion     dispersion relation, reference velocity, linearized solve
    bifurcation    second-order amplitude expansion tables and wave synthesis
    residual       direct evaluation of the steady-wave functional
    cli            configuration-driven command line
"""

__version__ = "0.1.0"

from .lattice import (LatticePair, NonresonanceReport, PhysicalParams,
                      build_lattice, check_nonresonance, multipliers_c_t)
from .fields import (SpectralScalarField, SpectralVectorField, calculus, div,
                     dot, grad, inv_laplacian, is_hermitian, laplacian, lift,
                     mean, perp_div, perp_grad, product)
from .expansion import (HodgeArgument, TaylorSeries, VectorArgument, H0_apply,
                        L_apply, M0_apply, expand_K_u_H, expand_S, taylor_H,
                        taylor_M, taylor_T)

__all__ = [
    "LatticePair", "NonresonanceReport", "PhysicalParams", "build_lattice",
    "check_nonresonance", "multipliers_c_t", "SpectralScalarField",
    "SpectralVectorField", "calculus", "div", "dot", "grad", "inv_laplacian",
    "is_hermitian", "laplacian", "lift", "mean", "perp_div", "perp_grad",
    "product", "HodgeArgument", "TaylorSeries", "VectorArgument", "H0_apply",
    "L_apply", "M0_apply", "expand_K_u_H", "expand_S", "taylor_H", "taylor_M",
    "taylor_T", "__version__",
]
