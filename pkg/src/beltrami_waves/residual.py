"""Direct evaluation of the steady-wave functional on truncated expansions.

The single-equation form of the steady problem reads

    J(eta, mu) = 1/2 |T|^2 - (-uN + T . grad_eta)^2 / (2 (1 + |grad_eta|^2))
                 + T . uh + g eta
                 - beta d/dx(eta_x / sqrt(1 + |grad_eta|^2))
                 - beta d/dy(eta_y / sqrt(1 + |grad_eta|^2)),

where uh is the horizontal laminar velocity evaluated on the surface,

    uh = (c1 cos(alpha eta) + c2 sin(alpha eta),
          -c1 sin(alpha eta) + c2 cos(alpha eta)),

uN = div(S(eta)_perp) is its flux through the surface, with the closed-form
shear trace

    S(eta) = (c1/alpha) (cos(alpha eta) - 1, -sin(alpha eta))
           + (c2/alpha) (sin(alpha eta),  cos(alpha eta) - 1)

(reducing to eta c_perp as alpha -> 0), and T is evaluated through its
Taylor expansion with wave velocity c = c0 + mu rather than by inverting an
operator.  Quotients are formed pointwise on the padded grid, so truncation
error is confined to the expansion of T; with defaults the truncation
contributes at one order beyond the residual decay being measured.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np

from .bifurcation import AmplitudeState, ExpansionTables, synthesize_wave
from .errors import DegenerateFitError, OrderMismatchError
from .expansion import taylor_T
from .fields import (DEFAULT_PAD, SpectralScalarField, SpectralVectorField,
                     _grid_size, from_grid, grad, hermitize, is_hermitian,
                     perp_div, to_grid)
from .lattice import LatticePair, PhysicalParams


def ustar_surface(eta: SpectralScalarField, c, params: PhysicalParams,
                  pad: float = DEFAULT_PAD):
    """(uh, uN): surface trace of the laminar field and its normal flux.

    The trig factors are sampled pointwise on the padded grid and truncated
    back to the box; uN is the exact spectral divergence of S_perp.
    """
    c = np.asarray(c, dtype=float)
    lattice, n = eta.lattice, eta.truncation
    alpha = params.alpha
    if alpha == 0.0:
        # S = eta c_perp, uh = c
        from .fields import constant_vector_field
        s_field = SpectralVectorField(c[1] * eta, -c[0] * eta)
        uh = constant_vector_field(lattice, n, c)
        return uh, perp_div(s_field)
    size = _grid_size(n, pad)
    eg = to_grid(eta, size)
    if is_hermitian(eta):
        eg = eg.real
    cos_g = np.cos(alpha * eg)
    sin_g = np.sin(alpha * eg)
    uh = SpectralVectorField(
        from_grid(lattice, n, c[0] * cos_g + c[1] * sin_g),
        from_grid(lattice, n, -c[0] * sin_g + c[1] * cos_g),
    )
    s_field = SpectralVectorField(
        from_grid(lattice, n, (c[0] * (cos_g - 1.0) + c[1] * sin_g) / alpha),
        from_grid(lattice, n, (-c[0] * sin_g + c[1] * (cos_g - 1.0)) / alpha),
    )
    return uh, perp_div(s_field)


@dataclass(frozen=True)
class ResidualReport:
    residual_field: SpectralScalarField
    l2_norm: float
    sup_norm: float
    kernel_projection_norm: float
    truncation_order: int

    def to_json_dict(self) -> dict:
        return {
            "l2_norm": self.l2_norm,
            "sup_norm": self.sup_norm,
            "kernel_projection_norm": self.kernel_projection_norm,
            "truncation_order": self.truncation_order,
        }


def evaluate_J(eta: SpectralScalarField, mu, order: int, params: PhysicalParams,
               pad: float = DEFAULT_PAD) -> ResidualReport:
    """Evaluate the steady-wave functional with T truncated at ``order``."""
    if order < 1:
        raise OrderMismatchError("truncation order must be >= 1")
    c = params.require_c0() + np.asarray(mu, dtype=float)
    lattice, n = eta.lattice, eta.truncation
    real_input = is_hermitian(eta)

    t_field = taylor_T(eta, c, order, params, pad).partial_sum()
    uh, un = ustar_surface(eta, c, params, pad)

    size = _grid_size(n, pad)

    def gridded(f):
        g = to_grid(f, size)
        return g.real if real_input else g

    eg = gridded(eta)
    grad_eta = grad(eta)
    gx, gy = gridded(grad_eta.x), gridded(grad_eta.y)
    tx, ty = gridded(t_field.x), gridded(t_field.y)
    uhx, uhy = gridded(uh.x), gridded(uh.y)
    un_g = gridded(un)

    denom = 1.0 + gx * gx + gy * gy
    w = -un_g + tx * gx + ty * gy
    j_grid = 0.5 * (tx * tx + ty * ty) - w * w / (2.0 * denom) \
        + tx * uhx + ty * uhy + params.gravity * eg

    if params.beta != 0.0:
        root = np.sqrt(denom)
        qx = from_grid(lattice, n, gx / root)
        qy = from_grid(lattice, n, gy / root)
        kx_, ky_, _ = _box_modes(lattice, n)
        st = 1j * (kx_ * qx.coeffs + ky_ * qy.coeffs)
        st_grid = gridded(SpectralScalarField(lattice, n, st))
        j_grid = j_grid - params.beta * st_grid

    out = from_grid(lattice, n, j_grid)
    if real_input:
        out = SpectralScalarField(lattice, n, hermitize(out.coeffs))
    kernel = np.sqrt(sum(abs(out.coeff(m1, m2)) ** 2
                         for m1, m2 in [(1, 0), (-1, 0), (0, 1), (0, -1)]))
    return ResidualReport(out, out.l2_norm(), float(np.max(np.abs(j_grid))),
                          float(kernel), order)


def _box_modes(lattice: LatticePair, n: int):
    from .fields import mode_vectors
    return mode_vectors(lattice, n)


@dataclass(frozen=True)
class ScalingStudy:
    """Residual norms across an amplitude sweep with fitted log-log slopes."""

    amplitudes: tuple
    l2_norms: tuple
    sup_norms: tuple
    kernel_norms: tuple
    l2_slope: float
    kernel_slope: float
    truncation_order: int

    def rows(self) -> list:
        return [
            {"amplitude": a, "l2": l, "sup": s, "kernel_l2": kn}
            for a, l, s, kn in zip(self.amplitudes, self.l2_norms,
                                   self.sup_norms, self.kernel_norms)
        ]

    def to_json_dict(self) -> dict:
        return {
            "rows": self.rows(),
            "l2_slope": self.l2_slope,
            "kernel_slope": self.kernel_slope,
            "truncation_order": self.truncation_order,
        }


def scaling_study(amplitudes: Sequence[float], direction: AmplitudeState,
                  tables: ExpansionTables, order: int, params: PhysicalParams,
                  lattice: LatticePair, truncation: int,
                  pad: float = DEFAULT_PAD) -> ScalingStudy:
    """Sweep synthesized waves over amplitudes and fit residual decay rates.

    ``direction`` fixes the ratio and phases of the two amplitudes; each
    sweep point scales both by the listed amplitude.
    """
    if len(amplitudes) < 3:
        raise DegenerateFitError("need at least 3 amplitudes for a slope fit")
    amps = [float(a) for a in amplitudes]
    if any(a <= 0 for a in amps):
        raise DegenerateFitError("amplitudes must be positive")
    l2s, sups, kernels = [], [], []
    for a in amps:
        state = AmplitudeState(a * direction.A, a * direction.B)
        eta, mu = synthesize_wave(state, tables, lattice, truncation)
        rep = evaluate_J(eta, mu, order, params, pad)
        l2s.append(rep.l2_norm)
        sups.append(rep.sup_norm)
        kernels.append(rep.kernel_projection_norm)
    log_a = np.log(amps)
    l2_slope = float(np.polyfit(log_a, np.log(l2s), 1)[0])
    kernel_slope = float(np.polyfit(log_a, np.log(kernels), 1)[0])
    return ScalingStudy(tuple(amps), tuple(l2s), tuple(sups), tuple(kernels),
                        l2_slope, kernel_slope, order)
