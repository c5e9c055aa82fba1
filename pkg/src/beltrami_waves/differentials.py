"""Evaluable differentials of the surface operators, used as cross-checks.

The derivative of H(eta) with respect to the profile admits the closed form

    dH[eta](deta)(gamma, Phi)
        = H(eta)( -alpha <P_perp deta>,
                  -alpha invlap div(P_perp deta) - u deta + <u deta> )
          - div(P deta),

    P = K(eta)(gamma, Phi) - u grad_eta,
    u = (K(eta)(gamma, Phi) . grad_eta + H(eta)(gamma, Phi)) / (1 + |grad_eta|^2),

and similarly

    dM[eta](deta)(gamma, g)
        = M(eta)( alpha <R_perp deta>, R_perp deta ) - grad(u deta)
          + alpha R_perp deta,

    R = M(eta)(gamma, g) + u grad_eta,
    u = (div g_perp - M(eta)(gamma, g) . grad_eta) / (1 + |grad_eta|^2).

Here H(eta) and M(eta) are replaced by their Taylor partial sums at the given
profile, so the formulas are directly computable; the reciprocal of
1 + |grad_eta|^2 is formed pointwise on the padded grid (the denominator
never falls below one).  Differentiating the expansions term by term gives
the Euler identities dH[eta](eta) = sum_k k H_k(eta) and likewise for M,
which the test suite uses to validate the recursion orders independently.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

import numpy as np

from .expansion import (HodgeArgument, VectorArgument, taylor_H, taylor_M)
from .fields import (DEFAULT_PAD, SpectralScalarField, SpectralVectorField,
                     constant_field, div, dot, from_grid, grad, inv_laplacian,
                     mean, perp_div, product, to_grid, _grid_size)
from .lattice import PhysicalParams


def _divide_pointwise(num, denom_grid, pad: float):
    """num / denom evaluated on the padded grid, truncated back to the box."""
    if isinstance(num, SpectralVectorField):
        return SpectralVectorField(_divide_pointwise(num.x, denom_grid, pad),
                                   _divide_pointwise(num.y, denom_grid, pad))
    size = denom_grid.shape[0]
    ratio = to_grid(num, size) / denom_grid
    return from_grid(num.lattice, num.truncation, ratio)


def one_plus_grad_sq_grid(eta: SpectralScalarField, pad: float = DEFAULT_PAD):
    """1 + |grad eta|^2 sampled on the padded grid."""
    size = _grid_size(eta.truncation, pad)
    g = grad(eta)
    gx = to_grid(g.x, size)
    gy = to_grid(g.y, size)
    return 1.0 + gx * gx + gy * gy


@dataclass
class TruncatedOperator:
    """H(eta) and M(eta) replaced by partial sums of fixed order at one eta."""

    eta: SpectralScalarField
    order: int
    params: PhysicalParams
    pad: float = DEFAULT_PAD

    def apply_h(self, arg: HodgeArgument) -> SpectralScalarField:
        return taylor_H(self.eta, arg, self.order, self.params, self.pad).partial_sum()

    def apply_m(self, arg: VectorArgument) -> SpectralVectorField:
        return taylor_M(self.eta, arg, self.order, self.params, self.pad).partial_sum()

    def apply_k(self, arg: HodgeArgument) -> SpectralVectorField:
        """K(eta)(gamma, Phi) = gamma + grad Phi - alpha perp_grad invlap H(...)."""
        from .fields import constant_vector_field, perp_grad
        h = self.apply_h(arg)
        out = grad(arg.phi) - self.params.alpha * perp_grad(inv_laplacian(h))
        if np.any(np.asarray(arg.gamma) != 0):
            out = out + constant_vector_field(self.eta.lattice,
                                              self.eta.truncation, arg.gamma)
        return out


def dH_apply(op: TruncatedOperator, delta_eta: SpectralScalarField,
             arg: HodgeArgument) -> SpectralScalarField:
    """Differential of H at op.eta in direction delta_eta, applied to arg."""
    p = op.params
    pad = op.pad
    h_val = op.apply_h(arg)
    k_val = op.apply_k(arg)
    grad_eta = grad(op.eta)
    denom = one_plus_grad_sq_grid(op.eta, pad)
    u = _divide_pointwise(dot(k_val, grad_eta, pad) + h_val, denom, pad)
    p_vec = k_val - product(u, grad_eta, pad)
    p_perp_d = product(p_vec.perp(), delta_eta, pad)
    u_d = product(u, delta_eta, pad)
    phi_arg = (-p.alpha) * inv_laplacian(div(p_perp_d)) - u_d \
        + constant_field(u_d.lattice, u_d.truncation, mean(u_d))
    inner = HodgeArgument(-p.alpha * mean(p_perp_d), phi_arg)
    return op.apply_h(inner) - div(product(p_vec, delta_eta, pad))


def dM_apply(op: TruncatedOperator, delta_eta: SpectralScalarField,
             arg: VectorArgument) -> SpectralVectorField:
    """Differential of M at op.eta in direction delta_eta, applied to arg."""
    p = op.params
    pad = op.pad
    m_val = op.apply_m(arg)
    grad_eta = grad(op.eta)
    denom = one_plus_grad_sq_grid(op.eta, pad)
    u = _divide_pointwise(perp_div(arg.g) - dot(m_val, grad_eta, pad), denom, pad)
    r_vec = m_val + product(u, grad_eta, pad)
    r_perp_d = product(r_vec.perp(), delta_eta, pad)
    inner = VectorArgument(p.alpha * mean(r_perp_d), r_perp_d)
    from .fields import grad as _grad
    return op.apply_m(inner) - _grad(product(u, delta_eta, pad)) \
        + p.alpha * r_perp_d
