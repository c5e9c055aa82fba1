"""Pointwise principal and sub-principal symbols of the surface operators.

For a frequency k and surface derivatives sampled at one point, with
p = grad eta and Hess the symmetric second-derivative matrix, the scalar
operator has principal symbol

    lambda1 = sqrt((1 + |p|^2) |k|^2 - (k . p)^2)

and the factorization symbol

    m1 = (i k . p + lambda1) / (1 + |p|^2).

The sub-principal symbol is

    lambda0 = (1 + |p|^2) / (2 lambda1) * ( div(m1 p) + i grad_k lambda1 . grad_x m1 ),
    lambda0_alpha = lambda0 + alpha (k . p)(k . p_perp) / |k|^2,

where the spatial derivatives are chain-ruled through p and Hess:
grad_x of any function of p is its p-gradient contracted with Hess.  The
closed-form partials below were derived that way and are pinned by the
nested finite-difference oracle in the test suite.

The vector operator acts through the scalar factor k . g_perp:

    nu1 g = k (k . g_perp) / lambda1,
    nu0 g = (zeta1, zeta2) (k . g_perp),

with zeta1, zeta2 combining the Hessian form
k1^2 eta_yy - 2 k1 k2 eta_xy + k2^2 eta_xx and an alpha-proportional tail.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import ZeroFrequencyError
from .lattice import PhysicalParams


@dataclass(frozen=True)
class SymbolPoint:
    """Surface derivatives at one point: gradient and symmetric Hessian."""

    grad_eta: np.ndarray  # (eta_x, eta_y)
    hess_eta: np.ndarray  # [[eta_xx, eta_xy], [eta_xy, eta_yy]]

    def __post_init__(self):
        g = np.asarray(self.grad_eta, dtype=float)
        h = np.asarray(self.hess_eta, dtype=float)
        h = 0.5 * (h + h.T)
        object.__setattr__(self, "grad_eta", g)
        object.__setattr__(self, "hess_eta", h)

    @classmethod
    def from_derivatives(cls, eta_x, eta_y, eta_xx, eta_xy, eta_yy):
        return cls(np.array([eta_x, eta_y]),
                   np.array([[eta_xx, eta_xy], [eta_xy, eta_yy]]))


@dataclass(frozen=True)
class SymbolValue:
    lambda1: float
    m1: complex
    m0: complex
    lambda0: complex
    lambda0_alpha: complex


def _lambda1(p: np.ndarray, k: np.ndarray) -> float:
    return float(np.sqrt((1.0 + p @ p) * (k @ k) - (k @ p) ** 2))


def eval_lambda(point: SymbolPoint, k, params: PhysicalParams) -> SymbolValue:
    """Principal and sub-principal scalar symbols at one (point, k)."""
    k = np.asarray(k, dtype=float)
    if k @ k == 0:
        raise ZeroFrequencyError("symbols are undefined at k = 0")
    p = point.grad_eta
    hess = point.hess_eta
    one_p2 = 1.0 + p @ p
    kp = k @ p
    lam1 = _lambda1(p, k)
    m1 = (1j * kp + lam1) / one_p2

    # spatial gradients via the chain rule: d/dx_j f(p) = (Hess df/dp)_j
    dlam1_dp = ((k @ k) * p - kp * k) / lam1
    grad_x_lam1 = hess @ dlam1_dp
    grad_x_kp = hess @ k
    grad_x_p2 = 2.0 * (hess @ p)
    grad_x_m1 = (1j * grad_x_kp + grad_x_lam1) / one_p2 \
        - (1j * kp + lam1) * grad_x_p2 / one_p2 ** 2

    grad_k_lam1 = (one_p2 * k - kp * p) / lam1
    div_m1_p = m1 * np.trace(hess) + grad_x_m1 @ p
    bracket = div_m1_p + 1j * (grad_k_lam1 @ grad_x_m1)
    m0 = bracket / (2.0 * lam1)
    lam0 = one_p2 * m0
    p_perp = np.array([p[1], -p[0]])
    lam0_alpha = lam0 + params.alpha * kp * (k @ p_perp) / (k @ k)
    return SymbolValue(lam1, complex(m1), complex(m0), complex(lam0),
                       complex(lam0_alpha))


def eval_nu(point: SymbolPoint, k, g_value, params: PhysicalParams):
    """(nu1 g, nu0 g) of the vector operator at one (point, k, g)."""
    k = np.asarray(k, dtype=float)
    if k @ k == 0:
        raise ZeroFrequencyError("symbols are undefined at k = 0")
    g_value = np.asarray(g_value)
    kg_perp = k[0] * g_value[1] - k[1] * g_value[0]
    lam1 = _lambda1(point.grad_eta, k)
    nu1 = k * (kg_perp / lam1)
    z1, z2 = zeta(point, k, params)
    nu0 = np.array([z1, z2]) * kg_perp
    return nu1, nu0


def zeta(point: SymbolPoint, k, params: PhysicalParams):
    """The two sub-principal coefficient functions of the vector operator."""
    k = np.asarray(k, dtype=float)
    if k @ k == 0:
        raise ZeroFrequencyError("symbols are undefined at k = 0")
    px, py = point.grad_eta
    hxx = point.hess_eta[0, 0]
    hxy = point.hess_eta[0, 1]
    hyy = point.hess_eta[1, 1]
    k1, k2 = k
    lam1 = _lambda1(point.grad_eta, k)
    hess_form = k1 * k1 * hyy - 2.0 * k1 * k2 * hxy + k2 * k2 * hxx
    alpha = params.alpha

    z1 = (1j / (2.0 * lam1 ** 5)) * (
        k1 * k1 * (-1.0 + 2.0 * py * py) * px
        - k1 * k2 * py * (3.0 + 4.0 * px * px)
        + 2.0 * k2 * k2 * px * (1.0 + px * px)
        + 1j * k1 * lam1
    ) * hess_form + (alpha / lam1 ** 2) * (k2 * (1.0 + px * px) - k1 * px * py)

    z2 = (1j / (2.0 * lam1 ** 5)) * (
        2.0 * k1 * k1 * py * (1.0 + py * py)
        - k1 * k2 * px * (3.0 + 4.0 * py * py)
        + k2 * k2 * py * (-1.0 + 2.0 * px * px)
        + 1j * k2 * lam1
    ) * hess_form + (alpha / lam1 ** 2) * (-k1 * (1.0 + py * py) + k2 * px * py)

    return complex(z1), complex(z2)


def eval_batch(rows: np.ndarray, params: PhysicalParams) -> list:
    """Evaluate symbols for rows of (eta_x, eta_y, eta_xx, eta_xy, eta_yy, k1, k2).

    Returns one dict per row with every symbol component split into real and
    imaginary parts, ready for CSV emission.
    """
    out = []
    for row in np.atleast_2d(np.asarray(rows, dtype=float)):
        ex, ey, exx, exy, eyy, k1, k2 = row
        point = SymbolPoint.from_derivatives(ex, ey, exx, exy, eyy)
        val = eval_lambda(point, (k1, k2), params)
        z1, z2 = zeta(point, (k1, k2), params)
        out.append({
            "lambda1": val.lambda1,
            "m1_re": val.m1.real, "m1_im": val.m1.imag,
            "m0_re": val.m0.real, "m0_im": val.m0.imag,
            "lambda0_re": val.lambda0.real, "lambda0_im": val.lambda0.imag,
            "lambda0_alpha_re": val.lambda0_alpha.real,
            "lambda0_alpha_im": val.lambda0_alpha.imag,
            "zeta1_re": z1.real, "zeta1_im": z1.imag,
            "zeta2_re": z2.real, "zeta2_im": z2.imag,
        })
    return out
