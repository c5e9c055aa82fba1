"""Taylor expansions of the generalized surface operators in powers of eta.

Two operator families are expanded about the flat surface: the scalar-valued
H(eta), acting on a Hodge pair (gamma, Phi), and the vector-valued M(eta),
acting on (gamma, g).  Their order-zero parts are explicit Fourier
multipliers,

    H_0 (gamma, Phi) = D^2 t(D) Phi,
    M_0 (gamma, g)   = -gamma + L_1 g,

with the companion multipliers

    L_1 g = (alpha D_perp + D c(D)) (D . g_perp) / D^2,
    L_2 g = (-alpha D + D_perp c(D)) (D . g_perp) / D^2,
    L   g = ((alpha^2 - D^2) D - alpha c(D) D_perp) (D . g_perp) / D^2,

where D = -i grad and c, t are the depth multipliers of ``lattice``.  Higher
orders follow from differentiating the operators in eta: order k is assembled
from orders < k applied to arguments that themselves carry one extra factor
of eta, together with the interleaved expansions of

    K(eta)(gamma, Phi) = gamma + grad Phi - alpha perp_grad invlap H(eta)(gamma, Phi)

and of the scaled normal derivative u.  Each term returned here is the
operator term applied to the concrete argument, materialized as a field.

The surface shear profile enters through

    S_k(eta) = (-1)^(k/2)     alpha^(k-1) eta^k / k!  c        (k even)
             = (-1)^((k-1)/2) alpha^(k-1) eta^k / k!  c_perp   (k odd)

and T(eta) = M(eta)(0, S(eta)) is expanded as T_k = sum_j M_{k-j}(0, S_j).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Sequence, Union

import numpy as np

from .errors import ConfigError, OrderMismatchError
from .fields import (DEFAULT_PAD, SpectralScalarField, SpectralVectorField,
                     constant_field, constant_vector_field, div, dot, grad,
                     inv_laplacian, mean, mode_vectors, perp_div, perp_grad,
                     product, zero_field, zero_vector_field)
from .lattice import LatticePair, PhysicalParams, ct_arrays

_MULT_CACHE: dict = {}


@dataclass(frozen=True)
class HodgeArgument:
    """Mean part gamma and gradient-potential trace Phi of a tangential field.

    The mean coefficient of ``phi`` is inert: every consumer differentiates
    or applies a mean-killing multiplier to it.
    """

    gamma: np.ndarray
    phi: SpectralScalarField

    def __post_init__(self):
        object.__setattr__(self, "gamma", np.asarray(self.gamma))


@dataclass(frozen=True)
class VectorArgument:
    gamma: np.ndarray
    g: SpectralVectorField

    def __post_init__(self):
        object.__setattr__(self, "gamma", np.asarray(self.gamma))


@dataclass(frozen=True)
class TaylorSeries:
    """Terms 0..order of an expansion; term k is homogeneous of degree k."""

    order: int
    terms: tuple

    def __post_init__(self):
        if len(self.terms) != self.order + 1:
            raise OrderMismatchError(
                f"expected {self.order + 1} terms, got {len(self.terms)}"
            )

    def __getitem__(self, k: int):
        return self.terms[k]

    def partial_sum(self, upto: Optional[int] = None):
        upto = self.order if upto is None else upto
        total = self.terms[0]
        for k in range(1, upto + 1):
            total = total + self.terms[k]
        return total

    def to_json_list(self) -> list:
        return [
            {"order": k, "arity": term.arity, "field": term.to_json_dict()}
            for k, term in enumerate(self.terms)
        ]


def _multipliers(lattice: LatticePair, n: int, params: PhysicalParams):
    """Cached multiplier tables over the index box.

    Returns (C, T, H0MULT, L1X, L1Y, L2X, L2Y, LX, LY) with the L components
    already divided by |k|^2 and zeroed on the k = 0 mode.
    """
    key = (lattice._key(), n, params.alpha, params.depth, params.resonance_tol)
    hit = _MULT_CACHE.get(key)
    if hit is not None:
        return hit
    kx, ky, s = mode_vectors(lattice, n)
    c, t = ct_arrays(s, params)
    h0 = s * s * t
    alpha = params.alpha
    s2 = s * s
    inv_s2 = np.zeros_like(s2)
    nz = s2 > 0
    inv_s2[nz] = 1.0 / s2[nz]
    l1x = (alpha * ky + kx * c) * inv_s2
    l1y = (-alpha * kx + ky * c) * inv_s2
    l2x = (-alpha * kx + ky * c) * inv_s2
    l2y = (-alpha * ky - kx * c) * inv_s2
    lx = ((alpha ** 2 - s2) * kx - alpha * c * ky) * inv_s2
    ly = ((alpha ** 2 - s2) * ky + alpha * c * kx) * inv_s2
    out = (c, t, h0, l1x, l1y, l2x, l2y, lx, ly)
    for arr in out:
        arr.flags.writeable = False
    _MULT_CACHE[key] = out
    return out


def H0_apply(arg: HodgeArgument, params: PhysicalParams) -> SpectralScalarField:
    """Flat-surface operator D^2 t(D) applied to Phi; gamma is ignored."""
    phi = arg.phi
    mult = _multipliers(phi.lattice, phi.truncation, params)[2]
    return phi._like(mult * phi.coeffs)


def L_apply(g: SpectralVectorField, which: str,
            params: PhysicalParams) -> SpectralVectorField:
    """One of the L, L1, L2 multipliers acting on the scalar D . g_perp."""
    mults = _multipliers(g.lattice, g.truncation, params)
    try:
        mx, my = {"L1": mults[3:5], "L2": mults[5:7], "L": mults[7:9]}[which]
    except KeyError:
        raise ConfigError(f"unknown multiplier {which!r}; expected L, L1 or L2")
    kx, ky, _ = mode_vectors(g.lattice, g.truncation)
    s_hat = kx * g.y.coeffs - ky * g.x.coeffs  # spectrum of D . g_perp
    return SpectralVectorField(g.x._like(mx * s_hat), g.x._like(my * s_hat))


def M0_apply(arg: VectorArgument, params: PhysicalParams) -> SpectralVectorField:
    """-gamma + L1 g."""
    out = L_apply(arg.g, "L1", params)
    if np.any(arg.gamma != 0):
        out = out - constant_vector_field(arg.g.lattice, arg.g.truncation, arg.gamma)
    return out


# ---------------------------------------------------------------------------
# shared eta context


class _EtaContext:
    """Precomputed powers and derivatives of one wave profile."""

    def __init__(self, eta: SpectralScalarField, params: PhysicalParams,
                 max_order: int, pad: float):
        self.eta = eta
        self.params = params
        self.pad = pad
        self.grad_eta = grad(eta)
        gx, gy = self.grad_eta.x, self.grad_eta.y
        g2 = product(gx, gx, pad) + product(gy, gy, pad)
        # (|grad eta|^2)^j for j = 0 .. floor(max_order / 2); entry 0 unused
        self.grad_sq_pow: List[Optional[SpectralScalarField]] = [None, g2]
        for _ in range(2, max_order // 2 + 1):
            self.grad_sq_pow.append(product(self.grad_sq_pow[-1], g2, pad))

    def times_eta(self, f):
        return product(f, self.eta, self.pad)

    def times_grad_sq_pow(self, f, j: int):
        if j == 0:
            return f
        return product(f, self.grad_sq_pow[j], self.pad)


# ---------------------------------------------------------------------------
# H = sum H_k


class _HSeries:
    """Orders 0..K of H, K(eta) and u at one (gamma, Phi)."""

    def __init__(self, ctx: _EtaContext, arg: HodgeArgument, order: int):
        p = ctx.params
        pad = ctx.pad
        h0 = H0_apply(arg, p)
        k0 = grad(arg.phi) - p.alpha * perp_grad(inv_laplacian(h0))
        if np.any(arg.gamma != 0):
            k0 = k0 + constant_vector_field(arg.phi.lattice, arg.phi.truncation,
                                            arg.gamma)
        self.h = [h0]
        self.kv = [k0]
        self.u = [h0]
        children: List[_HSeries] = []
        for k in range(1, order + 1):
            i = k - 1
            p_i = self.kv[i]
            if i >= 1:
                p_i = p_i - product(self.u[i - 1], ctx.grad_eta, pad)
            p_perp_eta = ctx.times_eta(p_i.perp())
            u_eta = ctx.times_eta(self.u[i])
            phi_i = (-p.alpha) * inv_laplacian(div(p_perp_eta)) - u_eta \
                + constant_field(u_eta.lattice, u_eta.truncation, mean(u_eta))
            arg_i = HodgeArgument(-p.alpha * mean(p_perp_eta), phi_i)
            children.append(_HSeries(ctx, arg_i, order - k))
            acc = children[k - 1].h[0]
            for j in range(1, k):
                acc = acc + children[k - 1 - j].h[j]
            h_k = (1.0 / k) * (acc - div(ctx.times_eta(p_i)))
            self.h.append(h_k)
            self.kv.append((-p.alpha) * perp_grad(inv_laplacian(h_k)))
            self.u.append(self._u_term(ctx, k))

    def _u_term(self, ctx: _EtaContext, k: int) -> SpectralScalarField:
        # sum over i + 2j = k with i >= 1; the i = 0 slot is the separated
        # (-1)^(k/2) |grad eta|^k H_0 term, present for even k only
        total = None
        for i in range(1 if k % 2 else 2, k + 1, 2):
            j = (k - i) // 2
            inner = dot(self.kv[i - 1], ctx.grad_eta, ctx.pad) + self.h[i]
            term = ((-1) ** j) * ctx.times_grad_sq_pow(inner, j)
            total = term if total is None else total + term
        if k % 2 == 0:
            lead = ((-1) ** (k // 2)) * ctx.times_grad_sq_pow(self.h[0], k // 2)
            total = lead if total is None else total + lead
        return total


def taylor_H(eta: SpectralScalarField, arg: HodgeArgument, order: int,
             params: PhysicalParams, pad: float = DEFAULT_PAD) -> TaylorSeries:
    """Terms H_0, ..., H_order of H(eta) applied to (gamma, Phi)."""
    if order < 0:
        raise OrderMismatchError("order must be >= 0")
    ctx = _EtaContext(eta, params, order, pad)
    ser = _HSeries(ctx, arg, order)
    return TaylorSeries(order, tuple(ser.h))


def expand_K_u_H(eta: SpectralScalarField, arg: HodgeArgument, order: int,
                 h_terms: TaylorSeries, params: PhysicalParams,
                 pad: float = DEFAULT_PAD):
    """(K_terms, u_terms) built from a given H series at the same argument."""
    if h_terms.order < order:
        raise OrderMismatchError(
            f"H series carries orders 0..{h_terms.order}, need 0..{order}"
        )
    ctx = _EtaContext(eta, params, order, pad)
    k0 = grad(arg.phi) - params.alpha * perp_grad(inv_laplacian(h_terms[0]))
    if np.any(arg.gamma != 0):
        k0 = k0 + constant_vector_field(eta.lattice, eta.truncation, arg.gamma)
    kv = [k0]
    for k in range(1, order + 1):
        kv.append((-params.alpha) * perp_grad(inv_laplacian(h_terms[k])))
    u = [h_terms[0]]
    for k in range(1, order + 1):
        total = None
        for i in range(1 if k % 2 else 2, k + 1, 2):
            j = (k - i) // 2
            inner = dot(kv[i - 1], ctx.grad_eta, pad) + h_terms[i]
            term = ((-1) ** j) * ctx.times_grad_sq_pow(inner, j)
            total = term if total is None else total + term
        if k % 2 == 0:
            lead = ((-1) ** (k // 2)) * ctx.times_grad_sq_pow(h_terms[0], k // 2)
            total = lead if total is None else total + lead
        u.append(total)
    return TaylorSeries(order, tuple(kv)), TaylorSeries(order, tuple(u))


# ---------------------------------------------------------------------------
# M = sum M_k


class _MSeries:
    """Orders 0..K of M(eta) and u at one (gamma, g)."""

    def __init__(self, ctx: _EtaContext, arg: VectorArgument, order: int):
        p = ctx.params
        pad = ctx.pad
        m0 = M0_apply(arg, p)
        self.m = [m0]
        self.u = [perp_div(arg.g)]
        children: List[_MSeries] = []
        for k in range(1, order + 1):
            i = k - 1
            q_i = self.m[i]
            if i >= 1:
                q_i = q_i + product(self.u[i - 1], ctx.grad_eta, pad)
            q_perp_eta = ctx.times_eta(q_i.perp())
            arg_i = VectorArgument(p.alpha * mean(q_perp_eta), q_perp_eta)
            children.append(_MSeries(ctx, arg_i, order - k))
            acc = children[k - 1].m[0]
            for j in range(1, k):
                acc = acc + children[k - 1 - j].m[j]
            m_k = (1.0 / k) * (acc - grad(ctx.times_eta(self.u[k - 1]))
                               + p.alpha * q_perp_eta)
            self.m.append(m_k)
            self.u.append(self._u_term(ctx, k))

    def _u_term(self, ctx: _EtaContext, k: int) -> SpectralScalarField:
        # sum over i + 2j = k - 1 with i >= 0, subtracted
        total = None
        for i in range((k - 1) % 2, k, 2):
            j = (k - 1 - i) // 2
            inner = dot(self.m[i], ctx.grad_eta, ctx.pad)
            term = -((-1) ** j) * ctx.times_grad_sq_pow(inner, j)
            total = term if total is None else total + term
        if k % 2 == 0:
            lead = ((-1) ** (k // 2)) * ctx.times_grad_sq_pow(self.u[0], k // 2)
            total = lead if total is None else total + lead
        return total


def taylor_M(eta: SpectralScalarField, arg: VectorArgument, order: int,
             params: PhysicalParams, pad: float = DEFAULT_PAD) -> TaylorSeries:
    """Terms M_0, ..., M_order of M(eta) applied to (gamma, g)."""
    if order < 0:
        raise OrderMismatchError("order must be >= 0")
    ctx = _EtaContext(eta, params, order, pad)
    ser = _MSeries(ctx, arg, order)
    return TaylorSeries(order, tuple(ser.m))


# ---------------------------------------------------------------------------
# S and T


def expand_S(eta: SpectralScalarField, c, alpha: float, order: int,
             pad: float = DEFAULT_PAD) -> TaylorSeries:
    """Terms of the surface shear trace; S_0 = 0, S_1 = eta c_perp, ..."""
    if order < 1:
        raise OrderMismatchError("order must be >= 1")
    c = np.asarray(c)
    c_perp = np.array([c[1], -c[0]])
    terms = [zero_vector_field(eta.lattice, eta.truncation)]
    eta_pow = eta
    factorial = 1.0
    for k in range(1, order + 1):
        factorial *= k
        if k > 1:
            eta_pow = product(eta_pow, eta, pad)
        if k % 2 == 0:
            coeff = (-1.0) ** (k // 2) * alpha ** (k - 1) / factorial
            vec = c
        else:
            coeff = (-1.0) ** ((k - 1) // 2) * alpha ** (k - 1) / factorial
            vec = c_perp
        scaled = coeff * eta_pow
        terms.append(SpectralVectorField(vec[0] * scaled, vec[1] * scaled))
    return TaylorSeries(order, tuple(terms))


def taylor_T(eta: SpectralScalarField, c, order: int, params: PhysicalParams,
             pad: float = DEFAULT_PAD) -> TaylorSeries:
    """Terms of T(eta) = M(eta)(0, S(eta)): T_k = sum_{j=1}^{k} M_{k-j}(0, S_j)."""
    if order < 0:
        raise OrderMismatchError("order must be >= 0")
    terms = [zero_vector_field(eta.lattice, eta.truncation) for _ in range(order + 1)]
    if order == 0:
        return TaylorSeries(order, tuple(terms))
    ctx = _EtaContext(eta, params, order, pad)
    s_terms = expand_S(eta, c, params.alpha, order, pad)
    zero_gamma = np.zeros(2)
    for j in range(1, order + 1):
        ser = _MSeries(ctx, VectorArgument(zero_gamma, s_terms[j]), order - j)
        for k in range(j, order + 1):
            terms[k] = terms[k] + ser.m[k - j]
    return TaylorSeries(order, tuple(terms))
