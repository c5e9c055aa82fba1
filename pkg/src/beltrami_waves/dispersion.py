"""Dispersion relation, reference velocity and the linearized surface solve.

The linearization of the steady-wave functional about the flat state acts
diagonally on Fourier modes with symbol (c(|k|)/|k|^2) rho(k, c0, beta),
where

    rho(k, c, beta) = [g + beta |k|^2 - (alpha/|k|^2)(c . k)(k_perp . c)]
                        * |k|^2 t(|k|)  -  (c . k)^2.

A reference velocity c0 is fixed by forcing rho to vanish on both dual
generators (two equations, two unknowns, Newton with the analytic velocity
gradient); the transversality scan then confirms that no other mode in the
index box is a root and that the two velocity gradients are independent.

The zero mode of the linearized operator is multiplication by gravity, the
four generator modes span the kernel, and the inverse on the range divides
by the symbol.  For beta = 0 the inverse has no decay guarantee; the solve
still runs but emits ``FormalInverseWarning`` carrying the smallest divisor.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import (ConfigError, FormalInverseWarning, NearResonantDivisorError,
                     NonConvergenceError, RangeViolationError,
                     SingularJacobianError, ZeroFrequencyError)
from .fields import SpectralScalarField, mode_vectors
from .lattice import LatticePair, PhysicalParams, ct_arrays, multipliers_c_t

#: |rho| below this multiple of the mode scale g |k|^2 t(|k|) counts as a root.
ROOT_TOL = 1e-8


@dataclass(frozen=True)
class DispersionQuery:
    k: np.ndarray
    c: np.ndarray
    beta: float

    def __post_init__(self):
        k = np.asarray(self.k, dtype=float)
        if k @ k == 0:
            raise ZeroFrequencyError("dispersion relation is undefined at k = 0")
        object.__setattr__(self, "k", k)
        object.__setattr__(self, "c", np.asarray(self.c, dtype=float))


def rho(query: DispersionQuery, params: PhysicalParams) -> float:
    """The dispersion function at one (k, c, beta)."""
    k, c, beta = query.k, query.c, query.beta
    s2 = k @ k
    _, t = multipliers_c_t(float(np.sqrt(s2)), params)
    ck = c @ k
    k_perp_c = k[1] * c[0] - k[0] * c[1]
    bracket = params.gravity + beta * s2 - params.alpha * ck * k_perp_c / s2
    return float(bracket * s2 * t - ck * ck)


def grad_c_rho(query: DispersionQuery, params: PhysicalParams) -> np.ndarray:
    """Velocity gradient of rho: -alpha t(|k|) [(k_perp.c) k + (c.k) k_perp] - 2 (c.k) k."""
    k, c = query.k, query.c
    s = float(np.hypot(k[0], k[1]))
    _, t = multipliers_c_t(s, params)
    k_perp = np.array([k[1], -k[0]])
    ck = c @ k
    kpc = k_perp @ c
    return -params.alpha * t * (kpc * k + ck * k_perp) - 2.0 * ck * k


def _rho_array(lattice: LatticePair, n: int, c: np.ndarray, beta: float,
               params: PhysicalParams):
    """rho over the whole index box; the k = 0 entry is set to NaN."""
    kx, ky, s = mode_vectors(lattice, n)
    _, t = ct_arrays(s, params)
    s2 = s * s
    ck = c[0] * kx + c[1] * ky
    kpc = ky * c[0] - kx * c[1]
    with np.errstate(invalid="ignore", divide="ignore"):
        bracket = params.gravity + beta * s2 - params.alpha * ck * kpc / s2
        out = bracket * s2 * t - ck * ck
    out[n, n] = np.nan
    return out


def solve_c0(lattice: LatticePair, params: PhysicalParams, beta: float,
             initial_guess=None, tol: float = 1e-12, max_iter: int = 50,
             fd_jacobian: bool = False) -> np.ndarray:
    """Newton solve of rho(k1, c, beta) = rho(k2, c, beta) = 0.

    Without an initial guess, the alpha-decoupled root of the two scalar
    relations (c . k_i)^2 = (g + beta |k_i|^2) |k_i|^2 t(|k_i|) seeds the
    iteration.
    """
    k1, k2 = lattice.k1, lattice.k2
    if initial_guess is None:
        rhs = []
        for k in (k1, k2):
            s = float(np.hypot(*k))
            _, t = multipliers_c_t(s, params)
            rhs.append(np.sqrt((params.gravity + beta * s * s) * s * s * t))
        initial_guess = np.linalg.solve(np.vstack([k1, k2]), np.array(rhs))
    c = np.asarray(initial_guess, dtype=float).copy()

    for _ in range(max_iter):
        f = np.array([rho(DispersionQuery(k1, c, beta), params),
                      rho(DispersionQuery(k2, c, beta), params)])
        if np.max(np.abs(f)) < tol:
            return c
        if fd_jacobian:
            jac = np.empty((2, 2))
            step = 1e-7 * max(1.0, float(np.max(np.abs(c))))
            for j in range(2):
                dc = np.zeros(2)
                dc[j] = step
                fp = np.array([rho(DispersionQuery(k1, c + dc, beta), params),
                               rho(DispersionQuery(k2, c + dc, beta), params)])
                fm = np.array([rho(DispersionQuery(k1, c - dc, beta), params),
                               rho(DispersionQuery(k2, c - dc, beta), params)])
                jac[:, j] = (fp - fm) / (2 * step)
        else:
            jac = np.vstack([grad_c_rho(DispersionQuery(k1, c, beta), params),
                             grad_c_rho(DispersionQuery(k2, c, beta), params)])
        det = jac[0, 0] * jac[1, 1] - jac[0, 1] * jac[1, 0]
        if abs(det) < 1e-14 * max(1.0, float(np.max(np.abs(jac))) ** 2):
            raise SingularJacobianError(
                f"Newton Jacobian is singular at c = {c!r} (det = {det:.3e})"
            )
        c = c - np.linalg.solve(jac, f)
    raise NonConvergenceError(
        f"reference-velocity Newton did not reach |rho| < {tol:g} in {max_iter} steps"
    )


@dataclass(frozen=True)
class TransversalityReport:
    """Dispersion roots found in the scan box plus the gradient determinant."""

    roots_found: tuple        # sorted (m1, m2) index pairs with |rho| below tol
    det_value: float          # det of the two velocity-gradient rows
    passed: bool
    tolerance: float

    def to_json_dict(self) -> dict:
        return {
            "roots_found": [[int(a), int(b)] for a, b in self.roots_found],
            "det_value": float(self.det_value),
            "passed": bool(self.passed),
            "tolerance": float(self.tolerance),
        }


def check_transversality(lattice: LatticePair, params: PhysicalParams, n: int,
                         tol: float = ROOT_TOL) -> TransversalityReport:
    """Scan |rho| over [-n, n]^2 \\ {0} and test gradient independence.

    A mode counts as a root when |rho| falls below ``tol`` times the
    mode-dependent scale g |k|^2 t(|k|), so large modes are judged fairly.
    Passing requires the root set to be exactly the four generator modes
    and the 2 x 2 velocity-gradient determinant to clear the same tolerance.
    """
    c0 = params.require_c0()
    beta = params.beta
    values = _rho_array(lattice, n, c0, beta, params)
    _, _, s = mode_vectors(lattice, n)
    _, t = ct_arrays(s, params)
    scale = params.gravity * s * s * t
    scale[n, n] = np.inf
    roots = []
    hits = np.abs(values) < tol * scale
    for i1, i2 in zip(*np.nonzero(hits)):
        roots.append((int(i1) - n, int(i2) - n))
    roots = tuple(sorted(roots))

    jac = np.vstack([grad_c_rho(DispersionQuery(lattice.k1, c0, beta), params),
                     grad_c_rho(DispersionQuery(lattice.k2, c0, beta), params)])
    det = float(jac[0, 0] * jac[1, 1] - jac[0, 1] * jac[1, 0])
    kernel = {(1, 0), (-1, 0), (0, 1), (0, -1)}
    passed = set(roots) == kernel and abs(det) > tol
    return TransversalityReport(roots, det, passed, tol)


# ---------------------------------------------------------------------------
# the linearized operator and its inverse on the range


def j10_apply(eta: SpectralScalarField, params: PhysicalParams) -> SpectralScalarField:
    """Diagonal action: gravity on the mean, (c(|k|)/|k|^2) rho(k) elsewhere."""
    c0 = params.require_c0()
    n = eta.truncation
    values = _rho_array(eta.lattice, n, c0, params.beta, params)
    kx, ky, s = mode_vectors(eta.lattice, n)
    c_mult, _ = ct_arrays(s, params)
    with np.errstate(invalid="ignore", divide="ignore"):
        mult = c_mult / (s * s) * values
    mult[n, n] = params.gravity
    return eta._like(mult * eta.coeffs)


def j10_solve(f: SpectralScalarField, params: PhysicalParams,
              range_tol: float = 1e-12,
              divisor_tol: float = ROOT_TOL) -> SpectralScalarField:
    """Invert the linearized operator on its range.

    Kernel-mode content of ``f`` above ``range_tol`` times its norm raises
    ``RangeViolationError``; the kernel modes of the output are zero.  A
    non-kernel divisor smaller than ``divisor_tol`` times its mode scale
    raises ``NearResonantDivisorError``.  For beta = 0 the result is formal:
    a ``FormalInverseWarning`` reports the smallest divisor met.
    """
    c0 = params.require_c0()
    n = f.truncation
    norm = f.l2_norm()
    kernel = [(1, 0), (-1, 0), (0, 1), (0, -1)]
    for m1, m2 in kernel:
        if abs(f.coeff(m1, m2)) > range_tol * max(norm, 1e-300):
            raise RangeViolationError(
                f"right-hand side has kernel content at mode {(m1, m2)}: "
                f"|f_hat| = {abs(f.coeff(m1, m2)):.3e}"
            )
    values = _rho_array(f.lattice, n, c0, params.beta, params)
    kx, ky, s = mode_vectors(f.lattice, n)
    c_mult, t_mult = ct_arrays(s, params)
    scale = params.gravity * s * s * t_mult
    scale[n, n] = np.inf
    check = np.abs(values) / scale
    for m1, m2 in kernel:
        check[m1 + n, m2 + n] = np.inf
    if np.nanmin(check) < divisor_tol:
        i1, i2 = np.unravel_index(np.nanargmin(check), check.shape)
        raise NearResonantDivisorError(
            f"dispersion divisor too small at mode {(int(i1) - n, int(i2) - n)}"
        )
    with np.errstate(invalid="ignore", divide="ignore"):
        inv = (s * s) / (c_mult * values)
    inv[n, n] = 1.0 / params.gravity
    for m1, m2 in kernel:
        inv[m1 + n, m2 + n] = 0.0
    out = f._like(inv * f.coeffs)
    if params.beta == 0:
        smallest = float(np.min(np.abs(values)[np.isfinite(check)]))
        warnings.warn(FormalInverseWarning(
            "beta = 0: inverse computed formally, no decay guarantee "
            f"(smallest divisor {smallest:.3e})", smallest))
    return out


def inverse_multiplier(lattice: LatticePair, params: PhysicalParams, n: int):
    """|k|^2 / (c(|k|) rho(k, c0, beta)) over the box; NaN at 0 and kernel modes."""
    c0 = params.require_c0()
    values = _rho_array(lattice, n, c0, params.beta, params)
    _, _, s = mode_vectors(lattice, n)
    c_mult, _ = ct_arrays(s, params)
    with np.errstate(invalid="ignore", divide="ignore"):
        inv = (s * s) / (c_mult * values)
    for m1, m2 in [(0, 0), (1, 0), (-1, 0), (0, 1), (0, -1)]:
        inv[m1 + n, m2 + n] = np.nan
    return inv
