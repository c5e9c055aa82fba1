"""Amplitude-expansion coefficients and second-order wave synthesis.

The reduced bifurcation problem is solved to second order in the two complex
mode amplitudes A, B.  Everything is assembled from Fourier-multiplier
building blocks evaluated at the dual generators:

* ``t10`` .. ``t30_2`` are the single- and double-mode coefficients of the
  expansion of the transport field T, with the helper vectors

      r1(k) = alpha k_perp + k c(|k|),
      r2(k) = k (alpha^2 - |k|^2) - alpha k_perp c(|k|),
      r3(k, l) = r1(k) (c0 . k)/|k|^2 + r1(l) (c0 . l)/|l|^2;

* ``p20_1``, ``p20_2`` are the quadratic coefficients of the reduced
  functional, ``q20_2`` their pre-images under the linearized solve;
* ``p30_1``, ``p30_2`` the cubic ones;
* the eta2 table holds the degree-2 surface corrections per monomial
  A^i B^j conj(A)^k conj(B)^l, and ``ab_coeffs`` / ``mu_linear`` produce the
  linear system that slaves the velocity detuning mu to (|A|^2, |B|^2).

A second argument equal to zero in ``p20_2`` denotes pairing against the
constant mode; the displayed two-mode formula degenerates there, and the
value is instead the closed form obtained by pairing the quadratic part of
the functional with a constant profile shift,

    p20_2(k, 0) = [alpha^2 (k_perp . c0)^2
                   + 2 alpha c(|k|) (k . c0)(k_perp . c0)
                   + (c(|k|)^2 - |k|^2)(k . c0)^2] / (2 |k|^2),

which the finite-difference oracle in the test suite pins down.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Optional, Tuple

import numpy as np

from .dispersion import DispersionQuery, grad_c_rho, rho
from .errors import (ConfigError, NearResonantDivisorError, TransversalityError,
                     ZeroDenominatorError, ZeroFrequencyError)
from .fields import SpectralScalarField, field_from_modes, zero_field
from .lattice import LatticePair, PhysicalParams, multipliers_c_t

#: |rho| below this multiple of the mode scale marks a Wilton-type degeneracy.
DIVISOR_TOL = 1e-8


def _c_of(k: np.ndarray, params: PhysicalParams) -> float:
    return multipliers_c_t(float(np.hypot(k[0], k[1])), params)[0]


def _perp(v: np.ndarray) -> np.ndarray:
    return np.array([v[1], -v[0]])


def _require_nonzero(params: PhysicalParams, *vectors):
    for v in vectors:
        if v @ v == 0:
            raise ZeroDenominatorError(
                "multiplier requested at a vanishing mode combination"
            )


def r1(k, params: PhysicalParams) -> np.ndarray:
    k = np.asarray(k, dtype=float)
    _require_nonzero(params, k)
    return params.alpha * _perp(k) + k * _c_of(k, params)


def r2(k, params: PhysicalParams) -> np.ndarray:
    k = np.asarray(k, dtype=float)
    _require_nonzero(params, k)
    return k * (params.alpha ** 2 - k @ k) - params.alpha * _perp(k) * _c_of(k, params)


def r3(k, l, params: PhysicalParams) -> np.ndarray:
    k = np.asarray(k, dtype=float)
    l = np.asarray(l, dtype=float)
    _require_nonzero(params, k, l)
    c0 = params.require_c0()
    return r1(k, params) * ((c0 @ k) / (k @ k)) + r1(l, params) * ((c0 @ l) / (l @ l))


def t10(k, params: PhysicalParams) -> np.ndarray:
    """First-order transport coefficient: -(alpha k_perp + k c(|k|))(c0.k)/|k|^2."""
    k = np.asarray(k, dtype=float)
    _require_nonzero(params, k)
    c0 = params.require_c0()
    return -r1(k, params) * ((c0 @ k) / (k @ k))


def t20_1(k, params: PhysicalParams) -> np.ndarray:
    """Zero-sum quadratic coefficient: alpha (alpha k - c(|k|) k_perp)."""
    k = np.asarray(k, dtype=float)
    _require_nonzero(params, k)
    return params.alpha * (params.alpha * k - _c_of(k, params) * _perp(k))


def t20_2(k, l, params: PhysicalParams) -> np.ndarray:
    """Symmetric quadratic transport coefficient at modes (k, l), k + l != 0.

    Equal opposite modes delegate to ``t20_1``, the zero-sum value.
    """
    k = np.asarray(k, dtype=float)
    l = np.asarray(l, dtype=float)
    _require_nonzero(params, k, l)
    q = k + l
    if q @ q == 0:
        return t20_1(k, params)
    c0 = params.require_c0()
    alpha = params.alpha
    ck = _c_of(k, params)
    cl = _c_of(l, params)
    cq = _c_of(q, params)
    wk = (c0 @ k) / (k @ k)
    wl = (c0 @ l) / (l @ l)
    k_cross_l = k[0] * l[1] - k[1] * l[0]  # k . l_perp
    bracket = alpha * (q @ c0) + alpha * k_cross_l * (wl - wk) \
        + q @ (wl * cl * l + wk * ck * k)
    lead = (alpha * _perp(q) + q * cq) * bracket / (2.0 * (q @ q))
    return lead + 0.5 * wl * r2(l, params) + 0.5 * wk * r2(k, params) \
        - 0.5 * k * (c0 @ l) - 0.5 * l * (c0 @ k)


def t30_1(k, params: PhysicalParams) -> np.ndarray:
    """Cubic transport coefficient of the (k, k, -k) interaction."""
    k = np.asarray(k, dtype=float)
    _require_nonzero(params, k)
    c0 = params.require_c0()
    alpha = params.alpha
    ck = _c_of(k, params)
    c2k = _c_of(2.0 * k, params)
    wk = (c0 @ k) / (k @ k)
    wpk = (_perp(c0) @ k) / (k @ k)
    r1k = r1(k, params)
    return (
        -(1.0 / 3.0) * r1k * wk * ck * c2k
        - (1.0 / 12.0) * r2(2.0 * k, params) * wk * ck
        - (1.0 / 6.0) * k * (c0 @ k) * ck
        - 0.5 * r1k * (alpha ** 2 - k @ k) * wk
        + (alpha / 3.0) * _perp(r2(k, params)) * wk
        + (alpha / 12.0) * _perp(r1(2.0 * k, params)) * wk * ck
        + (alpha / 6.0) * _perp(r2(k, params)) * wk
        + (alpha / 6.0) * r1k * wpk * ck
        + (alpha / 12.0) * r2(2.0 * k, params) * wpk
        + (alpha / 6.0) * k * (_perp(c0) @ k)
        + (alpha ** 2 / 6.0) * r1k * wk
    )


def t30_2(k, l, params: PhysicalParams) -> np.ndarray:
    """Cubic transport coefficient of the (k, l, -l) interaction, k != +-l."""
    k = np.asarray(k, dtype=float)
    l = np.asarray(l, dtype=float)
    _require_nonzero(params, k, l, k + l, k - l)
    c0 = params.require_c0()
    alpha = params.alpha
    km = k - l
    kp = k + l
    r1k = r1(k, params)
    r1l = r1(l, params)
    r1m = r1(km, params)
    r1p = r1(kp, params)
    r2k = r2(k, params)
    r2l = r2(l, params)
    r2m = r2(km, params)
    r2p = r2(kp, params)
    r3kl = r3(k, l, params)
    wk = (c0 @ k) / (k @ k)
    wl = (c0 @ l) / (l @ l)
    sm = (km @ r3kl) / (km @ km)
    sp = (kp @ r3kl) / (kp @ kp)
    khat = k / (k @ k)
    return (
        -(1.0 / 6.0) * r1k * (khat @ (r1m * sm + r1p * sp))
        - (1.0 / 12.0) * r2m * sm
        - (1.0 / 12.0) * r2p * sp
        - (1.0 / 6.0) * l * (l @ r3kl)
        - (1.0 / 6.0) * r1k * (khat @ (2.0 * wl * r2l + wk * r2k))
        + (1.0 / 6.0) * k * (k @ r1l) * wl
        + (alpha / 6.0) * _perp(r2l) * wl
        + (alpha / 12.0) * (_perp(r1m) * sm + _perp(r2l) * wl + _perp(r2k) * wk)
        + (alpha / 12.0) * (_perp(r1p) * sp + _perp(r2k) * wk + _perp(r2l) * wl)
        + (alpha / 6.0) * r1k * (khat @ (r1m * ((_perp(c0) @ km) / (km @ km))
                                         + r1p * ((_perp(c0) @ kp) / (kp @ kp))))
        + (alpha / 6.0) * r2m * ((c0 @ km) / (km @ km))
        + (alpha / 6.0) * r2p * ((c0 @ kp) / (kp @ kp))
        + (alpha / 3.0) * l * (_perp(c0) @ l)
        + (alpha ** 2 / 6.0) * r1k * wk
        - (alpha / 6.0) * r1k * (khat @ _perp(r1l)) * wl
        - (alpha ** 2 / 6.0) * r1l * wl
    )


_T_MULTIPLIERS = {
    "T10": (t10, 1), "T20_1": (t20_1, 1), "T20_2": (t20_2, 2),
    "T30_1": (t30_1, 1), "T30_2": (t30_2, 2),
    "r1": (r1, 1), "r2": (r2, 1), "r3": (r3, 2),
}


def t_multipliers(k, l, which: str, params: PhysicalParams) -> np.ndarray:
    """Dispatch to one of the named multiplier vectors."""
    try:
        fn, nargs = _T_MULTIPLIERS[which]
    except KeyError:
        raise ConfigError(f"unknown multiplier {which!r}")
    if nargs == 1:
        return fn(k, params)
    if l is None:
        raise ConfigError(f"{which} needs a second mode argument")
    return fn(k, l, params)


# ---------------------------------------------------------------------------
# quadratic and cubic interaction coefficients


def p20_1(k, params: PhysicalParams) -> float:
    k = np.asarray(k, dtype=float)
    c0 = params.require_c0()
    t = t10(k, params)
    return float(0.5 * (t @ t) - 0.5 * (k @ c0) ** 2 + t20_1(k, params) @ c0
                 + params.alpha * (t @ _perp(c0)))


def p20_2(k, l, params: PhysicalParams) -> float:
    """Quadratic coefficient; a zero second argument means the constant mode."""
    k = np.asarray(k, dtype=float)
    l = np.asarray(l, dtype=float)
    _require_nonzero(params, k)
    c0 = params.require_c0()
    alpha = params.alpha
    if l @ l == 0:
        ck = _c_of(k, params)
        kc = k @ c0
        kpc = _perp(k) @ c0
        return float((alpha ** 2 * kpc ** 2 + 2.0 * alpha * ck * kc * kpc
                      + (ck ** 2 - k @ k) * kc ** 2) / (2.0 * (k @ k)))
    tk = t10(k, params)
    tl = t10(l, params)
    return float(0.5 * (tk @ tl) + 0.5 * (k @ c0) * (l @ c0)
                 + t20_2(k, l, params) @ c0
                 + 0.5 * alpha * ((tk + tl) @ _perp(c0)))


def q20_2(k, l, params: PhysicalParams, divisor_tol: float = DIVISOR_TOL) -> float:
    """p20_2 divided through the linearized symbol at the sum mode k + l."""
    k = np.asarray(k, dtype=float)
    l = np.asarray(l, dtype=float)
    q = k + l
    if q @ q == 0:
        raise ZeroDenominatorError("q20_2 is undefined at k + l = 0")
    c_q, t_q = multipliers_c_t(float(np.hypot(q[0], q[1])), params)
    rho_q = rho(DispersionQuery(q, params.require_c0(), params.beta), params)
    scale = params.gravity * (q @ q) * t_q
    if abs(rho_q) < divisor_tol * scale:
        raise NearResonantDivisorError(
            f"second-harmonic divisor |rho| = {abs(rho_q):.3e} at mode sum "
            f"{q!r} (Wilton-type degeneracy)"
        )
    return float((q @ q) / (c_q * rho_q) * p20_2(k, l, params))


def p30_1(k, params: PhysicalParams) -> float:
    k = np.asarray(k, dtype=float)
    c0 = params.require_c0()
    alpha = params.alpha
    tk = t10(k, params)
    t201 = t20_1(k, params)
    t202 = t20_2(k, k, params)
    cp = _perp(c0)
    return float(
        (2.0 / 3.0) * (tk @ t201) + (1.0 / 3.0) * (tk @ t202)
        - (alpha / 3.0) * (c0 @ k) * (cp @ k)
        - (1.0 / 3.0) * (c0 @ k) * (tk @ k)
        - 0.5 * alpha ** 2 * (tk @ c0)
        + (alpha / 3.0) * (2.0 * (cp @ t201) + cp @ t202)
        + t30_1(k, params) @ c0
        - 0.5 * params.beta * (k @ k) ** 2
    )


def p30_2(k, l, params: PhysicalParams) -> float:
    k = np.asarray(k, dtype=float)
    l = np.asarray(l, dtype=float)
    c0 = params.require_c0()
    alpha = params.alpha
    tk = t10(k, params)
    tl = t10(l, params)
    t201l = t20_1(l, params)
    t202m = t20_2(k, -l, params)
    t202p = t20_2(k, l, params)
    cp = _perp(c0)
    return float(
        (1.0 / 3.0) * ((tk @ t201l) + (tl @ t202m) + (tl @ t202p))
        - (alpha / 3.0) * (c0 @ l) * (cp @ l)
        - (1.0 / 3.0) * (c0 @ l) * (tk @ l)
        - (alpha ** 2 / 6.0) * ((tk @ c0) + 2.0 * (tl @ c0))
        + (alpha / 3.0) * ((cp @ t201l) + (cp @ t202m) + (cp @ t202p))
        + t30_2(k, l, params) @ c0
        - (params.beta / 6.0) * ((k @ k) * (l @ l) + 2.0 * (k @ l) ** 2)
    )


def quadratic_coeffs(k, l, params: PhysicalParams):
    """(p20_2(k, l), p20_1(k), q20_2(k, l)) for one mode pair."""
    return p20_2(k, l, params), p20_1(k, params), q20_2(k, l, params)


def cubic_coeffs(k, l, params: PhysicalParams):
    """(p30_1(k), p30_2(k, l)) for one mode pair."""
    return p30_1(k, params), p30_2(k, l, params)


# ---------------------------------------------------------------------------
# the eta2 table, the reduced linear system and wave synthesis


@dataclass(frozen=True, order=True)
class MonomialKey:
    """Exponents (i, j, k, l) of A^i B^j conj(A)^k conj(B)^l."""

    i: int
    j: int
    k: int
    l: int

    @property
    def degree(self) -> int:
        return self.i + self.j + self.k + self.l

    def conjugate(self) -> "MonomialKey":
        return MonomialKey(self.k, self.l, self.i, self.j)

    def label(self) -> str:
        return f"{self.i}{self.j}{self.k}{self.l}"


def _conj_field(f: SpectralScalarField) -> SpectralScalarField:
    return SpectralScalarField(f.lattice, f.truncation,
                               np.conj(f.coeffs[::-1, ::-1]))


def eta2_table(params: PhysicalParams, lattice: LatticePair,
               truncation: int) -> Dict[MonomialKey, SpectralScalarField]:
    """Degree-2 surface corrections per amplitude monomial.

    Twelve entries: the six independent ones and their conjugates under
    (i, j, k, l) -> (k, l, i, j).
    """
    if truncation < 2:
        raise ConfigError("eta2 table needs truncation >= 2")
    k1, k2 = lattice.k1, lattice.k2
    g = params.gravity

    def single(mode, value):
        return field_from_modes(lattice, truncation, {mode: value})

    try:
        table = {
            MonomialKey(2, 0, 0, 0): single((2, 0), -q20_2(k1, k1, params)),
            MonomialKey(0, 2, 0, 0): single((0, 2), -q20_2(k2, k2, params)),
            MonomialKey(1, 1, 0, 0): single((1, 1), -2.0 * q20_2(k1, k2, params)),
            MonomialKey(1, 0, 0, 1): single((1, -1), -2.0 * q20_2(k1, -k2, params)),
            MonomialKey(1, 0, 1, 0): single((0, 0), -2.0 / g * p20_1(k1, params)),
            MonomialKey(0, 1, 0, 1): single((0, 0), -2.0 / g * p20_1(k2, params)),
        }
    except NearResonantDivisorError as err:
        raise NearResonantDivisorError(f"eta2 table: {err}") from err
    for key in list(table):
        ck = key.conjugate()
        if ck not in table:
            table[ck] = _conj_field(table[key])
    return table


def ab_coeffs(params: PhysicalParams, lattice: LatticePair,
              det_tol: float = 1e-10) -> np.ndarray:
    """The 2 x 4 array [[a1..a4], [b1..b4]] of the reduced linear system."""
    c0 = params.require_c0()
    beta = params.beta
    k1, k2 = lattice.k1, lattice.k2
    pref1 = _c_of(k1, params) / (k1 @ k1)
    pref2 = _c_of(k2, params) / (k2 @ k2)
    grad1 = grad_c_rho(DispersionQuery(k1, c0, beta), params)
    grad2 = grad_c_rho(DispersionQuery(k2, c0, beta), params)
    a1, a2 = pref1 * grad1
    b1, b2 = pref2 * grad2

    g = params.gravity
    a3 = (-4.0 / g * p20_1(k1, params) * p20_2(k1, np.zeros(2), params)
          - 2.0 * q20_2(k1, k1, params) * p20_2(-k1, 2.0 * k1, params)
          + 3.0 * p30_1(k1, params))
    a4 = (-4.0 / g * p20_1(k2, params) * p20_2(k1, np.zeros(2), params)
          - 4.0 * q20_2(k1, -k2, params) * p20_2(k2, k1 - k2, params)
          - 4.0 * q20_2(k1, k2, params) * p20_2(-k2, k1 + k2, params)
          + 6.0 * p30_2(k1, k2, params))
    b3 = (-4.0 / g * p20_1(k1, params) * p20_2(k2, np.zeros(2), params)
          - 4.0 * q20_2(-k1, k2, params) * p20_2(k1, k2 - k1, params)
          - 4.0 * q20_2(k1, k2, params) * p20_2(-k1, k1 + k2, params)
          + 6.0 * p30_2(k2, k1, params))
    b4 = (-4.0 / g * p20_1(k2, params) * p20_2(k2, np.zeros(2), params)
          - 2.0 * q20_2(k2, k2, params) * p20_2(-k2, 2.0 * k2, params)
          + 3.0 * p30_1(k2, params))

    out = np.array([[a1, a2, a3, a4], [b1, b2, b3, b4]])
    det = a1 * b2 - b1 * a2
    if abs(det) < det_tol * max(1.0, abs(a1 * b2) + abs(b1 * a2)):
        raise TransversalityError(
            f"a1 b2 - b1 a2 = {det:.3e}: velocity gradients are dependent"
        )
    return out


def mu_linear(params: PhysicalParams, lattice: LatticePair):
    """First-order detuning coefficients ((mu1_A2, mu1_B2), (mu2_A2, mu2_B2))."""
    ab = ab_coeffs(params, lattice)
    (a1, a2, a3, a4), (b1, b2, b3, b4) = ab
    det = a1 * b2 - b1 * a2
    mu1 = (-(a3 * b2 - a2 * b3) / det, -(a4 * b2 - a2 * b4) / det)
    mu2 = (-(a1 * b3 - a3 * b1) / det, -(a1 * b4 - a4 * b1) / det)
    return mu1, mu2


@dataclass(frozen=True)
class AmplitudeState:
    """The two complex mode amplitudes of a synthesized wave."""

    A: complex
    B: complex

    def within(self, radius: float) -> bool:
        return abs(self.A) <= radius and abs(self.B) <= radius


@dataclass(frozen=True)
class ExpansionTables:
    """Everything needed to synthesize second-order waves at one parameter point."""

    eta2: Dict[MonomialKey, SpectralScalarField]
    mu1_coeffs: Tuple[float, float]
    mu2_coeffs: Tuple[float, float]
    ab: np.ndarray
    truncation: int

    def to_json_dict(self) -> dict:
        return {
            "ab": [[float(v) for v in row] for row in self.ab],
            "mu1": {"A2": float(self.mu1_coeffs[0]), "B2": float(self.mu1_coeffs[1])},
            "mu2": {"A2": float(self.mu2_coeffs[0]), "B2": float(self.mu2_coeffs[1])},
            "eta2": {key.label(): f.to_json_dict()
                     for key, f in sorted(self.eta2.items())},
        }


def expansion_tables(params: PhysicalParams, lattice: LatticePair,
                     truncation: int) -> ExpansionTables:
    mu1, mu2 = mu_linear(params, lattice)
    return ExpansionTables(eta2_table(params, lattice, truncation), mu1, mu2,
                           ab_coeffs(params, lattice), truncation)


def synthesize_wave(state: AmplitudeState, tables: ExpansionTables,
                    lattice: LatticePair, truncation: int = None):
    """Second-order wave profile and slaved detuning for given amplitudes.

    Returns (eta, mu) with eta carrying conjugate-symmetric coefficients and
    mu = (mu1, mu2) evaluated at (|A|^2, |B|^2).
    """
    n = tables.truncation if truncation is None else truncation
    if n != tables.truncation:
        from .fields import lift
        eta2 = {key: lift(f, n) for key, f in tables.eta2.items()}
    else:
        eta2 = tables.eta2
    a, b = complex(state.A), complex(state.B)
    eta = field_from_modes(lattice, n, {
        (1, 0): a, (-1, 0): np.conj(a), (0, 1): b, (0, -1): np.conj(b),
    })
    values = {"A": a, "B": b}
    for key, f in eta2.items():
        mono = (a ** key.i) * (b ** key.j) * (np.conj(a) ** key.k) \
            * (np.conj(b) ** key.l)
        eta = eta + mono * f
    # enforce exact conjugate symmetry against rounding in the monomials
    from .fields import hermitize
    eta = SpectralScalarField(lattice, n, hermitize(eta.coeffs))
    a2, b2 = abs(a) ** 2, abs(b) ** 2
    mu = np.array([
        tables.mu1_coeffs[0] * a2 + tables.mu1_coeffs[1] * b2,
        tables.mu2_coeffs[0] * a2 + tables.mu2_coeffs[1] * b2,
    ])
    return eta, mu
