"""Periodic lattice geometry, physical parameters and the two depth multipliers.

A doubly periodic wave field lives on the plane modulo the lattice spanned by
two independent generators lambda1, lambda2.  Fourier modes live on the dual
lattice spanned by k1, k2 with the biorthogonality relation

    k_i . lambda_j = 2 pi delta_ij.

The linear theory of the flow over a Beltrami current of strength ``alpha``
in depth ``h`` is governed by two radial Fourier multipliers,

    c(s) = sqrt(alpha^2 - s^2) * cot(h sqrt(alpha^2 - s^2))    (s < |alpha|)
         = sqrt(s^2 - alpha^2) * coth(h sqrt(s^2 - alpha^2))   (s > |alpha|)

    t(s) = tan(h sqrt(alpha^2 - s^2)) / sqrt(alpha^2 - s^2)    (s < |alpha|)
         = tanh(h sqrt(s^2 - alpha^2)) / sqrt(s^2 - alpha^2)   (s > |alpha|)

which satisfy c(s) * t(s) = 1 identically.  Both branches share the analytic
limit c = 1/h, t = h at s = |alpha|; near that radius both are evaluated by a
series in X = alpha^2 - s^2 to avoid cancellation.  The oscillatory branch has
genuine poles where h*sqrt(alpha^2 - s^2) hits a positive multiple of pi/2;
those radii are the resonant set that the nonresonance scan reports.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import ConfigError, DegenerateLatticeError, ResonanceError

#: Modes whose |alpha^2 - |k|^2| falls below this switch to the series branch.
SERIES_WINDOW = 1e-6

#: Default distance to (pi/2)*N below which a radius counts as resonant.
RESONANCE_TOL = 1e-8


@dataclass(frozen=True)
class LatticePair:
    """Physical lattice generators together with their dual generators."""

    lambda1: np.ndarray
    lambda2: np.ndarray
    k1: np.ndarray
    k2: np.ndarray
    cell_area: float

    def _key(self) -> tuple:
        return (tuple(self.lambda1), tuple(self.lambda2))

    def mode(self, m1: int, m2: int) -> np.ndarray:
        """Dual-lattice wave vector m1*k1 + m2*k2."""
        return m1 * self.k1 + m2 * self.k2

    def to_json_dict(self) -> dict:
        return {
            "lambda1": [float(v) for v in self.lambda1],
            "lambda2": [float(v) for v in self.lambda2],
            "k1": [float(v) for v in self.k1],
            "k2": [float(v) for v in self.k2],
            "cell_area": float(self.cell_area),
        }


def build_lattice(lambda1, lambda2) -> LatticePair:
    """Construct a lattice and its dual from two generators.

    The duals solve k_i . lambda_j = 2 pi delta_ij, i.e. K = 2 pi * inv(L)^T
    columnwise.  Raises ``DegenerateLatticeError`` when the generators are
    numerically dependent.
    """
    lam1 = np.asarray(lambda1, dtype=float)
    lam2 = np.asarray(lambda2, dtype=float)
    if lam1.shape != (2,) or lam2.shape != (2,):
        raise ConfigError("lattice generators must be 2-vectors")
    det = lam1[0] * lam2[1] - lam1[1] * lam2[0]
    if abs(det) <= 1e-12:
        raise DegenerateLatticeError(
            f"lattice generators are linearly dependent (det = {det:.3e})"
        )
    # inv([[l1x, l1y], [l2x, l2y]]) * 2pi, rows of the inverse transpose
    k1 = 2.0 * np.pi / det * np.array([lam2[1], -lam2[0]])
    k2 = 2.0 * np.pi / det * np.array([-lam1[1], lam1[0]])
    lam1.flags.writeable = False
    lam2.flags.writeable = False
    k1.flags.writeable = False
    k2.flags.writeable = False
    return LatticePair(lam1, lam2, k1, k2, abs(det))


@dataclass(frozen=True)
class PhysicalParams:
    """Physical constants of one run.

    alpha    Beltrami proportionality constant (1/length); 0 is irrotational.
    gravity  gravitational acceleration, > 0.
    beta     surface tension coefficient, >= 0.
    depth    still-water depth h, > 0.
    c0       reference wave velocity, set once the dispersion problem is solved.
    """

    alpha: float
    gravity: float
    beta: float
    depth: float
    c0: Optional[np.ndarray] = None
    resonance_tol: float = field(default=RESONANCE_TOL)

    def __post_init__(self):
        if self.depth <= 0:
            raise ConfigError(f"depth must be positive, got {self.depth}")
        if self.gravity <= 0:
            raise ConfigError(f"gravity must be positive, got {self.gravity}")
        if self.beta < 0:
            raise ConfigError(f"beta must be non-negative, got {self.beta}")
        if self.c0 is not None:
            c0 = np.asarray(self.c0, dtype=float)
            if c0.shape != (2,):
                raise ConfigError("c0 must be a 2-vector")
            c0.flags.writeable = False
            object.__setattr__(self, "c0", c0)

    def with_c0(self, c0) -> "PhysicalParams":
        return PhysicalParams(self.alpha, self.gravity, self.beta, self.depth,
                              np.asarray(c0, dtype=float), self.resonance_tol)

    def require_c0(self) -> np.ndarray:
        if self.c0 is None:
            raise ConfigError("reference velocity c0 is not set; solve for it first")
        return self.c0


# ---------------------------------------------------------------------------
# depth multipliers


def _halfpi_distance(z: np.ndarray) -> np.ndarray:
    """Distance from z >= 0 to the nearest positive multiple of pi/2."""
    step = 0.5 * np.pi
    n = np.maximum(np.rint(z / step), 1.0)
    return np.abs(z - n * step)


def _t_series(x: np.ndarray, h: float) -> np.ndarray:
    # tan(h sqrt(X))/sqrt(X) as a series in X, valid on both branches
    return h * (1.0 + (h * h * x) / 3.0 + 2.0 * (h * h * x) ** 2 / 15.0
                + 17.0 * (h * h * x) ** 3 / 315.0)


def _c_series(x: np.ndarray, h: float) -> np.ndarray:
    # sqrt(X) cot(h sqrt(X)) as a series in X
    return (1.0 - (h * h * x) / 3.0 - (h * h * x) ** 2 / 45.0
            - 2.0 * (h * h * x) ** 3 / 945.0) / h


def ct_arrays(s, params: PhysicalParams):
    """Vectorized (c(s), t(s)) over an array of radii.

    Raises ``ResonanceError`` if any radius with s < |alpha| puts
    h*sqrt(alpha^2 - s^2) within ``params.resonance_tol`` of a positive
    multiple of pi/2.
    """
    s = np.asarray(s, dtype=float)
    h = params.depth
    x = params.alpha ** 2 - s * s
    c = np.empty_like(s)
    t = np.empty_like(s)

    near = np.abs(x) < SERIES_WINDOW
    osc = (x > 0) & ~near
    hyp = (x < 0) & ~near

    if np.any(osc):
        z = h * np.sqrt(x[osc])
        dist = _halfpi_distance(z)
        if np.any(dist < params.resonance_tol):
            bad = s[osc][dist < params.resonance_tol]
            raise ResonanceError(
                f"resonant radius: h*sqrt(alpha^2-s^2) within {params.resonance_tol:g} "
                f"of (pi/2)*N at s = {bad[:4]!r}"
            )
        root = np.sqrt(x[osc])
        c[osc] = root * np.cos(z) / np.sin(z)
        t[osc] = np.tan(z) / root
    if np.any(hyp):
        root = np.sqrt(-x[hyp])
        th = np.tanh(h * root)
        c[hyp] = root / th
        t[hyp] = th / root
    if np.any(near):
        c[near] = _c_series(x[near], h)
        t[near] = _t_series(x[near], h)
    return c, t


def multipliers_c_t(s: float, params: PhysicalParams) -> tuple[float, float]:
    """The two depth multipliers (c(s), t(s)) at a single radius s >= 0.

    At s = |alpha| the removable limit (1/h, h) is returned.
    """
    if s < 0:
        raise ConfigError("radius must be non-negative")
    c, t = ct_arrays(np.array([s]), params)
    return float(c[0]), float(t[0])


# ---------------------------------------------------------------------------
# nonresonance scan


@dataclass(frozen=True)
class NonresonanceReport:
    """Outcome of scanning the dual-lattice index box for resonant modes.

    ``resonant_modes`` holds (m1, m2, kind) with kind one of
    ``"equal-alpha"`` and ``"half-pi-multiple"``; ``min_margin`` is the
    smallest distance to a violation seen over the scan.
    """

    resonant_modes: tuple
    min_margin: float
    tolerance: float

    @property
    def ok(self) -> bool:
        return len(self.resonant_modes) == 0

    def to_json_dict(self) -> dict:
        return {
            "resonant_modes": [
                {"m1": int(m1), "m2": int(m2), "kind": kind}
                for (m1, m2, kind) in self.resonant_modes
            ],
            "min_margin": float(self.min_margin),
            "tolerance": float(self.tolerance),
        }


def check_nonresonance(lattice: LatticePair, params: PhysicalParams, n: int,
                       tol: float = None) -> NonresonanceReport:
    """Scan all dual modes with index in [-n, n]^2 for resonance.

    Two violations are looked for: |k| = |alpha| (nonzero modes only; the
    k = 0 mode carries no multiplier content) and, for |k| < |alpha|,
    h*sqrt(alpha^2 - |k|^2) within ``tol`` of a positive multiple of pi/2.
    The k = 0 mode participates in the second check when alpha != 0.
    """
    if n < 1:
        raise ConfigError("truncation for the scan must be >= 1")
    tol = params.resonance_tol if tol is None else tol
    m = np.arange(-n, n + 1)
    m1g, m2g = np.meshgrid(m, m, indexing="ij")
    kx = m1g * lattice.k1[0] + m2g * lattice.k2[0]
    ky = m1g * lattice.k1[1] + m2g * lattice.k2[1]
    s = np.hypot(kx, ky)
    abs_alpha = abs(params.alpha)

    flagged = []
    margins = []

    nonzero = (m1g != 0) | (m2g != 0)
    margin_equal = np.abs(s - abs_alpha)
    margins.append(margin_equal[nonzero])
    for i1, i2 in zip(*np.nonzero(nonzero & (margin_equal < tol))):
        flagged.append((int(m1g[i1, i2]), int(m2g[i1, i2]), "equal-alpha"))

    if abs_alpha > 0:
        below = s < abs_alpha
        # stay clear of the branch point, where the first check already applies
        below &= margin_equal > 0
        if np.any(below):
            z = params.depth * np.sqrt(params.alpha ** 2 - s[below] ** 2)
            dist = _halfpi_distance(z)
            margins.append(dist)
            idx1, idx2 = np.nonzero(below)
            for j in np.nonzero(dist < tol)[0]:
                flagged.append((int(m1g[idx1[j], idx2[j]]),
                                int(m2g[idx1[j], idx2[j]]),
                                "half-pi-multiple"))

    min_margin = float(min(np.min(arr) for arr in margins if arr.size))
    return NonresonanceReport(tuple(sorted(set(flagged))), min_margin, tol)
