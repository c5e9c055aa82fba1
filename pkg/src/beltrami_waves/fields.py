"""Truncated Fourier fields on the dual lattice and their exact calculus.

A scalar field is stored as the (2N+1) x (2N+1) table of Fourier coefficients
over the dual-index box [-N, N]^2; entry [m1 + N, m2 + N] multiplies
exp(i (m1 k1 + m2 k2) . x).  Real fields carry conjugate-symmetric tables,
and every operation here preserves that symmetry bit-exactly (products are
explicitly re-symmetrized after the transform round trip).

Differentiation, the inverse Laplacian and means are diagonal in this basis;
pointwise products are evaluated on a physical grid padded by a factor >= 2
per direction, which makes one binary product of two box-limited fields free
of aliasing before the result is truncated back to the box.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Iterable, Tuple, Union

import numpy as np
from scipy.fft import fft2, ifft2, next_fast_len

from .errors import ArityError, ConfigError
from .lattice import LatticePair

DEFAULT_PAD = 2.0

_MODE_CACHE: dict = {}


def mode_vectors(lattice: LatticePair, n: int):
    """(KX, KY, S) arrays over the index box; S = |k| per mode."""
    key = (lattice._key(), n)
    hit = _MODE_CACHE.get(key)
    if hit is not None:
        return hit
    m = np.arange(-n, n + 1, dtype=float)
    m1, m2 = np.meshgrid(m, m, indexing="ij")
    kx = m1 * lattice.k1[0] + m2 * lattice.k2[0]
    ky = m1 * lattice.k1[1] + m2 * lattice.k2[1]
    s = np.hypot(kx, ky)
    for arr in (kx, ky, s):
        arr.flags.writeable = False
    _MODE_CACHE[key] = (kx, ky, s)
    return kx, ky, s


@dataclass(frozen=True)
class SpectralScalarField:
    lattice: LatticePair
    truncation: int
    coeffs: np.ndarray  # complex, (2N+1, 2N+1)

    def __post_init__(self):
        n = self.truncation
        if self.coeffs.shape != (2 * n + 1, 2 * n + 1):
            raise ConfigError(
                f"coefficient table has shape {self.coeffs.shape}, expected "
                f"{(2 * n + 1, 2 * n + 1)}"
            )

    # -- light arithmetic so operator formulas read like the mathematics --
    def _like(self, coeffs: np.ndarray) -> "SpectralScalarField":
        return SpectralScalarField(self.lattice, self.truncation, coeffs)

    def __add__(self, other):
        _check_compatible(self, other)
        return self._like(self.coeffs + other.coeffs)

    def __sub__(self, other):
        _check_compatible(self, other)
        return self._like(self.coeffs - other.coeffs)

    def __neg__(self):
        return self._like(-self.coeffs)

    def __mul__(self, scalar):
        return self._like(self.coeffs * scalar)

    __rmul__ = __mul__

    @property
    def arity(self) -> str:
        return "scalar"

    def coeff(self, m1: int, m2: int) -> complex:
        n = self.truncation
        return complex(self.coeffs[m1 + n, m2 + n])

    def l2_norm(self) -> float:
        """Mean-square norm over one cell: sqrt(sum |f_hat|^2)."""
        return float(np.sqrt(np.sum(np.abs(self.coeffs) ** 2)))

    def sup_norm(self, pad: float = DEFAULT_PAD) -> float:
        return float(np.max(np.abs(to_grid(self, _grid_size(self.truncation, pad)))))

    def to_json_dict(self) -> dict:
        return _field_json(self)


@dataclass(frozen=True)
class SpectralVectorField:
    x: SpectralScalarField
    y: SpectralScalarField

    def __post_init__(self):
        _check_compatible(self.x, self.y)

    @property
    def lattice(self) -> LatticePair:
        return self.x.lattice

    @property
    def truncation(self) -> int:
        return self.x.truncation

    @property
    def arity(self) -> str:
        return "vector"

    def __add__(self, other):
        return SpectralVectorField(self.x + other.x, self.y + other.y)

    def __sub__(self, other):
        return SpectralVectorField(self.x - other.x, self.y - other.y)

    def __neg__(self):
        return SpectralVectorField(-self.x, -self.y)

    def __mul__(self, scalar):
        return SpectralVectorField(self.x * scalar, self.y * scalar)

    __rmul__ = __mul__

    def perp(self) -> "SpectralVectorField":
        """f -> (f2, -f1)."""
        return SpectralVectorField(self.y, -self.x)

    def l2_norm(self) -> float:
        return float(np.hypot(self.x.l2_norm(), self.y.l2_norm()))

    def to_json_dict(self) -> dict:
        return {"x": self.x.to_json_dict(), "y": self.y.to_json_dict()}


Field = Union[SpectralScalarField, SpectralVectorField]


def _check_compatible(f, g):
    if f.truncation != g.truncation:
        raise ConfigError(
            f"incompatible truncations {f.truncation} and {g.truncation}"
        )
    if f.lattice._key() != g.lattice._key():
        raise ConfigError("fields live on different lattices")


# ---------------------------------------------------------------------------
# constructors


def zero_field(lattice: LatticePair, n: int) -> SpectralScalarField:
    size = 2 * n + 1
    return SpectralScalarField(lattice, n, np.zeros((size, size), dtype=complex))


def zero_vector_field(lattice: LatticePair, n: int) -> SpectralVectorField:
    return SpectralVectorField(zero_field(lattice, n), zero_field(lattice, n))


def constant_field(lattice: LatticePair, n: int, value: complex) -> SpectralScalarField:
    f = zero_field(lattice, n)
    f.coeffs[n, n] = value
    return f


def constant_vector_field(lattice: LatticePair, n: int, value) -> SpectralVectorField:
    value = np.asarray(value)
    return SpectralVectorField(constant_field(lattice, n, value[0]),
                               constant_field(lattice, n, value[1]))


def field_from_modes(lattice: LatticePair, n: int,
                     modes: Dict[Tuple[int, int], complex]) -> SpectralScalarField:
    """Field with the given {(m1, m2): amplitude} coefficients."""
    f = zero_field(lattice, n)
    for (m1, m2), amp in modes.items():
        if abs(m1) > n or abs(m2) > n:
            raise ConfigError(f"mode {(m1, m2)} outside truncation {n}")
        f.coeffs[m1 + n, m2 + n] = amp
    return f


def real_cosine_field(lattice: LatticePair, n: int, m1: int, m2: int,
                      amplitude: float = 1.0) -> SpectralScalarField:
    """amplitude * cos((m1 k1 + m2 k2) . x) as a Hermitian table."""
    half = 0.5 * amplitude
    return field_from_modes(lattice, n, {(m1, m2): half, (-m1, -m2): half})


def random_real_field(lattice: LatticePair, n: int, rng: np.random.Generator,
                      band: int = None, zero_mean: bool = True,
                      scale: float = 1.0) -> SpectralScalarField:
    """Random real field, optionally band-limited to |m_i| <= band.

    The table is symmetrized exactly, so Hermitian-symmetry checks on the
    output and everything derived from it can use bit-exact comparisons.
    """
    band = n if band is None else min(band, n)
    size = 2 * n + 1
    raw = np.zeros((size, size), dtype=complex)
    lo, hi = n - band, n + band + 1
    block = rng.standard_normal((2 * band + 1, 2 * band + 1)) \
        + 1j * rng.standard_normal((2 * band + 1, 2 * band + 1))
    raw[lo:hi, lo:hi] = scale * block
    sym = 0.5 * (raw + np.conj(raw[::-1, ::-1]))
    if zero_mean:
        sym[n, n] = 0.0
    else:
        sym[n, n] = sym[n, n].real
    return SpectralScalarField(lattice, n, sym)


def random_real_vector_field(lattice: LatticePair, n: int,
                             rng: np.random.Generator, band: int = None,
                             scale: float = 1.0) -> SpectralVectorField:
    return SpectralVectorField(
        random_real_field(lattice, n, rng, band, zero_mean=False, scale=scale),
        random_real_field(lattice, n, rng, band, zero_mean=False, scale=scale),
    )


# ---------------------------------------------------------------------------
# structure checks


def is_hermitian(f: Field) -> bool:
    """Exact structural check: coeff(-m) == conj(coeff(m)) bitwise."""
    if isinstance(f, SpectralVectorField):
        return is_hermitian(f.x) and is_hermitian(f.y)
    c = f.coeffs
    return bool(np.array_equal(c, np.conj(c[::-1, ::-1])))


def hermitize(coeffs: np.ndarray) -> np.ndarray:
    return 0.5 * (coeffs + np.conj(coeffs[::-1, ::-1]))


# ---------------------------------------------------------------------------
# grid transforms


def _grid_size(n: int, pad: float) -> int:
    target = int(np.ceil(pad * (2 * n + 1)))
    return next_fast_len(max(target, 2 * n + 1))


def _embed(coeffs: np.ndarray, n: int, size: int) -> np.ndarray:
    full = np.zeros((size, size), dtype=complex)
    idx = (np.arange(-n, n + 1)) % size
    full[np.ix_(idx, idx)] = coeffs
    return full


def _extract(full: np.ndarray, n: int) -> np.ndarray:
    size = full.shape[0]
    idx = (np.arange(-n, n + 1)) % size
    return full[np.ix_(idx, idx)]


def to_grid(f: SpectralScalarField, size: int) -> np.ndarray:
    """Sample the field on the size x size cell grid (complex values)."""
    full = _embed(f.coeffs, f.truncation, size)
    return ifft2(full) * (size * size)


def from_grid(lattice: LatticePair, n: int, grid: np.ndarray) -> SpectralScalarField:
    size = grid.shape[0]
    full = fft2(grid) / (size * size)
    return SpectralScalarField(lattice, n, _extract(full, n))


# ---------------------------------------------------------------------------
# exact spectral calculus


def calculus(f: Field, kind: str) -> Field:
    """Exact Fourier-space differentiation.

    grad       scalar -> vector, mode multiplier i k
    perp_grad  scalar -> vector, (d/dy, -d/dx)
    div        vector -> scalar, i k . f
    perp_div   vector -> scalar, div(f^perp) = d/dx f2 - d/dy f1
    """
    if kind in ("grad", "perp_grad"):
        if not isinstance(f, SpectralScalarField):
            raise ArityError(f"{kind} expects a scalar field")
        kx, ky, _ = mode_vectors(f.lattice, f.truncation)
        dx = f._like(1j * kx * f.coeffs)
        dy = f._like(1j * ky * f.coeffs)
        if kind == "grad":
            return SpectralVectorField(dx, dy)
        return SpectralVectorField(dy, -dx)
    if kind in ("div", "perp_div"):
        if not isinstance(f, SpectralVectorField):
            raise ArityError(f"{kind} expects a vector field")
        kx, ky, _ = mode_vectors(f.lattice, f.truncation)
        if kind == "div":
            return f.x._like(1j * (kx * f.x.coeffs + ky * f.y.coeffs))
        return f.x._like(1j * (kx * f.y.coeffs - ky * f.x.coeffs))
    raise ConfigError(f"unknown calculus kind {kind!r}")


def grad(f: SpectralScalarField) -> SpectralVectorField:
    return calculus(f, "grad")


def perp_grad(f: SpectralScalarField) -> SpectralVectorField:
    return calculus(f, "perp_grad")


def div(f: SpectralVectorField) -> SpectralScalarField:
    return calculus(f, "div")


def perp_div(f: SpectralVectorField) -> SpectralScalarField:
    return calculus(f, "perp_div")


def laplacian(f: SpectralScalarField) -> SpectralScalarField:
    _, _, s = mode_vectors(f.lattice, f.truncation)
    return f._like(-(s * s) * f.coeffs)


def inv_laplacian(f: SpectralScalarField) -> SpectralScalarField:
    """Zero-mean periodic Newtonian potential: mode k != 0 gets -1/|k|^2.

    The mean of the input is discarded and the output mean is zero.
    """
    n = f.truncation
    _, _, s = mode_vectors(f.lattice, n)
    mult = np.zeros_like(s)
    nz = s > 0
    mult[nz] = -1.0 / (s[nz] ** 2)
    return f._like(mult * f.coeffs)


def mean(f: Field):
    """The (0, 0) Fourier coefficient; a 2-vector componentwise for vectors."""
    if isinstance(f, SpectralVectorField):
        n = f.truncation
        return np.array([f.x.coeffs[n, n], f.y.coeffs[n, n]])
    n = f.truncation
    return f.coeffs[n, n]


# ---------------------------------------------------------------------------
# pointwise products


def product(f, g, pad: float = DEFAULT_PAD):
    """Pointwise product via a padded grid, truncated back to the box.

    Scalar*scalar, scalar*vector and vector*scalar are supported.  With
    pad >= 2 a single product of two box-limited tables is alias-free.
    Hermitian inputs yield an exactly Hermitian output.
    """
    if isinstance(f, SpectralVectorField) and isinstance(g, SpectralScalarField):
        return SpectralVectorField(product(f.x, g, pad), product(f.y, g, pad))
    if isinstance(f, SpectralScalarField) and isinstance(g, SpectralVectorField):
        return SpectralVectorField(product(f, g.x, pad), product(f, g.y, pad))
    if isinstance(f, SpectralVectorField) or isinstance(g, SpectralVectorField):
        raise ArityError("product of two vector fields is not defined; use dot()")
    _check_compatible(f, g)
    n = f.truncation
    size = _grid_size(n, pad)
    both_real = is_hermitian(f) and is_hermitian(g)
    a = to_grid(f, size)
    b = to_grid(g, size)
    if both_real:
        prod = a.real * b.real
    else:
        prod = a * b
    out = _extract(fft2(prod) / (size * size), n)
    if both_real:
        out = hermitize(out)
    return SpectralScalarField(f.lattice, n, out)


def dot(f: SpectralVectorField, g: SpectralVectorField,
        pad: float = DEFAULT_PAD) -> SpectralScalarField:
    return product(f.x, g.x, pad) + product(f.y, g.y, pad)


# ---------------------------------------------------------------------------
# truncation changes and serialization


def lift(f: Field, n_new: int) -> Field:
    """Embed the field in a larger index box (or truncate to a smaller one)."""
    if isinstance(f, SpectralVectorField):
        return SpectralVectorField(lift(f.x, n_new), lift(f.y, n_new))
    n = f.truncation
    if n_new == n:
        return f
    size = 2 * n_new + 1
    out = np.zeros((size, size), dtype=complex)
    m = min(n, n_new)
    out[n_new - m:n_new + m + 1, n_new - m:n_new + m + 1] = \
        f.coeffs[n - m:n + m + 1, n - m:n + m + 1]
    return SpectralScalarField(f.lattice, n_new, out)


def _field_json(f: SpectralScalarField) -> dict:
    n = f.truncation
    entries = []
    for m1 in range(-n, n + 1):
        for m2 in range(-n, n + 1):
            c = f.coeffs[m1 + n, m2 + n]
            if c != 0:
                entries.append([m1, m2, float(c.real), float(c.imag)])
    return {"N": n, "coeffs": entries}


def field_from_json_dict(lattice: LatticePair, data: dict) -> SpectralScalarField:
    if "x" in data and "y" in data:
        return SpectralVectorField(field_from_json_dict(lattice, data["x"]),
                                   field_from_json_dict(lattice, data["y"]))
    f = zero_field(lattice, int(data["N"]))
    for m1, m2, re, im in data["coeffs"]:
        f.coeffs[int(m1) + f.truncation, int(m2) + f.truncation] = re + 1j * im
    return f
