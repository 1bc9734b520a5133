"""Truncated Taylor series, circle grids and elementary norms.

Everything else in the package passes coefficient vectors around as
:class:`TaylorSeries`.  Boundary work goes through :class:`GridFunction`,
the samples of a series on a uniform grid of the circle ``|z| = rho``.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
import scipy.fft

from .exceptions import AmplificationError

#: Default truncation degree for boundary work; grids default to twice this.
DEFAULT_N = 16384
DEFAULT_M = 2 * DEFAULT_N

# below this size the direct convolution is both faster and exact
_DIRECT_CONV_MAX = 64
_AMPLIFICATION_LIMIT = 1e8


def _frozen_complex(values) -> np.ndarray:
    arr = np.array(values, dtype=np.complex128).ravel()
    if arr.size == 0:
        arr = np.zeros(1, dtype=np.complex128)
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True, eq=False)
class TaylorSeries:
    """Coefficients ``f^(0), ..., f^(N)`` of a truncated power series.

    Trailing zeros are kept as given; use :meth:`equals` for comparisons that
    should ignore them.
    """

    coeffs: np.ndarray

    def __post_init__(self):
        arr = _frozen_complex(self.coeffs)
        if not np.all(np.isfinite(arr)):
            raise ValueError("TaylorSeries coefficients must be finite")
        object.__setattr__(self, "coeffs", arr)

    @classmethod
    def zeros(cls, N: int) -> "TaylorSeries":
        return cls(np.zeros(N + 1))

    @classmethod
    def monomial(cls, k: int, scale: complex = 1.0) -> "TaylorSeries":
        c = np.zeros(k + 1, dtype=complex)
        c[k] = scale
        return cls(c)

    @property
    def degree(self) -> int:
        return self.coeffs.size - 1

    def __len__(self):
        return self.coeffs.size

    def __getitem__(self, n):
        return self.coeffs[n]

    def __repr__(self):
        head = np.array2string(self.coeffs[:6], precision=6)
        more = "" if self.coeffs.size <= 6 else f" ... ({self.coeffs.size} coeffs)"
        return f"TaylorSeries({head}{more})"

    def padded(self, N: int) -> np.ndarray:
        """Coefficients ``0..N`` as a fresh array, zero-padded or cut."""
        out = np.zeros(N + 1, dtype=np.complex128)
        k = min(N + 1, self.coeffs.size)
        out[:k] = self.coeffs[:k]
        return out

    def truncate(self, N: int) -> "TaylorSeries":
        return TaylorSeries(self.padded(N))

    def effective_degree(self, tol: float = 0.0) -> int:
        """Index of the last coefficient with modulus above ``tol`` (0 if none)."""
        nz = np.flatnonzero(np.abs(self.coeffs) > tol)
        return int(nz[-1]) if nz.size else 0

    def equals(self, other: "TaylorSeries", atol: float = 0.0) -> bool:
        N = max(self.degree, other.degree)
        return bool(np.all(np.abs(self.padded(N) - other.padded(N)) <= atol))

    def conj_coeffs(self) -> np.ndarray:
        return np.conj(self.coeffs)

    def __add__(self, other):
        if not isinstance(other, TaylorSeries):
            return NotImplemented
        N = max(self.degree, other.degree)
        return TaylorSeries(self.padded(N) + other.padded(N))

    def __sub__(self, other):
        if not isinstance(other, TaylorSeries):
            return NotImplemented
        N = max(self.degree, other.degree)
        return TaylorSeries(self.padded(N) - other.padded(N))

    def __neg__(self):
        return TaylorSeries(-self.coeffs)

    def __mul__(self, scalar):
        if isinstance(scalar, TaylorSeries):
            return NotImplemented
        return TaylorSeries(self.coeffs * scalar)

    __rmul__ = __mul__


@dataclass(frozen=True, eq=False)
class GridFunction:
    """Samples at ``rho * exp(2 pi i j / M)``, ``j = 0..M-1``."""

    samples: np.ndarray
    radius: float = 1.0

    def __post_init__(self):
        arr = _frozen_complex(self.samples)
        if arr.size < 2:
            raise ValueError("a grid needs at least two samples")
        if not np.all(np.isfinite(arr)):
            raise ValueError("grid samples must be finite")
        if not 0.0 < self.radius <= 1.0:
            raise ValueError(f"radius must lie in (0, 1], got {self.radius}")
        object.__setattr__(self, "samples", arr)

    @property
    def size(self) -> int:
        return self.samples.size

    def angles(self) -> np.ndarray:
        return 2 * np.pi * np.arange(self.size) / self.size

    def points(self) -> np.ndarray:
        return self.radius * np.exp(1j * self.angles())


def as_series(f) -> TaylorSeries:
    return f if isinstance(f, TaylorSeries) else TaylorSeries(f)


def evaluate(f: TaylorSeries, z):
    """Evaluate ``sum f^(n) z^n`` by Horner's rule; ``z`` may be an array."""
    f = as_series(f)
    z_arr = np.asarray(z, dtype=complex)
    if np.any(np.abs(z_arr) > 1.0):
        warnings.warn("evaluating a truncated series outside the closed disk",
                      RuntimeWarning, stacklevel=2)
    acc = np.zeros_like(z_arr)
    for c in f.coeffs[::-1]:
        acc = acc * z_arr + c
    return acc[()] if acc.ndim == 0 else acc


def _direct_convolve(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.convolve(a, b)


def convolve(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Full linear convolution of two coefficient arrays."""
    if min(a.size, b.size) <= _DIRECT_CONV_MAX:
        return _direct_convolve(a, b)
    size = a.size + b.size - 1
    L = scipy.fft.next_fast_len(size)
    out = scipy.fft.ifft(scipy.fft.fft(a, L) * scipy.fft.fft(b, L))
    return out[:size]


def cauchy_product(f: TaylorSeries, g: TaylorSeries, N: int) -> TaylorSeries:
    """First ``N + 1`` coefficients of ``f * g``."""
    if N < 0:
        raise ValueError("N must be non-negative")
    f, g = as_series(f), as_series(g)
    a = f.coeffs[: N + 1]
    b = g.coeffs[: N + 1]
    out = np.zeros(N + 1, dtype=complex)
    prod = convolve(a, b)[: N + 1]
    out[: prod.size] = prod
    return TaylorSeries(out)


def dilate(f: TaylorSeries, r: float) -> TaylorSeries:
    """Coefficients of ``z -> f(r z)``."""
    if not 0.0 < r <= 1.0:
        raise ValueError(f"dilation radius must lie in (0, 1], got {r}")
    f = as_series(f)
    return TaylorSeries(f.coeffs * r ** np.arange(f.coeffs.size))


def to_grid(f: TaylorSeries, M: int, rho: float = 1.0) -> GridFunction:
    f = as_series(f)
    if M < f.degree + 1:
        raise ValueError(f"grid size {M} cannot resolve degree {f.degree}")
    if not 0.0 < rho <= 1.0:
        raise ValueError(f"radius must lie in (0, 1], got {rho}")
    c = f.coeffs if rho == 1.0 else f.coeffs * rho ** np.arange(f.coeffs.size)
    return GridFunction(M * scipy.fft.ifft(c, M), rho)


def from_grid(w: GridFunction, N: int) -> TaylorSeries:
    """Coefficients ``0..N`` recovered from grid samples by the DFT.

    Exact (to roundoff) for polynomials of degree below ``w.size`` sampled on
    the unit circle.  Inside the disk the ``rho**-n`` rescaling amplifies
    roundoff, so that path is refused once ``rho**-N`` exceeds 1e8.
    """
    if not 0 <= N < w.size:
        raise ValueError(f"need 0 <= N < M, got N={N}, M={w.size}")
    c = scipy.fft.fft(w.samples)[: N + 1] / w.size
    if w.radius != 1.0:
        if w.radius ** (-N) > _AMPLIFICATION_LIMIT:
            raise AmplificationError(
                f"rho^-N = {w.radius ** (-N):.3g} exceeds {_AMPLIFICATION_LIMIT:g}")
        c = c / w.radius ** np.arange(N + 1)
    return TaylorSeries(c)


def h2_norm(f: TaylorSeries) -> float:
    return float(np.linalg.norm(as_series(f).coeffs))


def geometric_series(w: complex, N: int) -> np.ndarray:
    """``(w**n)_{n<=N}`` computed without repeated-multiplication drift."""
    w = complex(w)
    if w == 0:
        out = np.zeros(N + 1, dtype=complex)
        out[0] = 1.0
        return out
    n = np.arange(N + 1)
    return np.abs(w) ** n * np.exp(1j * np.angle(w) * n)


def binomial_half_series(N: int) -> np.ndarray:
    """Coefficients of ``(1 - z)^(-1/2)``: ``binom(2n, n) / 4^n``."""
    n = np.arange(1, N + 1)
    out = np.empty(N + 1)
    out[0] = 1.0
    out[1:] = np.cumprod((2 * n - 1) / (2 * n))
    return out


def neg_log_series(N: int) -> np.ndarray:
    """Coefficients of ``-log(1 - z)``."""
    out = np.zeros(N + 1)
    out[1:] = 1.0 / np.arange(1, N + 1)
    return out
