"""Hardy-space constructions.

Outer functions from a boundary modulus, Pythagorean mates, the pair
``(b, a)`` attached to a Smirnov-class quotient ``phi = b / a``, finite
Blaschke products with real zeros, and reproducing kernels.
"""

from __future__ import annotations

import logging
import warnings
from dataclasses import dataclass

import numpy as np
import scipy.fft

from .exceptions import InvalidPair, NonRealInput, NotInUnitBall, OutsideDisk
from .series import (
    GridFunction,
    TaylorSeries,
    as_series,
    cauchy_product,
    geometric_series,
    to_grid,
)

log = logging.getLogger(__name__)

DEFAULT_FLOOR = 1e-12
PAIR_RESIDUAL_TOL = 1e-6
OUTER_CHECK_TOL = 1e-6
_IMAG_TOL = 1e-10
_UNIT_BALL_SLACK = 1e-9
_MAX_DEFLATED_ORDER = 4


# ---------------------------------------------------------------------------
# outer functions
# ---------------------------------------------------------------------------

def _grid_zero_order(mod: np.ndarray, j: int, floor: float):
    """Order of an isolated zero of the modulus at grid node ``j``, or None.

    A zero of order m at a node makes the neighbours scale like ``h**m`` and
    ``(2h)**m``; both sides have to agree on the same integer m.
    """
    M = mod.size
    nb = [mod[(j + d) % M] for d in (-2, -1, 1, 2)]
    if min(nb) <= floor:
        return None
    orders = [np.log2(nb[0] / nb[1]), np.log2(nb[3] / nb[2])]
    m = int(round(float(np.mean(orders))))
    if not 1 <= m <= _MAX_DEFLATED_ORDER:
        return None
    if max(abs(o - m) for o in orders) > 0.25:
        return None
    return m


def _analytic_log(L: np.ndarray) -> np.ndarray:
    """Grid values of the analytic function whose real part is ``L``."""
    M = L.size
    c = scipy.fft.fft(L) / M
    h = np.zeros(M, dtype=complex)
    h[0] = c[0].real
    half = (M + 1) // 2
    h[1:half] = 2 * c[1:half]
    if M % 2 == 0:
        h[M // 2] = c[M // 2].real
    return M * scipy.fft.ifft(h)


def outer_from_modulus(w: GridFunction, N: int, floor: float = DEFAULT_FLOOR) -> TaylorSeries:
    """Degree-``N`` coefficients of the outer function with modulus ``w``.

    The log-modulus is transformed, completed to an analytic function
    (``c0 + 2 sum_{k>=1} c_k z^k``) and exponentiated on the grid.  Samples at
    or below ``floor`` are handled in one of two ways: an isolated zero of
    integer order at a node is divided out exactly and restored as the factor
    ``(1 - e^{-i theta_j} z)^m``; anything else is clamped to ``floor`` and
    reported with a warning.
    """
    if w.radius != 1.0:
        raise ValueError("outer_from_modulus needs samples on the unit circle")
    if floor <= 0:
        raise ValueError("floor must be positive")
    M = w.size
    if not 0 <= N < M:
        raise ValueError(f"need 0 <= N < M, got N={N}, M={M}")
    s = w.samples
    if np.any(np.abs(s.imag) > _IMAG_TOL):
        raise NonRealInput("modulus samples must be real")
    mod = s.real.copy()
    if np.any(mod < -_IMAG_TOL):
        raise ValueError("modulus samples must be non-negative")
    mod = np.maximum(mod, 0.0)

    low = np.flatnonzero(mod <= floor)
    theta = w.angles()
    deflated = []
    for j in low:
        m = _grid_zero_order(mod, j, floor)
        if m is not None:
            deflated.append((j, m))
    work = mod
    if deflated:
        work = mod.copy()
        for j, m in deflated:
            dist = np.abs(1 - np.exp(1j * (theta - theta[j])))
            dist[j] = 1.0
            work = work / dist ** m
        for j, m in deflated:
            q = [work[(j + d) % M] for d in (-2, -1, 1, 2)]
            # even Richardson step: O(h^4) estimate of the quotient at the node
            work[j] = (4 * (q[1] + q[2]) - (q[0] + q[3])) / 6
        log.debug("deflated %d boundary zeros", len(deflated))
    clamped = int(np.count_nonzero(work <= floor))
    if clamped:
        warnings.warn(f"{clamped} modulus samples clamped to floor {floor:g}",
                      RuntimeWarning, stacklevel=2)

    L = np.log(np.maximum(work, floor))
    O = np.exp(_analytic_log(L))
    coeffs = scipy.fft.fft(O)[: N + 1] / M
    # the constant term is exactly the geometric mean; the DFT value carries aliasing
    coeffs[0] = np.exp(np.mean(L))
    out = TaylorSeries(coeffs)
    for j, m in deflated:
        factor = TaylorSeries([1.0, -np.exp(-1j * theta[j])])
        for _ in range(m):
            out = cauchy_product(out, factor, N)
    return out


# ---------------------------------------------------------------------------
# Pythagorean pairs
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PythagoreanPair:
    """``(b, a)`` with ``|b|^2 + |a|^2 = 1`` on the circle, ``a`` outer, ``a(0) > 0``."""

    b: TaylorSeries
    a: TaylorSeries
    unimodularity_residual: float
    grid_size: int

    @property
    def N(self) -> int:
        return max(self.b.degree, self.a.degree)

    def phi_on_grid(self, M: int | None = None) -> GridFunction:
        M = M or self.grid_size
        return GridFunction(to_grid(self.b, M).samples / to_grid(self.a, M).samples)


def make_pair(b, a, M: int, check_outer: bool = True) -> PythagoreanPair:
    """Validate ``(b, a)`` on an ``M``-point grid and wrap it as a pair.

    Raises :class:`InvalidPair` when any invariant fails.
    """
    b, a = as_series(b), as_series(a)
    bg = to_grid(b, M).samples
    ag = to_grid(a, M).samples
    residual = float(np.max(np.abs(np.abs(bg) ** 2 + np.abs(ag) ** 2 - 1.0)))
    if residual > PAIR_RESIDUAL_TOL:
        raise InvalidPair(f"unimodularity residual {residual:.3g} exceeds {PAIR_RESIDUAL_TOL:g}")
    a0 = a[0]
    if abs(a0.imag) > 1e-10 or a0.real <= 0:
        raise InvalidPair(f"a(0) = {a0} is not real-positive")
    if check_outer:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RuntimeWarning)
            again = outer_from_modulus(GridFunction(np.abs(ag)), a.degree)
        err = float(np.max(np.abs(again.coeffs - a.coeffs)))
        if err > OUTER_CHECK_TOL:
            raise InvalidPair(f"a is not outer to tolerance (deviation {err:.3g})")
    return PythagoreanPair(b, a, residual, M)


def pythagorean_mate(b: TaylorSeries, M: int, N: int) -> PythagoreanPair:
    b = as_series(b)
    bg = np.abs(to_grid(b, M).samples)
    peak = float(bg.max())
    if peak > 1.0 + _UNIT_BALL_SLACK:
        raise NotInUnitBall(f"max |b| on the grid is {peak!r}")
    bg = np.minimum(bg, 1.0)
    a = outer_from_modulus(GridFunction(np.sqrt(1.0 - bg ** 2)), N)
    return make_pair(b.truncate(N), a, M)


def pair_from_smirnov(phi: TaylorSeries, M: int, N: int) -> PythagoreanPair:
    """The pair with ``b / a = phi`` for a ``phi`` that is finite on the grid."""
    phi = as_series(phi)
    pg = np.abs(to_grid(phi, M).samples)
    a = outer_from_modulus(GridFunction(1.0 / np.sqrt(1.0 + pg ** 2)), N)
    b = cauchy_product(phi, a, N)
    return make_pair(b, a, M)


# ---------------------------------------------------------------------------
# Blaschke products and kernels
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BlaschkeSpec:
    """Finite list of real zeros ``0 < t_1 < ... < t_K < 1``.

    Consecutive gaps must shrink by a ratio ``(1 - t_{n+1}) / (1 - t_n)``
    that stays strictly between 0 and 1/2.
    """

    zeros: tuple

    def __post_init__(self):
        t = tuple(float(x) for x in self.zeros)
        object.__setattr__(self, "zeros", t)
        arr = np.array(t)
        if arr.size and (arr[0] <= 0 or arr[-1] >= 1 or np.any(np.diff(arr) <= 0)):
            raise ValueError("zeros must be strictly increasing in (0, 1)")
        if arr.size >= 2:
            r = self.ratios
            if not (r.min() > 0 and r.max() < 0.5):
                raise ValueError(f"gap ratios must lie in (0, 1/2); got [{r.min()}, {r.max()}]")

    @classmethod
    def geometric(cls, count: int, base: float = 4.0) -> "BlaschkeSpec":
        """Zeros ``t_n = 1 - base**-n`` for ``n = 1..count``."""
        return cls(tuple(1.0 - base ** -float(n) for n in range(1, count + 1)))

    @property
    def ratios(self) -> np.ndarray:
        gaps = 1.0 - np.array(self.zeros)
        return gaps[1:] / gaps[:-1]

    @property
    def ratio_lo(self):
        return float(self.ratios.min()) if len(self.zeros) > 1 else None

    @property
    def ratio_hi(self):
        return float(self.ratios.max()) if len(self.zeros) > 1 else None


def blaschke_factor_series(t: float, N: int) -> TaylorSeries:
    """Coefficients of ``(t - z) / (1 - t z)``: ``t`` then ``-(1 - t^2) t^(j-1)``."""
    c = np.empty(N + 1)
    c[0] = t
    if N:
        c[1:] = -(1.0 - t * t) * t ** np.arange(N)
    return TaylorSeries(c)


def blaschke_series(spec: BlaschkeSpec, N: int) -> TaylorSeries:
    out = TaylorSeries(np.eye(1, N + 1, 0).ravel())
    for t in spec.zeros:
        out = cauchy_product(out, blaschke_factor_series(t, N), N)
    return out


def blaschke_eval(spec: BlaschkeSpec, z):
    """``B(z)`` from the zero list (no truncation)."""
    z = np.asarray(z, dtype=complex)
    val = np.ones_like(z)
    for t in spec.zeros:
        val = val * (t - z) / (1.0 - t * z)
    return val[()] if val.ndim == 0 else val


def blaschke_inf_check(spec: BlaschkeSpec) -> float:
    """``min_n |B(t_n^2)|`` over the retained zeros (1 for an empty list)."""
    if not spec.zeros:
        return 1.0
    t = np.array(spec.zeros)
    return float(np.min(np.abs(blaschke_eval(spec, t * t))))


def kernel_series(w: complex, N: int) -> TaylorSeries:
    """Coefficients ``conj(w)**n`` of the reproducing kernel ``1 / (1 - conj(w) z)``."""
    if abs(w) >= 1:
        raise OutsideDisk(f"|w| = {abs(w)} must be < 1")
    return TaylorSeries(geometric_series(np.conj(w), N))
