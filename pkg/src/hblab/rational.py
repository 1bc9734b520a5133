"""Rational symbols ``phi = p / q``.

Fejer-Riesz factorisation of ``|p|^2 + |q|^2``, the exact rational pair
``(p / r, q / r)``, poles on the circle, the decomposition
``f = g * prod (z - lambda_j) + interp`` that characterises membership when
``phi`` has circle poles, and the gap-series construction that defeats the
coefficient formula when one of those poles is multiple.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
import scipy.signal

from .exceptions import DegenerateOnCircle, ParameterOutOfRange
from .hardy import PythagoreanPair, make_pair
from .series import TaylorSeries, as_series, cauchy_product

CIRCLE_TOL = 1e-8
PAIRING_TOL = 1e-6
FR_GRID = 4096


def _poly(c) -> np.ndarray:
    arr = np.atleast_1d(np.asarray(c, dtype=complex)).ravel()
    return arr if arr.size else np.zeros(1, dtype=complex)


def _trim(c: np.ndarray) -> np.ndarray:
    nz = np.flatnonzero(c != 0)
    return c[: nz[-1] + 1] if nz.size else c[:1]


def poly_roots(c) -> np.ndarray:
    """Roots of the ascending-order polynomial ``c`` (companion eigenvalues)."""
    c = _trim(_poly(c))
    if c.size <= 1:
        return np.zeros(0, dtype=complex)
    return np.roots(c[::-1])


def series_of_ratio(num, den, N: int) -> np.ndarray:
    """Taylor coefficients ``0..N`` of ``num / den`` by the forward recurrence."""
    den = _poly(den)
    if den[0] == 0:
        raise ValueError("denominator vanishes at the origin")
    impulse = np.zeros(N + 1, dtype=complex)
    impulse[0] = 1.0
    return scipy.signal.lfilter(_poly(num), den, impulse)


def _cluster_centres(roots: np.ndarray, radius: float = 1e-2, near: float = 1e-4) -> np.ndarray:
    """Roots with clouds near the circle replaced by their centroids.

    The eigenvalue solver splits an ``m``-fold root into a cloud of radius
    about ``eps**(1/m)``, which can dip inside the disk for ``m >= 2``.
    """
    on = np.abs(np.abs(roots) - 1.0) <= near
    out = list(roots[~on])
    pending = list(roots[on])
    while pending:
        z = pending.pop()
        cloud = [z] + [w for w in pending if abs(w - z) <= radius]
        pending = [w for w in pending if abs(w - z) > radius]
        out.append(np.mean(cloud))
    return np.array(out)


@dataclass(frozen=True, eq=False)
class RationalFn:
    """``p / q`` with ``q`` zero-free in the open disk and no common zeros."""

    p: np.ndarray
    q: np.ndarray

    def __post_init__(self):
        p, q = _trim(_poly(self.p)), _trim(_poly(self.q))
        if not np.any(q):
            raise ValueError("denominator is identically zero")
        rq = poly_roots(q)
        if rq.size and np.min(np.abs(_cluster_centres(rq))) < 1 - 1e-10:
            raise ValueError("denominator has a zero inside the disk")
        rp = poly_roots(p) if np.any(p) else np.zeros(0)
        if rp.size and rq.size and np.min(np.abs(rp[:, None] - rq[None, :])) < 1e-8:
            raise ValueError("numerator and denominator share a zero")
        p.flags.writeable = False
        q.flags.writeable = False
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)

    def series(self, N: int) -> TaylorSeries:
        return TaylorSeries(series_of_ratio(self.p, self.q, N))

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        return np.polyval(self.p[::-1], z) / np.polyval(self.q[::-1], z)


class FejerRiesz(NamedTuple):
    r: np.ndarray
    root_margin: float
    residual: float


def _laurent_symbol(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    """Coefficients of ``z^d (|p|^2 + |q|^2)`` in ascending order, ``d = max deg``."""
    d = max(p.size, q.size) - 1
    pp = np.zeros(d + 1, dtype=complex)
    qq = np.zeros(d + 1, dtype=complex)
    pp[: p.size] = p
    qq[: q.size] = q
    return np.convolve(pp, np.conj(pp[::-1])) + np.convolve(qq, np.conj(qq[::-1]))


def fejer_riesz(p, q) -> FejerRiesz:
    """Polynomial ``r`` with ``|r|^2 = |p|^2 + |q|^2`` on the circle.

    All roots of ``r`` lie outside the closed disk and ``r(0) > 0``.  The roots
    of the Laurent symbol come in pairs ``zeta, 1/conj(zeta)``; the outer one of
    each pair is kept.
    """
    p, q = _trim(_poly(p)), _trim(_poly(q))
    if not (np.any(p) or np.any(q)):
        raise ValueError("p and q are both zero")
    c = _laurent_symbol(p, q)
    scale = np.max(np.abs(c))
    # drop vanishing extreme Laurent coefficients (they come in conjugate pairs)
    while c.size > 1 and abs(c[0]) <= 1e-14 * scale and abs(c[-1]) <= 1e-14 * scale:
        c = c[1:-1]
    d = (c.size - 1) // 2
    s0 = c[d].real
    if d == 0:
        r = np.array([np.sqrt(s0)], dtype=complex)
        return FejerRiesz(r, np.inf, 0.0)

    roots = np.roots(c[::-1])
    if np.any(np.abs(np.abs(roots) - 1.0) <= CIRCLE_TOL):
        raise DegenerateOnCircle("Laurent symbol has a root on the unit circle")
    outside = list(roots[np.abs(roots) > 1])
    inside = roots[np.abs(roots) < 1]
    if len(outside) != d or inside.size != d:
        raise DegenerateOnCircle("roots do not split evenly across the circle")
    # pair zeta (inside) with 1/conj(zeta) (outside), greedily by distance
    kept = []
    for z in inside[np.argsort(np.abs(inside))[::-1]]:
        target = 1.0 / np.conj(z) if z != 0 else np.inf
        dist = [abs(o - target) / max(1.0, abs(target)) for o in outside]
        k = int(np.argmin(dist))
        if dist[k] > PAIRING_TOL:
            raise DegenerateOnCircle(f"root pairing failed (distance {dist[k]:.3g})")
        kept.append(outside.pop(k))
    kept = np.array(kept)

    r = np.poly(kept)[::-1].astype(complex)  # monic, ascending
    r *= np.sqrt(s0 / np.sum(np.abs(r) ** 2))
    r *= np.exp(-1j * np.angle(r[0]))
    r[0] = r[0].real
    margin = float(np.min(np.abs(kept)) - 1.0)
    return FejerRiesz(r, margin, fejer_riesz_residual(p, q, r))


def fejer_riesz_residual(p, q, r, M: int = FR_GRID) -> float:
    """``max | |p|^2 + |q|^2 - |r|^2 |`` on an ``M``-grid, relative to the peak."""
    z = np.exp(2j * np.pi * np.arange(M) / M)
    lhs = np.abs(np.polyval(_poly(p)[::-1], z)) ** 2 + np.abs(np.polyval(_poly(q)[::-1], z)) ** 2
    rhs = np.abs(np.polyval(_poly(r)[::-1], z)) ** 2
    return float(np.max(np.abs(lhs - rhs)) / np.max(lhs))


def rational_pair(phi: RationalFn, N: int, M: int | None = None,
                  check_outer: bool = False) -> PythagoreanPair:
    """The pair ``(p / r, q / r)`` truncated at degree ``N``.

    ``q / r`` is outer because neither polynomial vanishes in the open disk, so
    the numerical outer check is off by default.
    """
    fr = fejer_riesz(phi.p, phi.q)
    inv_r = TaylorSeries(series_of_ratio([1.0], fr.r, N))
    b = cauchy_product(TaylorSeries(phi.p), inv_r, N)
    a = cauchy_product(TaylorSeries(phi.q), inv_r, N)
    if M is None:
        M = max(FR_GRID, 1 << int(np.ceil(np.log2(2 * (N + 1)))))
    return make_pair(b, a, M, check_outer=check_outer)


# ---------------------------------------------------------------------------
# poles on the circle and the membership decomposition
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CirclePoles:
    """Unit-modulus poles with multiplicities."""

    poles: tuple

    def __post_init__(self):
        items = tuple((complex(lam), int(m)) for lam, m in self.poles)
        for lam, m in items:
            if abs(abs(lam) - 1.0) > 1e-8:
                raise ValueError(f"pole {lam} is not on the unit circle")
            if m < 1:
                raise ValueError("multiplicities must be positive")
        object.__setattr__(self, "poles", items)

    @property
    def total(self) -> int:
        return sum(m for _, m in self.poles)

    def __iter__(self):
        return iter(self.poles)

    def __len__(self):
        return len(self.poles)

    def nodes(self) -> list:
        """Each pole repeated by its multiplicity."""
        return [lam for lam, m in self.poles for _ in range(m)]


def circle_poles(q, tol: float = 1e-4) -> CirclePoles:
    """Zeros of ``q`` within ``tol`` of the circle, clustered into multiplicities.

    A multiple root comes back from the eigenvalue solver as a small cloud of
    radius about ``eps**(1/m)``; roots closer than ``sqrt(tol)`` are merged.
    """
    if not 0 < tol <= 1e-4:
        raise ValueError("tol must lie in (0, 1e-4]")
    roots = poly_roots(q)
    near = [z for z in roots if abs(abs(z) - 1.0) <= tol]
    radius = np.sqrt(tol)
    clusters: list[list[complex]] = []
    for z in near:
        for cl in clusters:
            if abs(np.mean(cl) - z) <= radius:
                cl.append(z)
                break
        else:
            clusters.append([z])
    out = []
    for cl in clusters:
        c = np.mean(cl)
        out.append((c / abs(c), len(cl)))
    out.sort(key=lambda item: np.angle(item[0]) % (2 * np.pi))
    return CirclePoles(tuple(out))


def divide_by_linear(x: np.ndarray, lam: complex) -> np.ndarray:
    """Power-series quotient ``x / (z - lam)``, run forward from coefficient 0.

    ``g_n = -lam^-(n+1) sum_{k<=n} x_k lam^k``; for ``|lam| = 1`` the error of
    this partial-sum form grows only linearly in ``n``.
    """
    n = np.arange(x.size)
    lam_pow = lam ** n
    return -np.cumsum(x * lam_pow) / (lam_pow * lam)


def divide_by_poles(x: np.ndarray, poles: CirclePoles) -> np.ndarray:
    out = np.asarray(x, dtype=complex)
    for lam in poles.nodes():
        out = divide_by_linear(out, lam)
    return out


def hermite_interpolant(f: TaylorSeries, poles: CirclePoles) -> np.ndarray:
    """Degree ``< k`` polynomial matching ``f^(d)(lambda_j)`` for ``d < m_j``.

    Derivatives come from the coefficient sums
    ``sum f^(n) n (n-1) ... (n-d+1) lambda^(n-d)``, so this is only reliable
    when those sums have converged (polynomials, fast-decaying series).
    Newton divided differences on the repeated nodes.
    """
    f = as_series(f)
    nodes = poles.nodes()
    k = len(nodes)
    if k == 0:
        return np.zeros(1, dtype=complex)
    n = np.arange(f.coeffs.size)
    derivs = {}
    for lam, m in poles:
        vals = []
        falling = np.ones_like(n, dtype=float)
        for d in range(m):
            if d:
                falling = falling * (n - d + 1)
            pw = np.zeros(n.size, dtype=complex)
            ok = n >= d
            pw[ok] = lam ** (n[ok] - d)
            vals.append(np.sum(f.coeffs * falling * pw))
        derivs[lam] = vals
    # divided-difference table on repeated nodes
    table = np.zeros((k, k), dtype=complex)
    for i, lam in enumerate(nodes):
        table[i, 0] = derivs[lam][0]
    for j in range(1, k):
        for i in range(k - j):
            x0, x1 = nodes[i], nodes[i + j]
            if abs(x1 - x0) < 1e-14:
                table[i, j] = derivs[x0][j] / math.factorial(j)
            else:
                table[i, j] = (table[i + 1, j - 1] - table[i, j - 1]) / (x1 - x0)
    coef = table[0]
    # expand Newton form into monomial coefficients
    poly = np.zeros(k, dtype=complex)
    basis = np.array([1.0 + 0j])
    for j in range(k):
        poly[: basis.size] += coef[j] * basis
        basis = np.convolve(basis, [-nodes[j], 1.0])
    return poly


class MembershipDecomposition(NamedTuple):
    g: TaylorSeries
    interp: np.ndarray
    tail_verdict: str
    block_energies: np.ndarray
    truncation_energies: np.ndarray


SQUARE_SUMMABLE = "square_summable"
DIVERGENT = "divergent"
INCONCLUSIVE = "inconclusive"

_POLY_PAD = 256
_GROWTH = 1.2


def _fit_decomposition(x: np.ndarray, poles: CirclePoles, k: int):
    """Interpolant minimising the energy of ``g`` over the upper half of indices."""
    gx = divide_by_poles(x, poles)
    if k == 0:
        return gx, np.zeros(1, dtype=complex)
    basis = np.zeros((k, x.size), dtype=complex)
    for i in range(k):
        e = np.zeros(x.size, dtype=complex)
        e[i] = 1.0
        basis[i] = divide_by_poles(e, poles)
    lo = x.size // 2
    A = basis[:, lo:].T
    scale = np.linalg.norm(A, axis=0)
    scale[scale == 0] = 1.0
    coef, *_ = np.linalg.lstsq(A / scale, gx[lo:], rcond=None)
    coef = coef / scale
    return gx - coef @ basis, coef


def _dyadic_block_energies(g: np.ndarray) -> np.ndarray:
    e = np.abs(g) ** 2
    out = []
    B = 0
    while (1 << (B + 1)) <= e.size:
        out.append(e[1 << B: 1 << (B + 1)].sum())
        B += 1
    return np.array(out)


def rational_membership(f: TaylorSeries, poles: CirclePoles,
                        exact_polynomial: bool | None = None) -> MembershipDecomposition:
    """Split ``f = g * prod (z - lambda_j) + interp`` and judge whether ``g`` is in H^2.

    The interpolant (degree below the total multiplicity ``k``) is the one that
    makes ``g`` smallest over the upper half of the retained coefficients; for
    polynomial data this is exactly Hermite interpolation, and for truncated
    series it avoids the truncation error of the derivative sums, which the
    division by ``(z - lambda)^m`` would amplify like ``n^(m-1)``.

    Inputs with at most 64 coefficients are treated as exact polynomials
    unless ``exact_polynomial`` says otherwise.

    ``tail_verdict`` is ``divergent`` when ``||g||^2`` keeps growing by at
    least 1.2x under each of the last three truncation doublings,
    ``square_summable`` when the dyadic block energies of ``g`` fall by at
    least that factor over the last three blocks (or vanish to roundoff),
    and ``inconclusive`` otherwise.
    """
    f = as_series(f)
    k = poles.total
    if exact_polynomial is None:
        exact_polynomial = f.coeffs.size <= 64
    x = f.coeffs
    if exact_polynomial:
        x = np.zeros(max(_POLY_PAD, 4 * x.size), dtype=complex)
        x[: f.coeffs.size] = f.coeffs
    if k == 0:
        g = np.array(f.coeffs)
        return MembershipDecomposition(TaylorSeries(g), np.zeros(1, dtype=complex),
                                       SQUARE_SUMMABLE, _dyadic_block_energies(g),
                                       np.array([np.vdot(g, g).real]))
    g, interp = _fit_decomposition(x, poles, k)

    trunc = [np.vdot(g, g).real]
    if not exact_polynomial and x.size >= 512:
        for i in range(1, 4):
            sub = x[: x.size >> i]
            gs, _ = _fit_decomposition(sub, poles, k)
            trunc.append(np.vdot(gs, gs).real)
    trunc = np.array(trunc[::-1])  # increasing truncation

    blocks = _dyadic_block_energies(g)
    total = blocks.sum() + abs(g[0]) ** 2
    verdict = INCONCLUSIVE
    if trunc.size >= 4 and np.all(trunc[1:] >= _GROWTH * trunc[:-1]):
        verdict = DIVERGENT
    elif blocks.size >= 1 and blocks[-1] <= 1e-24 * max(total, 1e-300):
        verdict = SQUARE_SUMMABLE
    elif blocks.size >= 4 and np.all(blocks[-3:] * _GROWTH <= blocks[-4:-1]):
        verdict = SQUARE_SUMMABLE
    if exact_polynomial:
        g = g[: max(f.coeffs.size - k, 1)]
    return MembershipDecomposition(TaylorSeries(g), interp, verdict, blocks, trunc)


def gap_counterexample(poles: CirclePoles, K: int = 3, alpha: float = 0.75,
                       N: int = 1 << 20) -> TaylorSeries:
    """``f = (sum_{n>=1} z^(K n) / n^alpha) * prod (1 - conj(lambda_j) z)^(m_j)``."""
    k = poles.total
    if K <= k:
        raise ParameterOutOfRange(f"K={K} must exceed the total multiplicity {k}")
    if not 0.5 < alpha < 1:
        raise ParameterOutOfRange(f"alpha={alpha} must lie in (1/2, 1)")
    if not any(m >= 2 for _, m in poles):
        raise ParameterOutOfRange("the construction needs a multiple pole")
    g = np.zeros(N + 1)
    n = np.arange(1, N // K + 1)
    g[K * n] = n ** -alpha
    out = TaylorSeries(g)
    for lam in poles.nodes():
        out = cauchy_product(out, TaylorSeries([1.0, -np.conj(lam)]), N)
    return out


def coefficient_growth_probe(phi: RationalFn, N: int = 4096):
    """``(max_j |phi^(j)|, slope of log|phi^(j)| against log j over j in [N/2, N])``."""
    if N < 64:
        raise ValueError("N must be at least 64")
    c = np.abs(series_of_ratio(phi.p, phi.q, N))
    j = np.arange(N // 2, N + 1)
    vals = c[N // 2:]
    keep = vals > 0
    if keep.sum() < 2:
        return float(c.max()), float("-inf")
    slope = np.polyfit(np.log(j[keep]), np.log(vals[keep]), 1)[0]
    return float(c.max()), float(slope)
