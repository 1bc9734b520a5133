"""Norm estimates built on the coefficient formula

    ||f||^2 = sum_m |f^(m)|^2 + sum_m | sum_n conj(phi^(n)) f^(m+n) |^2

together with partial-sum diagnostics for the inner series, weighted and
Sobolev sums, the clamped-outer limit sweep and Abel traces.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .hardy import PythagoreanPair, _analytic_log
from .series import (
    GridFunction,
    TaylorSeries,
    as_series,
    cauchy_product,
    from_grid,
    h2_norm,
    to_grid,
)
from .toeplitz import coanalytic_apply

TRUST_TAIL_RATIO = 0.05
DIVERGENCE_RATIO = 2 ** 0.125
ROUNDOFF_FACTOR = 100.0
ROUNDOFF_ROWS = 1e-24
CONVERGED_TOL = 1e-9
SWEEP_TOL = 1e-3
SWEEP_GROWTH = 2.0
DEFAULT_EPSILONS = tuple(2.0 ** -j for j in range(1, 13))

CONVERGED = "converged"
DIVERGENT = "divergent"
INCONCLUSIVE = "inconclusive"


def _last_block(n: int) -> slice:
    """Last dyadic block ``[2^B, n)`` of the index range ``[0, n)``."""
    if n <= 1:
        return slice(0, n)
    return slice(1 << int(np.floor(np.log2(n - 1))), n)


@dataclass(frozen=True)
class NormEstimate:
    f_energy: float
    g_energy: float
    rows: np.ndarray
    tail_ratio: float

    @property
    def norm_sq(self) -> float:
        return self.f_energy + self.g_energy

    @property
    def trusted(self) -> bool:
        return self.tail_ratio <= TRUST_TAIL_RATIO


def coefficient_norm(phi: TaylorSeries, f: TaylorSeries, rows: int | None = None,
                     polynomial: bool = True) -> NormEstimate:
    """Squared norm of ``f`` from the coefficient formula.

    ``rows`` defaults to ``deg f + 1`` (every nonzero row) for polynomial
    data, and to half the truncation for truncated series, whose deep rows
    are starved of coefficients.
    """
    f = as_series(f)
    if rows is None:
        rows = f.degree + 1 if polynomial else max(1, (f.degree + 1) // 2)
    r = coanalytic_apply(phi, f, rows).coeffs
    e = np.abs(r) ** 2
    g_energy = float(e.sum())
    tail = float(e[_last_block(rows)].sum())
    f_energy = h2_norm(f) ** 2
    # rows at roundoff level relative to f say nothing about the tail
    ratio = tail / g_energy if g_energy > ROUNDOFF_ROWS * f_energy else 0.0
    return NormEstimate(f_energy, g_energy, r, ratio)


# ---------------------------------------------------------------------------
# partial sums of a single row
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PartialSumTrace:
    """Partial sums ``S_J`` of one inner series and their dyadic amplitudes.

    ``block_amplitudes[B]`` is ``max - min`` of ``S_J`` over ``J`` in
    ``[2^B, 2^(B+1))``, complete blocks only.
    """

    checkpoints: np.ndarray
    values: np.ndarray
    block_amplitudes: np.ndarray
    roundoff_scale: float
    tail_oscillation: float
    verdict: str
    limit: complex | None = None
    growth_exponent: float | None = field(default=None)

    def as_rows(self):
        return list(zip(self.checkpoints.tolist(), self.values.tolist()))


def _default_checkpoints(J_max: int) -> np.ndarray:
    pts = [0]
    k = 1
    while k < J_max:
        pts.append(k)
        k *= 2
    pts.append(J_max)
    return np.unique(pts)


def trace_verdict(amps: np.ndarray, roundoff: float, oscillation: float,
                  final: complex) -> str:
    """Verdict from block amplitudes, shared by the series and certificate code."""
    if amps.size >= 4:
        last = amps[-4:]
        growing = np.all(last[1:] >= DIVERGENCE_RATIO * last[:-1])
        if growing and last[-1] > ROUNDOFF_FACTOR * roundoff:
            return DIVERGENT
    if oscillation <= max(CONVERGED_TOL, CONVERGED_TOL * abs(final)):
        return CONVERGED
    return INCONCLUSIVE


def series_rows_trace(phi: TaylorSeries, f: TaylorSeries, m: int = 0,
                      checkpoints=None) -> PartialSumTrace:
    """Partial sums of ``sum_n conj(phi^(n)) f^(m+n)``.

    Both series count as zero past their stored coefficients, so the sums run
    over the longer of the two ranges.

    Divergent when each of the last three block amplitudes grows by at least
    ``2**(1/8)`` and the last one clears 100x the roundoff scale; converged
    when the partial sums move by at most ``max(1e-9, 1e-9 |S|)`` over the
    last two blocks.
    """
    if m < 0:
        raise ValueError("m must be non-negative")
    phi, f = as_series(phi), as_series(f)
    # both inputs are zero beyond their stored coefficients
    n_terms = max(1, phi.coeffs.size, f.coeffs.size - m)
    terms = np.conj(phi.padded(n_terms - 1)) * np.pad(f.coeffs[m:], (0, n_terms))[:n_terms]
    S = np.cumsum(terms)
    J_max = S.size - 1

    amps = []
    B = 0
    while (1 << (B + 1)) - 1 <= J_max:
        block = S[1 << B: 1 << (B + 1)]
        amps.append(float(np.max(block.real) - np.min(block.real)
                          + np.max(block.imag) - np.min(block.imag)) if block.size else 0.0)
        B += 1
    amps = np.array(amps)
    roundoff = float(np.finfo(float).eps * np.sum(np.abs(terms)))
    lo = 1 << max(B - 2, 0) if B else 0
    window = S[lo:]
    osc = float(np.max(np.abs(window - window[-1])))
    verdict = trace_verdict(amps, roundoff, osc, S[-1])

    growth = None
    if amps.size >= 4 and np.all(amps[-4:] > 0):
        growth = float(np.polyfit(np.arange(4), np.log2(amps[-4:]), 1)[0])

    if checkpoints is None:
        cp = _default_checkpoints(J_max)
    else:
        cp = np.asarray(checkpoints, dtype=int)
        if cp.size == 0 or np.any(np.diff(cp) <= 0):
            raise ValueError("checkpoints must be nonempty and strictly increasing")
        cp = cp[(cp >= 0) & (cp <= J_max)]
    limit = complex(S[-1]) if verdict == CONVERGED else None
    return PartialSumTrace(cp, S[cp], amps, roundoff, osc, verdict, limit, growth)


# ---------------------------------------------------------------------------
# weighted sums
# ---------------------------------------------------------------------------

def weighted_tail(f: TaylorSeries, p: float) -> float:
    """``sum_{m>=1} m^(2/p - 1) |f^(m)|^2``."""
    if not 0 < p <= 2:
        raise ValueError("p must lie in (0, 2]")
    c = as_series(f).coeffs
    m = np.arange(1, c.size)
    return float(np.sum(m ** (2.0 / p - 1.0) * np.abs(c[1:]) ** 2))


def sobolev_norm(u: TaylorSeries, s: float) -> float:
    c = as_series(u).coeffs
    n = np.arange(c.size)
    return float(np.sqrt(np.sum((1.0 + n * n) ** s * np.abs(c) ** 2)))


def convolution_bound_check(u: TaylorSeries, v: TaylorSeries, s: float, m: int):
    """``(sum_n |u^(n)| |v^(m+n)|, (1+m^2)^(s/2) ||u||_s ||v||_-s)``.

    The right side with constant 1 is what the check compares against.  It
    is not a bound for every input: ``u = z``, ``v = z^2``, ``m = 1``,
    ``s = 1`` gives ``1 > 2 / sqrt(5)``.  The guaranteed form carries an
    extra ``2^(s/2)`` (Peetre's inequality).
    """
    if s < 0 or m < 0:
        raise ValueError("need s >= 0 and m >= 0")
    a = np.abs(as_series(u).coeffs)
    b = np.abs(as_series(v).coeffs)
    k = max(0, min(a.size, b.size - m))
    lhs = float(np.dot(a[:k], b[m: m + k]))
    rhs = (1.0 + m * m) ** (s / 2) * sobolev_norm(u, s) * sobolev_norm(v, -s)
    return lhs, float(rhs)


# ---------------------------------------------------------------------------
# clamped-outer sweep and Abel traces
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SweepResult:
    epsilons: np.ndarray
    G: np.ndarray
    f_energy: float
    verdict: str

    @property
    def limit(self):
        return float(self.G[-1]) if self.verdict == CONVERGED else None

    @property
    def norm_sq(self):
        lim = self.limit
        return None if lim is None else self.f_energy + lim


def sweep_verdict(G: np.ndarray) -> str:
    if G.size >= 3:
        tail = G[-3:]
        if np.max(tail) - np.min(tail) <= SWEEP_TOL * abs(tail[-1]):
            return CONVERGED
    if G.size >= 4 and np.all(G[-3:] >= SWEEP_GROWTH * G[-4:-1]):
        return DIVERGENT
    return INCONCLUSIVE


def clamped_outer(a: TaylorSeries, eps: float, N: int, M: int):
    """``(a_eps, 1 / a_eps)`` to degree ``N``, where ``|a_eps| = max(|a|, eps)``.

    Both come from the same grid values of ``exp(h)``, so the inverse is
    exact on the grid and bounded by ``1 / eps``.
    """
    mod = np.abs(to_grid(a, M).samples)
    h = _analytic_log(np.log(np.maximum(mod, eps)))
    return from_grid(GridFunction(np.exp(h)), N), from_grid(GridFunction(np.exp(-h)), N)


def limit_norm_sweep(pair: PythagoreanPair, f: TaylorSeries, epsilons=None,
                     N: int | None = None, M: int | None = None) -> SweepResult:
    """``G(eps) = ||T_{conj phi_eps} f||^2`` with ``phi_eps = b / a_eps``.

    ``a_eps`` is the outer function with modulus ``max(|a|, eps)``; since it
    stays away from zero, ``1 / a_eps`` is taken directly on the grid.
    """
    f = as_series(f)
    eps = np.asarray(DEFAULT_EPSILONS if epsilons is None else epsilons, dtype=float)
    if eps.size == 0 or np.any(eps <= 0) or np.any(eps >= 1) or np.any(np.diff(eps) >= 0):
        raise ValueError("epsilons must be strictly decreasing in (0, 1)")
    N = max(pair.N, f.degree) if N is None else int(N)
    if N < f.degree:
        raise ValueError("N must be at least deg f")
    if M is None:
        M = max(pair.grid_size, 1 << int(np.ceil(np.log2(2 * (N + 1)))))
    b = pair.b.truncate(N)
    G = []
    for e in eps:
        _, inv = clamped_outer(pair.a, e, N, M)
        phi_e = cauchy_product(b, inv, N)
        r = coanalytic_apply(phi_e, f, N).coeffs
        G.append(float(np.vdot(r, r).real))
    G = np.array(G)
    return SweepResult(eps, G, h2_norm(f) ** 2, sweep_verdict(G))


def abel_trace(phi: TaylorSeries, f: TaylorSeries, radii) -> np.ndarray:
    """``sum_n conj(phi^(n)) f^(n) r^n`` for each ``r``."""
    phi, f = as_series(phi), as_series(f)
    r = np.atleast_1d(np.asarray(radii, dtype=float))
    if np.any(r <= 0) or np.any(r >= 1):
        raise ValueError("radii must lie in (0, 1)")
    k = min(phi.coeffs.size, f.coeffs.size)
    terms = np.conj(phi.coeffs[:k]) * f.coeffs[:k]
    n = np.arange(k)
    return np.array([np.sum(terms * rr ** n) for rr in r])
