"""Coanalytic Toeplitz operators on coefficient vectors.

``T_{conj psi}`` sends ``f`` to the series whose ``m``-th coefficient is
``sum_n conj(psi^(n)) f^(m+n)``.  On top of that: the finite-section
least-squares solve for ``T_{conj b} f = T_{conj a} g`` and a smallest
singular value probe for the kernel of ``T_{conj phi}``.
"""

from __future__ import annotations

import logging
import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .exceptions import IllConditioned
from .hardy import PythagoreanPair
from .series import TaylorSeries, as_series, convolve, h2_norm

log = logging.getLogger(__name__)

MEMBER_TOL = 1e-6
COND_LIMIT = 1e12
TAIL_FRACTION = 0.1
TAIL_ENERGY = 0.01
GROWTH_FACTOR = 2.0
ROW_BUFFER = 64
RESIDUAL_FLOOR = 1e-8

MEMBER = "member"
NON_MEMBER = "non_member"
INCONCLUSIVE = "inconclusive"


def coanalytic_apply(psi: TaylorSeries, f: TaylorSeries, rows: int) -> TaylorSeries:
    """First ``rows`` coefficients of ``T_{conj psi} f``.

    Sums run over the indices present in both truncations.  Long inputs go
    through an FFT correlation.
    """
    if rows < 1:
        raise ValueError("rows must be at least 1")
    psi, f = as_series(psi), as_series(f)
    x = f.coeffs
    # psi^(n) with n > deg f never meets a coefficient of f
    y = psi.coeffs[: x.size]
    d = y.size - 1
    corr = convolve(x, np.conj(y[::-1]))
    out = np.zeros(rows, dtype=complex)
    # corr[m + d] = sum_n x[m + n] conj(y[n])
    avail = corr[d: d + rows]
    out[: avail.size] = avail
    return TaylorSeries(out)


def coanalytic_matrix(psi: TaylorSeries, rows: int, cols: int) -> np.ndarray:
    """Dense ``rows x cols`` section with entries ``conj(psi^(j - m))``."""
    psi = as_series(psi)
    first_row = np.zeros(cols, dtype=complex)
    k = min(cols, psi.coeffs.size)
    first_row[:k] = np.conj(psi.coeffs[:k])
    first_col = np.zeros(rows, dtype=complex)
    first_col[0] = first_row[0]
    return scipy.linalg.toeplitz(first_col, first_row)


@dataclass(frozen=True)
class MembershipResult:
    g: TaylorSeries
    residual: float
    hb_norm_sq: float
    rows_used: int
    verdict: str
    condition: float = 1.0

    @property
    def f_energy(self) -> float:
        return self.hb_norm_sq - h2_norm(self.g) ** 2


def _tail_ok(g: np.ndarray, f_energy: float) -> bool:
    total = np.vdot(g, g).real
    top = int(TAIL_FRACTION * g.size)
    # a g at roundoff level is zero; its tail shape is noise
    if total <= (RESIDUAL_FLOOR ** 2) * f_energy or top == 0:
        return True
    tail = g[-top:]
    return np.vdot(tail, tail).real <= TAIL_ENERGY * total


def _triangular_condition(R: np.ndarray) -> float:
    """1-norm condition estimate of an upper-triangular matrix (LAPACK ``trcon``)."""
    if np.any(np.diag(R) == 0):
        return np.inf
    trcon = scipy.linalg.get_lapack_funcs("trcon", (R,))
    rcond, info = trcon(R, norm="1", uplo="U", diag="N")
    return np.inf if info != 0 or rcond == 0 else 1.0 / rcond


def _solve_section(pair: PythagoreanPair, f: TaylorSeries, Ng: int, rows: int):
    """Least squares for the ``rows x (Ng + 1)`` section of ``T_{conj a}``.

    The section is upper trapezoidal: its first ``Ng + 1`` rows form an
    upper-triangular Toeplitz block and the remaining rows vanish.  Its
    Householder QR factorisation is therefore ``Q = I``, ``R`` = that block,
    and the least-squares residual is the part of the right side below it.
    """
    rhs = coanalytic_apply(pair.b, f, rows).coeffs
    R = coanalytic_matrix(pair.a, Ng + 1, Ng + 1)
    cond = float(_triangular_condition(R))
    if not np.isfinite(cond):
        return np.zeros(Ng + 1, dtype=complex), 1.0, cond
    g = scipy.linalg.solve_triangular(R, rhs[: Ng + 1])
    # a right side at roundoff level relative to f carries no information
    scale = max(float(np.linalg.norm(rhs)), RESIDUAL_FLOOR * h2_norm(f), 1e-300)
    top = R @ g - rhs[: Ng + 1]
    residual = float(np.sqrt(np.vdot(top, top).real + np.vdot(rhs[Ng + 1:], rhs[Ng + 1:]).real)) / scale
    return g, residual, cond


def membership_solve(pair: PythagoreanPair, f: TaylorSeries, Ng: int | None = None,
                     rows: int | None = None, member_tol: float = MEMBER_TOL,
                     refine: bool = True, strict: bool = False) -> MembershipResult:
    """Least-squares solve of ``T_{conj b} f = T_{conj a} g`` over ``deg g <= Ng``.

    ``Ng`` defaults to ``deg f`` and ``rows`` to ``Ng + deg f + 64``.  The
    verdict is ``member`` when the residual is below ``member_tol`` and the
    top tenth of ``g`` carries at most 1% of its energy; ``non_member`` when
    the norm estimate at least doubles on re-solving with ``2 Ng``;
    ``inconclusive`` otherwise.

    A section whose condition number exceeds 1e12 gives an ``inconclusive``
    verdict with a warning, or :class:`IllConditioned` when ``strict``.
    """
    f = as_series(f)
    d = f.degree
    Ng = d if Ng is None else int(Ng)
    rows = Ng + d + ROW_BUFFER if rows is None else int(rows)
    if rows < Ng + 1:
        raise ValueError(f"rows={rows} must be at least Ng + 1 = {Ng + 1}")
    f_energy = h2_norm(f) ** 2
    if f_energy == 0:
        return MembershipResult(TaylorSeries.zeros(Ng), 0.0, 0.0, rows, MEMBER)

    g, residual, cond = _solve_section(pair, f, Ng, rows)
    hb = f_energy + float(np.vdot(g, g).real)
    if cond > COND_LIMIT:
        msg = f"finite section condition number {cond:.3g} exceeds {COND_LIMIT:g}"
        if strict:
            raise IllConditioned(msg)
        warnings.warn(msg, RuntimeWarning, stacklevel=2)
        return MembershipResult(TaylorSeries(g), residual, hb, rows, INCONCLUSIVE, cond)

    if residual <= member_tol and _tail_ok(g, f_energy):
        verdict = MEMBER
    else:
        verdict = INCONCLUSIVE
        if refine:
            g2, _, cond2 = _solve_section(pair, f, 2 * Ng + 1, rows + Ng + 1)
            hb2 = f_energy + float(np.vdot(g2, g2).real)
            log.debug("refined norm estimate %.6g -> %.6g", hb, hb2)
            if cond2 <= COND_LIMIT and hb2 >= GROWTH_FACTOR * hb:
                verdict = NON_MEMBER
    return MembershipResult(TaylorSeries(g), residual, hb, rows, verdict, cond)


def kernel_search(phi: TaylorSeries, Nf: int, rows: int | None = None):
    """Smallest singular value of the ``rows x (Nf + 1)`` section of ``T_{conj phi}``.

    Returns ``(sigma_min, f)`` with ``f`` a unit minimising vector whose
    largest entry is real-positive.  A small ``sigma_min`` is evidence of a
    nontrivial kernel, not a proof.
    """
    rows = Nf + 1 if rows is None else int(rows)
    if rows < Nf + 1:
        raise ValueError("rows must be at least Nf + 1")
    A = coanalytic_matrix(phi, rows, Nf + 1)
    R = scipy.linalg.qr(A, mode="r")[0][: Nf + 1]
    _, s, vh = np.linalg.svd(R)
    v = vh[-1].conj()
    k = int(np.argmax(np.abs(v)))
    v = v * np.exp(-1j * np.angle(v[k]))
    return float(s[-1]), TaylorSeries(v)
