"""A symbol ``phi = B^2 phi0 / (1 - z)^(1/2)`` and a function ``f`` built from
kernels at the zeros of ``B`` for which the diagonal series
``sum conj(phi^(n)) f^(n)`` has unbounded Abel means, although ``f`` lies in
the space.  The certificate compares the Abel means at the zeros with a
closed-form lower bound.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field

import numpy as np

from .exceptions import ParameterOutOfRange, ResolutionError
from .hardy import BlaschkeSpec, PythagoreanPair, blaschke_eval, blaschke_inf_check, \
    blaschke_series, kernel_series, make_pair
from .norms import abel_trace
from .series import (
    DEFAULT_N,
    TaylorSeries,
    binomial_half_series,
    cauchy_product,
    neg_log_series,
)

INV_SQRT = "inv_sqrt_one_minus_z"
NEG_LOG = "neg_log_one_minus_z"
GROWTH_RATIO = 1.5
GROWTH_STEPS = 2
KERNEL_TAIL = 0.01


def phi0_series(kind: str, N: int) -> np.ndarray:
    if kind == INV_SQRT:
        return binomial_half_series(N)
    if kind == NEG_LOG:
        return neg_log_series(N)
    raise ValueError(f"unknown phi0 {kind!r}")


def phi0_eval(kind: str, r):
    r = np.asarray(r, dtype=float)
    if kind == INV_SQRT:
        return (1.0 - r) ** -0.5
    if kind == NEG_LOG:
        return -np.log1p(-r)
    raise ValueError(f"unknown phi0 {kind!r}")


@dataclass(frozen=True)
class CounterexampleConfig:
    """Zeros ``t_n = 1 - zero_base^-n`` and weights ``c_n = 2^(c_rate n)``, ``n = 1..n_zeros``."""

    zero_base: float = 4.0
    n_zeros: int = 7
    phi0: str = INV_SQRT
    c_rate: float = -0.25
    n0: int = 1
    N: int = DEFAULT_N

    def __post_init__(self):
        if self.zero_base <= 2:
            raise ParameterOutOfRange("zero_base must exceed 2 so gap ratios stay below 1/2")
        if self.phi0 not in (INV_SQRT, NEG_LOG):
            raise ValueError(f"unknown phi0 {self.phi0!r}")
        if self.n_zeros < 0 or self.n0 < 1:
            raise ParameterOutOfRange("need n_zeros >= 0 and n0 >= 1")

    @classmethod
    def corollary_6_2(cls, **kw) -> "CounterexampleConfig":
        """``phi0 = -log(1 - z)``; weights grow so the products ``c_n phi0`` climb by 1.5x."""
        kw.setdefault("phi0", NEG_LOG)
        kw.setdefault("c_rate", 0.5)
        return cls(**kw)

    @classmethod
    def corollary_6_3(cls, **kw) -> "CounterexampleConfig":
        """``phi = B^2 / (1 - z)``, i.e. the default ``phi0``."""
        kw.setdefault("phi0", INV_SQRT)
        return cls(**kw)

    @property
    def blaschke(self) -> BlaschkeSpec:
        return BlaschkeSpec.geometric(self.n_zeros, self.zero_base)

    @property
    def indices(self) -> np.ndarray:
        return np.arange(self.n0, self.n_zeros + 1)

    def t(self, n):
        return 1.0 - self.zero_base ** -np.asarray(n, dtype=float)

    def c(self, n):
        return 2.0 ** (self.c_rate * np.asarray(n, dtype=float))

    def to_dict(self) -> dict:
        return asdict(self)


def _check_resolution(config: CounterexampleConfig):
    if config.n_zeros == 0:
        return
    tail = config.t(config.n_zeros) ** config.N
    if tail > KERNEL_TAIL:
        raise ResolutionError(
            f"t_K^N = {tail:.3g} > {KERNEL_TAIL}; raise N above "
            f"{int(np.ceil(np.log(KERNEL_TAIL) / np.log(config.t(config.n_zeros))))}")


def build_counterexample(config: CounterexampleConfig):
    """``(phi, f)`` truncated at degree ``config.N``."""
    _check_resolution(config)
    N = config.N
    B = blaschke_series(config.blaschke, N)
    B2 = cauchy_product(B, B, N)
    phi = cauchy_product(B2, TaylorSeries(phi0_series(config.phi0, N)), N)
    phi = cauchy_product(phi, TaylorSeries(binomial_half_series(N)), N)
    f = np.zeros(N + 1, dtype=complex)
    for n in config.indices:
        t = config.t(n)
        f += config.c(n) * np.sqrt(1.0 - t * t) * kernel_series(t, N).coeffs
    return phi, TaylorSeries(f)


def counterexample_pair(config: CounterexampleConfig, M: int | None = None) -> PythagoreanPair:
    """Pair ``(B^2 b, a)`` with ``(b, a)`` the rational pair of ``1 / (1 - z)``.

    Its quotient is ``B^2 / (1 - z)``, the default symbol.  ``T_{conj b}``
    annihilates the kernels at the zeros of ``B``, so the ``f`` from
    :func:`build_counterexample` solves the membership system with ``g = 0``.
    """
    from .rational import RationalFn, rational_pair

    _check_resolution(config)
    N = config.N
    base = rational_pair(RationalFn([1.0], [1.0, -1.0]), N, M=M)
    B = blaschke_series(config.blaschke, N)
    b = cauchy_product(cauchy_product(B, B, N), base.b, N)
    return make_pair(b, base.a, base.grid_size, check_outer=False)


@dataclass(frozen=True)
class CertificateRow:
    n: int
    t: float
    abel_value: complex
    lower_bound: float
    slack: float
    closed_form: float
    blaschke_inf: float

    @property
    def holds(self) -> bool:
        return self.abel_value.real >= self.lower_bound - self.slack


@dataclass(frozen=True)
class DivergenceCertificate:
    rows: tuple
    verdict: bool
    growth_ratios: np.ndarray
    criterion: dict = field(default_factory=lambda: {
        "growth_ratio": GROWTH_RATIO, "steps": GROWTH_STEPS})

    @property
    def lower_bounds_hold(self) -> bool:
        return all(r.holds for r in self.rows)

    @property
    def max_imag(self) -> float:
        return max((abs(r.abel_value.imag) for r in self.rows), default=0.0)


def _closed_form_abel(config: CounterexampleConfig, r: float) -> float:
    """``sum_k c_k (1 - t_k^2)^(1/2) phi(r t_k)`` from direct evaluations."""
    total = 0.0
    for k in config.indices:
        tk = config.t(k)
        x = r * tk
        val = blaschke_eval(config.blaschke, x) ** 2 * phi0_eval(config.phi0, x) / np.sqrt(1.0 - x)
        total += config.c(k) * np.sqrt(1.0 - tk * tk) * float(np.real(val))
    return total


def _slack_constant(config: CounterexampleConfig) -> float:
    """``||B^2||_1 * A`` with ``A = max_m |core^(m)| / (1 + log(m + 1))``.

    ``core = phi0 / (1 - z)^(1/2)``; ``A`` is 1 for the default, whose
    coefficients are all 1.
    """
    N = config.N
    B = blaschke_series(config.blaschke, N)
    b2_l1 = float(np.sum(np.abs(cauchy_product(B, B, N).coeffs)))
    core = np.abs(cauchy_product(TaylorSeries(phi0_series(config.phi0, N)),
                                 TaylorSeries(binomial_half_series(N)), N).coeffs)
    return b2_l1 * float(np.max(core / (1.0 + np.log(np.arange(N + 1) + 1.0))))


def truncation_slack(config: CounterexampleConfig, const: float, r: float) -> float:
    """Bound on ``sum_{m > N} |phi^(m)| |f^(m)| r^m``.

    Uses ``|phi^(m)| <= const * (1 + log(m + 1))`` together with the kernel
    bound ``|f^(m)| <= sum_k c_k (1 - t_k^2)^(1/2) t_k^m``.
    """
    N = config.N
    L = 1.0 + np.log(N + 1.0)
    total = 0.0
    for k in config.indices:
        tk = config.t(k)
        x = r * tk
        geo = x ** (N + 1) * (L / (1 - x) + 1.0 / ((N + 1) * (1 - x) ** 2))
        total += config.c(k) * np.sqrt(1.0 - tk * tk) * geo
    return const * total


def divergence_certificate(config: CounterexampleConfig, phi: TaylorSeries | None = None,
                           f: TaylorSeries | None = None) -> DivergenceCertificate:
    """Abel means ``S(t_n)`` of the diagonal series against ``c_n B(t_n^2)^2 phi0(t_n^2)``.

    The verdict asks for ``S`` to grow by at least 1.5x at each of the last
    two steps (the last three retained zeros).
    """
    if phi is None or f is None:
        phi, f = build_counterexample(config)
    spec = config.blaschke
    inf_b = blaschke_inf_check(spec)
    idx = config.indices
    if config.phi0 == NEG_LOG and idx.size:
        if not phi0_eval(NEG_LOG, config.t(idx[0]) ** 2) >= 0:
            raise ParameterOutOfRange("phi0 is negative at the first retained zero")
    ts = config.t(idx)
    S = abel_trace(phi, f, ts) if idx.size else np.zeros(0, dtype=complex)
    const = _slack_constant(config)
    rows = []
    for n, t, s in zip(idx, ts, S):
        t2 = t * t
        lb = config.c(n) * float(np.real(blaschke_eval(spec, t2))) ** 2 * float(phi0_eval(config.phi0, t2))
        rows.append(CertificateRow(int(n), float(t), complex(s), lb,
                                   truncation_slack(config, const, t),
                                   _closed_form_abel(config, t), inf_b))
    vals = np.array([r.abel_value.real for r in rows])
    ratios = vals[1:] / vals[:-1] if vals.size > 1 and np.all(vals[:-1] > 0) else np.zeros(0)
    verdict = bool(ratios.size >= GROWTH_STEPS and np.all(ratios[-GROWTH_STEPS:] >= GROWTH_RATIO))
    return DivergenceCertificate(tuple(rows), verdict, ratios)
