"""Numerical experiments with the coefficient formula for de Branges-Rovnyak norms."""

from .exceptions import *  # noqa: F401,F403
from .series import (
    GridFunction,
    TaylorSeries,
    cauchy_product,
    dilate,
    evaluate,
    from_grid,
    h2_norm,
    to_grid,
)
from .hardy import (
    BlaschkeSpec,
    PythagoreanPair,
    blaschke_eval,
    blaschke_inf_check,
    blaschke_series,
    kernel_series,
    make_pair,
    outer_from_modulus,
    pair_from_smirnov,
    pythagorean_mate,
)
from .toeplitz import MembershipResult, coanalytic_apply, kernel_search, membership_solve
from .norms import (
    NormEstimate,
    PartialSumTrace,
    abel_trace,
    coefficient_norm,
    convolution_bound_check,
    limit_norm_sweep,
    series_rows_trace,
    sobolev_norm,
    weighted_tail,
)
from .rational import (
    CirclePoles,
    RationalFn,
    circle_poles,
    coefficient_growth_probe,
    fejer_riesz,
    gap_counterexample,
    rational_membership,
    rational_pair,
    series_of_ratio,
)
from .counterexamples import (
    CounterexampleConfig,
    DivergenceCertificate,
    build_counterexample,
    counterexample_pair,
    divergence_certificate,
)

__version__ = "0.1.0"
