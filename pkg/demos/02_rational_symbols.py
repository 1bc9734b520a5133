"""
Rational symbols: simple versus double poles
============================================

For phi = p / q the pair is (p / r, q / r), where |r|^2 = |p|^2 + |q|^2 on the circle.
When q has only simple zeros on the circle every inner series converges.
A double pole breaks this: a function can belong to the space while the
inner series for m = 0 diverges.
"""

import numpy as np

from hblab import (
    CirclePoles,
    RationalFn,
    TaylorSeries,
    fejer_riesz,
    gap_counterexample,
    rational_membership,
    series_of_ratio,
    series_rows_trace,
)

# p = 1, q = 1 - z: |r|^2 = 3 - 2 cos t, and r comes out with golden-ratio coefficients
fr = fejer_riesz([1.0], [1.0, -1.0])
print("r =", fr.r.real, " golden ratio:", (1 + 5 ** 0.5) / 2)

# simple pole: partial sums of each row settle
phi = RationalFn([1, 1], [1, -1]).series(4096)
f = TaylorSeries([1.0, -0.5, 0.25, 2.0])
for m in range(4):
    tr = series_rows_trace(phi, f, m)
    print(f"row {m}: {tr.verdict}, sum = {tr.values[-1].real:g}")

# double pole at 1: a lacunary f with gaps, divided by (1 - z)^2, stays square summable
N = 1 << 18
poles = CirclePoles(((1, 2),))
f = gap_counterexample(poles, K=3, alpha=0.75, N=N)
dec = rational_membership(f, poles)
print("\nremainder g after dividing out the poles:", dec.tail_verdict)

# but the m = 0 row grows without bound
phi2 = TaylorSeries(series_of_ratio([1.0], [1.0, -2.0, 1.0], N))
tr = series_rows_trace(phi2, f, 0)
print("m = 0 row:", tr.verdict, " block amplitudes grow like 2^(B * %.3f)" % tr.growth_exponent)
print("last block amplitudes:", np.round(tr.block_amplitudes[-5:], 2))
