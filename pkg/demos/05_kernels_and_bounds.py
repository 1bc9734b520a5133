"""
Kernel probes and a weighted convolution bound
==============================================

Does T_{conj phi} have a kernel?  The smallest singular value of a finite section
is a cheap probe.  For phi = 1 + 2z the kernel holds f^(m) = (-1/2)^m, and for
phi = z it holds the constants; 1 + z has neither.  We also look at the bound

    sum_n |u^(n)| |v^(m+n)| <= (1 + m^2)^(s/2) ||u||_s ||v||_-s

which holds for typical inputs but needs an extra 2^(s/2) in general.
"""

import numpy as np

from hblab import TaylorSeries, convolution_bound_check, kernel_search

for phi in ([1.0, 1.0], [1.0, 2.0], [0.0, 1.0]):
    sigma, v = kernel_search(TaylorSeries(phi), 24, 40)
    print(f"phi = {phi}: sigma_min = {sigma:.3e}")

rng = np.random.default_rng(1)
worst = 0.0
for _ in range(500):
    u = TaylorSeries(rng.normal(size=65))
    v = TaylorSeries(rng.normal(size=65))
    lhs, rhs = convolution_bound_check(u, v, 1.5, int(rng.integers(0, 65)))
    worst = max(worst, lhs / rhs)
print("\nlargest lhs / rhs over random inputs:", round(worst, 4))

lhs, rhs = convolution_bound_check(TaylorSeries([0, 1]), TaylorSeries([0, 0, 1]), 1.0, 1)
print("u = z, v = z^2, m = 1, s = 1:", lhs, ">", round(rhs, 4), " but <=", round(2 ** 0.5 * rhs, 4))
