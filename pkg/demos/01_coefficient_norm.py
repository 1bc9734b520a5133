"""
Norms from Taylor coefficients
==============================

A symbol phi = b / a gives a norm on polynomials f:

    ||f||^2 = sum |f^(m)|^2 + sum_m | sum_n conj(phi^(n)) f^(m+n) |^2

We compare this formula with an independent route: solve T_{conj b} f = T_{conj a} g
by least squares and read off ||f||^2 + ||g||^2.
"""

import numpy as np

from hblab import RationalFn, TaylorSeries, coefficient_norm, membership_solve, rational_pair

# phi = (1 + z) / (1 - z) has a simple pole at z = 1
phi = RationalFn([1, 1], [1, -1])
print("first coefficients of phi:", phi.series(6).coeffs.real)

# its Pythagorean pair (b, a): |b|^2 + |a|^2 = 1 on the circle
pair = rational_pair(phi, 4096)
print("a(0) =", pair.a[0].real, " unimodularity residual =", pair.unimodularity_residual)

# the monomials have closed-form norms 1 + sum_{n<=k} |phi^(n)|^2
for k in range(5):
    est = coefficient_norm(phi.series(64), TaylorSeries.monomial(k))
    print(f"||z^{k}||^2 = {est.norm_sq:g}")

# random polynomials: the two routes agree to roundoff
rng = np.random.default_rng(0)
for _ in range(5):
    f = TaylorSeries(rng.normal(size=6))
    est = coefficient_norm(phi.series(4096), f)
    sol = membership_solve(pair, f)
    print(f"formula {est.norm_sq:12.6f}   least squares {sol.hb_norm_sq:12.6f}   verdict {sol.verdict}")
