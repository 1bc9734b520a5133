"""
A Blaschke-product counterexample
=================================

phi = B^2 / (1 - z), with B vanishing at t_n = 1 - 4^-n, and f a weighted sum of
kernels at those zeros.  f lies in the space, yet the Abel means of the diagonal
series sum conj(phi^(n)) f^(n) blow up along r = t_n.
"""

import numpy as np

from hblab import CounterexampleConfig, divergence_certificate

cfg = CounterexampleConfig(n_zeros=7, N=1 << 20)
print("zeros:", np.round(cfg.t(cfg.indices), 6))
print("weights:", np.round(cfg.c(cfg.indices), 4))

cert = divergence_certificate(cfg)
print(f"\n{'n':>2} {'S(t_n)':>12} {'lower bound':>12} {'slack':>10}")
for row in cert.rows:
    print(f"{row.n:2d} {row.abel_value.real:12.4f} {row.lower_bound:12.4f} {row.slack:10.2e}")
print("inf |B(t_n^2)| =", round(cert.rows[0].blaschke_inf, 4))
print("growth ratios:", np.round(cert.growth_ratios, 3))
print("lower bounds hold:", cert.lower_bounds_hold, " diverging:", cert.verdict)

# the variant with phi0 = -log(1 - z) behaves the same way
cert2 = divergence_certificate(CounterexampleConfig.corollary_6_2(N=1 << 20))
print("\nlog variant growth ratios:", np.round(cert2.growth_ratios, 3), " diverging:", cert2.verdict)
