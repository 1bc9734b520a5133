"""
Norms as a limit over clamped outer functions
=============================================

Replace a by the outer function a_eps with |a_eps| = max(|a|, eps).  Then
phi_eps = b / a_eps is bounded and G(eps) = ||T_{conj phi_eps} f||^2 is finite.
As eps -> 0, G(eps) settles for members and blows up otherwise.
"""

import numpy as np

from hblab import RationalFn, TaylorSeries, limit_norm_sweep, membership_solve, rational_pair

pair = rational_pair(RationalFn([1, 1], [1, -1]), 4096)

f = TaylorSeries([1.0, 2.0, -1.0])
eps = 2.0 ** -np.arange(1, 17)
sweep = limit_norm_sweep(pair, f, eps, M=1 << 20)
for e, g in zip(eps[::3], sweep.G[::3]):
    print(f"eps = {e:.2e}   G = {g:.6f}")
print("verdict:", sweep.verdict, " limit norm^2:", sweep.norm_sq)
print("least squares:", membership_solve(pair, f).hb_norm_sq)

# f^(m) = 1/m is in H^2 but not in the space: G keeps growing
N = 1 << 16
c = np.r_[0.0, 1.0 / np.arange(1, N + 1)]
sweep = limit_norm_sweep(rational_pair(RationalFn([1, 1], [1, -1]), 2 * N), TaylorSeries(c),
                         4.0 ** -np.arange(1, 8), N=2 * N)
print("\n1/m:", np.round(sweep.G, 1), sweep.verdict)
