"""Stationary internal states and net velocity for the three-level coin family.

The coin three_level_coin(c) interpolates between a walk with a dark level
(c=0) and a fully symmetric one (c=1). The stationary state of the internal
Lindblad generator determines the asymptotic velocity m.
"""

import numpy as np

from ctoqw import drift, solve_drift_operator, stationary_states
from ctoqw.coins import three_level_coin

np.set_printoptions(precision=6, suppress=True, linewidth=100)

for c in (0.0, 0.5, 1.0):
    coin = three_level_coin(c)
    sa = stationary_states(coin)
    print(f"c = {c}")
    print(f"  kernel dimension : {sa.kernel_dim}")
    print(f"  unique stationary: {sa.unique_stationary}")
    if not sa.unique_stationary:
        print()
        continue
    m = drift(coin, sa.rho_inv)
    j, residual = solve_drift_operator(coin, m)
    print("  rho_inv:")
    for row in sa.rho_inv:
        print("   ", np.array2string(row, formatter={"complexfloat": "{:.6f}".format}))
    print(f"  drift m          : {m:+.9f}")
    print(f"  operator residual: {residual:.2e}")
    print()

# c=0 has a closed form: rho_inv = (1/53) [[21, -19-2i, 0], [-19+2i, 32, 0], [0,0,0]]
# and m = -6/53. Check we reproduce it to machine precision.
coin = three_level_coin(0.0)
sa = stationary_states(coin)
target = np.array([[21.0, -19.0 - 2.0j, 0.0],
                   [-19.0 + 2.0j, 32.0, 0.0],
                   [0.0, 0.0, 0.0]]) / 53.0
err = np.abs(sa.rho_inv - target).max()
print(f"closed-form check (c=0): max entry error {err:.2e}, "
      f"m error {abs(drift(coin, sa.rho_inv) + 6.0 / 53.0):.2e}")
