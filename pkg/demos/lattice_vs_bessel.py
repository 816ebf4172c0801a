"""Truncated-lattice evolution against the classical closed form.

A one-dimensional internal space turns the walk into a classical birth-death
process: for a = c = 1 the return probability is p_00(t) = e^{-2t} I_0(2t),
and for general scalar rates the mean position grows as (|a|^2 - |c|^2) t.
"""

import numpy as np
from scipy.special import ive

from ctoqw import build_block_generator, choose_radius, evolve, transition_probability
from ctoqw.coins import scalar_coin

coin = scalar_coin(1.0, 1.0)
radius = choose_radius(coin, 0, 5.0)
gen = build_block_generator(coin, radius)
one = np.array([[1.0 + 0j]])

print(f"symmetric scalar walk, truncation radius {radius}")
print(f"{'t':>5} {'p00 lattice':>14} {'e^-2t I0(2t)':>14} {'error':>10}")
worst = 0.0
for t in np.linspace(0.0, 5.0, 11):
    p = transition_probability(gen, one, 0, 0, float(t))
    exact = float(ive(0, 2.0 * t))
    worst = max(worst, abs(p - exact))
    print(f"{t:5.1f} {p:14.9f} {exact:14.9f} {abs(p - exact):10.2e}")
print(f"max error {worst:.2e}\n")

# biased rates: the occupation profile drifts at |a|^2 - |c|^2 = 3 sites per
# unit time while spreading diffusively
coin = scalar_coin(2.0, 1.0)
radius = choose_radius(coin, 0, 4.0)
gen = build_block_generator(coin, radius)
print(f"biased scalar walk (a=2, c=1), truncation radius {radius}")
print(f"{'t':>5} {'mean':>10} {'3t':>8} {'std':>8}")
for t in (1.0, 2.0, 4.0):
    state = evolve(gen, one, 0, t)
    probs = state.trace_profile()
    mean = float(probs @ state.sites)
    var = float(probs @ (state.sites - mean) ** 2)
    print(f"{t:5.1f} {mean:10.5f} {3.0 * t:8.1f} {np.sqrt(var):8.4f}")
