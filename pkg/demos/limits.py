"""
Limiting belts
==============

Two belts have textbook answers: the whole sphere, where the best
orthogonalizer reaches 2/3 for any number of copies, and the equator, where
the answer depends on the parity of M and reaches 1 for a single copy.
"""

# %%
# Setup
import math

import numpy as np

from beltnot import BeltRegion, InputState, analytic_optimum, fidelity_sim, realize_optimal

sphere = BeltRegion(0.0, math.pi)
equator = BeltRegion(math.pi / 2, math.pi / 2)

# %%
# Whole sphere: the optimum is flat in M.
for m in range(1, 9):
    rep = analytic_optimum(sphere, m)
    print(f"M={m}  F={rep.f_bar:.15f}  pairs={rep.pairs}")

# %%
# Equator: odd and even M follow different closed forms.
def equatorial(m):
    if m % 2:
        return 0.5 + (m + 1) / (4 * m)
    return 0.5 + math.sqrt(m * (m + 2)) / (4 * m)


for m in range(1, 9):
    f = analytic_optimum(equator, m).f_bar
    print(f"M={m}  F={f:.12f}  expected={equatorial(m):.12f}")

# %%
# A single equatorial copy is flipped perfectly, whatever the azimuth.
gate = realize_optimal(equator, 1)
print(gate.vectors.real)
worst = max(abs(fidelity_sim(gate, InputState(math.pi / 2, phi)) - 1)
            for phi in np.linspace(0, 2 * math.pi, 32, endpoint=False))
print("max deviation from 1:", worst)
