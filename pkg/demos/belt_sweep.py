"""
Fidelity across belts
=====================

Sweep the belt edges and the copy count, realize the optimal gate for each,
and compare the closed-form average with direct quadrature of the simulated
fidelity.
"""

# %%
import math

import numpy as np

from beltnot import (BeltRegion, analytic_optimum, avg_fidelity_closed, avg_fidelity_quadrature,
                     realize_optimal)

# %%
# Belts centred on the equator, growing from a circle to the full sphere.
print(" width    M=1      M=2      M=3      M=4")
for half in np.linspace(0, math.pi / 2, 7):
    region = BeltRegion(math.pi / 2 - half, math.pi / 2 + half)
    row = [analytic_optimum(region, m).f_bar for m in range(1, 5)]
    print(f"{2 * half:6.3f}  " + "  ".join(f"{f:.5f}" for f in row))

# %%
# Polar caps behave differently: up to about a hemisphere the optimum is
# the same for every M, and the M-dependence only appears for wider caps.
for t2 in (0.5, 1.0, 1.5, 2.0, 2.5):
    region = BeltRegion(0.0, t2)
    print(t2, [round(analytic_optimum(region, m).f_bar, 6) for m in range(1, 6)])

# %%
# The closed form and the simulation agree to rounding on a coarse grid.
worst = 0.0
grid = np.linspace(0, math.pi, 6)
for i, t1 in enumerate(grid):
    for t2 in grid[i:]:
        region = BeltRegion(float(t1), float(t2))
        for m in range(1, 5):
            gate = realize_optimal(region, m)
            worst = max(worst, abs(avg_fidelity_closed(gate, region) - avg_fidelity_quadrature(gate, region)))
print("largest closed/quadrature gap:", worst)
