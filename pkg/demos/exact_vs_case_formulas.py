"""
Exact optimum and the four closed-form families
===============================================

The averaged fidelity is a concave function of the Gram diagonals on two
simplices. The four single-parameter families are convenient, but on many
belts a different coupled pair, or a mixture of two pairs, does better. The
exact solver certifies its answer with a dual bound; the grid oracle checks
it independently.
"""

# %%
import math

from beltnot import BeltRegion, analytic_optimum, oracle_optimum, realize_optimal, validate

# %%
# The full sphere at even M: the family value sits below 2/3.
for m in (2, 4, 6):
    rep = analytic_optimum(BeltRegion(0, math.pi), m)
    print(f"M={m}  exact={rep.f_bar:.6f}  family={rep.case_formula.f_bar:.6f}")

# %%
# A belt where the optimum mixes two pairs; the gate needs a third ancilla level.
region = BeltRegion(0.6011, 2.5207)
rep = analytic_optimum(region, 2)
print("pairs", rep.pairs, "f_bar", rep.f_bar, "family", rep.case_formula.f_bar)
print("dual bound gap", rep.duality_gap)
gate = realize_optimal(region, 2)
print("ancilla levels", gate.anc_dim, "valid", validate(gate).valid)

# %%
# The grid oracle knows nothing about pairs or duals, yet lands on the same value.
orc = oracle_optimum(region, 2, resolution=0.01)
print("oracle", orc.best_f, "difference", orc.best_f - rep.f_bar)

# %%
# A northern belt with odd M: same story.
region = BeltRegion(0.0, math.pi / 2)
rep = analytic_optimum(region, 3)
print(rep.f_bar, rep.case_formula.f_bar, oracle_optimum(region, 3, 0.02).best_f)
