"""
Emitting the output one qubit at a time
=======================================

The output of the gate on a basis input can be produced by a small source
that interacts once with each qubit in turn. The per-step maps form a
matrix product state whose bond dimension never exceeds the Schmidt rank.
"""

# %%
import math

import numpy as np

from beltnot import (BeltRegion, ExemplarState, exemplar_chain, exemplar_lambdas, expand_to_qubits,
                     generic_chain, realize_optimal, verify_chain)
from beltnot.gate import branch_state

# %%
# Closed-form Schmidt coefficients of the exemplar state, cut by cut.
state = ExemplarState(5, 0.4)
for n in range(1, 6):
    lam = exemplar_lambdas(state, n)
    print(n, np.round(lam, 6), "sum of squares", round(float(np.sum(lam ** 2)), 15))

# %%
# The chain built from those coefficients reproduces the state exactly.
chain = exemplar_chain(state)
cert = verify_chain(chain, expand_to_qubits(state.joint_state()))
print("bond dims", chain.bond_dims, "passed", cert.passed, "overlap", cert.overlap)

# %%
# Any gate output can be chained by successive SVDs instead.
gate = realize_optimal(BeltRegion(0.0, math.pi), 5)
vec = expand_to_qubits(branch_state(gate, 0))
chain = generic_chain(vec, 6)
print("bond dims", chain.bond_dims, "passed", verify_chain(chain, vec).passed)
