import itertools
import math

import numpy as np
import pytest
from hypothesis import strategies as st

from beltnot.belt import BeltRegion
from beltnot.gate import GateSpec


def brute_reduced(vector, m, which, total_qubits):
    """Partial trace of a computational-basis vector onto copy qubit ``which`` (1-based)."""
    psi = np.asarray(vector).reshape((2,) * total_qubits)
    # axis 0 of the reshaped array is the most significant qubit
    axis = total_qubits - which
    psi = np.moveaxis(psi, axis, 0).reshape(2, -1)
    return psi @ psi.conj().T


def random_valid_gate(rng, m, anc_dim):
    """Gate whose two branch outputs are random orthonormal vectors."""
    dim = (m + 1) * anc_dim
    raw = rng.normal(size=(dim, 2)) + 1j * rng.normal(size=(dim, 2))
    q, _ = np.linalg.qr(raw)
    first = q[:, 0].reshape(m + 1, anc_dim)
    second = q[:, 1].reshape(m + 1, anc_dim)  # row k multiplies the Dicke state with k ones
    vectors = np.concatenate([first, second[::-1]])
    return GateSpec(m, vectors)


def universal_m1():
    return GateSpec(1, np.array([[-1, 0], [0, 0], [1, 0], [0, 0]], dtype=complex))


@st.composite
def belts(draw, allow_degenerate=True):
    a = draw(st.floats(0.0, math.pi, allow_nan=False))
    b = draw(st.floats(0.0, math.pi, allow_nan=False))
    t1, t2 = min(a, b), max(a, b)
    if not allow_degenerate and t1 == t2:
        t2 = min(math.pi, t1 + 0.1)
        t1 = t2 - 0.1
    return BeltRegion(t1, t2)


def belt_grid(count):
    """All ordered pairs from ``linspace(0, pi, count)``."""
    grid = np.linspace(0.0, math.pi, count)
    return [BeltRegion(float(a), float(b)) for a, b in itertools.combinations_with_replacement(grid, 2)]


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
