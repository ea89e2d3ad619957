"""Sequential-generation (matrix product) form of the gate outputs.

A chain over ``N`` sites stores, for every site ``n``, two matrices
``V[n][i]`` of shape ``(bond_out, bond_in)``. The represented state is

    psi(i_1 .. i_N) = <phi_F| V[N][i_N] ... V[1][i_1] |phi_I>

with site 1 the least significant bit of the computational index. Each site
is an isometry: ``sum_i V[i]^dagger V[i] = 1`` on its input bond, so the
chain can be emitted one qubit at a time by a ``D``-level source.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .symmetric import JointState

ISOMETRY_TOL = 1e-12
OVERLAP_TOL = 1e-10
SVD_CUTOFF = 1e-12


@dataclass(frozen=True)
class ExemplarState:
    """``-sqrt(g)|D^M_{(M-1)/2}>|0> + sqrt(1-g)|1..1>|1>`` for odd ``m``."""

    m: int
    gamma: float

    def __post_init__(self):
        if self.m < 1 or self.m % 2 == 0:
            raise ValueError(f"exemplar needs odd m >= 1, got {self.m}")
        if not 0.0 <= self.gamma <= 1.0:
            raise ValueError(f"gamma must lie in [0, 1], got {self.gamma!r}")

    @property
    def weight(self) -> int:
        return (self.m - 1) // 2

    def joint_state(self) -> JointState:
        amps = np.zeros((self.m + 1, 2), dtype=complex)
        amps[self.weight, 0] = -math.sqrt(self.gamma)
        amps[self.m, 1] = math.sqrt(1.0 - self.gamma)
        return JointState(self.m, 2, amps)


@dataclass(frozen=True, eq=False)
class SchmidtData:
    """Schmidt coefficients per cut and the Gamma tensors per site.

    ``lambdas[n - 1]`` lists the coefficients across the cut after site ``n``
    (only the kept, nonzero ones, in bond order). ``gammas[n - 1][i]`` has
    shape ``(bond_in, bond_out)``.
    """

    lambdas: list
    gammas: list
    labels: list = field(default_factory=list)


@dataclass(frozen=True, eq=False)
class MpsChain:
    tensors: list  # per site: (V0, V1), each (bond_out, bond_in)
    boundary_in: np.ndarray
    boundary_out: np.ndarray
    schmidt: Optional[SchmidtData] = None

    def __post_init__(self):
        tensors = []
        for n, pair in enumerate(self.tensors, start=1):
            if len(pair) != 2:
                raise ValueError(f"site {n} must carry exactly two matrices")
            v0 = np.atleast_2d(np.array(pair[0], dtype=complex))
            v1 = np.atleast_2d(np.array(pair[1], dtype=complex))
            if v0.shape != v1.shape:
                raise ValueError(f"site {n}: V0 shape {v0.shape} != V1 shape {v1.shape}")
            tensors.append((v0, v1))
        if not tensors:
            raise ValueError("chain needs at least one site")
        b_in = np.array(self.boundary_in, dtype=complex).ravel()
        b_out = np.array(self.boundary_out, dtype=complex).ravel()
        if b_in.size != tensors[0][0].shape[1]:
            raise ValueError("boundary_in does not match the first site's input bond")
        if b_out.size != tensors[-1][0].shape[0]:
            raise ValueError("boundary_out does not match the last site's output bond")
        for n in range(1, len(tensors)):
            if tensors[n][0].shape[1] != tensors[n - 1][0].shape[0]:
                raise ValueError(f"bond mismatch between sites {n} and {n + 1}")
        object.__setattr__(self, "tensors", tensors)
        object.__setattr__(self, "boundary_in", b_in)
        object.__setattr__(self, "boundary_out", b_out)

    @property
    def site_count(self) -> int:
        return len(self.tensors)

    @property
    def bond_dims(self) -> list:
        return [self.tensors[0][0].shape[1]] + [v0.shape[0] for v0, _ in self.tensors]


def _v_from_b(b: np.ndarray) -> tuple:
    # b[bond_in, i, bond_out] -> V^i[bond_out, bond_in]
    return b[:, 0, :].T.copy(), b[:, 1, :].T.copy()


# -- closed-form exemplar chain ---------------------------------------------

def exemplar_lambdas(state: ExemplarState, n: int) -> np.ndarray:
    """Schmidt coefficients ``lambda_{l+1}`` (``l = 0 .. n``) after the first ``n`` qubits.

    Index ``l`` labels the Dicke state of the first ``n`` qubits with ``l``
    ones; absent branches are exactly 0.
    """
    m, g, w = state.m, state.gamma, state.weight
    if not 1 <= n <= m:
        raise ValueError(f"cut position must be in 1..{m}, got {n}")
    total = math.comb(m, w)
    lam = np.zeros(n + 1)
    for l in range(max(0, n - (m + 1) // 2), min(n - 1, w) + 1):
        lam[l] = math.sqrt(g * math.comb(n, l) * math.comb(m - n, w - l) / total)
    if n <= w:
        lam[n] = math.sqrt(1.0 - g + g * math.comb(m - n, w - n) / total)
    else:
        lam[n] = math.sqrt(1.0 - g)
    return lam


def exemplar_chain(state: ExemplarState) -> MpsChain:
    """Chain for the exemplar state built from its Schmidt data, no SVD.

    Bond ``l`` at cut ``n`` is the Dicke state of the first ``n`` qubits with
    ``l`` ones; branches with zero weight are trimmed. Site ``n`` maps
    ``l -> l`` on emitting 0 with weight sqrt(C(n-1,l)/C(n,l)) and
    ``l -> l+1`` on emitting 1 with weight sqrt(C(n-1,l)/C(n,l+1)), each
    divided by the incoming coefficient and multiplied by the outgoing one.
    The ancilla site reads off ``-|0>`` from bond ``(M-1)/2`` and ``|1>``
    from bond ``M``.
    """
    m = state.m
    full = [np.array([1.0])] + [exemplar_lambdas(state, n) for n in range(1, m + 1)]
    kept = [np.flatnonzero(lam > 0) for lam in full]
    tensors, gammas = [], []
    for n in range(1, m + 1):
        prev, here = kept[n - 1], kept[n]
        pos = {int(l): j for j, l in enumerate(here)}
        gam = np.zeros((2, len(prev), len(here)))
        for col, l in enumerate(prev):
            l = int(l)
            inv = 1.0 / full[n - 1][l]
            if l in pos:
                gam[0, col, pos[l]] = math.sqrt(math.comb(n - 1, l) / math.comb(n, l)) * inv
            if l + 1 in pos:
                gam[1, col, pos[l + 1]] = math.sqrt(math.comb(n - 1, l) / math.comb(n, l + 1)) * inv
        lam_here = full[n][here]
        v = [(gam[i] * lam_here[None, :]).T for i in (0, 1)]
        tensors.append((v[0], v[1]))
        gammas.append(gam)
    last = np.zeros((2, len(kept[m]), 1))
    for col, l in enumerate(kept[m]):
        if l == state.weight:
            last[0, col, 0] = -1.0
        elif l == m:
            last[1, col, 0] = 1.0
    tensors.append((last[0].T.copy(), last[1].T.copy()))
    gammas.append(last)
    schmidt = SchmidtData(
        lambdas=[full[n][kept[n]] for n in range(1, m + 1)],
        gammas=gammas,
        labels=[kept[n].tolist() for n in range(1, m + 1)],
    )
    return MpsChain(tensors, np.array([1.0]), np.array([1.0]), schmidt)


# -- generic chain ------------------------------------------------------------

def _site_major(vector: np.ndarray, qubits: int) -> np.ndarray:
    """Reorder so axis ``q`` is qubit ``q + 1`` (the vector's qubit 1 is its LSB)."""
    return vector.reshape((2,) * qubits).transpose(tuple(range(qubits - 1, -1, -1)))


def generic_chain(vector, qubit_count: int) -> MpsChain:
    """Chain for an arbitrary normalized state by successive Schmidt splits.

    Sweeps from qubit 1: at each cut the remaining tensor (already in the
    left Schmidt basis) is split by SVD, coefficients below
    ``1e-12 * largest`` are dropped, and the site tensor is
    ``diag(1/lambda_prev) U diag(lambda)``.
    """
    vec = np.asarray(vector, dtype=complex).ravel()
    if not 1 <= qubit_count <= 14:
        raise ValueError(f"qubit_count must be in 1..14, got {qubit_count}")
    if vec.size != 2 ** qubit_count:
        raise ValueError(f"vector has {vec.size} entries, expected {2 ** qubit_count}")
    norm = np.linalg.norm(vec)
    if abs(norm - 1.0) > 1e-10:
        raise ValueError(f"state must be normalized, got norm {norm!r}")
    rest = _site_major(vec, qubit_count).reshape(1, 2, -1)
    lam_prev = np.array([1.0])
    tensors, lambdas, gammas = [], [], []
    for n in range(1, qubit_count):
        bond = rest.shape[0]
        u, s, vh = np.linalg.svd(rest.reshape(bond * 2, -1), full_matrices=False)
        keep = s > SVD_CUTOFF * s[0]
        u, s, vh = u[:, keep], s[keep], vh[keep]
        gam = (u.reshape(bond, 2, -1) / lam_prev[:, None, None])
        b = gam * s[None, None, :]
        tensors.append(_v_from_b(b))
        gammas.append(gam.transpose(1, 0, 2))
        lambdas.append(s)
        rest = (s[:, None] * vh).reshape(len(s), 2, -1)
        lam_prev = s
    b = rest / lam_prev[:, None, None]
    tensors.append(_v_from_b(b))
    gammas.append(b.transpose(1, 0, 2))
    return MpsChain(tensors, np.array([1.0]), np.array([1.0]), SchmidtData(lambdas, gammas))


# -- verification ---------------------------------------------------------------

def contract_chain(chain: MpsChain) -> np.ndarray:
    """Computational-basis amplitudes of ``chain`` (site 1 least significant)."""
    acc = chain.boundary_in[None, :]  # (configurations, bond)
    for v0, v1 in chain.tensors:
        acc = np.concatenate([acc @ v0.T, acc @ v1.T], axis=0)
    return acc @ chain.boundary_out


def isometry_residuals(chain: MpsChain) -> np.ndarray:
    """Max-abs deviation of ``sum_i V^i^dagger V^i`` from the identity, per site."""
    out = []
    for v0, v1 in chain.tensors:
        gram = v0.conj().T @ v0 + v1.conj().T @ v1
        out.append(float(np.max(np.abs(gram - np.eye(gram.shape[0])))))
    return np.array(out)


@dataclass(frozen=True)
class ChainCertificate:
    residuals: tuple
    overlap: float
    passed: bool
    max_residual: float


def verify_chain(chain: MpsChain, reference) -> ChainCertificate:
    ref = np.asarray(reference, dtype=complex).ravel()
    if ref.size != 2 ** chain.site_count:
        raise ValueError(
            f"reference has {ref.size} amplitudes; chain of {chain.site_count} sites needs "
            f"{2 ** chain.site_count}"
        )
    res = isometry_residuals(chain)
    overlap = float(abs(np.vdot(ref, contract_chain(chain))))
    passed = bool(np.all(res < ISOMETRY_TOL) and overlap > 1.0 - OVERLAP_TOL)
    return ChainCertificate(tuple(float(r) for r in res), overlap, passed, float(res.max()))


def schmidt_spectrum(vector, qubit_count: int, n: int) -> np.ndarray:
    """Singular values across the cut after qubit ``n``, largest first."""
    vec = np.asarray(vector, dtype=complex).ravel()
    return np.linalg.svd(vec.reshape(2 ** (qubit_count - n), 2 ** n), compute_uv=False)
