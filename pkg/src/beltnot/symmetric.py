"""Symmetric (Dicke) subspace of M qubits tensored with a small ancilla.

States are stored compactly as an ``(M + 1, anc_dim)`` amplitude array whose
row ``k`` multiplies the normalized Dicke state with ``k`` qubits in ``|1>``.
On expansion to the computational basis, copy qubit 1 is the least
significant bit and the ancilla qubit (if any) is the most significant one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

NORM_TOL = 1e-12


@dataclass(frozen=True)
class DickeIndex:
    m: int
    k: int

    def __post_init__(self):
        if self.m < 0 or not 0 <= self.k <= self.m:
            raise ValueError(f"need 0 <= k <= m, got m={self.m}, k={self.k}")


@dataclass(frozen=True, eq=False)
class JointState:
    """Pure state of M symmetric copies and an ``anc_dim``-level ancilla."""

    m: int
    anc_dim: int
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=complex)
        if amps.shape != (self.m + 1, self.anc_dim):
            raise ValueError(
                f"amplitudes must have shape ({self.m + 1}, {self.anc_dim}), got {amps.shape}"
            )
        norm2 = float(np.sum(np.abs(amps) ** 2))
        if abs(norm2) > NORM_TOL and abs(norm2 - 1.0) > NORM_TOL:
            raise ValueError(f"squared norm must be 0 or 1 within {NORM_TOL}, got {norm2!r}")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @property
    def norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.amplitudes) ** 2)))

    def inner(self, other: "JointState") -> complex:
        """``<self|other>``; Dicke states are orthonormal so this is a flat vdot."""
        if (self.m, self.anc_dim) != (other.m, other.anc_dim):
            raise ValueError("states live in different spaces")
        return complex(np.vdot(self.amplitudes, other.amplitudes))


def _bits(bitstring: Union[str, Sequence[int]]) -> list[int]:
    if isinstance(bitstring, str):
        if set(bitstring) - {"0", "1"}:
            raise ValueError(f"bitstring must contain only 0/1, got {bitstring!r}")
        return [int(c) for c in bitstring]
    bits = [int(b) for b in bitstring]
    if any(b not in (0, 1) for b in bits):
        raise ValueError("bits must be 0 or 1")
    return bits


def dicke_amplitude(index: DickeIndex, bitstring: Union[str, Sequence[int]]) -> float:
    bits = _bits(bitstring)
    if len(bits) != index.m:
        raise ValueError(f"bitstring has length {len(bits)}, expected {index.m}")
    if sum(bits) != index.k:
        return 0.0
    return 1.0 / math.sqrt(math.comb(index.m, index.k))


def ancilla_qubits(anc_dim: int) -> int:
    if anc_dim not in (1, 2):
        raise ValueError(f"only anc_dim 1 or 2 can be expanded to qubits, got {anc_dim}")
    return anc_dim - 1


def expand_to_qubits(state: JointState) -> np.ndarray:
    """Computational-basis amplitudes of ``state``.

    The returned vector has length ``2 ** (m + 1)`` for a two-level ancilla
    and ``2 ** m`` for a trivial one.
    """
    extra = ancilla_qubits(state.anc_dim)
    m = state.m
    idx = np.arange(2 ** m)
    ones = np.zeros(2 ** m, dtype=int)
    for q in range(m):
        ones += (idx >> q) & 1
    norms = np.array([1.0 / math.sqrt(math.comb(m, k)) for k in range(m + 1)])
    out = np.zeros(2 ** (m + extra), dtype=complex)
    for b in range(state.anc_dim):
        out[b * 2 ** m:(b + 1) * 2 ** m] = state.amplitudes[ones, b] * norms[ones]
    return out


def reduced_blocks(amplitudes: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Single-copy reduced density entries ``(rho00, rho11, rho01)``.

    ``amplitudes`` may carry leading batch axes: shape ``(..., m + 1, d)``.
    Works entirely in the Dicke basis; uses the weights (m-k)/m, k/m and
    sqrt((m-k)(k+1))/m for the single-qubit marginal of a Dicke state.
    """
    amps = np.asarray(amplitudes)
    m = amps.shape[-2] - 1
    if m < 1:
        raise ValueError("need at least one copy qubit")
    k = np.arange(m + 1)
    pop = np.sum(np.abs(amps) ** 2, axis=-1)
    rho00 = np.sum(pop * (m - k) / m, axis=-1)
    rho11 = np.sum(pop * k / m, axis=-1)
    kk = np.arange(m)
    coup = np.sqrt((m - kk) * (kk + 1)) / m
    overlaps = np.sum(np.conj(amps[..., 1:, :]) * amps[..., :-1, :], axis=-1)
    rho01 = np.sum(coup * overlaps, axis=-1)
    return rho00, rho11, rho01


def reduced_single_qubit(state: JointState, which: int = 1) -> np.ndarray:
    """2x2 density matrix of copy qubit ``which`` (1-based).

    Every copy has the same marginal, so ``which`` is only range-checked.
    """
    if not 1 <= which <= state.m:
        raise ValueError(f"qubit index must be in 1..{state.m}, got {which}")
    if abs(state.norm - 1.0) > NORM_TOL:
        raise ValueError("reduced state requires a normalized JointState")
    r00, r11, r01 = reduced_blocks(state.amplitudes)
    return np.array([[r00, r01], [np.conj(r01), r11]], dtype=complex)


def is_density_matrix(rho: np.ndarray, tol: float = 1e-12) -> bool:
    rho = np.asarray(rho)
    if rho.shape != (2, 2):
        return False
    if not np.allclose(rho, rho.conj().T, atol=tol, rtol=0):
        return False
    if abs(np.trace(rho) - 1.0) > tol:
        return False
    return bool(np.linalg.eigvalsh(rho).min() >= -tol)
