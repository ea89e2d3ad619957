"""The 1-to-M NOT gate as a pair of ancilla-vector families.

A gate is stored as the ``2M + 2`` ancilla vectors ``A_0 .. A_{2M+1}``:
``|0> -> sum_k |D_k> (x) A_k`` and ``|1> -> sum_k |D_{M-k}> (x) A_{M+k+1}``
where ``D_j`` is the Dicke state with ``j`` ones. The second family is
read back by ones-count, so ``A_{2M+1-j}`` multiplies ``D_j``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .belt import BeltRegion
from .optimizer import analytic_optimum, case_formula_optimum, case_indices
from .symmetric import JointState

TOL = 1e-12
UP, DOWN, SPARE = 0, 1, 2


class InvalidGateError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class GateSpec:
    m: int
    vectors: np.ndarray  # (2m + 2, anc_dim) complex

    def __post_init__(self):
        if self.m < 1:
            raise ValueError(f"m must be >= 1, got {self.m}")
        vec = np.array(self.vectors, dtype=complex)
        if vec.ndim != 2 or vec.shape[0] != 2 * self.m + 2 or vec.shape[1] < 1:
            raise ValueError(
                f"expected {2 * self.m + 2} ancilla vectors, got array of shape {vec.shape}"
            )
        vec.setflags(write=False)
        object.__setattr__(self, "vectors", vec)

    @property
    def anc_dim(self) -> int:
        return self.vectors.shape[1]


@dataclass(frozen=True)
class InputState:
    theta: float
    phi: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.theta <= math.pi:
            raise ValueError(f"theta must lie in [0, pi], got {self.theta!r}")
        if not 0.0 <= self.phi < 2 * math.pi:
            raise ValueError(f"phi must lie in [0, 2pi), got {self.phi!r}")

    def ket(self) -> np.ndarray:
        return np.array([math.cos(self.theta / 2),
                         math.sin(self.theta / 2) * np.exp(1j * self.phi)])

    def orthogonal_ket(self) -> np.ndarray:
        return np.array([math.sin(self.theta / 2),
                         -np.exp(1j * self.phi) * math.cos(self.theta / 2)])


@dataclass(frozen=True)
class ValidityReport:
    norm0_residual: float
    norm1_residual: float
    cross_residual: float
    failed: tuple

    @property
    def valid(self) -> bool:
        return not self.failed


def gram(spec: GateSpec) -> np.ndarray:
    """``G[k, l] = <A_l|A_k>``."""
    v = spec.vectors
    return v @ v.conj().T


def validate(spec: GateSpec, tol: float = TOL) -> ValidityReport:
    m = spec.m
    v = spec.vectors
    n0 = float(np.sum(np.abs(v[: m + 1]) ** 2))
    n1 = float(np.sum(np.abs(v[m + 1:]) ** 2))
    cross = complex(sum(np.vdot(v[2 * m + 1 - k], v[k]) for k in range(m + 1)))
    res = (abs(n0 - 1.0), abs(n1 - 1.0), abs(cross))
    names = ("normalization_branch0", "normalization_branch1", "cross_orthogonality")
    failed = tuple(name for name, r in zip(names, res) if r > tol)
    return ValidityReport(*res, failed=failed)


def _require_valid(spec: GateSpec):
    rep = validate(spec)
    if not rep.valid:
        raise InvalidGateError(f"gate fails {', '.join(rep.failed)}")


def output_amplitudes(spec: GateSpec, theta, phi) -> np.ndarray:
    """Compact output amplitudes, broadcasting over ``theta`` and ``phi``.

    Returns shape ``broadcast(theta, phi).shape + (m + 1, anc_dim)``.
    """
    theta, phi = np.broadcast_arrays(np.asarray(theta, float), np.asarray(phi, float))
    m = spec.m
    first = spec.vectors[: m + 1]
    second = spec.vectors[m + 1:][::-1]  # row k -> A_{2m+1-k}
    c = np.cos(theta / 2)[..., None, None]
    s = (np.sin(theta / 2) * np.exp(1j * phi))[..., None, None]
    return c * first + s * second


def apply(spec: GateSpec, state: InputState) -> JointState:
    _require_valid(spec)
    amps = output_amplitudes(spec, state.theta, state.phi)
    return JointState(spec.m, spec.anc_dim, amps)


def branch_state(spec: GateSpec, bit: int) -> JointState:
    """Output for the basis input ``|bit>``."""
    if bit not in (0, 1):
        raise ValueError("bit must be 0 or 1")
    return apply(spec, InputState(theta=math.pi * bit, phi=0.0))


def _spec_from_entries(m: int, anc_dim: int, entries) -> GateSpec:
    vec = np.zeros((2 * m + 2, anc_dim), dtype=complex)
    for index, direction, amp in entries:
        vec[index, direction] += amp
    return GateSpec(m, vec)


def realize_case_formula(region: BeltRegion, m: int) -> GateSpec:
    """Two-level-ancilla gate for the closed-form case family of ``region``."""
    res = case_formula_optimum(region, m)
    free, coupled, slack = case_indices(res.case_id, m)
    a = res.a_star
    if res.case_id.upper_dominant:
        entries = [(free, UP, -math.sqrt(a)), (slack, DOWN, math.sqrt(1.0 - a)), (coupled, UP, 1.0)]
    else:
        entries = [(coupled, UP, 1.0), (free, UP, -math.sqrt(a)), (slack, DOWN, math.sqrt(1.0 - a))]
    return _spec_from_entries(m, 2, entries)


def realize_optimal(region: BeltRegion, m: int) -> GateSpec:
    """Gate achieving :func:`analytic_optimum`.

    Each active pair gets its own ancilla direction (``|up>`` first), with
    the ``a_i`` vector carrying the minus sign; the two slack vectors share
    ``|down>`` for a single pair and a third direction otherwise.
    """
    report = analytic_optimum(region, m)
    a = report.a_diagonals
    pairs = report.pairs
    anc_dim = 2 if len(pairs) <= 1 else 3
    slack_dir = DOWN if len(pairs) <= 1 else SPARE
    entries = []
    for direction, i in enumerate(pairs):
        entries.append((i, direction, -math.sqrt(a[i])))
        entries.append((2 * m - i, direction, math.sqrt(a[2 * m - i])))
    entries.append((m, slack_dir, math.sqrt(a[m])))
    entries.append((2 * m + 1, slack_dir, math.sqrt(a[2 * m + 1])))
    spec = _spec_from_entries(m, anc_dim, entries)
    _require_valid(spec)
    return spec
