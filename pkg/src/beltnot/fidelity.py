"""Orthogonalization fidelity: simulated, closed-form, and belt-averaged."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .belt import BeltRegion, belt_constants
from .gate import GateSpec, InputState, _require_valid, gram, output_amplitudes
from .symmetric import reduced_blocks

DEFAULT_NODES = 64
DEFAULT_PHI_NODES = 64


def fidelity_grid(spec: GateSpec, theta, phi) -> np.ndarray:
    """``<psi_perp| rho |psi_perp>`` on broadcast ``theta``/``phi`` arrays.

    ``psi_perp = sin(theta/2)|0> - e^{i phi} cos(theta/2)|1>``.
    """
    theta, phi = np.broadcast_arrays(np.asarray(theta, float), np.asarray(phi, float))
    r00, r11, r01 = reduced_blocks(output_amplitudes(spec, theta, phi))
    s = np.sin(theta / 2)
    c = np.cos(theta / 2)
    val = s * s * r00 + c * c * r11 - 2.0 * s * c * np.real(np.exp(1j * phi) * r01)
    return np.real(val)


def fidelity_sim(spec: GateSpec, state: InputState) -> float:
    _require_valid(spec)
    return float(fidelity_grid(spec, state.theta, state.phi))


def phi_nodes(count: int) -> np.ndarray:
    return 2.0 * np.pi * np.arange(count) / count


def phi_averaged_sim(spec: GateSpec, theta, nodes: int = DEFAULT_PHI_NODES) -> np.ndarray:
    """Simulated fidelity averaged over ``nodes`` uniform azimuths."""
    theta = np.asarray(theta, float)
    vals = fidelity_grid(spec, theta[..., None], phi_nodes(nodes))
    return vals.mean(axis=-1)


def _couplings(spec: GateSpec, coupling: str) -> np.ndarray:
    """Coupling magnitudes entering the phi-averaged fidelity, one per k < M.

    ``"saturated"`` uses sqrt(a_{M+k+1} a_{M-k-1}); ``"gram"`` uses
    -Re a_{M+k+1, M-k-1} from the actual Gram matrix. They agree whenever
    the couplings are real, negative and saturate Cauchy-Schwarz.
    """
    m = spec.m
    g = gram(spec)
    k = np.arange(m)
    if coupling == "saturated":
        diag = np.real(np.diag(g))
        return np.sqrt(np.clip(diag[m + k + 1] * diag[m - k - 1], 0.0, None))
    if coupling == "gram":
        return -np.real(g[m + k + 1, m - k - 1])
    raise ValueError(f"unknown coupling mode {coupling!r}")


def fidelity_formula(spec: GateSpec, theta, coupling: str = "saturated"):
    """Azimuth-averaged fidelity at polar angle ``theta`` from the Gram data."""
    m = spec.m
    a = np.real(np.diag(gram(spec)))
    k = np.arange(m)
    cross = _couplings(spec, coupling)
    theta = np.asarray(theta, float)
    s2 = np.sin(theta / 2) ** 2
    c2 = np.cos(theta / 2) ** 2
    bracket = (np.sum((m - k) / m * (a[k] + a[m + k + 1]))
               + 2.0 * np.sum(np.sqrt((m - k) * (k + 1)) / m * cross))
    # C(M-1, M-k-1)/C(M, k+1) == C(M-1, k)/C(M, k+1) == (k+1)/M
    ratio = np.array([math.comb(m - 1, kk) / math.comb(m, kk + 1) for kk in range(m)])
    low = np.sum(ratio * a[m + k + 2])
    high = np.sum(ratio * a[k + 1])
    out = s2 * c2 * bracket + s2 * s2 * low + c2 * c2 * high
    return float(out) if out.ndim == 0 else out


def avg_fidelity_closed(spec: GateSpec, region: BeltRegion, coupling: str = "saturated") -> float:
    _require_valid(spec)
    m = spec.m
    cst = belt_constants(region)
    a = np.real(np.diag(gram(spec)))
    k = np.arange(m)
    cross = _couplings(spec, coupling)
    lin = (m - k) / m
    return float(
        0.5 + cst.k_const / 6.0
        + cst.p_const * np.sum(np.sqrt((m - k) * (k + 1)) / m * cross)
        - cst.q_const * np.sum(lin * a[k])
        - cst.r_const * np.sum(lin * a[m + k + 1])
    )


def belt_quadrature(region: BeltRegion, nodes: int = DEFAULT_NODES):
    """Gauss-Legendre nodes in ``u = cos(theta)`` over the belt.

    Returns ``(theta, weights)``; the weights integrate ``sin(theta) dtheta``,
    so they sum to ``cos(theta1) - cos(theta2)``.
    """
    if nodes < 8:
        raise ValueError(f"need at least 8 quadrature nodes, got {nodes}")
    x, wts = np.polynomial.legendre.leggauss(nodes)
    u_hi, u_lo = math.cos(region.theta1), math.cos(region.theta2)
    half = (u_hi - u_lo) / 2.0
    u = u_lo + half * (x + 1.0)
    return np.arccos(np.clip(u, -1.0, 1.0)), wts * half


def avg_fidelity_quadrature(spec: GateSpec, region: BeltRegion, nodes: int = DEFAULT_NODES,
                            phi_count: int = DEFAULT_PHI_NODES) -> float:
    """Belt average of the simulated fidelity by quadrature in theta and phi."""
    _require_valid(spec)
    if phi_count < 16:
        raise ValueError(f"need at least 16 azimuth nodes, got {phi_count}")
    if region.degenerate or math.cos(region.theta1) == math.cos(region.theta2):
        # zero-width in u: a single latitude as far as the measure can tell
        return float(phi_averaged_sim(spec, region.theta1, phi_count))
    theta, wts = belt_quadrature(region, nodes)
    inner = phi_averaged_sim(spec, theta, phi_count)
    return float(np.dot(wts, inner) / np.sum(wts))


@dataclass(frozen=True)
class FidelityReport:
    theta: float
    phi: float
    pointwise_sim: float
    pointwise_sim_phi_avg: float
    pointwise_formula: float
    avg_closed: float
    avg_quadrature: float
    pointwise_residual: float
    average_residual: float


def fidelity_report(spec: GateSpec, region: BeltRegion, state: Optional[InputState] = None,
                    nodes: int = DEFAULT_NODES, phi_count: int = DEFAULT_PHI_NODES) -> FidelityReport:
    """All four fidelity evaluations for one gate, with paired residuals.

    ``state`` defaults to the mid-belt latitude at zero azimuth. The
    pointwise residual compares the azimuth-averaged simulation with the
    closed form at the same polar angle.
    """
    if state is None:
        state = InputState((region.theta1 + region.theta2) / 2.0, 0.0)
    sim = fidelity_sim(spec, state)
    sim_avg = float(phi_averaged_sim(spec, state.theta, phi_count))
    formula = fidelity_formula(spec, state.theta)
    closed = avg_fidelity_closed(spec, region)
    quad = avg_fidelity_quadrature(spec, region, nodes, phi_count)
    return FidelityReport(
        theta=state.theta, phi=state.phi,
        pointwise_sim=sim, pointwise_sim_phi_avg=sim_avg, pointwise_formula=formula,
        avg_closed=closed, avg_quadrature=quad,
        pointwise_residual=abs(sim_avg - formula), average_residual=abs(closed - quad),
    )
