"""JSON encoding for states, gates, chains and reports.

Floats are written with 17 significant digits so every value survives a
round trip bit-exactly; complex numbers are ``[re, im]`` pairs; field order
is fixed by the writers, so identical inputs give identical text.
"""

from __future__ import annotations

import json
import math
from typing import Any

import numpy as np

from .belt import BeltRegion, belt_constants, classify_case
from .fidelity import FidelityReport
from .gate import GateSpec
from .mps import ChainCertificate, MpsChain
from .optimizer import OptimalGateReport, OracleResult
from .symmetric import JointState


class SerializationError(ValueError):
    """Malformed document; the message names the offending field."""


# -- text encoding -----------------------------------------------------------

def format_float(x: float) -> str:
    x = float(x)
    if not math.isfinite(x):
        raise SerializationError(f"non-finite number {x!r} cannot be written")
    if x == 0.0:
        x = 0.0  # drop the sign of -0.0
    text = "%.17g" % x
    return text


def _encode(value: Any, indent: int, level: int) -> str:
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if isinstance(value, dict):
        if not value:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {_encode(v, indent, level + 1)}" for k, v in value.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(value, (list, tuple)):
        if not value:
            return "[]"
        if all(not isinstance(v, (dict, list, tuple)) for v in value) or _is_pair_list(value):
            return "[" + ", ".join(_encode(v, indent, level + 1) for v in value) + "]"
        items = [pad + _encode(v, indent, level + 1) for v in value]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format_float(value)
    if value is None:
        return "null"
    if isinstance(value, str):
        return json.dumps(value)
    raise SerializationError(f"cannot encode value of type {type(value).__name__}")


def _is_pair_list(value) -> bool:
    # keep rows of [re, im] pairs on one line
    return all(isinstance(v, (list, tuple)) and len(v) == 2
               and not isinstance(v[0], (list, tuple)) for v in value)


def dumps(document: Any, indent: int = 2) -> str:
    return _encode(document, indent, 0) + "\n"


def loads(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SerializationError(f"invalid JSON: {exc}") from None


# -- field helpers ---------------------------------------------------------------

def _complex_list(arr) -> list:
    return [[float(z.real), float(z.imag)] for z in np.asarray(arr, dtype=complex).ravel()]


def _matrix(arr) -> list:
    arr = np.asarray(arr, dtype=complex)
    return [_complex_list(row) for row in arr]


def _field(doc: dict, name: str, where: str):
    if not isinstance(doc, dict):
        raise SerializationError(f"{where}: expected a JSON object")
    if name not in doc:
        raise SerializationError(f"{where}.{name}: missing field")
    return doc[name]


def _int_field(doc: dict, name: str, where: str, minimum: int = 0) -> int:
    value = _field(doc, name, where)
    if isinstance(value, bool) or not isinstance(value, int) or value < minimum:
        raise SerializationError(f"{where}.{name}: expected integer >= {minimum}, got {value!r}")
    return value


def _parse_complex(value, where: str) -> complex:
    if (not isinstance(value, list) or len(value) != 2
            or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in value)):
        raise SerializationError(f"{where}: expected [re, im], got {value!r}")
    return complex(float(value[0]), float(value[1]))


def _parse_vector(value, where: str) -> np.ndarray:
    if not isinstance(value, list):
        raise SerializationError(f"{where}: expected a list of [re, im] pairs")
    return np.array([_parse_complex(v, f"{where}[{i}]") for i, v in enumerate(value)], dtype=complex)


def _parse_matrix(value, where: str) -> np.ndarray:
    if not isinstance(value, list) or not value:
        raise SerializationError(f"{where}: expected a non-empty list of rows")
    rows = [_parse_vector(row, f"{where}[{i}]") for i, row in enumerate(value)]
    if len({len(r) for r in rows}) != 1:
        raise SerializationError(f"{where}: rows have unequal lengths")
    return np.array(rows)


# -- JointState ------------------------------------------------------------------

def joint_state_to_dict(state: JointState) -> dict:
    return {"m": state.m, "anc_dim": state.anc_dim, "amplitudes": _complex_list(state.amplitudes)}


def joint_state_from_dict(doc: dict) -> JointState:
    m = _int_field(doc, "m", "state", 1)
    anc = _int_field(doc, "anc_dim", "state", 1)
    amps = _parse_vector(_field(doc, "amplitudes", "state"), "state.amplitudes")
    if amps.size != (m + 1) * anc:
        raise SerializationError(
            f"state.amplitudes: expected {(m + 1) * anc} entries, got {amps.size}"
        )
    try:
        return JointState(m, anc, amps.reshape(m + 1, anc))
    except ValueError as exc:
        raise SerializationError(f"state.amplitudes: {exc}") from None


# -- GateSpec --------------------------------------------------------------------

def gate_to_dict(spec: GateSpec) -> dict:
    return {"m": spec.m, "anc_dim": spec.anc_dim, "A": [_complex_list(v) for v in spec.vectors]}


def gate_from_dict(doc: dict) -> GateSpec:
    m = _int_field(doc, "m", "gate", 1)
    anc = _int_field(doc, "anc_dim", "gate", 1)
    vecs = _field(doc, "A", "gate")
    if not isinstance(vecs, list) or len(vecs) != 2 * m + 2:
        raise SerializationError(f"gate.A: expected {2 * m + 2} vectors")
    rows = []
    for i, v in enumerate(vecs):
        row = _parse_vector(v, f"gate.A[{i}]")
        if row.size != anc:
            raise SerializationError(f"gate.A[{i}]: expected {anc} components, got {row.size}")
        rows.append(row)
    return GateSpec(m, np.array(rows))


# -- MpsChain --------------------------------------------------------------------

def chain_to_dict(chain: MpsChain) -> dict:
    sites = []
    for v0, v1 in chain.tensors:
        sites.append({"bond_in": int(v0.shape[1]), "bond_out": int(v0.shape[0]),
                      "V0": _matrix(v0), "V1": _matrix(v1)})
    return {"sites": sites,
            "boundary_in": _complex_list(chain.boundary_in),
            "boundary_out": _complex_list(chain.boundary_out)}


def chain_from_dict(doc: dict) -> MpsChain:
    sites = _field(doc, "sites", "chain")
    if not isinstance(sites, list) or not sites:
        raise SerializationError("chain.sites: expected a non-empty list")
    tensors = []
    for n, site in enumerate(sites):
        where = f"chain.sites[{n}]"
        b_in = _int_field(site, "bond_in", where, 1)
        b_out = _int_field(site, "bond_out", where, 1)
        pair = []
        for key in ("V0", "V1"):
            mat = _parse_matrix(_field(site, key, where), f"{where}.{key}")
            if mat.shape != (b_out, b_in):
                raise SerializationError(
                    f"{where}.{key}: shape {mat.shape} does not match (bond_out, bond_in)=({b_out}, {b_in})"
                )
            pair.append(mat)
        tensors.append(tuple(pair))
    b_in = _parse_vector(_field(doc, "boundary_in", "chain"), "chain.boundary_in")
    b_out = _parse_vector(_field(doc, "boundary_out", "chain"), "chain.boundary_out")
    try:
        return MpsChain(tensors, b_in, b_out)
    except ValueError as exc:
        raise SerializationError(f"chain: {exc}") from None


def certificate_to_dict(cert: ChainCertificate) -> dict:
    return {"passed": cert.passed, "overlap": cert.overlap,
            "max_residual": cert.max_residual, "residuals": list(cert.residuals)}


# -- reports -----------------------------------------------------------------------

def constants_to_dict(region: BeltRegion, m: int) -> dict:
    c = belt_constants(region)
    return {"theta1": region.theta1, "theta2": region.theta2,
            "K": c.k_const, "P": c.p_const, "Q": c.q_const, "R": c.r_const,
            "case": int(classify_case(region, m))}


def optimal_report_to_dict(report: OptimalGateReport) -> dict:
    cf = report.case_formula
    return {
        **constants_to_dict(report.region, report.m),
        "M": report.m,
        "f_bar": report.f_bar,
        "a_star": report.a_star,
        "boundary_hit": report.boundary_hit,
        "a_diagonals": [float(x) for x in report.a_diagonals],
        "pairs": list(report.pairs),
        "dual": {"mu": report.mu, "nu": report.nu, "gap": report.duality_gap},
        "case_formula": {
            "case": int(cf.case_id), "a_star": cf.a_star, "boundary_hit": cf.boundary_hit,
            "a_diagonals": [float(x) for x in cf.a_diagonals], "f_bar": cf.f_bar,
            "shortfall": report.case_formula_gap,
        },
    }


def oracle_result_to_dict(result: OracleResult, region: BeltRegion, m: int,
                          analytic: OptimalGateReport) -> dict:
    doc = {
        **constants_to_dict(region, m),
        "M": m,
        "resolution": result.resolution,
        "coarse": result.coarse,
        "best_f": result.best_f,
        "grid_f": result.grid_f,
        "best_a_diagonals": [[float(x) for x in v] for v in result.best_a_diagonals],
        "evaluations": result.evaluations,
        "grid_points": result.grid_points,
        "analytic_f_bar": analytic.f_bar,
        "residual_to_analytic": result.best_f - analytic.f_bar,
        "case_formula_f_bar": analytic.case_formula.f_bar,
        "residual_to_case_formula": result.best_f - analytic.case_formula.f_bar,
    }
    if result.paranoid is not None:
        doc["paranoid"] = {
            "saturated_optimal": bool(result.paranoid["saturated_optimal"]),
            "coupling_sweep": [[float(t), float(v)] for t, v in result.paranoid["values"].items()],
        }
    return doc


def fidelity_report_to_dict(report: FidelityReport) -> dict:
    return {
        "theta": report.theta, "phi": report.phi,
        "pointwise_sim": report.pointwise_sim,
        "pointwise_sim_phi_avg": report.pointwise_sim_phi_avg,
        "pointwise_formula": report.pointwise_formula,
        "avg_closed": report.avg_closed,
        "avg_quadrature": report.avg_quadrature,
        "pointwise_residual": report.pointwise_residual,
        "average_residual": report.average_residual,
    }
