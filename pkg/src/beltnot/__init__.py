"""Optimal 1-to-M quantum NOT gates for qubits on a latitude belt of the Bloch sphere."""

from .belt import BeltConstants, BeltRegion, CaseId, belt_constants, classify_case, latitude_tie
from .fidelity import (FidelityReport, avg_fidelity_closed, avg_fidelity_quadrature,
                       fidelity_formula, fidelity_report, fidelity_sim)
from .gate import (GateSpec, InputState, InvalidGateError, apply, realize_case_formula,
                   realize_optimal, validate)
from .mps import (ExemplarState, MpsChain, SchmidtData, exemplar_chain, exemplar_lambdas,
                  generic_chain, verify_chain)
from .optimizer import (OptimalGateReport, OracleResult, analytic_optimum, case_formula_optimum,
                        oracle_optimum, verify_case_consistency)
from .symmetric import DickeIndex, JointState, expand_to_qubits, reduced_single_qubit

__all__ = [
    "BeltConstants", "BeltRegion", "CaseId", "belt_constants", "classify_case", "latitude_tie",
    "FidelityReport", "avg_fidelity_closed", "avg_fidelity_quadrature", "fidelity_formula",
    "fidelity_report", "fidelity_sim",
    "GateSpec", "InputState", "InvalidGateError", "apply", "realize_case_formula",
    "realize_optimal", "validate",
    "ExemplarState", "MpsChain", "SchmidtData", "exemplar_chain", "exemplar_lambdas",
    "generic_chain", "verify_chain",
    "OptimalGateReport", "OracleResult", "analytic_optimum", "case_formula_optimum",
    "oracle_optimum", "verify_case_consistency",
    "DickeIndex", "JointState", "expand_to_qubits", "reduced_single_qubit",
]
