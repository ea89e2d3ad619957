"""Command-line front end.

Every command writes JSON (or CSV where the output is tabular) to standard
output or ``--output``. Exit status: 0 success, 1 usage error, 2 validation
failure (malformed or invalid input document, failed certificate).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import serialization as ser
from .belt import BeltRegion
from .fidelity import DEFAULT_NODES, DEFAULT_PHI_NODES, avg_fidelity_closed, avg_fidelity_quadrature, fidelity_report
from .gate import InputState, InvalidGateError, apply, branch_state, realize_optimal, validate
from .mps import ExemplarState, exemplar_chain, generic_chain, verify_chain
from .optimizer import analytic_optimum, oracle_optimum
from .symmetric import expand_to_qubits

ANGLE_SLACK = 1e-3  # typed-in values like 3.1416 are snapped onto [0, pi]
MAX_CHAIN_QUBITS = 14


class UsageError(Exception):
    pass


class ValidationError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


# -- argument helpers ------------------------------------------------------------

def _angle(value: float, name: str, degrees: bool, upper: float = math.pi) -> float:
    x = math.radians(value) if degrees else float(value)
    if not math.isfinite(x) or x < -ANGLE_SLACK or x > upper + ANGLE_SLACK:
        raise UsageError(f"--{name}: angle {value!r} outside [0, {'180' if degrees else 'pi'}]")
    return min(max(x, 0.0), upper)


def _range_spec(text: str, name: str) -> list:
    """``value`` or ``start:stop:count`` (inclusive, like ``linspace``)."""
    parts = text.split(":")
    try:
        if len(parts) == 1:
            return [float(parts[0])]
        if len(parts) == 3:
            count = int(parts[2])
            if count < 1:
                raise ValueError
            return [float(v) for v in np.linspace(float(parts[0]), float(parts[1]), count)]
    except ValueError:
        pass
    raise UsageError(f"--{name}: expected a number or start:stop:count, got {text!r}")


def _region(args) -> BeltRegion:
    t1 = _angle(_number(args.theta1, "theta1"), "theta1", args.degrees)
    t2 = _angle(_number(args.theta2, "theta2"), "theta2", args.degrees)
    if t1 > t2:
        raise UsageError(f"--theta1 ({args.theta1}) must not exceed --theta2 ({args.theta2})")
    return BeltRegion(t1, t2)


def _number(text, name: str) -> float:
    try:
        return float(text)
    except (TypeError, ValueError):
        raise UsageError(f"--{name}: expected a number, got {text!r}") from None


def _positive(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}")
    return value


def _positive_float(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a positive number, got {text!r}") from None
    if not value > 0:
        raise argparse.ArgumentTypeError(f"expected a positive number, got {text!r}")
    return value


def _read_doc(path: str, what: str):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"{what}: cannot read {path}: {exc.strerror}") from None
    try:
        return ser.loads(text)
    except ser.SerializationError as exc:
        raise ValidationError(f"{what}: {exc}") from None


def _load(path: str, what: str, reader):
    doc = _read_doc(path, what)
    try:
        return reader(doc)
    except (ser.SerializationError, ValueError) as exc:
        raise ValidationError(f"{what}: {exc}") from None


def _gate(args, region, m):
    if getattr(args, "gate", None):
        spec = _load(args.gate, "gate", ser.gate_from_dict)
        if spec.m != m:
            raise ValidationError(f"gate.m: file has m={spec.m}, but -M is {m}")
        rep = validate(spec)
        if not rep.valid:
            raise ValidationError(f"gate: fails {', '.join(rep.failed)}")
        return spec
    return realize_optimal(region, m)


# -- output ----------------------------------------------------------------------

def _scalar_csv(doc: dict) -> str:
    keys = [k for k, v in doc.items() if not isinstance(v, (dict, list, tuple))]
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(keys)
    writer.writerow([_cell(doc[k]) for k in keys])
    return buf.getvalue()


def _cell(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return ser.format_float(value)
    return str(value)


def _emit(args, doc, csv_text=None):
    if args.format == "csv":
        text = csv_text if csv_text is not None else _scalar_csv(doc)
    else:
        text = ser.dumps(doc)
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)


def _json_only(args):
    if args.format != "json":
        raise UsageError(f"--format: {args.command} only writes json")


# -- commands --------------------------------------------------------------------

def cmd_constants(args):
    region = _region(args)
    _emit(args, {**ser.constants_to_dict(region, args.M), "M": args.M})


def cmd_optimize(args):
    region = _region(args)
    report = analytic_optimum(region, args.M)
    if args.gate_out:
        Path(args.gate_out).write_text(ser.dumps(ser.gate_to_dict(realize_optimal(region, args.M))))
    _emit(args, ser.optimal_report_to_dict(report))


def cmd_fidelity(args):
    region = _region(args)
    spec = _gate(args, region, args.M)
    state = None
    if args.theta is not None:
        phi = _angle(args.phi, "phi", args.degrees, upper=2 * math.pi) % (2 * math.pi)
        state = InputState(_angle(args.theta, "theta", args.degrees), phi)
    report = fidelity_report(spec, region, state, args.nodes, args.phi_nodes)
    _emit(args, {**ser.constants_to_dict(region, args.M), "M": args.M,
                 **ser.fidelity_report_to_dict(report)})


def cmd_sweep(args):
    t1s = _range_spec(args.theta1, "theta1")
    t2s = _range_spec(args.theta2, "theta2")
    t1s = [_angle(t, "theta1", args.degrees) for t in t1s]
    t2s = [_angle(t, "theta2", args.degrees) for t in t2s]
    ms = args.M_list
    config = {"command": "sweep", "theta1": args.theta1, "theta2": args.theta2,
              "M": ",".join(str(m) for m in ms), "degrees": args.degrees,
              "nodes": args.nodes, "phi_nodes": args.phi_nodes, "format": args.format}
    rows, skipped = [], 0
    for t1 in t1s:
        for t2 in t2s:
            if t1 > t2:
                skipped += 1
                continue
            region = BeltRegion(t1, t2)
            for m in ms:
                report = analytic_optimum(region, m)
                spec = realize_optimal(region, m)
                closed = avg_fidelity_closed(spec, region)
                quad = avg_fidelity_quadrature(spec, region, args.nodes, args.phi_nodes)
                rows.append({"theta1": t1, "theta2": t2, "M": m, "case": int(report.case_id),
                             "a": report.a_star, "F_closed": closed, "F_quadrature": quad,
                             "residual": abs(closed - quad)})
    if args.format == "csv":
        buf = io.StringIO()
        buf.write(f"# config: {json.dumps(config)}\n")
        buf.write(f"# skipped: {skipped} (theta1 > theta2)\n")
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(list(rows[0]) if rows else
                        ["theta1", "theta2", "M", "case", "a", "F_closed", "F_quadrature", "residual"])
        for row in rows:
            writer.writerow([_cell(v) for v in row.values()])
        _emit(args, None, buf.getvalue())
    else:
        _emit(args, {"config": config, "skipped": skipped, "rows": rows})


def cmd_oracle(args):
    region = _region(args)
    if args.paranoid and args.M > 2:
        raise UsageError("--paranoid: coupling sweep is limited to -M 1 or 2")
    try:
        result = oracle_optimum(region, args.M, args.resolution, paranoid=args.paranoid)
    except ValueError as exc:
        raise UsageError(f"--resolution: {exc}") from None
    if result.coarse:
        print(f"warning: resolution {args.resolution} is coarser than 0.05", file=sys.stderr)
    _emit(args, ser.oracle_result_to_dict(result, region, args.M, analytic_optimum(region, args.M)))


def cmd_simulate(args):
    _json_only(args)
    region = _region(args)
    spec = _gate(args, region, args.M)
    phi = _angle(args.phi, "phi", args.degrees, upper=2 * math.pi) % (2 * math.pi)
    theta = _angle(args.theta, "theta", args.degrees) if args.theta is not None else region.theta1
    try:
        state = apply(spec, InputState(theta, phi))
    except InvalidGateError as exc:
        raise ValidationError(f"gate: {exc}") from None
    _emit(args, ser.joint_state_to_dict(state))


def _expanded(state, what: str) -> np.ndarray:
    try:
        vec = expand_to_qubits(state)
    except ValueError as exc:
        raise ValidationError(f"{what}.anc_dim: {exc}") from None
    if vec.size > 2 ** MAX_CHAIN_QUBITS:
        raise ValidationError(f"{what}.m: more than {MAX_CHAIN_QUBITS} qubits")
    return vec


def cmd_mps_build(args):
    _json_only(args)
    chosen = [bool(args.exemplar), args.state is not None, args.gate is not None]
    if sum(chosen) != 1:
        raise UsageError("mps-build: give exactly one of --exemplar, --state, --gate")
    if args.exemplar:
        if args.M is None or args.gamma is None:
            raise UsageError("--exemplar: needs -M and --gamma")
        try:
            chain = exemplar_chain(ExemplarState(args.M, args.gamma))
        except ValueError as exc:
            raise UsageError(f"--exemplar: {exc}") from None
    else:
        if args.state is not None:
            state = _load(args.state, "state", ser.joint_state_from_dict)
            what = "state"
        else:
            spec = _load(args.gate, "gate", ser.gate_from_dict)
            try:
                state = branch_state(spec, args.branch)
            except InvalidGateError as exc:
                raise ValidationError(f"gate: {exc}") from None
            what = "gate"
        vec = _expanded(state, what)
        try:
            chain = generic_chain(vec, int(round(math.log2(vec.size))))
        except ValueError as exc:
            raise ValidationError(f"{what}: {exc}") from None
    _emit(args, ser.chain_to_dict(chain))


def cmd_mps_verify(args):
    _json_only(args)
    chain = _load(args.chain, "chain", ser.chain_from_dict)
    doc = _read_doc(args.reference, "reference")
    if isinstance(doc, dict) and "vector" in doc:
        try:
            ref = ser._parse_vector(doc["vector"], "reference.vector")
        except ser.SerializationError as exc:
            raise ValidationError(str(exc)) from None
    else:
        try:
            ref = _expanded(ser.joint_state_from_dict(doc), "reference")
        except ser.SerializationError as exc:
            raise ValidationError(f"reference: {exc}") from None
    try:
        cert = verify_chain(chain, ref)
    except ValueError as exc:
        raise ValidationError(f"reference: {exc}") from None
    _emit(args, ser.certificate_to_dict(cert))
    if not cert.passed:
        raise ValidationError(
            f"chain fails: max isometry residual {ser.format_float(cert.max_residual)}, "
            f"overlap {ser.format_float(cert.overlap)}"
        )


# -- parser ----------------------------------------------------------------------

def _m_list(text: str) -> list:
    try:
        values = [int(v) for v in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected M or M1,M2,..., got {text!r}") from None
    if not values or min(values) < 1:
        raise argparse.ArgumentTypeError(f"copy counts must be positive, got {text!r}")
    return values


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--degrees", action="store_true", help="angles are given in degrees")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--output", "-o", help="write to this file instead of stdout")

    belt = _Parser(add_help=False)
    belt.add_argument("--theta1", required=True)
    belt.add_argument("--theta2", required=True)

    quad = _Parser(add_help=False)
    quad.add_argument("--nodes", type=_positive, default=DEFAULT_NODES, help="Gauss-Legendre nodes in theta")
    quad.add_argument("--phi-nodes", type=_positive, default=DEFAULT_PHI_NODES, help="azimuth samples")

    parser = _Parser(prog="beltnot", description="Optimal 1-to-M NOT gates on latitude belts.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("constants", parents=[common, belt], help="belt constants and case")
    p.add_argument("-M", type=_positive, default=1)
    p.set_defaults(func=cmd_constants)

    p = sub.add_parser("optimize", parents=[common, belt], help="optimal gate report")
    p.add_argument("-M", type=_positive, required=True)
    p.add_argument("--gate-out", help="also write the realized gate JSON here")
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("fidelity", parents=[common, belt, quad], help="fidelity report for a gate")
    p.add_argument("-M", type=_positive, required=True)
    p.add_argument("--gate", help="gate JSON (default: the optimal gate)")
    p.add_argument("--theta", type=float, help="pointwise input polar angle")
    p.add_argument("--phi", type=float, default=0.0)
    p.set_defaults(func=cmd_fidelity)

    p = sub.add_parser("sweep", parents=[common, belt, quad], help="grid of belts")
    p.add_argument("-M", dest="M_list", type=_m_list, required=True)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("oracle", parents=[common, belt], help="grid-search cross-check")
    p.add_argument("-M", type=_positive, required=True)
    p.add_argument("--resolution", type=_positive_float, default=0.01)
    p.add_argument("--paranoid", action="store_true", help="also sweep the coupling factor (M <= 2)")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("simulate", parents=[common, belt], help="output state for one input")
    p.add_argument("-M", type=_positive, required=True)
    p.add_argument("--gate", help="gate JSON (default: the optimal gate)")
    p.add_argument("--theta", type=float, help="input polar angle (default: theta1)")
    p.add_argument("--phi", type=float, default=0.0)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("mps-build", parents=[common], help="sequential-generation chain")
    p.add_argument("--exemplar", action="store_true")
    p.add_argument("-M", type=_positive)
    p.add_argument("--gamma", type=float)
    p.add_argument("--state", help="JointState JSON")
    p.add_argument("--gate", help="gate JSON; chain for the output on a basis input")
    p.add_argument("--branch", type=int, choices=(0, 1), default=0)
    p.set_defaults(func=cmd_mps_build)

    p = sub.add_parser("mps-verify", parents=[common], help="certify a chain against a state")
    p.add_argument("chain")
    p.add_argument("--reference", required=True, help="JointState JSON or {\"vector\": [...]}")
    p.set_defaults(func=cmd_mps_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except UsageError as exc:
        print(f"beltnot {args.command}: {exc}", file=sys.stderr)
        return 1
    except ValidationError as exc:
        print(f"beltnot {args.command}: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
