import json
import math
import subprocess
import sys

import numpy as np
import pytest

from beltnot import serialization as ser
from beltnot.cli import main
from beltnot.mps import ExemplarState
from beltnot.symmetric import expand_to_qubits


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_optimize_universal(capsys):
    code, out, _ = run(capsys, "optimize", "--theta1", "0", "--theta2", "3.14159265358979", "-M", "3")
    assert code == 0
    doc = json.loads(out)
    assert doc["f_bar"] == pytest.approx(2 / 3, abs=1e-12)
    assert doc["case"] == 1
    assert set(doc) >= {"theta1", "theta2", "K", "P", "Q", "R", "case", "a_star", "boundary_hit"}


def test_outputs_are_byte_identical(capsys):
    args = ("optimize", "--theta1", "0.3", "--theta2", "2.1", "-M", "4")
    _, first, _ = run(capsys, *args)
    _, second, _ = run(capsys, *args)
    assert first == second


def test_sweep_csv(capsys):
    code, out, _ = run(capsys, "sweep", "--theta1", "0:1.5708:16", "--theta2", "1.5708:3.1416:16",
                       "-M", "2", "--format", "csv")
    assert code == 0
    lines = out.splitlines()
    assert lines[0].startswith("# config: ")
    config = json.loads(lines[0][len("# config: "):])
    assert config["theta1"] == "0:1.5708:16" and config["M"] == "2"
    assert lines[2] == "theta1,theta2,M,case,a,F_closed,F_quadrature,residual"
    rows = [line.split(",") for line in lines[3:]]
    assert len(rows) == 256
    for row in rows:
        assert abs(float(row[5]) - float(row[6])) < 1e-9
        assert float(row[7]) < 1e-9


def test_sweep_skips_inverted_pairs(capsys):
    code, out, _ = run(capsys, "sweep", "--theta1", "0:2:3", "--theta2", "0.5:1.5:2", "-M", "1,2")
    assert code == 0
    doc = json.loads(out)
    # theta1 = 2 exceeds both theta2 values; theta1 = 1 exceeds 0.5
    assert doc["skipped"] == 3
    assert len(doc["rows"]) == 3 * 2


def test_constants_in_degrees(capsys):
    code, out, _ = run(capsys, "constants", "--theta1", "90", "--theta2", "90", "--degrees")
    doc = json.loads(out)
    assert code == 0
    assert doc["K"] == pytest.approx(0, abs=1e-15)
    assert doc["P"] == pytest.approx(0.5)


def test_constants_csv(capsys):
    code, out, _ = run(capsys, "constants", "--theta1", "0", "--theta2", "3.14159265358979", "--format", "csv")
    header, values = out.splitlines()
    assert header == "theta1,theta2,K,P,Q,R,case,M"
    assert values.split(",")[-2:] == ["1", "1"]


def test_fidelity_command(capsys):
    code, out, _ = run(capsys, "fidelity", "--theta1", "0.5", "--theta2", "2", "-M", "2", "--theta", "1.2",
                       "--nodes", "32", "--phi-nodes", "32")
    doc = json.loads(out)
    assert code == 0
    assert doc["pointwise_residual"] < 1e-10
    assert doc["average_residual"] < 1e-9


def test_oracle_command(capsys):
    code, out, _ = run(capsys, "oracle", "--theta1", "0", "--theta2", "3.1416", "-M", "2",
                       "--resolution", "0.05", "--paranoid")
    doc = json.loads(out)
    assert code == 0
    assert -5e-3 <= doc["residual_to_analytic"] <= 1e-9
    assert doc["paranoid"]["saturated_optimal"]


def test_oracle_coarse_warning(capsys):
    code, _, err = run(capsys, "oracle", "--theta1", "0", "--theta2", "1", "-M", "1", "--resolution", "0.1")
    assert code == 0 and "coarser" in err


def test_gate_state_chain_pipeline(tmp_path, capsys):
    gate = tmp_path / "gate.json"
    state = tmp_path / "state.json"
    chain = tmp_path / "chain.json"
    assert main(["optimize", "--theta1", "0.6", "--theta2", "2.5", "-M", "3", "--gate-out", str(gate)]) == 0
    assert main(["simulate", "--theta1", "0.6", "--theta2", "2.5", "-M", "3", "--gate", str(gate),
                 "--theta", "1.0", "--phi", "0.4", "-o", str(state)]) == 0
    assert main(["mps-build", "--state", str(state), "-o", str(chain)]) == 0
    capsys.readouterr()
    code, out, _ = run(capsys, "mps-verify", str(chain), "--reference", str(state))
    assert code == 0
    assert json.loads(out)["passed"]


def test_gate_branch_chain(tmp_path, capsys):
    gate = tmp_path / "gate.json"
    chain = tmp_path / "chain.json"
    main(["optimize", "--theta1", "0", "--theta2", "3.14159265358979", "-M", "3", "--gate-out", str(gate)])
    assert main(["mps-build", "--gate", str(gate), "--branch", "1", "-o", str(chain)]) == 0
    doc = ser.loads(chain.read_text())
    assert len(doc["sites"]) == 4


def test_exemplar_tampered_chain_fails(tmp_path, capsys):
    chain = tmp_path / "chain.json"
    ref = tmp_path / "ref.json"
    assert main(["mps-build", "--exemplar", "-M", "3", "--gamma", "0.6", "-o", str(chain)]) == 0
    ref.write_text(ser.dumps({"vector": ser._complex_list(expand_to_qubits(ExemplarState(3, 0.6).joint_state()))}))
    capsys.readouterr()
    assert run(capsys, "mps-verify", str(chain), "--reference", str(ref))[0] == 0
    doc = json.loads(chain.read_text())
    for key in ("V0", "V1"):
        doc["sites"][1][key] = [[[1.01 * x for x in z] for z in row] for row in doc["sites"][1][key]]
    chain.write_text(json.dumps(doc))
    code, out, err = run(capsys, "mps-verify", str(chain), "--reference", str(ref))
    assert code == 2
    assert "residual" in err
    assert json.loads(out)["max_residual"] == pytest.approx(0.0201, abs=1e-12)


def test_invalid_gate_file_exits_2(tmp_path, capsys):
    gate = tmp_path / "gate.json"
    gate.write_text(json.dumps({"m": 1, "anc_dim": 1, "A": [[[2, 0]], [[0, 0]], [[1, 0]], [[0, 0]]]}))
    code, _, err = run(capsys, "fidelity", "--theta1", "0", "--theta2", "1", "-M", "1", "--gate", str(gate))
    assert code == 2 and "normalization_branch0" in err
    gate.write_text(json.dumps({"m": 1, "anc_dim": 1}))
    code, _, err = run(capsys, "simulate", "--theta1", "0", "--theta2", "1", "-M", "1", "--gate", str(gate))
    assert code == 2 and "gate.A" in err
    gate.write_text("{")
    assert run(capsys, "fidelity", "--theta1", "0", "--theta2", "1", "-M", "1", "--gate", str(gate))[0] == 2


def test_gate_m_mismatch(tmp_path, capsys):
    gate = tmp_path / "gate.json"
    main(["optimize", "--theta1", "0", "--theta2", "1", "-M", "2", "--gate-out", str(gate)])
    code, _, err = run(capsys, "fidelity", "--theta1", "0", "--theta2", "1", "-M", "3", "--gate", str(gate))
    assert code == 2 and "gate.m" in err


def test_three_level_ancilla_cannot_be_chained(tmp_path, capsys):
    gate = tmp_path / "gate.json"
    main(["optimize", "--theta1", "0.6011", "--theta2", "2.5207", "-M", "2", "--gate-out", str(gate)])
    code, _, err = run(capsys, "mps-build", "--gate", str(gate))
    assert code == 2 and "anc_dim" in err


@pytest.mark.parametrize("argv, field", [
    (["optimize", "--theta1", "0", "--theta2", "4", "-M", "2"], "--theta2"),
    (["optimize", "--theta1", "2", "--theta2", "1", "-M", "2"], "--theta1"),
    (["optimize", "--theta1", "x", "--theta2", "1", "-M", "2"], "--theta1"),
    (["sweep", "--theta1", "0:1", "--theta2", "1", "-M", "2"], "--theta1"),
    (["oracle", "--theta1", "0", "--theta2", "1", "-M", "3", "--paranoid"], "--paranoid"),
    (["oracle", "--theta1", "0", "--theta2", "1", "-M", "1", "--resolution", "0.03"], "--resolution"),
    (["mps-build", "--exemplar", "-M", "4", "--gamma", "0.5"], "--exemplar"),
    (["mps-build"], "mps-build"),
    (["simulate", "--theta1", "0", "--theta2", "1", "-M", "1", "--format", "csv"], "--format"),
])
def test_usage_errors_exit_1(capsys, argv, field):
    code, _, err = run(capsys, *argv)
    assert code == 1
    assert field in err
    assert len(err.strip().splitlines()) == 1


@pytest.mark.parametrize("argv", [
    ["optimize", "--bogus"],
    ["frobnicate"],
    ["optimize", "--theta1", "0", "--theta2", "1", "-M", "0"],
    ["fidelity", "--theta1", "0", "--theta2", "1", "-M", "1", "--nodes", "-3"],
])
def test_argparse_errors_exit_1(argv):
    with pytest.raises(SystemExit) as exc:
        main(argv)
    assert exc.value.code == 1


def test_missing_reference_file(tmp_path, capsys):
    code, _, err = run(capsys, "mps-verify", str(tmp_path / "nope.json"), "--reference", "x.json")
    assert code == 1 and "chain" in err


def test_angle_snapping():
    # values typed to a few digits past pi are accepted and clamped
    assert main(["constants", "--theta1", "-0.0005", "--theta2", "3.1416", "-o", "/dev/null"]) == 0


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "beltnot", "constants", "--theta1", "0", "--theta2", "1"],
                         capture_output=True, text=True, check=True).stdout
    assert json.loads(out)["K"] == pytest.approx(1 + math.cos(1) + math.cos(1) ** 2)
