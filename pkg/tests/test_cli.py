import json
import subprocess
import sys

import pytest

from postselect_ft.cli import main


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def files(tmp_path):
    paths = {}
    docs = {
        "vertex": {"n": 2, "mode": "rational", "probs": {"00": "9/10", "10": "1/10"}},
        "member": {"n": 2, "mode": "float", "probs": {"00": "0.64", "10": "0.16", "01": "0.16", "11": "0.04"}},
        "counter": {"mode": "rational", "IIII": "99/100", "XIXI": "1/100"},
        "malformed": {"n": 2, "probs": {"00": "abc"}},
        "unnormalized": {"n": 2, "probs": {"00": 0.5}},
    }
    for name, doc in docs.items():
        p = tmp_path / f"{name}.json"
        p.write_text(json.dumps(doc))
        paths[name] = str(p)
    bad = tmp_path / "broken.json"
    bad.write_text("{not json")
    paths["broken"] = str(bad)
    return paths


def test_check_vertex_member(files, capsys):
    code, out, _ = run(["check", files["vertex"], "--p", "1/10,1/5"], capsys)
    assert code == 0
    assert json.loads(out)["member"] is True


def test_check_counterexample(files, capsys):
    code, out, _ = run(["check", files["counter"], "--p", "1/10"], capsys)
    v = json.loads(out)
    assert code == 1
    assert v["member"] is False and v["worst_x"].count("1") == 1


@pytest.mark.parametrize("name", ["malformed", "unnormalized", "broken"])
def test_check_bad_input_exit_2(files, capsys, name):
    code, out, err = run(["check", files[name], "--p", "0.1"], capsys)
    assert code == 2 and out == "" and err.startswith("error:")


def test_check_missing_file(capsys):
    code, _, err = run(["check", "/nonexistent.json", "--p", "0.1"], capsys)
    assert code == 2 and "cannot read" in err


def test_check_wrong_rate_count(files, capsys):
    code, _, _ = run(["check", files["vertex"], "--p", "0.1,0.2,0.3"], capsys)
    assert code == 2


def test_decompose_vertex_is_delta(files, capsys):
    code, out, _ = run(["decompose", files["vertex"], "--p", "1/10,1/5"], capsys)
    assert code == 0
    assert json.loads(out) == {"p": ["1/10", "1/5"], "coeffs": {"10": "1"}, "member": True}


def test_decompose_member_nonnegative(files, capsys):
    code, out, _ = run(["decompose", files["member"], "--p", "0.3"], capsys)
    d = json.loads(out)
    assert code == 0 and d["member"]
    vals = [float(v) for v in d["coeffs"].values()]
    assert min(vals) >= 0 and abs(sum(vals) - 1) < 1e-12


def test_decompose_non_member(files, capsys):
    code, out, _ = run(["decompose", files["counter"], "--p", "1/10"], capsys)
    d = json.loads(out)
    assert code == 1 and d["member"] is False
    assert any(v.startswith("-") for v in d["coeffs"].values())


def test_simulate_teleport_accept(capsys):
    code, out, _ = run(["simulate", "teleport-cnot", "--eta", "0"], capsys)
    assert code == 0
    assert json.loads(out)["exact"]["accept_probability"] == "0.0625"
    code, out, _ = run(["simulate", "teleport-cnot", "--eta", "0", "--mode", "rational"], capsys)
    assert json.loads(out)["exact"]["accept_probability"] == "1/16"


def test_simulate_bell_prep_noiseless(capsys):
    code, out, _ = run(["simulate", "bell-prep", "--eta", "0"], capsys)
    d = json.loads(out)
    assert code == 0
    assert float(d["exact"]["accept_probability"]) == 1
    assert d["quotient"] == {"IIII": "1.0"}


def test_simulate_monte_carlo_block(capsys):
    argv = ["simulate", "bell-prep", "--eta", "0.01", "--mc-shots", "200000", "--seed", "7"]
    code, out, _ = run(argv, capsys)
    mc = json.loads(out)["monte_carlo"]
    assert code == 0
    assert mc["accept_ok"] and mc["tv_ok"] and mc["retries_ok"]
    assert mc["shots"] == 200000 and mc["seed"] == 7


def test_simulate_rejects_bad_eta(capsys):
    code, _, err = run(["simulate", "bell-prep", "--eta", "1.5"], capsys)
    assert code == 2 and "eta" in err


def test_sweep_csv_and_summary(capsys, tmp_path):
    code, out, _ = run(["sweep", "--eta-min", "0", "--eta-max", "0.3", "--steps", "31"], capsys)
    lines = out.strip().splitlines()
    assert code == 0
    assert lines[0] == "eta_in,eta_out,accept_prob,member,expected_retries"
    assert lines[1] == "0,0,1,true,1"
    assert len(lines) == 33
    assert lines[-1].startswith("threshold_estimate=")
    assert float(lines[-1].split("=")[1]) > 0

    csv_path = tmp_path / "sweep.csv"
    code, out, _ = run(["sweep", "--steps", "31", "--out", str(csv_path)], capsys)
    assert out.strip().splitlines() == [lines[-1]]
    assert csv_path.read_text().splitlines() == lines[:-1]


def test_sweep_adversarial_no_injections(capsys):
    argv = ["sweep", "--steps", "7", "--split", "adversarial", "--no-injections"]
    code, out, _ = run(argv, capsys)
    rows = out.strip().splitlines()[2:-1]
    assert code == 0
    assert all(r.split(",")[3] == "false" and r.split(",")[1] == "inf" for r in rows)


def test_sweep_invalid_grid(capsys):
    code, _, err = run(["sweep", "--eta-min", "0.3", "--eta-max", "0.1"], capsys)
    assert code == 2 and err


def test_oracle_lp(files, capsys):
    code, out, _ = run(["oracle", "lp-check", files["counter"], "--p", "0.1"], capsys)
    d = json.loads(out)
    assert code == 1 and d["verdict"] == "infeasible" and "hyperplane" in d["certificate"]
    code, out, _ = run(["oracle", "lp-check", files["vertex"], "--p", "0.1,0.2"], capsys)
    assert code == 0 and json.loads(out)["verdict"] == "feasible"


@pytest.mark.parametrize("a,b", [(0, 0), (0, 1), (1, 0), (1, 1)])
def test_oracle_statevec_teleport(capsys, a, b):
    code, out, _ = run(["oracle", "statevec", "teleport-cnot", "--inputs", f"0={a},1={b}"], capsys)
    d = json.loads(out)
    assert code == 0
    assert d["accept_probability"] == 0.0625 and d["fidelity"] == 1.0
    assert d["expected"] == f"{a}{a ^ b}"


def test_oracle_statevec_fault(capsys):
    code, out, _ = run(["oracle", "statevec", "bell-prep", "--faults", "A=XI"], capsys)
    d = json.loads(out)
    assert code == 0 and set(d["amplitudes"]) == {"1000", "0111"}
    code, _, _ = run(["oracle", "statevec", "bell-prep", "--faults", "A=ZZ"], capsys)
    assert code == 2


def test_unknown_subcommand_exit_2(capsys):
    assert main(["frobnicate"]) == 2


def test_module_entry_point_is_deterministic(tmp_path):
    argv = [sys.executable, "-m", "postselect_ft", "simulate", "bell-prep", "--eta", "0.02",
            "--mc-shots", "50000", "--seed", "3"]
    a = subprocess.run(argv, capture_output=True, text=True, check=True)
    b = subprocess.run(argv + ["--workers", "2"], capture_output=True, text=True, check=True)
    assert a.stdout == b.stdout
    sweep = [sys.executable, "-m", "postselect_ft", "sweep", "--steps", "11"]
    assert (subprocess.run(sweep, capture_output=True, text=True).stdout
            == subprocess.run(sweep + ["--workers", "3"], capture_output=True, text=True).stdout)
