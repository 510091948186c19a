import csv
import io
import json
import subprocess
import sys

import numpy as np
import pytest

from wignerlab import cli, experiments, states
from wignerlab.phase_space import density_of

from conftest import table_to_grid

SINGLET = '{"named":{"name":"bell","kind":"psi_minus"}}'


def werner_spec(x):
    return json.dumps({"named": {"name": "werner", "x": x}})


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def grid_from_text(text):
    rows = [line.split("|")[1].split() for line in text.splitlines() if "|" in line]
    return table_to_grid(np.array(rows, dtype=float))


def test_wf_singlet_text(capsys):
    code, out, _ = run(capsys, "wf", "--state", SINGLET)
    assert code == 0
    q = 0.125
    expected = table_to_grid([[-q, q, q, -q], [q, q, q, q], [q, q, q, q], [-q, q, q, -q]])
    np.testing.assert_array_equal(grid_from_text(out), expected)
    assert "-0.125000" in out and "(q1,q2)" in out and "(p1,p2)" in out
    labels = [line.split("|")[0].strip() for line in out.splitlines() if "|" in line]
    assert labels == ["11", "10", "01", "00"]


def test_wf_uniform(capsys):
    _, out, _ = run(capsys, "wf", "--state", werner_spec(0.0))
    assert np.all(grid_from_text(out) == 0.0625)


def test_wf_phi_plus_matrix(capsys, tmp_path):
    path = tmp_path / "phi.json"
    path.write_text(json.dumps(states.state_to_spec(states.bell("phi_plus"))))
    _, out, _ = run(capsys, "wf", "--state", str(path))
    q = 0.125
    expected = table_to_grid([[q, q, q, q], [q, -q, -q, q], [q, -q, -q, q], [q, q, q, q]])
    np.testing.assert_array_equal(grid_from_text(out), expected)


def test_wf_one_qubit(capsys):
    _, out, _ = run(capsys, "wf", "--state", '{"named":{"name":"coherent","re":0,"im":0}}')
    np.testing.assert_array_equal(grid_from_text(out), table_to_grid([[0.5, 0], [0.5, 0]]))


@pytest.mark.parametrize("spec", [SINGLET, werner_spec(0.37), '{"named":{"name":"coherent","re":0.2,"im":-1}}'])
def test_wf_json_round_trip(capsys, spec):
    code, out, _ = run(capsys, "wf", "--state", spec, "--format", "json")
    payload = json.loads(out)
    rho = states.parse_state(spec)
    rec = density_of(payload["wigner"])
    np.testing.assert_allclose(rec.matrix, rho.mat, atol=1e-9)
    assert payload["index_order"].startswith("8*q1" if rho.n_qubits == 2 else "2*q")
    assert len(payload["char"]) == len(payload["wigner"])
    assert payload["char"][0] == pytest.approx(1)
    assert payload["purity"] == pytest.approx(np.trace(rho.mat @ rho.mat).real)


def test_wf_csv(capsys):
    _, out, _ = run(capsys, "wf", "--state", SINGLET, "--format", "csv")
    lines = out.splitlines()
    assert lines[0].startswith("# wignerlab-wf/1")
    rows = list(csv.DictReader(io.StringIO("\n".join(lines[1:]))))
    assert len(rows) == 16 and float(rows[0]["wigner"]) == pytest.approx(-0.125)


def test_criteria_werner_half(capsys):
    code, out, _ = run(capsys, "criteria", "--state", werner_spec(0.5))
    assert code == 0
    lines = {line.split()[0]: line for line in out.splitlines()}
    assert "Entangled" in lines["oracle"]
    assert "Entangled" in lines["lur_generalized"] and "1.250000e-01" in lines["lur_generalized"]
    assert "Inconclusive" in lines["dual_nonnegativity"]
    assert list(lines) == ["negativity", "dual_nonnegativity", "lur_trace", "lur_generalized", "gup_pt", "oracle"]


@pytest.mark.parametrize("spec", [werner_spec(0.2), '{"named":{"name":"maximally_mixed","dim":4}}'])
def test_criteria_separable(capsys, spec):
    code, out, _ = run(capsys, "criteria", "--state", spec, "--format", "json")
    payload = json.loads(out)
    assert code == 0
    assert payload["oracle"]["decision"] == "separable"
    by_name = {v["criterion"]: v["decision"] for v in payload["criteria"]}
    assert by_name["dual_nonnegativity"] == "separable"


def test_criteria_contradiction_exit_code(capsys):
    from test_criteria import DUAL_COUNTEREXAMPLE_IM, DUAL_COUNTEREXAMPLE_RE

    m = np.array(DUAL_COUNTEREXAMPLE_RE) + 1j * np.array(DUAL_COUNTEREXAMPLE_IM)
    spec = json.dumps(states.state_to_spec(m / np.trace(m).real))
    code, out, _ = run(capsys, "criteria", "--state", spec)
    assert code == 2
    assert "CONTRADICTION: dual_nonnegativity says Separable, ppt_oracle says Entangled" in out


def test_criteria_rejects_one_qubit(capsys):
    code, _, err = run(capsys, "criteria", "--state", '{"named":{"name":"basis","bits":"0"}}')
    assert code == 1 and "two-qubit" in err


def test_witness_examples(capsys):
    _, out, _ = run(capsys, "witness", "--state", werner_spec(1.0), "--format", "json")
    rows = {r["witness"]: r for r in json.loads(out)["witnesses"]}
    assert rows["phi_plus"]["overlap"] == pytest.approx(-0.125, abs=1e-12)
    assert rows["phi_plus"]["certifies"]
    assert len(rows) == 4 + cli.DEFAULT_SAMPLES["witness"]
    _, out, _ = run(capsys, "witness", "--state", werner_spec(1 / 3), "--format", "json")
    rows = {r["witness"]: r for r in json.loads(out)["witnesses"]}
    assert abs(rows["phi_plus"]["overlap"]) < 1e-12
    assert not rows["phi_plus"]["certifies"]


def test_witness_separable_never_certifies(capsys):
    rho = states.random_separable(np.random.default_rng(11))
    spec = json.dumps(states.state_to_spec(rho))
    code, out, _ = run(capsys, "witness", "--state", spec, "--samples", "100", "--seed", "5", "--format", "json")
    rows = json.loads(out)["witnesses"]
    assert code == 0 and len(rows) == 104
    assert not any(r["certifies"] for r in rows)


def test_witness_invalid_skipped(capsys):
    ws = json.dumps([{"named": {"name": "bell", "kind": "phi_plus"}}, {"matrix": {"re": [[2, 0], [0, -1]]}}, {"bogus": 1}])
    code, out, err = run(capsys, "witness", "--state", SINGLET, "--witnesses", ws, "--format", "json")
    payload = json.loads(out)
    assert code == 0
    assert [r["witness"] for r in payload["witnesses"]] == ["witness[0]"]
    assert [s["witness"] for s in payload["skipped"]] == ["witness[1]", "witness[2]"]
    assert "skipping witness[1]" in err


def test_witness_file(capsys, tmp_path):
    path = tmp_path / "w.json"
    path.write_text(json.dumps([{"named": {"name": "bell", "kind": "phi_plus"}}]))
    code, out, _ = run(capsys, "witness", "--state", SINGLET, "--witnesses", str(path), "--format", "csv")
    assert code == 0
    name, overlap, certifies = out.splitlines()[2].split(",")
    assert name == "witness[0]" and float(overlap) == pytest.approx(-0.125) and certifies == "true"


def test_batch_deterministic_csv(capsys, tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert cli.main(["batch", "--sampler", "mixed", "--samples", "1000", "--seed", "1", "--out", str(a)]) == 0
    assert cli.main(["batch", "--sampler", "mixed", "--samples", "1000", "--seed", "1", "--out", str(b), "--workers", "3"]) == 0
    data = a.read_bytes()
    assert data == b.read_bytes()
    assert b"\r" not in data
    lines = data.decode("utf-8").splitlines()
    assert lines[0].startswith(f"# {experiments.BATCH_SCHEMA} ")
    assert lines[1].split(",") == list(experiments.BATCH_COLUMNS)
    assert len(lines) == 1002


def test_batch_seed_env_fallback(capsys, monkeypatch):
    _, explicit, _ = run(capsys, "batch", "--sampler", "pure", "--samples", "5", "--seed", "42")
    monkeypatch.setenv("WIGNERLAB_SEED", "42")
    _, from_env, _ = run(capsys, "batch", "--sampler", "pure", "--samples", "5")
    assert explicit == from_env
    monkeypatch.setenv("WIGNERLAB_SEED", "43")
    _, other, _ = run(capsys, "batch", "--sampler", "pure", "--samples", "5")
    assert other != explicit
    monkeypatch.setenv("WIGNERLAB_SEED", "banana")
    code, _, _ = run(capsys, "batch", "--sampler", "pure", "--samples", "5")
    assert code == 1


def test_batch_werner_sweep(capsys):
    code, out, _ = run(capsys, "batch", "--sampler", "werner-sweep", "--samples", "101", "--format", "json")
    payload = json.loads(out)
    assert code == 0
    xs = [r["werner_x"] for r in payload["records"]]
    onset = next(x for x, r in zip(xs, payload["records"]) if r["lur_generalized"] == "entangled")
    assert onset == min(x for x in xs if x > 1 / 3)
    assert payload["summary"]["contradictions"] == 0
    assert payload["summary"]["werner_detection"]["onset"]["ppt_oracle"] == pytest.approx(0.34)


def test_batch_contradiction_serializes_state(capsys):
    code, out, err = run(capsys, "batch", "--sampler", "separable", "--samples", "10000", "--seed", "7")
    assert code == 2 and out == ""
    state = err.splitlines()[-1]
    # the serialized state reproduces the contradiction on its own
    code, out, _ = run(capsys, "criteria", "--state", state)
    assert code == 2 and "CONTRADICTION" in out


def test_batch_text_summary(capsys):
    code, out, _ = run(capsys, "batch", "--sampler", "pure", "--samples", "50", "--seed", "3", "--format", "text")
    assert code == 0
    assert "contradictions: 0" in out and "verdict counts:" in out


@pytest.mark.parametrize(
    "argv",
    [
        ["wf", "--state", "{bad json"],
        ["wf", "--state", werner_spec(1.5)],
        ["wf", "--state", "/no/such/file.json"],
        ["batch", "--sampler", "pure", "--samples", "0"],
        ["batch", "--sampler", "pure", "--tol", "0"],
        ["batch", "--sampler", "pure", "--seed", "-1"],
        ["batch", "--sampler", "nope"],
        ["wf"],
        ["frobnicate"],
    ],
)
def test_input_errors_exit_1(capsys, argv):
    # argparse usage errors raise SystemExit; everything else returns the code
    try:
        code = cli.main(argv)
    except SystemExit as exc:
        code = exc.code
    assert code == 1
    assert capsys.readouterr().err


def test_state_error_names_field(capsys):
    code, _, err = run(capsys, "wf", "--state", '{"named":{"name":"werner"}}')
    assert code == 1 and "state.named.x" in err
    code, _, err = run(capsys, "wf", "--state", '{"matrix":{"re":[[2,0],[0,-1]]}}')
    assert code == 1 and "positive-semidefinite" in err


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "wignerlab", "wf", "--state", werner_spec(0.0), "--format", "json"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["wigner"] == [0.0625] * 16
    proc = subprocess.run([sys.executable, "-m", "wignerlab", "bogus"], capture_output=True, check=False)
    assert proc.returncode == 1
