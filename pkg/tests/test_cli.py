import csv
import json
import math

import numpy as np
import pytest

from dsqs import cli, kernels


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_overlap_fig1b_grid(capsys):
    code, out, _ = run(capsys, "overlap", "--n-dim", "17", "--level", "0", "--squeeze", "2.23606797749979")
    assert code == 0
    payload = json.loads(out)
    assert payload["N"] == 17 and payload["kind"] == "overlap" and len(payload["values"]) == 289
    vals = np.array(payload["values"])[:, 0]
    assert abs(vals.sum() - 17) < 1e-8


def test_squeeze_flag_variants(capsys):
    _, a, _ = run(capsys, "overlap", "--n-dim", "5", "--squeeze-sq", "5")
    _, b, _ = run(capsys, "overlap", "--n-dim", "5", "--squeeze", str(math.sqrt(5)))
    assert json.loads(a)["values"] == json.loads(b)["values"]
    code, _, err = run(capsys, "overlap", "--squeeze", "2", "--squeeze-sq", "4")
    assert code == 1 and "only one" in err
    _, c, _ = run(capsys, "overlap", "--n-dim", "5", "--squeeze-invsq", "5")
    assert abs(json.loads(c)["s"] - 1 / math.sqrt(5)) < 1e-15


def test_husimi_on_mixed_state_is_flat(capsys):
    code, out, _ = run(capsys, "husimi", "--n-dim", "5", "--squeeze", "2", "--state", '{"type":"maximally_mixed"}', "--format", "csv")
    assert code == 0
    rows = list(csv.DictReader(out.splitlines()))
    assert len(rows) == 25 and all(abs(float(r["re"]) - 0.2) < 1e-12 for r in rows)


def test_wigner_matches_circuit_after_rounding(capsys, tmp_path):
    spec = '{"type":"mixture","terms":[{"weight":1,"state":{"type":"coherent","mu":1,"nu":0}},{"weight":2,"state":{"type":"fock","n":1}}]}'
    w, c = tmp_path / "w.json", tmp_path / "c.json"
    assert run(capsys, "wigner", "--state", spec, "--squeeze", "1.3", "--output", str(w))[0] == 0
    assert run(capsys, "circuit", "--state", spec, "--squeeze", "1.3", "--mode", "wigner", "--output", str(c))[0] == 0
    a, b = json.loads(w.read_text()), json.loads(c.read_text())
    assert b["source"] == "circuit" and b["synthesized_ft"] is True
    assert np.array_equal(np.round(np.array(a["values"]), 9) + 0.0, np.round(np.array(b["values"]), 9) + 0.0)


def test_state_file_argument(capsys, tmp_path):
    p = tmp_path / "state.json"
    p.write_text('{"type": "squeezed_vacuum", "s": 2.0}')
    code, out, _ = run(capsys, "charfunc", "--order", "-1", "--state", f"@{p}")
    assert code == 0 and json.loads(out)["kind"] == "characteristic"


def test_exit_codes(capsys, monkeypatch):
    assert run(capsys, "husimi", "--n-dim", "4")[0] == 1
    code, _, err = run(capsys, "husimi", "--state", '{"type": "fock", "n": }')
    assert code == 1 and "position 22" in err
    assert run(capsys, "nonsense")[0] == 1
    assert run(capsys, "entropy", "--scan", "1:2")[0] == 1

    def boom(*a, **k):
        raise kernels.IllConditionedKernelError(1, 1, 1e-14)

    monkeypatch.setattr(cli.phase_space, "quasi_distribution", boom)
    assert run(capsys, "pfunction")[0] == 2


def test_validate_exit_code(capsys, monkeypatch):
    code, out, _ = run(capsys, "validate", "fast")
    report = json.loads(out)
    assert code == 0 and report["passed"]
    names = {c["name"] for c in report["checks"]}
    assert {"Mehta Gram deviation s=1", "X(sqrt5) unitarity defect"} <= names
    monkeypatch.setattr(cli, "run_validation", lambda level, seed: {"passed": False, "checks": []})
    assert run(capsys, "validate", "fast")[0] == 3


def test_entropy_outputs(capsys):
    code, out, _ = run(capsys, "entropy", "--n-dim", "3", "--scan", "0.5:2:5", "--format", "csv")
    lines = out.splitlines()
    assert code == 0 and lines[0] == "s,E_joint,E_Q,E_R,E_cond_Q,E_cond_R,correlation" and len(lines) == 6
    code, out, _ = run(capsys, "entropy", "--n-dim", "3", "--min-ref", "B", "--min-value", "0.6")
    rep = json.loads(out)
    assert abs(rep["E_joint"] - 0.625948) < 5e-6 and rep["min_ref"] == "B"


def test_kernel_and_wavefunction(capsys, tmp_path, monkeypatch):
    cache = tmp_path / "cache.json"
    monkeypatch.setenv("DSQS_CACHE", str(cache))
    kernels.clear_cache()
    code, out, _ = run(capsys, "kernel", "--n-dim", "5", "--kind", "number", "--level", "2", "--route", "jet")
    assert code == 0 and json.loads(out)["n"] == 2
    assert cache.exists() and json.loads(cache.read_text())["tables"]
    code, out, _ = run(capsys, "wavefunction", "--n-dim", "5", "--level", "1", "--format", "csv")
    assert out.splitlines()[0] == "kappa,re,im" and len(out.splitlines()) == 6


def test_determinism(capsys):
    argv = ["circuit", "--n-dim", "3", "--shots", "200", "--seed", "5", "--state", '{"type":"coherent","mu":1,"nu":1}']
    assert run(capsys, *argv)[1] == run(capsys, *argv)[1]


def test_reproduce_targets(capsys, tmp_path):
    assert run(capsys, "reproduce", "fig1", "--output", str(tmp_path))[0] == 0
    grids = {}
    for n in (0, 1):
        for tag in ("s1", "s2_5", "sinv2_5"):
            rows = list(csv.DictReader((tmp_path / f"fig1_P{n}_{tag}.csv").read_text().splitlines()))
            grids[n, tag] = np.array([float(r["re"]) for r in rows]).reshape(17, 17)
        assert np.abs(grids[n, "s2_5"] - grids[n, "sinv2_5"].T).max() < 1e-11
        assert np.abs(grids[n, "s1"] - grids[n, "s1"].T).max() < 1e-11
    assert run(capsys, "reproduce", "fig3", "--output", str(tmp_path))[0] == 0
    head = (tmp_path / "fig3_scan.csv").read_text().splitlines()[0]
    assert head == "s,E_joint,E_Q,E_R,correlation"
    assert run(capsys, "reproduce", "entropy-table", "--output", str(tmp_path))[0] == 0
    rows = json.loads((tmp_path / "entropy_table.json").read_text())["rows"]
    assert [r["N"] for r in rows] == [3, 5, 7, 9] and max(r["deviation"] for r in rows) < 5e-6


def test_run_config_validation():
    with pytest.raises(cli.DomainError):
        cli.RunConfig("husimi", N=9, s=-1.0)
    with pytest.raises(cli.DomainError):
        cli.RunConfig("husimi", format="xml")
