"""End-to-end CLI behavior: subcommands, exit codes, files, determinism.

Everything runs in-process through main(argv) so coverage tooling sees it
and the tests stay fast; the acceptance suite exercises the installed
console script separately.
"""

import json
import os

import numpy as np
import pytest

import gramrd.cli as cli
from gramrd.verify import CheckResult, SuiteReport


def run(argv, tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    return cli.main([str(a) for a in argv])


# -- bounds ------------------------------------------------------------------


def test_bounds_single_case_csv(tmp_path, monkeypatch, capsys):
    rc = run(["bounds", "--n", 30, "--d", 40, "--D", "1e-3",
              "--output", "b.csv"], tmp_path, monkeypatch)
    assert rc == 0
    text = (tmp_path / "b.csv").read_text()
    body = [ln for ln in text.splitlines() if not ln.startswith("#")]
    header = body[0].split(",")
    assert header[:6] == ["bound", "regime", "n", "d", "D", "prior"]
    names = {ln.split(",")[0] for ln in body[1:]}
    assert names == {"large_dim_lower_bound", "shannon_lower_bound_gram"}
    err = capsys.readouterr().err
    assert "tightest" in err


def test_bounds_grid_json(tmp_path, monkeypatch):
    (tmp_path / "g.csv").write_text("n,d,D\n40,2,1e-4\n10,30,1e-3\n")
    rc = run(["bounds", "--grid", "g.csv", "--format", "json",
              "--output", "b.ndjson"], tmp_path, monkeypatch)
    assert rc == 0
    lines = (tmp_path / "b.ndjson").read_text().strip().splitlines()
    recs = [json.loads(ln) for ln in lines]
    assert recs[0]["record"] == "provenance"
    kinds = {r["bound_name"] for r in recs[1:]}
    assert "small_dim_lower_bound" not in kinds  # c*=0.01: d=2 > 0.4
    assert {"middle_dim_lower_bound", "large_dim_lower_bound",
            "shannon_lower_bound_gram"} <= kinds


def test_bounds_constants_flags(tmp_path, monkeypatch):
    rc = run(["bounds", "--n", 100, "--d", 1, "--D", "1e-5",
              "--c-star", 0.05, "--C0", 8, "--c1", 0.25,
              "--output", "b.csv"], tmp_path, monkeypatch)
    assert rc == 0
    text = (tmp_path / "b.csv").read_text()
    assert "small_dim_lower_bound" in text


def test_bounds_rejects_bad_dims(tmp_path, monkeypatch):
    assert run(["bounds", "--n", 0, "--d", 2, "--D", 0.1], tmp_path, monkeypatch) == 2
    assert run(["bounds", "--n", 2, "--d", 2, "--D", -1.0], tmp_path, monkeypatch) == 2


# -- verify ------------------------------------------------------------------


def test_verify_pass_exit_zero(tmp_path, monkeypatch, capsys):
    rc = run(["verify", "--suite", "specfun-sandwich", "--format", "json",
              "--output", "v.ndjson"], tmp_path, monkeypatch)
    assert rc == 0
    assert "PASS" in capsys.readouterr().err
    recs = [json.loads(ln) for ln in (tmp_path / "v.ndjson").read_text().splitlines()]
    assert recs[0]["record"] == "provenance"
    assert any(r.get("record") == "suite-summary" for r in recs)


def test_verify_failing_suite_exit_one(tmp_path, monkeypatch, capsys):
    bad = SuiteReport(
        suite="specfun-sandwich", trials=1, seed=0,
        checks=(CheckResult(name="broken", passed=False, observed=1.0,
                            expected=0.0, tolerance=0.0, detail="forced"),),
    )
    monkeypatch.setattr(cli, "verify_inequality_suite", lambda *a, **k: bad)
    rc = run(["verify", "--suite", "specfun-sandwich"], tmp_path, monkeypatch)
    assert rc == 1
    assert "FAIL" in capsys.readouterr().err


def test_verify_unknown_suite_exit_two(tmp_path, monkeypatch):
    assert run(["verify", "--suite", "nope"], tmp_path, monkeypatch) == 2


def test_verify_zero_trials_exit_two(tmp_path, monkeypatch):
    assert run(["verify", "--suite", "gram-moments", "--trials", 0],
               tmp_path, monkeypatch) == 2


# -- oracle ------------------------------------------------------------------


def test_oracle_requires_kind_arguments(tmp_path, monkeypatch):
    # quantize without n/d/eta is a usage error
    assert run(["oracle", "--kind", "quantize"], tmp_path, monkeypatch) == 2
    assert run(["oracle", "--kind", "wishart-entropy", "--n", 5, "--d", 3,
                "--samples", 1000], tmp_path, monkeypatch) == 2  # d < n


def test_oracle_ba_binary(tmp_path, monkeypatch):
    rc = run(["oracle", "--kind", "ba-binary", "--p", 0.5, "--D", 0.1,
              "--output", "o.csv"], tmp_path, monkeypatch)
    assert rc == 0
    body = [ln for ln in (tmp_path / "o.csv").read_text().splitlines()
            if not ln.startswith("#")]
    cols = body[0].split(",")
    row = dict(zip(cols, body[1].split(",")))
    assert abs(float(row["rate_nats"]) - 0.36806420716849707) < 1e-3
    assert row["converged"] == "true"


def test_oracle_wishart_entropy(tmp_path, monkeypatch):
    rc = run(["oracle", "--kind", "wishart-entropy", "--n", 2, "--d", 5,
              "--samples", 60000, "--seed", 3, "--format", "json",
              "--output", "w.ndjson"], tmp_path, monkeypatch)
    assert rc == 0
    recs = [json.loads(ln) for ln in (tmp_path / "w.ndjson").read_text().splitlines()]
    point = recs[1]
    assert abs(point["z_score"]) < 5.0
    assert point["closed_form_nats"] == pytest.approx(1.9822346420314437, rel=1e-12)


def test_oracle_quantize_levels_column(tmp_path, monkeypatch):
    rc = run(["oracle", "--kind", "quantize", "--n", 10, "--d", 4, "--eta", 0.5,
              "--trials", 30, "--output", "q.csv"], tmp_path, monkeypatch)
    assert rc == 0
    body = [ln for ln in (tmp_path / "q.csv").read_text().splitlines()
            if not ln.startswith("#")]
    row = dict(zip(body[0].split(","), body[1].split(",")))
    assert row["levels"] == "13"  # 2*floor(6/(2*0.5))+1


# -- phase-diagram -----------------------------------------------------------


GRID = "n,d,p\n24,2,0.4\n24,10,0.4\n"


def test_phase_diagram_writes_pair_of_files(tmp_path, monkeypatch, capsys):
    (tmp_path / "g.csv").write_text(GRID)
    rc = run(["phase-diagram", "--grid", "g.csv", "--trials", 2, "--seed", 7,
              "--samples", 20000, "--output", "run.csv"], tmp_path, monkeypatch)
    assert rc == 0
    out = capsys.readouterr().out
    assert "run.records.csv" in out and "run.summary.json" in out
    recs = (tmp_path / "run.records.csv").read_text()
    assert recs.count("spectral-topd") == 4  # 2 points x 2 trials
    summ = [json.loads(ln) for ln in
            (tmp_path / "run.summary.json").read_text().splitlines()]
    assert summ[0]["record"] == "provenance"
    assert len([r for r in summ if r.get("record") == "summary"]) == 2


def test_phase_diagram_default_stem(tmp_path, monkeypatch):
    (tmp_path / "g.csv").write_text(GRID)
    rc = run(["phase-diagram", "--grid", "g.csv", "--trials", 1, "--seed", 1,
              "--samples", 20000], tmp_path, monkeypatch)
    assert rc == 0
    assert (tmp_path / "phase-diagram.records.csv").exists()
    assert (tmp_path / "phase-diagram.summary.json").exists()


def test_phase_diagram_byte_identical_rerun(tmp_path, monkeypatch):
    (tmp_path / "g.csv").write_text(GRID)
    argv = ["phase-diagram", "--grid", "g.csv", "--trials", 2, "--seed", 3,
            "--samples", 20000, "--output", "det.csv"]
    assert run(argv, tmp_path, monkeypatch) == 0
    first = (tmp_path / "det.records.csv").read_bytes()
    first_sum = (tmp_path / "det.summary.json").read_bytes()
    assert run(argv, tmp_path, monkeypatch) == 0
    assert (tmp_path / "det.records.csv").read_bytes() == first
    assert (tmp_path / "det.summary.json").read_bytes() == first_sum


def test_phase_diagram_timings_flag_breaks_zeroing_only(tmp_path, monkeypatch):
    (tmp_path / "g.csv").write_text(GRID)
    base = ["phase-diagram", "--grid", "g.csv", "--trials", 1, "--seed", 3,
            "--samples", 20000]
    assert run(base + ["--output", "a.csv"], tmp_path, monkeypatch) == 0
    assert run(base + ["--output", "b.csv", "--timings"], tmp_path, monkeypatch) == 0
    a_rows = [ln for ln in (tmp_path / "a.records.csv").read_text().splitlines()
              if not ln.startswith("#")][1:]
    b_rows = [ln for ln in (tmp_path / "b.records.csv").read_text().splitlines()
              if not ln.startswith("#")][1:]
    a_rt = {ln.rsplit(",", 1)[-1] for ln in a_rows}
    b_rt = [float(ln.rsplit(",", 1)[-1]) for ln in b_rows]
    assert a_rt == {"0"}
    assert any(v > 0.0 for v in b_rt)
    # all other columns identical
    assert [ln.rsplit(",", 1)[0] for ln in a_rows] == [ln.rsplit(",", 1)[0] for ln in b_rows]


def test_phase_diagram_plot_written(tmp_path, monkeypatch):
    (tmp_path / "g.csv").write_text(GRID)
    rc = run(["phase-diagram", "--grid", "g.csv", "--trials", 1, "--seed", 1,
              "--samples", 20000, "--output", "pp.csv", "--plot"],
             tmp_path, monkeypatch)
    assert rc == 0
    png = tmp_path / "pp.png"
    assert png.exists()
    assert png.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"


def test_phase_diagram_bad_grid_column(tmp_path, monkeypatch):
    (tmp_path / "g.csv").write_text("n,k,p\n10,2,0.5\n")
    assert run(["phase-diagram", "--grid", "g.csv", "--trials", 1],
               tmp_path, monkeypatch) == 2


# -- cross-cutting ----------------------------------------------------------


def test_config_file_provides_defaults_cli_wins(tmp_path, monkeypatch):
    (tmp_path / "c.cfg").write_text("n=30\nd=40\nD=1e-3\n")
    rc = run(["bounds", "--config", "c.cfg", "--d", 50, "--output", "b.csv"],
             tmp_path, monkeypatch)
    assert rc == 0
    text = (tmp_path / "b.csv").read_text()
    assert "# param.d=50" in text      # explicit flag wins
    assert "# param.n=30" in text      # config fills the rest


def test_io_error_exit_three(tmp_path, monkeypatch):
    rc = run(["bounds", "--n", 3, "--d", 4, "--D", 0.1,
              "--output", "no/such/dir/x.csv"], tmp_path, monkeypatch)
    assert rc == 3


def test_internal_assertion_exit_four(tmp_path, monkeypatch):
    def boom(*a, **k):
        raise AssertionError("forced internal failure")

    monkeypatch.setattr(cli, "verify_inequality_suite", boom)
    rc = run(["verify", "--suite", "gram-moments", "--trials", 100],
             tmp_path, monkeypatch)
    assert rc == 4


def test_usage_error_exit_two(tmp_path, monkeypatch):
    with pytest.raises(SystemExit) as exc:
        run(["bounds", "--frobnicate"], tmp_path, monkeypatch)
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc2:
        run(["no-such-subcommand"], tmp_path, monkeypatch)
    assert exc2.value.code == 2


def test_stdout_when_no_output_file(tmp_path, monkeypatch, capsys):
    rc = run(["bounds", "--n", 4, "--d", 8, "--D", 0.01], tmp_path, monkeypatch)
    assert rc == 0
    out = capsys.readouterr().out
    assert out.startswith("# gramrd-csv schema=v1")
