import csv
import io
import json
import math
import subprocess
import sys

import numpy as np
import pytest

from rmt_gaps import cli
from rmt_gaps.specfun import erf


def run(argv, capsys):
    code = cli.main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_gap_prob_example(capsys):
    code, out, _ = run(["gap-prob", "--ensemble", "hermite", "--N", "1", "--geometry", "exterior",
                        "--s-grid", "0.2:3:15"], capsys)
    assert code == 0
    recs = rows(out)
    assert len(recs) == 15
    assert list(recs[0])[:3] == ["s", "E2", "est_error"]
    s = np.linspace(0.2, 3, 15)
    assert np.allclose([float(r["s"]) for r in recs], s, rtol=0, atol=1e-15)
    assert max(abs(float(r["E2"]) - erf(x)) for r, x in zip(recs, s)) < 1e-10


def test_factor_check_example(capsys):
    code, out, _ = run(["factor-check", "--ensemble", "hermite", "--N", "2", "--s", "0.8"], capsys)
    assert code == 0
    (rec,) = rows(out)
    assert abs(float(rec["lhs"]) - float(rec["rhs"])) < 1e-9
    assert abs(float(rec["diff"])) < 1e-9


def test_mc_example(capsys):
    argv = ["mc", "--ensemble", "jacobi", "--alpha", "0", "--beta", "0", "--N", "3",
            "--geometry", "jacobi-exterior", "--s", "0.9", "--samples", "100000", "--seed", "7"]
    code, out, _ = run(argv, capsys)
    assert code == 0
    (rec,) = rows(out)
    assert abs(float(rec["p_hat"]) - 0.9 ** 9) < 4 * float(rec["stderr"])
    assert rec["seed"] == "7" and rec["n_samples"] == "100000"
    # identical job, identical bytes
    assert run(argv, capsys)[1] == out


def test_ode_solve_json(capsys):
    code, out, _ = run(["ode-solve", "--ensemble", "jacobi", "--alpha", "1", "--beta", "1", "--N", "2",
                        "--geometry", "interior", "--s-grid", "0.1:0.9:5", "--format", "json"], capsys)
    assert code == 0
    recs = json.loads(out)
    assert len(recs) == 5
    assert {"s", "E2", "R", "Rtilde", "sigma"} <= set(recs[0])
    assert all(0 < r["E2"] <= 1 for r in recs)


def test_series_exact_fractions(capsys):
    code, out, _ = run(["series", "--N", "1", "--terms", "4", "--s", "0.1"], capsys)
    assert code == 0
    recs = rows(out)
    assert [r["coefficient"] for r in recs] == ["1/2", "-1/3", "4/45", "-8/945"]
    assert [int(r["power"]) for r in recs] == [-1, 1, 3, 5]


def test_scaling_commands(capsys):
    code, out, _ = run(["edge-scaling", "--N-list", "20,50", "--t-grid=-2:4:7", "--format", "json"], capsys)
    assert code == 0
    recs = json.loads(out)
    assert [r["N"] for r in recs] == [20, 50] and recs[1]["deviation"] < recs[0]["deviation"]
    code, out, _ = run(["j2h", "--N", "1", "--alpha-list", "10,40", "--t-grid", "0.3:2.5:5"], capsys)
    assert code == 0
    recs = rows(out)
    assert float(recs[1]["deviation"]) < float(recs[0]["deviation"])


def test_painleve_check(capsys):
    code, out, _ = run(["painleve-check", "--ensemble", "hermite", "--N", "2", "--geometry", "exterior",
                        "--s-grid", "0.5:2.5:21"], capsys)
    assert code == 0
    assert max(float(r["deviation"]) for r in rows(out)) < 1e-7


def test_pole_rows_are_nan_with_diagnostics(capsys):
    code, out, err = run(["painleve-check", "--ensemble", "hermite", "--N", "2", "--geometry", "exterior",
                          "--K", "-0.3", "--s-grid", "0.5:2.5:21"], capsys)
    assert code == 3
    recs = rows(out)
    assert len(recs) == 21
    bad = [r for r in recs if r["diagnostics"]]
    good = [r for r in recs if not r["diagnostics"]]
    assert bad and good
    assert all(math.isnan(float(r["R"])) for r in bad)
    assert all(math.isfinite(float(r["R"])) for r in good)
    assert "last good" in err


def test_exit_codes(capsys):
    assert run(["gap-prob", "--ensemble", "hermite", "--N", "0", "--geometry", "exterior",
                "--s-grid", "0.2:3:5"], capsys)[0] == 2
    assert run(["gap-prob", "--bogus"], capsys)[0] == 1
    assert run(["gap-prob", "--ensemble", "hermite", "--N", "1", "--geometry", "exterior",
                "--s-grid", "1:0:3"], capsys)[0] == 1
    assert run(["gap-prob", "--ensemble", "hermite", "--N", "1", "--geometry", "exterior",
                "--s-grid", "0:1"], capsys)[0] == 1
    assert run(["nonsense"], capsys)[0] == 1


def test_config_file_and_override(tmp_path, capsys):
    cfg = tmp_path / "job.toml"
    cfg.write_text('ensemble = "hermite"\nN = 2\ngeometry = "exterior"\ns_grid = "0.5:2:4"\n')
    code, out, _ = run(["gap-prob", "--config", str(cfg)], capsys)
    assert code == 0 and len(rows(out)) == 4
    code, out2, _ = run(["gap-prob", "--config", str(cfg), "--N", "1"], capsys)
    assert code == 0
    assert float(rows(out2)[0]["E2"]) == pytest.approx(erf(0.5), abs=1e-12)
    bad = tmp_path / "bad.toml"
    bad.write_text("colour = 3\n")
    assert run(["gap-prob", "--config", str(bad)], capsys)[0] == 1
    assert run(["gap-prob", "--config", str(tmp_path / "missing.toml")], capsys)[0] == 1


def test_out_path(tmp_path, capsys):
    dest = tmp_path / "e2.csv"
    code, out, _ = run(["gap-prob", "--ensemble", "hermite", "--N", "1", "--geometry", "exterior",
                        "--s-grid", "0.2:3:3", "--out", str(dest)], capsys)
    assert code == 0 and out == ""
    assert len(rows(dest.read_text())) == 3


def test_grid_parser():
    g = cli.Grid.parse("0:1:5")
    assert g.values().tolist() == [0, 0.25, 0.5, 0.75, 1]
    for bad in ("0:1:1", "1:0:3", "a:b:c", "0:1"):
        with pytest.raises(cli.UsageError):
            cli.Grid.parse(bad)


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "rmt_gaps", "series", "--N", "2", "--terms", "2", "--s", "0.1"],
                         capture_output=True, text=True, check=False)
    assert res.returncode == 0
    assert rows(res.stdout)[1]["coefficient"] == "-14/15"
