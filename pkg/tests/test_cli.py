"""Command-line interface: subcommands, file formats, exit codes,
byte-stability, schema conformance."""

import csv
import json
import math
import subprocess
import sys

import numpy as np
import pytest

from wavecut.cli import main, parse_grid, parse_k_grid
from wavecut.output import JSON_SCHEMA

jsonschema = pytest.importorskip("jsonschema")


def run_cli(args, capsys=None):
    return main(args)


def read_csv(path):
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    return rows[0], rows[1:]


def test_parse_grid():
    g = parse_grid("0:6:61")
    assert len(g) == 61 and g[0] == 0.0 and g[-1] == 6.0
    assert np.allclose(parse_grid("2:2:1"), [2.0])
    kg = parse_k_grid("im:0.1:5:10")
    assert kg[0] == 0.1j and kg[-1] == 5j
    kg = parse_k_grid("re:1:3:3")
    assert kg[1] == 2.0


def test_parse_grid_errors():
    from wavecut.cli import UsageError
    with pytest.raises(UsageError):
        parse_grid("1:2")
    with pytest.raises(UsageError):
        parse_grid("a:b:c")
    with pytest.raises(UsageError):
        parse_grid("0:1:0")


def test_factor_at_K(tmp_path, capsys):
    rc = main(["factor", "--a", "1", "--k0", "2", "--at-K",
               "--out", str(tmp_path)])
    assert rc == 0
    out = capsys.readouterr().out
    assert "0.9732490" in out
    names, rows = read_csv(tmp_path / "factor.csv")
    assert names == ["re_k", "im_k", "re_splus", "im_splus", "method",
                     "err_est"]
    assert float(rows[0][0]) == pytest.approx(math.sqrt(5.0))


def test_factor_oracle_grid(tmp_path, capsys):
    rc = main(["factor", "--a", "1", "--k0", "2",
               "--k-grid", "im:0.1:5:10", "--check-oracle",
               "--out", str(tmp_path)])
    assert rc == 0
    out = capsys.readouterr().out
    assert "max rel dev" in out
    dev = float(out.split("max rel dev closed form vs exp(-J):")[1].split()[0])
    assert dev <= 1e-6
    _, rows = read_csv(tmp_path / "factor.csv")
    assert len(rows) == 10


def test_factor_requires_input(tmp_path):
    assert main(["factor", "--out", str(tmp_path)]) == 2


def test_wavefunction_grid_csv(tmp_path):
    rc = main(["wavefunction", "--R", "-4:-1:4", "--y", "0:2:3",
               "--out", str(tmp_path)])
    assert rc == 0
    names, rows = read_csv(tmp_path / "wavefunction.csv")
    assert names == ["R", "y", "re_psi", "im_psi", "abs2", "err_est",
                     "method", "converged"]
    assert len(rows) == 12
    # abs2 column consistent with re/im
    for row in rows:
        re, im, a2 = float(row[2]), float(row[3]), float(row[4])
        assert a2 == pytest.approx(re * re + im * im, rel=1e-12)


def test_wavefunction_rejects_boundary(tmp_path):
    assert main(["wavefunction", "--R", "-1:1:3", "--y", "0:1:2",
                 "--out", str(tmp_path)]) == 2
    assert main(["wavefunction", "--R", "bad", "--y", "0:1:2",
                 "--out", str(tmp_path)]) == 2


def test_wavefunction_unified_method(tmp_path):
    rc = main(["wavefunction", "--R", "-3:-3:1", "--y", "0:1:2",
               "--method", "unified", "--out", str(tmp_path)])
    assert rc == 0
    _, rows = read_csv(tmp_path / "wavefunction.csv")
    assert rows[0][6] == "unified_a7"
    # agrees with the regional route
    rc = main(["wavefunction", "--R", "-3:-3:1", "--y", "0:1:2",
               "--method", "regional", "--format", "json",
               "--out", str(tmp_path)])
    assert rc == 0
    doc = json.loads((tmp_path / "wavefunction.json").read_text())
    uni = complex(float(rows[0][2]), float(rows[0][3]))
    reg = complex(doc["columns"]["re_psi"][0], doc["columns"]["im_psi"][0])
    assert abs(uni - reg) / abs(reg) < 1e-4


def test_json_output_schema(tmp_path):
    rc = main(["factor", "--at-K", "--format", "json", "--out",
               str(tmp_path)])
    assert rc == 0
    doc = json.loads((tmp_path / "factor.json").read_text())
    jsonschema.validate(doc, JSON_SCHEMA)
    # the schema shipped in the repo is the same contract
    import pathlib
    shipped = pathlib.Path(__file__).resolve().parent.parent / "docs" / \
        "output_schema.json"
    if shipped.exists():
        jsonschema.validate(doc, json.loads(shipped.read_text()))
    assert doc["metadata"]["artifact_version"]
    assert doc["metadata"]["column_names"][0] == "re_k"


def test_byte_stability(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    for d in (a, b):
        rc = main(["wavefunction", "--R", "-5:-1:5", "--y", "0:3:7",
                   "--out", str(d)])
        assert rc == 0
    assert (a / "wavefunction.csv").read_bytes() == \
        (b / "wavefunction.csv").read_bytes()


def test_asymptotics_far32(tmp_path):
    rc = main(["asymptotics", "--law", "far32", "--R", "-200:-50:4",
               "--y", "0:1:2", "--out", str(tmp_path)])
    assert rc == 0
    names, rows = read_csv(tmp_path / "asymptotics_far32.csv")
    # |psi| * |R| equals the far-field constant for every row
    for row in rows:
        R = float(row[0])
        mod = math.hypot(float(row[2]), float(row[3]))
        assert mod * abs(R) == pytest.approx(0.015465667428, abs=1e-9)


def test_asymptotics_sd35(tmp_path):
    rc = main(["asymptotics", "--law", "sd35", "--R", "25:100:4",
               "--y", "3:12:4", "--out", str(tmp_path)])
    assert rc == 0


def test_asymptotics_domain_error(tmp_path):
    assert main(["asymptotics", "--law", "far32", "--R", "10:20:2",
                 "--y", "0:1:2", "--out", str(tmp_path)]) == 2


def test_figures_fig3_fig4(tmp_path):
    rc = main(["figures", "fig3", "fig4", "--out", str(tmp_path)])
    assert rc == 0
    _, rows = read_csv(tmp_path / "fig3.csv")
    a2 = np.array([float(r[1]) for r in rows])
    idx = [i for i in range(1, len(a2) - 1)
           if a2[i] >= a2[i - 1] and a2[i] > a2[i + 1]]
    assert len(idx) >= 5
    peaks = a2[idx]
    assert peaks[0] > peaks[-1]  # decaying envelope
    _, rows4 = read_csv(tmp_path / "fig4.csv")
    c0 = np.array([float(r[1]) for r in rows4])
    c5 = np.array([float(r[2]) for r in rows4])
    first_max = next(i for i in range(1, len(c0) - 1)
                     if c0[i] >= c0[i - 1] and c0[i] > c0[i + 1])
    assert c0[first_max] > c5[first_max]


def test_config_file_precedence(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"a": 2.0, "k0": 3.0}))
    rc = main(["factor", "--at-K", "--config", str(cfg), "--k0", "4",
               "--format", "json", "--out", str(tmp_path)])
    assert rc == 0
    doc = json.loads((tmp_path / "factor.json").read_text())
    assert doc["metadata"]["a"] == 2.0      # from config file
    assert doc["metadata"]["k0"] == 4.0     # flag overrides config


def test_physical_params_input(tmp_path):
    rc = main(["factor", "--at-K", "--M", "2", "--mu", "0.5", "--lam", "1",
               "--E", "1", "--format", "json", "--out", str(tmp_path)])
    assert rc == 0
    doc = json.loads((tmp_path / "factor.json").read_text())
    assert doc["metadata"]["a"] == pytest.approx(1.0)
    assert doc["metadata"]["k0"] == pytest.approx(2.0)


def test_validate_fast(capsys):
    rc = main(["validate", "--fast", "--only", "quadrature"])
    out = capsys.readouterr().out
    assert rc == 0
    assert "PASS" in out and "FAIL" not in out


def test_validate_negative_control(capsys):
    # flipping the branch side must be detected by route equivalence
    rc = main(["validate", "--fast", "--only", "wavefunction",
               "--flip-branch"])
    out = capsys.readouterr().out
    assert rc == 1
    assert "FAIL" in out


def test_entry_point_installed():
    res = subprocess.run([sys.executable, "-m", "wavecut.cli", "--version"],
                         capture_output=True, text=True)
    assert res.returncode == 0
