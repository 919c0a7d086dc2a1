import os
import re

import numpy as np

from triseg.cli import main
from triseg.field import field_from_csv


def _write(path, text):
    path.write_text(text)
    return str(path)


SOLVE_CFG = """
[run]
preset = two_phase_linear
eps = 1e-2

[grid]
n = 64

[output]
dir = {out}
"""

SWEEP_CFG = """
[run]
preset = junction_symmetric
experiments = junction_scaling
eps = 1e-1, 1e-2, 1e-3

[output]
dir = {out}
"""

RECOVER_CFG = """
[run]
preset = circle_interface
eps = 1e-2

[recovery]
family = ramp

[output]
dir = {out}
"""


def test_usage_error_exit_code():
    assert main(["frobnicate"]) == 1
    assert main([]) == 1


def test_config_error_exit_code(tmp_path, capsys):
    cfg = _write(tmp_path / "bad.cfg", "[run]\npreset = not_a_preset\n")
    assert main(["solve", "--config", cfg]) == 2
    assert "preset" in capsys.readouterr().err


def test_missing_config_file(tmp_path):
    assert main(["solve", "--config", str(tmp_path / "nope.cfg")]) == 2


def test_solve_two_phase_linear(tmp_path, capsys):
    out = tmp_path / "out"
    cfg = _write(tmp_path / "solve.cfg", SOLVE_CFG.format(out=out))
    assert main(["solve", "--config", cfg]) == 0
    text = (out / "breakdown.csv").read_text()
    row = [l for l in text.splitlines() if ",total_eps," in l][0]
    total = float(row.split(",")[-1])
    assert abs(total - 2.0) <= 1e-10
    u1 = field_from_csv(out / "u1.csv")
    x = u1.grid.xs()
    assert np.max(np.abs(u1.values - x[None, :])) < 1e-10
    for name in ("u1.svg", "u2.svg", "u3.svg", "regions.csv", "convergence.csv"):
        assert (out / name).exists()


def test_sweep_resolution_guard_exit_code(tmp_path, capsys):
    out = tmp_path / "out"
    text = """
[run]
preset = three_sector
experiments = penalty_decay
eps = 1e-1, 1e-2

[grid]
n = 8

[output]
dir = {out}
"""
    cfg = _write(tmp_path / "sweep.cfg", text.format(out=out))
    code = main(["sweep", "--config", cfg])
    err = capsys.readouterr().err
    assert code == 3
    assert "eps=0.1" in err  # guard names the first unresolvable eps


def test_sweep_and_report_roundtrip(tmp_path, capsys):
    out = tmp_path / "out"
    cfg = _write(tmp_path / "sweep.cfg", SWEEP_CFG.format(out=out))
    assert main(["sweep", "--config", cfg]) == 0
    records = out / "records.csv"
    assert records.exists()

    rep_out = tmp_path / "report"
    assert main(["report", "--records", str(records), "--out", str(rep_out)]) == 0
    captured = capsys.readouterr().out
    assert "status=PASS check=overall" in captured
    assert (rep_out / "report.txt").exists()
    svgs = [p for p in os.listdir(rep_out) if p.endswith(".svg")]
    assert svgs


def test_recover_outputs_manifest(tmp_path, capsys):
    out = tmp_path / "out"
    cfg = _write(tmp_path / "recover.cfg", RECOVER_CFG.format(out=out))
    assert main(["recover", "--config", cfg]) == 0
    manifest = (out / "manifest.txt").read_text()
    assert "constraint_violation_max: 0" in manifest
    assert re.search(r"geometry_hash: [0-9a-f]{16}", manifest)
    assert (out / "recovery_u1.csv").exists()


def test_eps_and_family_overrides(tmp_path):
    out = tmp_path / "out"
    cfg = _write(tmp_path / "recover.cfg", RECOVER_CFG.format(out=out))
    assert main(["recover", "--config", cfg, "--eps", "1e-3",
                 "--family", "tanh"]) == 0
    manifest = (out / "manifest.txt").read_text()
    assert "eps: 0.001" in manifest
    assert "family: tanh" in manifest


def test_report_on_shipped_reference_records(tmp_path, capsys):
    from importlib import resources

    with resources.as_file(
        resources.files("triseg") / "data" / "reference_records.csv"
    ) as path:
        code = main(["report", "--records", str(path), "--out", str(tmp_path)])
    out = capsys.readouterr().out
    assert code == 0
    assert "status=PASS check=overall" in out


def test_solve_unconverged_exit_code(tmp_path, capsys):
    out = tmp_path / "out"
    text = """
[run]
preset = three_sector
eps = 1e-2

[grid]
n = 64

[solver]
max_iter = 4

[output]
dir = {out}
"""
    cfg = _write(tmp_path / "s.cfg", text.format(out=out))
    assert main(["solve", "--config", cfg]) == 3
    assert "converged=False" in capsys.readouterr().out


def test_outputs_deterministic(tmp_path):
    out1 = tmp_path / "o1"
    out2 = tmp_path / "o2"
    cfg1 = _write(tmp_path / "s1.cfg", SWEEP_CFG.format(out=out1))
    cfg2 = _write(tmp_path / "s2.cfg", SWEEP_CFG.format(out=out2))
    assert main(["sweep", "--config", cfg1]) == 0
    assert main(["sweep", "--config", cfg2]) == 0

    def strip_runtime(path):
        lines = path.read_text().splitlines()
        out = []
        for line in lines[1:]:
            cols = line.split(",")
            out.append(",".join(cols[:5] + cols[6:]))  # drop runtime_s
        return out

    assert strip_runtime(out1 / "records.csv") == strip_runtime(out2 / "records.csv")
