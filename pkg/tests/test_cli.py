import json

import pytest

from phonophot import cli, runner
from phonophot.errors import NumericFailure
from phonophot.report import OracleRow, RunReport

RANDOM = "[scenario]\nkind = phonon-sim\nseed = 1\n[excitation]\ntype = random\n[integrator]\nsteps = 50\n"


@pytest.fixture
def cfg(tmp_path):
    def write(text, name="c.ini"):
        p = tmp_path / name
        p.write_text(text)
        return str(p)
    return write


def test_success_writes_json(cfg, tmp_path):
    out = tmp_path / "o.json"
    assert cli.main(["phonon-sim", "--config", cfg(RANDOM), "--out", str(out)]) == 0
    assert json.loads(out.read_text())["passed"] is True


def test_seed_flag_overrides_config(cfg, tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    path = cfg(RANDOM)
    cli.main(["phonon-sim", "--config", path, "--out", str(a), "--format", "csv"])
    cli.main(["phonon-sim", "--config", path, "--out", str(b), "--format", "csv", "--seed", "2"])
    assert a.read_text() != b.read_text()


def test_config_errors_exit_2(cfg, capsys):
    assert cli.main(["phonon-sim", "--config", cfg("[scenario]\nkind = phonon-sim\n[lattice]\nmass = -1\n")]) == 2
    assert "mass" in capsys.readouterr().err
    assert cli.main(["hop-trace", "--config", cfg(RANDOM)]) == 2
    assert cli.main(["phonon-sim", "--config", "/nonexistent.ini"]) == 2


def test_oracle_failure_exits_1(cfg, monkeypatch, capsys):
    def failing(config, strict=None):
        r = RunReport(config.kind)
        r.add_series("time", "t", [0.0])
        r.oracles.append(OracleRow.bound("drift", 1.0, 0.0))
        return r

    monkeypatch.setattr(runner, "run", failing)
    assert cli.main(["phonon-sim", "--config", cfg(RANDOM)]) == 1
    assert "drift" in capsys.readouterr().err


def test_numeric_failure_exits_3(cfg, monkeypatch):
    def boom(config, strict=None):
        raise NumericFailure(7)

    monkeypatch.setattr(runner, "run", boom)
    assert cli.main(["phonon-sim", "--config", cfg(RANDOM)]) == 3


def test_strict_flag_reaches_hop_trace(cfg, tmp_path):
    out = tmp_path / "h.json"
    text = "[scenario]\nkind = hop-trace\n[photon]\nwavelength = 2\nduration = 4\nsamples = 8\n"
    assert cli.main(["hop-trace", "--config", cfg(text), "--out", str(out), "--strict"]) == 0
    data = json.loads(out.read_text())
    assert data["config"]["strict"] is True and min(data["series"]["time"]) >= 1.0


def test_figures_written_next_to_output(cfg, tmp_path):
    out = tmp_path / "run.json"
    assert cli.main(["phonon-sim", "--config", cfg(RANDOM), "--out", str(out), "--figures"]) == 0
    png = tmp_path / "run_energy.png"
    assert png.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"


def test_stdout_when_no_out(cfg, capsys):
    assert cli.main(["phonon-sim", "--config", cfg(RANDOM), "--format", "csv"]) == 0
    assert capsys.readouterr().out.startswith("time [t],")
