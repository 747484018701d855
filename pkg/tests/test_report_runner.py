import json
import math

import pytest

from phonophot import runner
from phonophot.config import parse_config
from phonophot.errors import NumericFailure
from phonophot.report import OracleRow, RunReport, emit, load_report, series_csv


def _report():
    r = RunReport("phonon-sim", config={"kind": "phonon-sim"})
    r.add_series("time", "t", [0.0, 0.5])
    r.add_series("energy", "E", [1.0, 1.0 + 1e-17])
    r.summary["x"] = math.inf
    r.oracles.append(OracleRow.compare("e", 1.0, 1.0 + 1e-17, 1e-12))
    r.timing = 3.2
    return r


def test_oracle_rows():
    assert OracleRow.compare("a", 2.0, 2.019, 0.01).passed
    assert not OracleRow.compare("a", 2.0, 2.03, 0.01).passed
    assert OracleRow.compare("z", 0.0, 1e-3, 1e-2, absolute=True).passed
    assert OracleRow.bound("b", 0.5, 0.5).passed
    row = OracleRow.at_least("c", 0.9, 0.999)
    assert not row.passed and row.error == pytest.approx(0.099)


def test_json_round_trip_excludes_timing(tmp_path):
    r = _report()
    path = tmp_path / "r.json"
    emit(r, "json", path)
    data = json.loads(path.read_text())
    assert "timing_s" not in data and data["summary"]["x"] == "inf"
    back = load_report(path)
    assert back.series == r.series and back.oracles == r.oracles and back.passed
    emit(r, "json", path, include_timing=True)
    assert json.loads(path.read_text())["timing_s"] == 3.2


def test_csv_uses_repr_floats():
    text = series_csv(_report())
    lines = text.splitlines()
    assert lines[0] == "time [t],energy [E]"
    assert lines[2] == "0.5,1.0"
    with pytest.raises(ValueError):
        emit(_report(), "xml", "unused")


def test_schema_version_checked():
    with pytest.raises(ValueError, match="schema_version"):
        RunReport.from_dict({"schema_version": 99, "scenario": "x"})


def test_observables_filter_keeps_time():
    cfg = parse_config(
        "[scenario]\nkind = phonon-sim\n[excitation]\nk = 1\n[integrator]\nsteps = 20\n"
        "[output]\nobservables = total_energy\n"
    )
    rep = runner.run(cfg)
    assert list(rep.series) == ["time", "total_energy"]
    assert rep.n_samples == 3


def test_full_state_table():
    cfg = parse_config("[scenario]\nkind = phonon-sim\n[excitation]\nk = 1\n[integrator]\nsteps = 5\n"
                       "[output]\nfull_state = true\n")
    rep = runner.run(cfg)
    assert len(rep.tables["final_displacements"]) == 8


def test_random_lattice_checks_discrete_energy():
    cfg = parse_config("[scenario]\nkind = phonon-sim\nseed = 11\n[lattice]\ndimension = 3\nsites_per_axis = 4\n"
                       "[excitation]\ntype = random\n[integrator]\nsteps = 300\n")
    rep = runner.run(cfg)
    names = {o.name for o in rep.oracles}
    assert {"discrete_energy_drift", "energy_oscillation_within_scheme_bound", "parseval",
            "potential_vs_bond_sum", "time_reversibility"} <= names
    assert rep.passed


def test_plane_wave_run_reports_purity():
    cfg = parse_config("[scenario]\nkind = phonon-sim\n[lattice]\nsites_per_axis = 16\n[excitation]\nk = 3\n"
                       "[integrator]\nsteps = 500\n")
    rep = runner.run(cfg)
    purity = next(o for o in rep.oracles if o.name == "single_mode_purity")
    assert purity.measured > 0.999999
    assert rep.summary["analytic_omega"] == pytest.approx(2 * math.sin(math.pi * 3 / 16))


def test_hop_trace_strict_samples_after_first_residence():
    cfg = parse_config("[scenario]\nkind = hop-trace\nstrict = true\n[photon]\nwavelength = 3\nduration = 5\n"
                       "samples = 10\n")
    rep = runner.run(cfg)
    assert min(rep.series["time"]) >= rep.summary["lifetime"]
    assert rep.passed


def test_numeric_failure_surfaces(monkeypatch):
    def blow_up(K, m, x, v, dt, n):
        x[0, 0] = math.nan

    monkeypatch.setattr(runner.lt, "_verlet", blow_up)
    cfg = parse_config("[scenario]\nkind = phonon-sim\n[excitation]\nk = 1\n[integrator]\nsteps = 20\n")
    with pytest.raises(NumericFailure):
        runner.run(cfg)


def test_quantize_report_defaults():
    rep = runner.run(parse_config("[scenario]\nkind = quantize-report\n"))
    assert rep.series["n_target"] == [0.0, 1.0, 10.0, 1e3, 1e6]
    assert rep.series["n_rounded"] == [0.0, 1.0, 10.0, 1e3, 1e6]
    assert rep.passed
