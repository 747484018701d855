import pytest

from phonophot.config import parse_config
from phonophot.errors import ConfigError


def test_minimal_config_gets_defaults():
    cfg = parse_config("[scenario]\nkind = phonon-sim\n")
    assert cfg.lattice.sites_per_axis == 8
    assert cfg.dt == pytest.approx(0.1 / 2.0)
    assert cfg.excitation["type"] == "none"
    assert cfg.steps == 1000 and cfg.stride == 10


def test_cellnet_default_dt_is_courant_03():
    cfg = parse_config("[scenario]\nkind = photon-field-sim\n[cellnet]\ncell_size = 2\nlight_speed = 4\n")
    assert cfg.dt == pytest.approx(0.15)


def test_every_error_reported_with_line_numbers():
    text = "\n".join([
        "[scenario]",
        "kind = phonon-sim",
        "seed = x",
        "[lattice]",
        "sites_per_axis = 8",
        "colour = blue",
        "[excitation]",
        "type = laser",
        "[bogus]",
        "a = 1",
    ])
    with pytest.raises(ConfigError) as err:
        parse_config(text)
    lines = {line for line, _ in err.value.issues}
    assert {3, 6, 8, 9} <= lines
    assert "line 6" in str(err.value)


def test_unstable_dt_names_the_bound():
    with pytest.raises(ConfigError, match="stability bound"):
        parse_config("[scenario]\nkind = phonon-sim\n[integrator]\ndt = 1.5\n")
    with pytest.raises(ConfigError, match="1/sqrt"):
        parse_config("[scenario]\nkind = photon-field-sim\n[integrator]\ndt = 0.6\n")


def test_geometry_must_fit_the_scenario():
    with pytest.raises(ConfigError, match="does not apply"):
        parse_config("[scenario]\nkind = phonon-sim\n[cellnet]\ncells_per_axis = 4\n")
    with pytest.raises(ConfigError, match="photon"):
        parse_config("[scenario]\nkind = hop-trace\n")


def test_missing_kind_and_unknown_kind():
    with pytest.raises(ConfigError, match="missing required key 'kind'"):
        parse_config("[scenario]\nseed = 1\n")
    with pytest.raises(ConfigError, match="unknown scenario kind"):
        parse_config("[scenario]\nkind = teleport\n")


def test_units_only_on_photon_quantities():
    cfg = parse_config("[scenario]\nkind = lifetime-calc\n[photon]\nwavelength = 1e-8 cm\nperiod = 1 fs\n")
    assert cfg.photon["period"] == 1e-15
    with pytest.raises(ConfigError, match="units"):
        parse_config("[scenario]\nkind = phonon-sim\n[lattice]\nmass = 2 cm\n")


def test_hop_trace_refuses_inconsistent_triple():
    with pytest.raises(ConfigError, match="consistent"):
        parse_config("[scenario]\nkind = hop-trace\n[photon]\nwavelength = 1\nperiod = 1\nlight_speed = 2\n")


def test_duplicates_and_comments():
    with pytest.raises(ConfigError, match="duplicate key"):
        parse_config("[scenario]\nkind = phonon-sim\nkind = phonon-sim\n")
    cfg = parse_config("# header\n[scenario]  # trailing\nkind = phonon-sim  # comment\n")
    assert cfg.kind == "phonon-sim"


def test_quantize_k_zero_rejected():
    with pytest.raises(ConfigError, match="k = 0"):
        parse_config("[scenario]\nkind = quantize-report\n[quantize]\nk = 0\n")
