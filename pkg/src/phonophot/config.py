"""Scenario configuration: a flat ``key = value`` format with ``[section]`` headers.

Parsing collects every problem it finds, each tagged with its line number,
and raises a single :class:`~phonophot.errors.ConfigError` at the end.

Example::

    [scenario]
    kind = phonon-sim
    seed = 3

    [lattice]
    dimension = 1
    sites_per_axis = 64

    [excitation]
    type = plane-wave
    k = 4
    amplitude = 0.01

    [integrator]
    steps = 2000
"""

from dataclasses import dataclass, field
import math

from .cellnet import CellNetSpec
from .errors import ConfigError, SpecError
from .lattice import LatticeSpec, build_lattice
from .units import parse_quantity

KINDS = ("phonon-sim", "photon-field-sim", "dispersion-scan", "quantize-report", "hop-trace", "lifetime-calc")

GEOMETRY = {
    "phonon-sim": ("lattice",),
    "photon-field-sim": ("cellnet",),
    "dispersion-scan": ("lattice", "cellnet"),
    "quantize-report": ("lattice", "cellnet"),
    "hop-trace": ("photon",),
    "lifetime-calc": ("photon",),
}

EXCITATIONS = ("none", "plane-wave", "random")


def _int(text):
    value = float(text)
    if value != int(value):
        raise ValueError(f"expected an integer, got {text!r}")
    return int(value)


def _float(text):
    value, unit = parse_quantity(text)
    if unit:
        raise ValueError(f"{text!r}: units are only accepted on photon quantities")
    if not math.isfinite(value):
        raise ValueError(f"{text!r} is not finite")
    return value


def _bool(text):
    t = text.strip().lower()
    if t in ("true", "yes", "on", "1"):
        return True
    if t in ("false", "no", "off", "0"):
        return False
    raise ValueError(f"expected true/false, got {text!r}")


def _ints(text):
    return tuple(_int(x) for x in text.replace(",", " ").split())


def _floats(text):
    return tuple(_float(x) for x in text.replace(",", " ").split())


def _words(text):
    return tuple(x for x in text.replace(",", " ").split())


def _str(text):
    return text.strip()


def _length(text):
    return parse_quantity(text, "length")[0]


def _time(text):
    return parse_quantity(text, "time")[0]


def _speed(text):
    return parse_quantity(text, "speed")[0]


def _dt(text):
    return None if text.strip().lower() == "auto" else _float(text)


SCHEMA = {
    "scenario": {"kind": _str, "seed": _int, "strict": _bool},
    "lattice": {"dimension": _int, "sites_per_axis": _int, "mass": _float, "gamma": _float,
                "lattice_constant": _float},
    "cellnet": {"cells_per_axis": _int, "cell_size": _float, "light_speed": _float},
    "photon": {"wavelength": _length, "period": _time, "light_speed": _speed, "cell_size": _length,
               "position": _floats, "emission_time": _time, "phase": _float, "duration": _time,
               "samples": _int, "claimed_cells": _float, "claimed_lifetime": _time},
    "excitation": {"type": _str, "k": _ints, "amplitude": _float, "phase": _float, "branch": _int,
                   "polarization": _floats, "scale": _float},
    "quantize": {"hbar": _float, "occupations": _floats, "k": _ints, "branch": _int},
    "integrator": {"dt": _dt, "steps": _int, "periods": _float},
    "output": {"stride": _int, "observables": _words, "full_state": _bool},
}

REQUIRED = {"scenario": ("kind",), "photon": ("wavelength",)}


@dataclass
class ScenarioConfig:
    kind: str
    seed: int = 0
    strict: bool = False
    lattice: LatticeSpec = None
    cellnet: CellNetSpec = None
    photon: dict = field(default_factory=dict)
    excitation: dict = field(default_factory=dict)
    quantize: dict = field(default_factory=dict)
    dt: float = None
    steps: int = 1000
    periods: float = 50.0
    stride: int = 10
    observables: tuple = ()
    full_state: bool = False

    def as_dict(self):
        """Resolved settings, for echoing into reports."""
        out = {"kind": self.kind, "seed": self.seed, "strict": self.strict}
        if self.lattice is not None:
            out["lattice"] = {
                "dimension": self.lattice.dimension,
                "sites_per_axis": self.lattice.sites_per_axis,
                "mass": self.lattice.mass,
                "gamma": self.lattice.gamma,
                "lattice_constant": self.lattice.lattice_constant,
            }
        if self.cellnet is not None:
            out["cellnet"] = {
                "cells_per_axis": self.cellnet.cells_per_axis,
                "cell_size": self.cellnet.cell_size,
                "light_speed": self.cellnet.light_speed,
            }
        if self.photon:
            out["photon"] = {k: list(v) if isinstance(v, tuple) else v for k, v in sorted(self.photon.items())}
        if self.excitation:
            out["excitation"] = {k: list(v) if isinstance(v, tuple) else v for k, v in sorted(self.excitation.items())}
        if self.quantize:
            out["quantize"] = {k: list(v) if isinstance(v, tuple) else v for k, v in sorted(self.quantize.items())}
        out["integrator"] = {"dt": self.dt, "steps": self.steps, "periods": self.periods}
        out["output"] = {"stride": self.stride, "observables": list(self.observables),
                         "full_state": self.full_state}
        return out


def _tokenize(text):
    """Yield ``(line_no, section, key, value)`` and ``(line_no, None, message, None)`` for errors."""
    section = None
    for no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("["):
            if not line.endswith("]") or len(line) < 3:
                yield no, None, f"malformed section header {raw.strip()!r}", None
                continue
            section = line[1:-1].strip()
            yield no, section, None, None
            continue
        if "=" not in line:
            yield no, None, f"expected 'key = value', got {raw.strip()!r}", None
            continue
        key, value = (s.strip() for s in line.split("=", 1))
        if section is None:
            yield no, None, f"key {key!r} appears before any [section]", None
            continue
        yield no, section, key, value


def parse_config(text):
    """Parse and validate a scenario config; raises ConfigError listing every problem."""
    issues = []
    raw = {}
    lines = {}
    section_lines = {}
    for no, section, key, value in _tokenize(text):
        if section is None:
            issues.append((no, key))
            continue
        if key is None:
            if section not in SCHEMA:
                issues.append((no, f"unknown section [{section}]"))
            elif section in section_lines:
                issues.append((no, f"duplicate section [{section}]"))
            section_lines.setdefault(section, no)
            raw.setdefault(section, {})
            continue
        if section not in SCHEMA:
            continue
        if key not in SCHEMA[section]:
            issues.append((no, f"unknown key {key!r} in [{section}]"))
            continue
        if key in raw[section]:
            issues.append((no, f"duplicate key {key!r} in [{section}]"))
            continue
        try:
            raw[section][key] = SCHEMA[section][key](value)
            lines[(section, key)] = no
        except (ValueError, SpecError) as exc:
            issues.append((no, f"[{section}] {key}: {exc}"))

    for section, keys in REQUIRED.items():
        if section == "photon" and "photon" not in raw:
            continue
        for key in keys:
            if (section, key) not in lines and not _had_error(issues, section, key):
                issues.append((section_lines.get(section, 0), f"missing required key {key!r} in [{section}]"))

    cfg = None
    scen = raw.get("scenario", {})
    kind = scen.get("kind")
    if kind is not None and kind not in KINDS:
        issues.append((lines[("scenario", "kind")], f"unknown scenario kind {kind!r}; expected one of {', '.join(KINDS)}"))
        kind = None
    if kind is not None:
        cfg = _build(kind, raw, lines, section_lines, issues)
    if issues:
        raise ConfigError(sorted(issues, key=lambda x: x[0]))
    return cfg


def _had_error(issues, section, key):
    tag = f"[{section}] {key}:"
    return any(msg.startswith(tag) for _, msg in issues)


def _line(lines, section_lines, section, key=None):
    if key is not None and (section, key) in lines:
        return lines[(section, key)]
    return section_lines.get(section, 0)


def _build(kind, raw, lines, section_lines, issues):
    scen = raw.get("scenario", {})
    cfg = ScenarioConfig(kind=kind, seed=scen.get("seed", 0), strict=scen.get("strict", False))
    allowed = GEOMETRY[kind]
    present = [g for g in ("lattice", "cellnet", "photon") if g in raw]
    wrong = [g for g in present if g not in allowed]
    for g in wrong:
        issues.append((section_lines[g], f"[{g}] does not apply to scenario {kind!r}"))
    matching = [g for g in present if g in allowed]
    if len(matching) > 1:
        issues.append((section_lines[matching[1]], f"scenario {kind!r} takes exactly one geometry section"))
    if not matching:
        if kind in ("phonon-sim", "dispersion-scan", "quantize-report"):
            matching = ["lattice"]  # all-default lattice
        elif kind == "photon-field-sim":
            matching = ["cellnet"]
        else:
            issues.append((0, f"scenario {kind!r} needs a [photon] section"))
            return cfg
    geometry = matching[0]

    if geometry == "lattice":
        try:
            cfg.lattice = LatticeSpec(**raw.get("lattice", {}))
        except (SpecError, TypeError) as exc:
            issues.append((_line(lines, section_lines, "lattice"), f"[lattice] {exc}"))
    elif geometry == "cellnet":
        try:
            cfg.cellnet = CellNetSpec(**raw.get("cellnet", {}))
        except (SpecError, TypeError) as exc:
            issues.append((_line(lines, section_lines, "cellnet"), f"[cellnet] {exc}"))
    else:
        cfg.photon = dict(raw["photon"])
        _validate_photon(kind, cfg.photon, lines, section_lines, issues)

    cfg.excitation = dict(raw.get("excitation", {}))
    cfg.quantize = dict(raw.get("quantize", {}))
    integ = raw.get("integrator", {})
    out = raw.get("output", {})
    cfg.dt = integ.get("dt")
    cfg.steps = integ.get("steps", 1000)
    cfg.periods = integ.get("periods", 50.0)
    cfg.stride = out.get("stride", 10)
    cfg.observables = out.get("observables", ())
    cfg.full_state = out.get("full_state", False)

    if cfg.steps < 0:
        issues.append((_line(lines, section_lines, "integrator", "steps"), "[integrator] steps must be >= 0"))
    if cfg.stride < 1:
        issues.append((_line(lines, section_lines, "output", "stride"), "[output] stride must be >= 1"))
    if cfg.periods <= 0:
        issues.append((_line(lines, section_lines, "integrator", "periods"), "[integrator] periods must be positive"))

    etype = cfg.excitation.get("type", "plane-wave" if "k" in cfg.excitation else "none")
    cfg.excitation["type"] = etype
    if etype not in EXCITATIONS:
        issues.append((_line(lines, section_lines, "excitation", "type"),
                       f"[excitation] type must be one of {', '.join(EXCITATIONS)}, got {etype!r}"))
    _validate_geometry_dependent(cfg, lines, section_lines, issues)
    return cfg


def _validate_geometry_dependent(cfg, lines, section_lines, issues):
    ln = lambda s, k=None: _line(lines, section_lines, s, k)  # noqa: E731
    if cfg.lattice is not None:
        lat = build_lattice(cfg.lattice)
        if cfg.dt is None:
            cfg.dt = 0.1 / lat.omega_max
        elif not (0 < cfg.dt < lat.stability_bound):
            issues.append((ln("integrator", "dt"),
                           f"[integrator] dt={cfg.dt!r} outside stability bound 0 < dt < 2/omega_max = {lat.stability_bound!r}"))
        k = cfg.excitation.get("k")
        if k is not None and len(k) != cfg.lattice.dimension:
            issues.append((ln("excitation", "k"), f"[excitation] k needs {cfg.lattice.dimension} indices"))
        b = cfg.excitation.get("branch", 0)
        if not 0 <= b < cfg.lattice.dimension:
            issues.append((ln("excitation", "branch"), f"[excitation] branch must be in [0, {cfg.lattice.dimension})"))
        qk = cfg.quantize.get("k")
        if qk is not None and len(qk) != cfg.lattice.dimension:
            issues.append((ln("quantize", "k"), f"[quantize] k needs {cfg.lattice.dimension} indices"))
        if qk is not None and len(qk) == cfg.lattice.dimension and all(j % cfg.lattice.sites_per_axis == 0 for j in qk):
            issues.append((ln("quantize", "k"), "[quantize] k = 0 has no oscillator spectrum"))
    if cfg.cellnet is not None:
        bound = cfg.cellnet.dt_bound
        if cfg.dt is None:
            cfg.dt = 0.3 * cfg.cellnet.cell_size / cfg.cellnet.light_speed
        elif not (0 < cfg.dt <= bound * (1 + 1e-12)):
            issues.append((ln("integrator", "dt"),
                           f"[integrator] dt={cfg.dt!r} outside stability bound c*dt/a <= 1/sqrt(3) (dt <= {bound!r})"))
        for key, sec in (("k", "excitation"), ("k", "quantize")):
            k = getattr(cfg, sec).get(key)
            if k is not None and len(k) != 3:
                issues.append((ln(sec, key), f"[{sec}] k needs 3 indices on the cell net"))
        pol = cfg.excitation.get("polarization")
        if pol is not None and (len(pol) != 3 or not any(pol)):
            issues.append((ln("excitation", "polarization"), "[excitation] polarization must be a nonzero 3-vector"))
        qb = cfg.quantize.get("branch", 1)
        if qb not in (1, 2):
            issues.append((ln("quantize", "branch"), "[quantize] branch must be 1 or 2 on the cell net"))
        qk = cfg.quantize.get("k")
        if qk is not None and len(qk) == 3 and all(j % cfg.cellnet.cells_per_axis == 0 for j in qk):
            issues.append((ln("quantize", "k"), "[quantize] k = 0 has no photon spectrum"))
    hbar = cfg.quantize.get("hbar", 1.0)
    if not hbar > 0:
        issues.append((ln("quantize", "hbar"), "[quantize] hbar must be positive"))
    for n in cfg.quantize.get("occupations", ()):
        if n < 0:
            issues.append((ln("quantize", "occupations"), "[quantize] occupations must be non-negative"))
            break


def _validate_photon(kind, photon, lines, section_lines, issues):
    ln = lambda k=None: _line(lines, section_lines, "photon", k)  # noqa: E731
    for key in ("wavelength", "period", "light_speed", "cell_size", "duration", "claimed_cells", "claimed_lifetime"):
        if key in photon and not photon[key] > 0:
            issues.append((ln(key), f"[photon] {key} must be positive"))
    if kind == "lifetime-calc":
        if "period" not in photon and "light_speed" not in photon:
            issues.append((ln(), "[photon] lifetime-calc needs period, light_speed, or both"))
        photon.setdefault("cell_size", 1.0)
        return
    # hop-trace: natural units by default
    if "period" in photon and "light_speed" in photon:
        lam, T, c = photon.get("wavelength", 0), photon["period"], photon["light_speed"]
        if lam > 0 and T > 0 and c > 0 and abs(lam / T - c) > 1e-9 * c:
            issues.append((ln("period"), "[photon] hop-trace needs a consistent triple c = wavelength/period"))
    photon.setdefault("cell_size", 1.0)
    photon.setdefault("duration", 10.0)
    photon.setdefault("position", (1.0, 0.0, 0.0))
    photon.setdefault("samples", 50)
    pos = photon["position"]
    if len(pos) != 3 or not any(pos):
        issues.append((ln("position"), "[photon] position must be a nonzero 3-vector (direction undefined at the origin)"))
    ph = photon.get("phase", 0.0)
    if not 0 <= ph < 2 * math.pi:
        issues.append((ln("phase"), "[photon] phase must lie in [0, 2pi)"))
    if photon["samples"] < 1:
        issues.append((ln("samples"), "[photon] samples must be >= 1"))
