"""Run reports and their CSV/JSON serialization."""

from dataclasses import dataclass, field
import csv
import io
import json
import math

SCHEMA_VERSION = 1


@dataclass
class OracleRow:
    """One independent check: ``passed`` iff ``error <= tolerance``.

    ``error`` is relative unless ``absolute`` is set.
    """

    name: str
    expected: float
    measured: float
    error: float
    tolerance: float
    passed: bool
    absolute: bool = False

    @classmethod
    def compare(cls, name, expected, measured, tolerance, absolute=False):
        diff = abs(measured - expected)
        if absolute:
            err = diff
        else:
            err = diff / abs(expected) if expected != 0 else diff
        return cls(name, float(expected), float(measured), float(err), float(tolerance),
                   bool(err <= tolerance), absolute)

    @classmethod
    def bound(cls, name, measured, limit):
        """Check ``measured <= limit`` (expected value 0)."""
        return cls(name, 0.0, float(measured), float(measured), float(limit), bool(measured <= limit), True)

    @classmethod
    def at_least(cls, name, measured, floor):
        short = max(0.0, floor - measured)
        return cls(name, float(floor), float(measured), float(short), 0.0, bool(measured >= floor), True)


@dataclass
class RunReport:
    """Everything a run produced.

    ``series`` maps observable name to a list of samples and ``units`` maps the
    same names to unit labels; all series have equal length. ``timing`` is
    wall-clock seconds and is excluded from equality and from emitted files
    unless asked for, so emitted output stays reproducible.
    """

    scenario: str
    config: dict = field(default_factory=dict)
    series: dict = field(default_factory=dict)
    units: dict = field(default_factory=dict)
    summary: dict = field(default_factory=dict)
    tables: dict = field(default_factory=dict)
    oracles: list = field(default_factory=list)
    warnings: list = field(default_factory=list)
    timing: float = field(default=0.0, compare=False)

    @property
    def passed(self):
        return all(row.passed for row in self.oracles)

    @property
    def n_samples(self):
        return len(next(iter(self.series.values()))) if self.series else 0

    def add_series(self, name, unit, values):
        self.series[name] = [float(v) for v in values]
        self.units[name] = unit

    def to_dict(self, include_timing=False):
        out = {
            "schema_version": SCHEMA_VERSION,
            "scenario": self.scenario,
            "config": self.config,
            "series": self.series,
            "units": self.units,
            "summary": self.summary,
            "tables": self.tables,
            "oracles": [vars(row) for row in self.oracles],
            "warnings": self.warnings,
            "passed": self.passed,
        }
        if include_timing:
            out["timing_s"] = self.timing
        return _clean(out)

    @classmethod
    def from_dict(cls, data):
        version = data.get("schema_version")
        if version != SCHEMA_VERSION:
            raise ValueError(f"unsupported report schema_version {version!r}")
        return cls(
            scenario=data["scenario"],
            config=data.get("config", {}),
            series={k: list(v) for k, v in data.get("series", {}).items()},
            units=dict(data.get("units", {})),
            summary=data.get("summary", {}),
            tables=data.get("tables", {}),
            oracles=[OracleRow(**row) for row in data.get("oracles", [])],
            warnings=list(data.get("warnings", [])),
            timing=data.get("timing_s", 0.0),
        )


def _clean(obj):
    """Plain JSON types; tuples become lists, non-finite floats become strings."""
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, int):
        return int(obj)
    if hasattr(obj, "item"):
        return _clean(obj.item())
    if isinstance(obj, float):
        return obj if math.isfinite(obj) else repr(obj)
    return obj


def series_csv(report):
    """CSV text: a header of ``name [unit]`` columns, then one row per sample."""
    names = list(report.series)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow([f"{n} [{report.units.get(n, '')}]" for n in names])
    for i in range(report.n_samples):
        writer.writerow([repr(float(report.series[n][i])) for n in names])
    return buf.getvalue()


def report_json(report, include_timing=False):
    return json.dumps(report.to_dict(include_timing), indent=2, sort_keys=True) + "\n"


def emit(report, format, path, include_timing=False):
    """Write ``report`` to ``path`` as ``"csv"`` (series) or ``"json"`` (everything)."""
    fmt = format.lower()
    if fmt == "csv":
        text = series_csv(report)
    elif fmt == "json":
        text = report_json(report, include_timing)
    else:
        raise ValueError(f"format must be csv or json, got {format!r}")
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def load_report(path):
    with open(path, encoding="utf-8") as fh:
        return RunReport.from_dict(json.load(fh))
