"""The photon core as a point excitation hopping cell to cell.

The core moves radially from the emission origin at speed c. Each cell of
size ``a`` is occupied for ``tau = a / c = T a / lambda``; ``N = lambda / a``
cells span one wavelength, and the polarization phase advances by
``2 pi / lambda`` per unit path length.
"""

from dataclasses import dataclass, field
from decimal import Decimal, localcontext
import math

import numpy as np

from .errors import SpecError

CONSISTENCY_RTOL = 1e-9
MAX_HOPS = 1_000_000


@dataclass(frozen=True)
class PhotonCore:
    """Core state at emission. Build with :meth:`from_wavelength` or :meth:`from_period`."""

    position: tuple
    wavelength: float
    period: float
    phase: float = 0.0
    emission_time: float = 0.0
    cell_size: float = 1.0

    def __post_init__(self):
        pos = np.asarray(self.position, dtype=float)
        problems = []
        if pos.shape != (3,) or not np.all(np.isfinite(pos)):
            problems.append("position must be a finite 3-vector")
        elif not np.any(pos):
            problems.append("position must be nonzero: the direction n/|n| is undefined at the origin")
        for name in ("wavelength", "period", "cell_size"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                problems.append(f"{name} must be positive, got {v!r}")
        if not 0.0 <= self.phase < 2.0 * math.pi:
            problems.append(f"phase must lie in [0, 2pi), got {self.phase!r}")
        if problems:
            raise SpecError("; ".join(problems))
        object.__setattr__(self, "position", tuple(float(x) for x in pos))

    @classmethod
    def from_wavelength(cls, position, wavelength, light_speed=1.0, **kw):
        return cls(position, wavelength, wavelength / light_speed, **kw)

    @classmethod
    def from_period(cls, position, period, light_speed=1.0, **kw):
        return cls(position, light_speed * period, period, **kw)

    @property
    def light_speed(self):
        return self.wavelength / self.period

    @property
    def direction(self):
        p = np.asarray(self.position)
        return p / np.linalg.norm(p)

    @property
    def lifetime(self):
        """Residence time per cell, ``T a / lambda``."""
        return self.period * self.cell_size / self.wavelength

    @property
    def cells_per_wavelength(self):
        return self.wavelength / self.cell_size


def core_position(core, t, strict=False):
    """Closed-form solution of ``dn/dt = c n / |n|`` from the emission state.

    Times before emission are rejected. With ``strict`` the first residence
    interval ``(emission_time, emission_time + tau)`` is refused as well;
    otherwise the straight line is extrapolated into it.
    """
    dt = t - core.emission_time
    if dt < 0:
        raise ValueError(f"t={t!r} precedes emission at {core.emission_time!r}")
    if strict and 0 < dt < core.lifetime:
        raise ValueError(f"t={t!r} lies inside the first residence interval tau={core.lifetime!r}")
    p0 = np.asarray(core.position)
    r0 = float(np.linalg.norm(p0))
    return p0 * ((r0 + core.light_speed * dt) / r0)


def phase_at_distance(core, d):
    """Polarization phase after running path length ``d``, in ``[0, 2 pi)``."""
    if d < 0:
        raise ValueError("path length must be non-negative")
    frac = math.fmod(d / core.wavelength + core.phase / (2.0 * math.pi), 1.0)
    phase = 2.0 * math.pi * frac
    return 0.0 if phase >= 2.0 * math.pi else phase


def cell_of(point, cell_size):
    return tuple(int(math.floor(x / cell_size)) for x in point)


@dataclass
class HopSchedule:
    """Cells visited by the core.

    ``entries`` follow the residence rule: hop ``j`` starts at
    ``t0 + j tau`` and is assigned the cell holding the core at the middle of
    its residence. ``traversal`` is the literal grid walk along the ray,
    ``(cell, entry_time, residence_time)``; for oblique rays its residence
    times vary from cell to cell.
    """

    entries: list
    lifetime: float
    cells_per_wavelength: float
    traversal: list = field(default_factory=list)

    @property
    def hop_count(self):
        return len(self.entries)

    def cell_at(self, t):
        """Scheduled cell at time ``t``."""
        t0 = self.entries[0][1]
        j = int(math.floor((t - t0) / self.lifetime))
        j = min(max(j, 0), len(self.entries) - 1)
        return self.entries[j][0]


def traverse(origin, direction, length, cell_size):
    """Grid walk (Amanatides-Woo) of the segment ``origin + s direction``, ``0 <= s < length``.

    Returns ``(cell, s_enter, s_exit)`` triples in path-length units.
    """
    origin = np.asarray(origin, dtype=float)
    direction = np.asarray(direction, dtype=float)
    cell = list(cell_of(origin, cell_size))
    step = [0, 0, 0]
    t_max = [math.inf] * 3
    t_delta = [math.inf] * 3
    # a subnormal direction component overflows to inf, which is the right limit
    with np.errstate(over="ignore"):
        for i in range(3):
            d = direction[i]
            if d > 0:
                step[i] = 1
                t_max[i] = float(((cell[i] + 1) * cell_size - origin[i]) / d)
                t_delta[i] = float(cell_size / d)
            elif d < 0:
                step[i] = -1
                t_max[i] = float((cell[i] * cell_size - origin[i]) / d)
                t_delta[i] = float(-cell_size / d)
    out = []
    s = 0.0
    while s < length:
        axis = int(np.argmin(t_max))
        s_next = min(t_max[axis], length)
        if s_next > s:
            out.append((tuple(cell), s, s_next))
        if len(out) > MAX_HOPS:
            raise ValueError(f"traversal exceeds {MAX_HOPS} cells")
        s = t_max[axis]
        cell[axis] += step[axis]
        t_max[axis] += t_delta[axis]
    return out


def hop_schedule(core, cell_size=None, duration=1.0, max_hops=MAX_HOPS):
    """Cells occupied over ``[emission_time, emission_time + duration)``."""
    a = core.cell_size if cell_size is None else cell_size
    if not a > 0:
        raise ValueError("cell size must be positive")
    if not duration > 0:
        raise ValueError("duration must be positive")
    c = core.light_speed
    tau = a / c
    n_hops = math.ceil(duration / tau - 1e-9)
    if n_hops > max_hops:
        raise ValueError(f"{n_hops} hops exceed max_hops={max_hops}; shorten the duration")
    t0 = core.emission_time
    p0 = np.asarray(core.position)
    u = core.direction
    entries = []
    for j in range(n_hops):
        mid = p0 + u * (c * (j + 0.5) * tau)
        entries.append((cell_of(mid, a), t0 + j * tau))
    walk = traverse(p0, u, c * duration, a)
    traversal = [(cell, float(t0 + s0 / c), float((s1 - s0) / c)) for cell, s0, s1 in walk]
    return HopSchedule(entries, tau, core.wavelength / a, traversal)


@dataclass
class LifetimeReport:
    wavelength: float
    period: float
    cell_size: float
    light_speed: float
    cells_per_wavelength: float
    lifetime: float
    consistency_ratio: float
    frequency: float
    warnings: list

    def as_dict(self):
        return {
            "wavelength_cm": self.wavelength,
            "period_s": self.period,
            "cell_size_cm": self.cell_size,
            "light_speed_cm_per_s": self.light_speed,
            "cells_per_wavelength": self.cells_per_wavelength,
            "lifetime_s": self.lifetime,
            "consistency_ratio": self.consistency_ratio,
            "frequency_hz": self.frequency,
        }


def _dec(x):
    return Decimal(repr(float(x)))


def lifetime_report(wavelength, period=None, cell_size=1.0, light_speed=None,
                    claimed_cells=None, claimed_lifetime=None):
    """``N = lambda/a``, ``tau = T a / lambda``, ``tau c / a`` and ``nu = 1/T``.

    Exactly one of ``period``/``light_speed`` may be omitted; it is then
    derived from ``c = lambda / T``. Arithmetic runs in decimal so the
    outputs are the correctly rounded values of the formulas. Warnings flag
    an inconsistent (lambda, T, c) triple and claimed values that differ
    from the formulas by more than half a decade.
    """
    if period is None and light_speed is None:
        raise ValueError("need the period, the light speed, or both")
    for name, v in (("wavelength", wavelength), ("period", period),
                    ("cell_size", cell_size), ("light_speed", light_speed)):
        if v is not None and not (math.isfinite(v) and v > 0):
            raise ValueError(f"{name} must be positive, got {v!r}")
    with localcontext() as ctx:
        ctx.prec = 50
        lam, a = _dec(wavelength), _dec(cell_size)
        T = _dec(period) if period is not None else lam / _dec(light_speed)
        c = _dec(light_speed) if light_speed is not None else lam / T
        N = lam / a
        tau = T * a / lam
        ratio = tau * c / a
        nu = 1 / T
        warnings = []
        implied_c = lam / T
        if abs(implied_c - c) > Decimal(CONSISTENCY_RTOL) * c:
            warnings.append(
                f"inconsistent triple: lambda/T = {float(implied_c):.6g} cm/s but c = {float(c):.6g} cm/s"
                f" (tau*c/a = {float(ratio):.6g}, expected 1)"
            )
        for label, claimed, computed in (("N", claimed_cells, N), ("tau", claimed_lifetime, tau)):
            if claimed is None:
                continue
            decades = math.log10(claimed) - math.log10(float(computed))
            if abs(decades) > 0.5:
                warnings.append(
                    f"claimed {label} ~ {claimed:.3g} disagrees with formula value {float(computed):.6g}"
                    f" by {decades:+.1f} decades"
                )
        return LifetimeReport(
            wavelength=float(lam),
            period=float(T),
            cell_size=float(a),
            light_speed=float(c),
            cells_per_wavelength=float(N),
            lifetime=float(tau),
            consistency_ratio=float(ratio),
            frequency=float(nu),
            warnings=warnings,
        )
