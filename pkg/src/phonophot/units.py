"""CGS unit parsing for config values; everything converts to cm and s."""

import re

from .errors import SpecError

LENGTH = {"cm": 1.0, "m": 1e2, "mm": 1e-1, "um": 1e-4, "nm": 1e-7, "A": 1e-8}
TIME = {"s": 1.0, "ms": 1e-3, "us": 1e-6, "ns": 1e-9, "ps": 1e-12, "fs": 1e-15}
SPEED = {"cm/s": 1.0, "m/s": 1e2}

_QUANTITY = re.compile(r"^\s*([-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)\s*([A-Za-z/]*)\s*$")


def parse_quantity(text, kind=None):
    """Parse ``"1e-8 cm"`` or ``"1 fs"`` into ``(value_in_base_units, unit)``.

    Bare numbers are returned unchanged with unit ``""`` (natural units).
    ``kind`` restricts accepted units to "length", "time" or "speed".
    """
    m = _QUANTITY.match(text)
    if not m:
        raise SpecError(f"cannot parse quantity {text!r}")
    number, unit = m.groups()
    if not unit:
        return float(number), ""
    tables = {"length": LENGTH, "time": TIME, "speed": SPEED}
    candidates = [tables[kind]] if kind else list(tables.values())
    for table in candidates:
        if unit in table:
            return _scale(number, table[unit]), unit
    raise SpecError(f"unit {unit!r} not accepted here" + (f" (expected a {kind})" if kind else ""))


def _scale(number, factor):
    # Decimal keeps "1 fs" -> 1e-15 exact to the last bit
    from decimal import Decimal

    return float(Decimal(number) * Decimal(repr(factor)))
