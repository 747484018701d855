import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from phonophot.errors import SpecError
from phonophot.spectral import spectral_peak
from phonophot.units import parse_quantity


@pytest.mark.parametrize(
    "text,value,unit",
    [
        ("1e-8 cm", 1e-8, "cm"),
        ("1 fs", 1e-15, "fs"),
        ("3e8 m/s", 3e10, "m/s"),
        ("2.5", 2.5, ""),
        ("1 A", 1e-8, "A"),
        ("10 nm", 1e-6, "nm"),
    ],
)
def test_parse_quantity(text, value, unit):
    assert parse_quantity(text) == (value, unit)


def test_kind_restricts_units():
    assert parse_quantity("2 ps", "time") == (2e-12, "ps")
    with pytest.raises(SpecError):
        parse_quantity("2 ps", "length")
    with pytest.raises(SpecError):
        parse_quantity("two cm")


@settings(max_examples=40, deadline=None)
@given(st.floats(-2.5, 2.5).filter(lambda w: abs(w) > 0.05), st.floats(0, 6.28))
def test_spectral_peak_recovers_tone(w, phi):
    t = np.arange(600) * 0.25
    sig = np.exp(-1j * (w * t + phi))
    assert spectral_peak(t, sig) == pytest.approx(w, rel=1e-7, abs=1e-9)


def test_spectral_peak_picks_dominant_tone():
    t = np.arange(2000) * 0.1
    sig = np.exp(-1.3j * t) + 0.05 * np.exp(0.4j * t)
    assert spectral_peak(t, sig) == pytest.approx(1.3, rel=1e-5)


def test_spectral_peak_validates_sampling():
    with pytest.raises(ValueError):
        spectral_peak([0.0, 1.0, 2.0], [1, 1, 1])
    with pytest.raises(ValueError):
        spectral_peak([0.0, 1.0, 2.5, 3.0], [1, 1, 1, 1])


def test_real_signal_peak_sign_ambiguous_but_magnitude_right():
    t = np.arange(1000) * 0.2
    assert abs(spectral_peak(t, np.cos(0.9 * t))) == pytest.approx(0.9, rel=1e-4)
    assert math.isfinite(spectral_peak(t, np.ones_like(t)))
