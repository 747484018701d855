import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from phonophot import ladder
from phonophot.errors import ZeroModeError

omegas = st.floats(1e-3, 1e3)
levels = st.floats(0.0, 1e6)


@given(omegas, levels, st.floats(0.0, 2 * math.pi))
def test_running_mode_round_trip(omega, n, phase):
    b = math.sqrt(n + 0.5) * complex(math.cos(phase), -math.sin(phase))
    x, xdot = ladder.amplitudes_from_ladder(b, 0.0, omega)
    back = ladder.ladder_amplitude(x, xdot, omega)
    assert abs(back - b) <= 1e-12 * max(1.0, abs(b))
    e = ladder.running_energy(x, xdot, omega)
    assert ladder.occupation(e, omega) == pytest.approx(n, abs=1e-9 * max(n, 1.0))


@given(omegas, st.floats(1e-6, 1e3))
def test_inertia_scales_coefficients(omega, inertia):
    c1 = ladder.coefficient(omega, 1.0, 1.0)
    ci = ladder.coefficient(omega, 1.0, inertia)
    assert ci == pytest.approx(c1 / math.sqrt(inertia), rel=1e-12)
    assert ladder.coefficient(omega) * ladder.momentum_coefficient(omega) == pytest.approx(0.5)


def test_phonon_and_field_coefficients_agree_with_closed_forms():
    hbar, omega, c = 1.3, 2.7, 5.0
    assert ladder.coefficient(omega, hbar) == pytest.approx(math.sqrt(hbar / (2 * omega)))
    # field mode: inertia 1/(4 pi c^2) gives sqrt(2 pi hbar c^2 / omega)
    field = ladder.coefficient(omega, hbar, 1.0 / (4 * math.pi * c**2))
    assert field == pytest.approx(math.sqrt(2 * math.pi * hbar * c**2 / omega), rel=1e-14)


def test_pair_energy_is_quadratic_form():
    rng = np.random.default_rng(0)
    omega = 1.7
    x = rng.normal() + 1j * rng.normal()
    v = rng.normal() + 1j * rng.normal()
    pair = ladder.running_energy(x, v, omega) + ladder.running_energy(np.conj(x), np.conj(v), omega)
    assert pair == pytest.approx(abs(v) ** 2 + omega**2 * abs(x) ** 2, rel=1e-13)


def test_vacuum_reads_level_zero():
    q = ladder.quantize_energy(0.5 * 2.0, 2.0)
    assert q.occupation == 0 and q.occupation_raw == 0.0
    assert q.zero_point == 1.0 and q.ladder_energy == 1.0


def test_empty_mode_clamps_to_zero():
    q = ladder.quantize_energy(0.0, 3.0)
    assert q.occupation_raw == -0.5
    assert q.occupation == 0


@pytest.mark.parametrize("omega", [0.0, -1.0])
def test_zero_mode_has_no_ladder(omega):
    with pytest.raises(ZeroModeError):
        ladder.coefficient(omega)
    with pytest.raises(ZeroModeError):
        ladder.occupation(1.0, omega)


def test_hamiltonian_sum_direct():
    om = np.array([1.0, 2.0, 3.0])
    en = np.array([0.5, 3.0 * 2.0, 1.5])  # levels 0, 2.5 -> rounds to 2, 0
    h = ladder.hamiltonian_sum(om, en, zero_mode_energy=0.25)
    assert h.zero_point == 3.0
    assert h.total == 0.5 + 2.0 * 2.5 + 1.5
    assert h.n_modes == 3 and h.zero_mode_energy == 0.25
