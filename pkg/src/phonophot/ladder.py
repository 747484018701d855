"""Classical-correspondence mapping between oscillator amplitudes and ladder levels.

Both the lattice normal modes and the cell-net field modes are harmonic
oscillators with Lagrangian ``(inertia/2) * (|Xdot|^2 - omega^2 |X|^2)``.
Phonon modes use mass-weighted coordinates (``inertia = 1``); field modes use
the Gaussian-unit vector potential (``inertia = 1/(4 pi c^2)``). Everything
here is written once against that form so the two spectra share a single
code path.

The ladder amplitude of a running mode is

    b = sqrt(inertia / (2 hbar omega)) * (omega X + i Xdot)

and the running-mode energy is ``hbar omega |b|^2``.  A classical state that
corresponds to level ``n`` carries ``|b|^2 = n + 1/2`` (symmetric ordering),
so that ``energy / (hbar omega) - 1/2`` returns ``n`` and the vacuum carries
exactly the zero-point energy.
"""

from dataclasses import dataclass
import math

import numpy as np

from .errors import ZeroModeError


@dataclass(frozen=True)
class QuantizedMode:
    """Ladder reading of one oscillator.

    ``occupation_raw`` is the continuous classical estimate; ``occupation``
    is the nearest non-negative integer. The two are reported side by side.
    """

    omega: float
    hbar: float
    energy: float
    occupation_raw: float
    occupation: int

    @property
    def zero_point(self):
        return 0.5 * self.hbar * self.omega

    @property
    def ladder_energy(self):
        return self.hbar * self.omega * (self.occupation + 0.5)


def _check_omega(omega):
    if not omega > 0:
        raise ZeroModeError(f"omega={omega!r}: the zero mode has no oscillator spectrum")


def coefficient(omega, hbar=1.0, inertia=1.0):
    """Coordinate scale ``sqrt(hbar / (2 inertia omega))`` of one ladder quantum."""
    _check_omega(omega)
    return math.sqrt(hbar / (2.0 * inertia * omega))


def momentum_coefficient(omega, hbar=1.0, inertia=1.0):
    """Canonical-momentum scale ``sqrt(hbar inertia omega / 2)``."""
    _check_omega(omega)
    return math.sqrt(hbar * inertia * omega / 2.0)


def running_energy(x, xdot, omega, inertia=1.0):
    """Energy of the running component ``(omega x + i xdot)`` of a mode.

    Summed over a conjugate pair ``(k, -k)`` this equals
    ``inertia * (|xdot|^2 + omega^2 |x|^2)``, i.e. the pair's share of the
    quadratic form. Works elementwise on arrays; at ``omega = 0`` it
    reduces to the kinetic term.
    """
    z = omega * np.asarray(x) + 1j * np.asarray(xdot)
    return 0.5 * inertia * (z.real**2 + z.imag**2)


def ladder_amplitude(x, xdot, omega, hbar=1.0, inertia=1.0):
    """Classical ladder amplitude ``b`` of the running component."""
    _check_omega(omega)
    return math.sqrt(inertia / (2.0 * hbar * omega)) * (omega * x + 1j * xdot)


def amplitudes_from_ladder(b, b_partner, omega, hbar=1.0, inertia=1.0):
    """Coordinate and velocity of mode k from ladder amplitudes of k and -k.

    ``X_k = C (b_k + conj(b_-k))`` with ``C = coefficient(omega)``, and the
    velocity follows from ``b ~ exp(-i omega t)``.
    """
    scale = coefficient(omega, hbar, inertia)
    x = scale * (b + np.conj(b_partner))
    xdot = -1j * omega * scale * (b - np.conj(b_partner))
    return x, xdot


def occupation(energy, omega, hbar=1.0):
    """Raw occupation ``energy / (hbar omega) - 1/2``."""
    _check_omega(omega)
    return energy / (hbar * omega) - 0.5


def round_occupation(n_raw):
    """Nearest non-negative integer level."""
    return max(0, int(round(n_raw)))


def quantize_energy(energy, omega, hbar=1.0):
    n_raw = occupation(energy, omega, hbar)
    return QuantizedMode(
        omega=float(omega),
        hbar=float(hbar),
        energy=float(energy),
        occupation_raw=float(n_raw),
        occupation=round_occupation(n_raw),
    )


def ladder_energy(n, omega, hbar=1.0):
    return hbar * omega * (n + 0.5)


@dataclass(frozen=True)
class HamiltonianSum:
    """Ladder Hamiltonian over the retained (omega > 0) modes.

    ``zero_mode_energy`` is the classical energy held by omega = 0 modes,
    which the ladder sum excludes but the energy accounting must keep.
    """

    total: float
    zero_point: float
    n_modes: int
    zero_mode_energy: float


def hamiltonian_sum(omegas, energies, hbar=1.0, zero_mode_energy=0.0):
    """Sum ``hbar omega (round(n) + 1/2)`` over modes with omega > 0."""
    omegas = np.asarray(omegas, dtype=float).ravel()
    energies = np.asarray(energies, dtype=float).ravel()
    total = 0.0
    zero_point = 0.0
    for om, en in zip(omegas, energies):
        n = round_occupation(occupation(en, om, hbar))
        total += ladder_energy(n, om, hbar)
        zero_point += 0.5 * hbar * om
    return HamiltonianSum(
        total=total,
        zero_point=zero_point,
        n_modes=int(omegas.size),
        zero_mode_energy=float(zero_mode_energy),
    )
