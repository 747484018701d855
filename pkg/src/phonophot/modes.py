"""Normal-mode decomposition of lattice states and the phonon ladder mapping.

Mode coordinates are mass-weighted, ``A_k = FFT_ortho(sqrt(m) r)`` and
``P_k = dA_k/dt = FFT_ortho(sqrt(m) v)``, so each mode has Lagrangian
``(|P|^2 - Omega^2 |A|^2) / 2``. A mode's energy is the energy of its running
component ``(Omega A + i P)``: a wave travelling along +k lands entirely in k,
and the energies of k and -k add up to the pair's quadratic form.
"""

from collections.abc import Mapping
from dataclasses import dataclass
import math

import numpy as np

from . import ladder
from .errors import ShapeError, SymmetryError, ZeroModeError
from .lattice import LatticeState, mode_indices, reciprocal_axis

SYMMETRY_TOL = 1e-10


@dataclass(frozen=True)
class QuantizationConstants:
    hbar: float = 1.0

    def __post_init__(self):
        if not (math.isfinite(self.hbar) and self.hbar > 0):
            raise ValueError(f"hbar must be positive, got {self.hbar!r}")


def _branch_check(spec, s):
    if not 0 <= s < spec.dimension:
        raise ValueError(f"branch must be in [0, {spec.dimension}), got {s!r}")


def dispersion(spec, k, s=0):
    """Branch frequency ``2 sqrt(gamma/m) sqrt(sum sin^2(k_i a / 2))``.

    All branches are degenerate for scalar springs; ``s`` is validated only.
    """
    mode_indices(spec, k)
    _branch_check(spec, s)
    k = np.atleast_1d(np.asarray(k, dtype=float))
    sin2 = np.sum(np.sin(k * spec.lattice_constant / 2.0) ** 2)
    return 2.0 * math.sqrt(spec.gamma / spec.mass) * math.sqrt(sin2)


def frequency_grid(spec):
    """``Omega`` for every commensurate k, shaped like the site grid."""
    ks = reciprocal_axis(spec)
    s1 = np.sin(ks * spec.lattice_constant / 2.0) ** 2
    total = np.zeros(spec.grid_shape)
    for axis in range(spec.dimension):
        shape = [1] * spec.dimension
        shape[axis] = -1
        total = total + s1.reshape(shape)
    return 2.0 * math.sqrt(spec.gamma / spec.mass) * np.sqrt(total)


def partner_index(spec, index):
    """Grid index of -k."""
    return tuple((-i) % spec.sites_per_axis for i in index)


@dataclass(frozen=True)
class ModeEntry:
    k: tuple
    branch: int
    omega: float
    amplitude: complex
    momentum: complex
    energy: float
    occupation: float  # nan at omega == 0

    @property
    def is_zero_mode(self):
        return self.omega == 0.0


class ModeSpectrum(Mapping):
    """Mode amplitudes of a lattice, keyed by ``(grid_index, branch)``.

    ``grid_index`` is the integer tuple of the wavevector in FFT order, so
    ``-k`` lives at ``partner_index(spec, index)``. Arrays are stored whole;
    entries are built on access.
    """

    def __init__(self, spec, amplitudes, momenta, hbar=1.0):
        shape = spec.grid_shape + (spec.dimension,)
        amplitudes = np.asarray(amplitudes, dtype=complex)
        momenta = np.asarray(momenta, dtype=complex)
        if amplitudes.shape != shape or momenta.shape != shape:
            raise ShapeError(f"mode arrays must have shape {shape}")
        self.spec = spec
        self.amplitudes = amplitudes
        self.momenta = momenta
        self.hbar = float(hbar)
        self.omega = frequency_grid(spec)
        self.energies = ladder.running_energy(amplitudes, momenta, self.omega[..., None])

    @classmethod
    def empty(cls, spec, hbar=1.0):
        shape = spec.grid_shape + (spec.dimension,)
        return cls(spec, np.zeros(shape, complex), np.zeros(shape, complex), hbar)

    def wavevector(self, index):
        return tuple(
            2.0 * np.pi * np.fft.fftfreq(self.spec.sites_per_axis, self.spec.lattice_constant)[i]
            for i in index
        )

    def _key(self, key):
        index, s = key
        index = tuple(int(i) % self.spec.sites_per_axis for i in np.atleast_1d(index))
        if len(index) != self.spec.dimension:
            raise KeyError(key)
        _branch_check(self.spec, s)
        return index, int(s)

    def __getitem__(self, key):
        index, s = self._key(key)
        omega = float(self.omega[index])
        energy = float(self.energies[index + (s,)])
        occ = ladder.occupation(energy, omega, self.hbar) if omega > 0 else math.nan
        return ModeEntry(
            k=self.wavevector(index),
            branch=s,
            omega=omega,
            amplitude=complex(self.amplitudes[index + (s,)]),
            momentum=complex(self.momenta[index + (s,)]),
            energy=energy,
            occupation=occ,
        )

    def __iter__(self):
        for index in np.ndindex(*self.spec.grid_shape):
            for s in range(self.spec.dimension):
                yield index, s

    def __len__(self):
        return self.spec.n_sites * self.spec.dimension

    @property
    def zero_index(self):
        return (0,) * self.spec.dimension

    @property
    def zero_mode_energy(self):
        """Energy held by the k = 0 (uniform translation) mode."""
        return float(np.sum(self.energies[self.zero_index]))

    def total_energy(self):
        """Sum of all mode energies, zero mode included."""
        return float(np.sum(self.energies))

    def pair_energy(self, index, s):
        """Energy of the physical pair ``(k, -k)`` on branch ``s``."""
        index, s = self._key((index, s))
        partner = partner_index(self.spec, index)
        if partner == index:
            return float(self.energies[index + (s,)])
        return float(self.energies[index + (s,)] + self.energies[partner + (s,)])

    def with_mode(self, index, s, amplitude, momentum):
        """Copy with mode ``(k, s)`` set and ``-k`` set to its conjugate."""
        index, s = self._key((index, s))
        amps = self.amplitudes.copy()
        moms = self.momenta.copy()
        partner = partner_index(self.spec, index)
        amps[index + (s,)] = amplitude
        moms[index + (s,)] = momentum
        amps[partner + (s,)] = np.conj(amplitude)
        moms[partner + (s,)] = np.conj(momentum)
        return ModeSpectrum(self.spec, amps, moms, self.hbar)

    def check_symmetry(self, tol=SYMMETRY_TOL):
        """Raise SymmetryError unless ``X_{-k} = conj(X_k)`` for A and P."""
        axes = tuple(range(self.spec.dimension))
        for name, arr in (("amplitude", self.amplitudes), ("momentum", self.momenta)):
            flipped = np.roll(np.flip(arr, axis=axes), 1, axis=axes)
            scale = max(1.0, float(np.max(np.abs(arr)))) if arr.size else 1.0
            err = float(np.max(np.abs(flipped - np.conj(arr)))) if arr.size else 0.0
            if err > tol * scale:
                raise SymmetryError(f"{name} spectrum breaks conjugate symmetry (max error {err:.3e})")


def _spatial_axes(spec):
    return tuple(range(spec.dimension))


def decompose(lattice, state, hbar=1.0):
    """Fourier-transform ``state`` into mass-weighted normal coordinates."""
    lattice.check_state(state)
    spec = lattice.spec
    w = math.sqrt(spec.mass)
    axes = _spatial_axes(spec)
    amps = np.fft.fftn(w * state.displacements, axes=axes, norm="ortho")
    moms = np.fft.fftn(w * state.velocities, axes=axes, norm="ortho")
    return ModeSpectrum(spec, amps, moms, hbar)


def reconstruct(lattice, spectrum, time=0.0):
    """Inverse of :func:`decompose`; rejects spectra of non-real fields."""
    spec = lattice.spec
    if spectrum.spec != spec:
        raise ShapeError("spectrum belongs to a different lattice")
    spectrum.check_symmetry()
    axes = _spatial_axes(spec)
    w = math.sqrt(spec.mass)
    r = np.fft.ifftn(spectrum.amplitudes, axes=axes, norm="ortho").real / w
    v = np.fft.ifftn(spectrum.momenta, axes=axes, norm="ortho").real / w
    return LatticeState(r, v, time)


def mode_amplitude(lattice, state, index):
    """Single-k amplitude ``A_k`` (all branches) without a full FFT."""
    spec = lattice.spec
    k = np.asarray(
        [2.0 * np.pi * np.fft.fftfreq(spec.sites_per_axis, spec.lattice_constant)[i] for i in index]
    )
    phase = np.exp(-1j * (lattice.positions @ k)) / math.sqrt(spec.n_sites)
    w = math.sqrt(spec.mass)
    axes = _spatial_axes(spec)
    return w * np.tensordot(phase, state.displacements, axes=(axes, axes))


@dataclass(frozen=True)
class QuantizedPhonon(ladder.QuantizedMode):
    k: tuple = ()
    branch: int = 0


def quantize(entry, qc=QuantizationConstants()):
    """Ladder reading of one mode entry; raises ZeroModeError at omega = 0."""
    if not entry.omega > 0:
        raise ZeroModeError(f"mode k={entry.k} has omega = 0 and no oscillator spectrum")
    q = ladder.quantize_energy(entry.energy, entry.omega, qc.hbar)
    return QuantizedPhonon(
        omega=q.omega,
        hbar=q.hbar,
        energy=q.energy,
        occupation_raw=q.occupation_raw,
        occupation=q.occupation,
        k=entry.k,
        branch=entry.branch,
    )


def hamiltonian_total(spectrum, qc=QuantizationConstants()):
    """Ladder Hamiltonian over all omega > 0 modes, rounded occupations."""
    mask = spectrum.omega > 0
    omegas = np.broadcast_to(spectrum.omega[..., None], spectrum.energies.shape)
    keep = np.broadcast_to(mask[..., None], spectrum.energies.shape)
    return ladder.hamiltonian_sum(
        omegas[keep], spectrum.energies[keep], qc.hbar, spectrum.zero_mode_energy
    )


def prepare_occupation(lattice, index, s, n, qc=QuantizationConstants(), phase=0.0, base=None):
    """Spectrum with mode ``(k, s)`` holding the classical image of level ``n``.

    The ladder amplitude is ``sqrt(n + 1/2) exp(-i phase)`` on the running
    component of k, mapped to coordinates with ``sqrt(hbar / 2 Omega)``.
    A self-conjugate k (zone boundary) is a single real oscillator.
    """
    spec = lattice.spec
    spectrum = base if base is not None else ModeSpectrum.empty(spec, qc.hbar)
    index, s = spectrum._key((index, s))
    omega = float(spectrum.omega[index])
    b = math.sqrt(n + 0.5) * np.exp(-1j * phase)
    partner = partner_index(spec, index)
    b_partner = b if partner == index else 0.0
    x, xdot = ladder.amplitudes_from_ladder(b, b_partner, omega, qc.hbar)
    return spectrum.with_mode(index, s, x, xdot)


def prepare_vacuum(lattice, qc=QuantizationConstants(), phases=None):
    """Every omega > 0 mode at level 0, i.e. carrying exactly ``hbar Omega / 2``.

    Paired modes are filled through their running components so that k and
    -k each hold one zero-point quantum.
    """
    spec = lattice.spec
    amps = np.zeros(spec.grid_shape + (spec.dimension,), complex)
    moms = np.zeros_like(amps)
    omega = frequency_grid(spec)
    half = math.sqrt(0.5)
    for index in np.ndindex(*spec.grid_shape):
        om = float(omega[index])
        if om == 0.0:
            continue
        partner = partner_index(spec, index)
        for s in range(spec.dimension):
            ph = 0.0 if phases is None else phases[index + (s,)]
            b = half * np.exp(-1j * ph)
            if partner == index:
                bp = b
            else:
                php = 0.0 if phases is None else phases[partner + (s,)]
                bp = half * np.exp(-1j * php)
            x, xdot = ladder.amplitudes_from_ladder(b, bp, om, qc.hbar)
            amps[index + (s,)] = x
            moms[index + (s,)] = xdot
    return ModeSpectrum(spec, amps, moms, qc.hbar)
