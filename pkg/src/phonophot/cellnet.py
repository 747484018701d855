"""Polarization field on a periodic cubic cell net, in Gaussian units.

Each cell holds a 3-vector ``A`` (vector-potential semantics) and its time
derivative. The discrete curl uses forward differences, so its Fourier
symbol is ``kt_i = (exp(i k_i a) - 1) / a`` and ``|kt|^2`` equals the symbol
of the compact Laplacian. Consequences relied on throughout:

* ``sum |curl A|^2 = sum_k |kt|^2 |A_k,transverse|^2`` exactly (Parseval),
* the componentwise wave equation ``A'' = c^2 lap A`` runs at
  ``omega = c |kt| = (2c/a) sqrt(sum sin^2(k_i a / 2))`` and conserves the
  transverse subspace.

Transverse and longitudinal parts are taken with respect to the complex unit
vector ``u = kt / |kt|`` (Hermitian inner product), which tends to the
continuum direction of k as ``ka -> 0``.
"""

from collections.abc import Mapping
from dataclasses import dataclass
import math

import numpy as np

from . import ladder
from .errors import IncommensurateError, ShapeError, SpecError, StabilityError, SymmetryError, ZeroModeError

SYMMETRY_TOL = 1e-10
COURANT_LIMIT = 1.0 / math.sqrt(3.0)

_REFERENCE_AXES = (np.array([0.0, 0.0, 1.0]), np.array([1.0, 0.0, 0.0]))


@dataclass(frozen=True)
class CellNetSpec:
    cells_per_axis: int = 8
    cell_size: float = 1.0
    light_speed: float = 1.0

    boundary = "periodic"

    def __post_init__(self):
        problems = []
        if int(self.cells_per_axis) != self.cells_per_axis or self.cells_per_axis < 4:
            problems.append(f"cells_per_axis must be an integer >= 4, got {self.cells_per_axis!r}")
        for name in ("cell_size", "light_speed"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                problems.append(f"{name} must be positive and finite, got {value!r}")
        if problems:
            raise SpecError("; ".join(problems))

    @property
    def shape(self):
        return (self.cells_per_axis,) * 3 + (3,)

    @property
    def n_cells(self):
        return self.cells_per_axis**3

    @property
    def volume(self):
        return self.n_cells * self.cell_size**3

    @property
    def dt_bound(self):
        """Largest stable step, ``a / (c sqrt 3)``."""
        return COURANT_LIMIT * self.cell_size / self.light_speed


@dataclass
class CellNetField:
    A: np.ndarray
    Adot: np.ndarray
    time: float = 0.0

    def __post_init__(self):
        self.A = np.asarray(self.A, dtype=float)
        self.Adot = np.asarray(self.Adot, dtype=float)
        if self.A.shape != self.Adot.shape:
            raise ShapeError(f"A {self.A.shape} and Adot {self.Adot.shape} differ in shape")
        if not (np.all(np.isfinite(self.A)) and np.all(np.isfinite(self.Adot))):
            raise ValueError("cell-net field contains non-finite values")

    def copy(self):
        return CellNetField(self.A.copy(), self.Adot.copy(), self.time)


def zero_field(spec):
    return CellNetField(np.zeros(spec.shape), np.zeros(spec.shape), 0.0)


def _check(spec, field):
    if field.A.shape != spec.shape:
        raise ShapeError(f"field shape {field.A.shape} != net shape {spec.shape}")


def momentum_density(spec, field):
    """Canonical momentum ``Adot / (4 pi c^2)``."""
    _check(spec, field)
    return field.Adot / (4.0 * math.pi * spec.light_speed**2)


def cell_positions(spec):
    n = np.arange(spec.cells_per_axis) * spec.cell_size
    return np.stack(np.meshgrid(n, n, n, indexing="ij"), axis=-1)


# --- discrete operators -------------------------------------------------------

def _forward(f, axis, a):
    return (np.roll(f, -1, axis=axis) - f) / a


def curl(spec, A):
    """Forward-difference curl, periodic wrap."""
    a = spec.cell_size
    Ax, Ay, Az = A[..., 0], A[..., 1], A[..., 2]
    return np.stack(
        (
            _forward(Az, 1, a) - _forward(Ay, 2, a),
            _forward(Ax, 2, a) - _forward(Az, 0, a),
            _forward(Ay, 0, a) - _forward(Ax, 1, a),
        ),
        axis=-1,
    )


def divergence(spec, A):
    """Backward-difference divergence (adjoint partner of the forward curl)."""
    a = spec.cell_size
    return sum((A[..., i] - np.roll(A[..., i], 1, axis=i)) / a for i in range(3))


def laplacian(spec, A, out=None):
    """Compact 7-point Laplacian applied to each component."""
    if out is None:
        out = np.empty_like(A)
    np.multiply(A, -6.0, out=out)
    for axis in range(3):
        out += np.roll(A, 1, axis=axis)
        out += np.roll(A, -1, axis=axis)
    out /= spec.cell_size**2
    return out


@dataclass(frozen=True)
class LagrangianParts:
    kinetic: float
    curl: float

    @property
    def value(self):
        return self.kinetic - self.curl


def em_lagrangian_density(spec, field):
    """Volume-averaged ``(1/8 pi) [(Adot/c)^2 - (curl A)^2]``."""
    _check(spec, field)
    c = spec.light_speed
    kin = float(np.mean(np.sum(field.Adot**2, axis=-1))) / (8.0 * math.pi * c**2)
    cur = float(np.mean(np.sum(curl(spec, field.A) ** 2, axis=-1))) / (8.0 * math.pi)
    return LagrangianParts(kin, cur)


def energy(spec, field):
    """Field energy ``(1/8 pi) sum_n a^3 [(Adot/c)^2 + (curl A)^2]``."""
    parts = em_lagrangian_density(spec, field)
    return (parts.kinetic + parts.curl) * spec.volume


def check_dt(spec, dt):
    bound = spec.dt_bound
    # small slack so that dt = bound computed from c dt / a = 1/sqrt(3) is accepted
    if not (dt > 0 and dt <= bound * (1.0 + 1e-12)):
        raise StabilityError(dt, bound, f"dt={dt!r} must satisfy 0 < c dt / a <= 1/sqrt(3) (dt <= {bound!r})")


def _verlet(spec, A, Adot, dt, n_steps):
    c2 = spec.light_speed**2
    acc = laplacian(spec, A)
    acc *= c2
    half = 0.5 * dt
    for _ in range(n_steps):
        Adot += half * acc
        A += dt * Adot
        laplacian(spec, A, out=acc)
        acc *= c2
        Adot += half * acc
    return A, Adot


def step_wave(spec, field, dt):
    """One leapfrog (velocity-Verlet) step of ``A'' = c^2 lap A``."""
    return evolve_wave(spec, field, dt, 1)


def evolve_wave(spec, field, dt, n_steps):
    _check(spec, field)
    check_dt(spec, dt)
    A = field.A.copy()
    Adot = field.Adot.copy()
    _verlet(spec, A, Adot, dt, int(n_steps))
    return CellNetField(A, Adot, field.time + n_steps * dt)


# --- reciprocal space ---------------------------------------------------------

def wavenumbers(spec):
    """Per-axis commensurate wavenumbers in FFT order."""
    return 2.0 * np.pi * np.fft.fftfreq(spec.cells_per_axis, d=spec.cell_size)


def wavevector(spec, indices):
    j = np.asarray(indices, dtype=float)
    if j.shape != (3,):
        raise ShapeError("cell-net wavevectors need 3 indices")
    return 2.0 * np.pi * j / (spec.cells_per_axis * spec.cell_size)


def mode_index(spec, k):
    k = np.asarray(k, dtype=float)
    if k.shape != (3,):
        raise ShapeError("cell-net wavevectors need 3 components")
    j = k * spec.cells_per_axis * spec.cell_size / (2.0 * np.pi)
    jr = np.round(j)
    if np.any(np.abs(j - jr) > 1e-9 * np.maximum(1.0, np.abs(j))):
        raise IncommensurateError(f"k={k.tolist()} is not commensurate with the net")
    return tuple(int(x) % spec.cells_per_axis for x in jr)


def grid_symbol(spec):
    """Forward-difference symbol ``kt`` with shape ``(L, L, L, 3)``."""
    ks = wavenumbers(spec)
    a = spec.cell_size
    one = (np.exp(1j * ks * a) - 1.0) / a
    L = spec.cells_per_axis
    kt = np.empty((L, L, L, 3), complex)
    kt[..., 0] = one[:, None, None]
    kt[..., 1] = one[None, :, None]
    kt[..., 2] = one[None, None, :]
    return kt


def grid_frequency(spec, k=None):
    """``omega = (2c/a) sqrt(sum sin^2(k_i a / 2))`` for one k or the whole grid."""
    a, c = spec.cell_size, spec.light_speed
    if k is not None:
        mode_index(spec, k)
        k = np.asarray(k, dtype=float)
        return 2.0 * c / a * math.sqrt(float(np.sum(np.sin(k * a / 2.0) ** 2)))
    s = np.sin(wavenumbers(spec) * a / 2.0) ** 2
    total = s[:, None, None] + s[None, :, None] + s[None, None, :]
    return 2.0 * c / a * np.sqrt(total)


def polarization_basis(spec):
    """Orthonormal frame ``(u, e1, e2)`` at every k, each shaped ``(L, L, L, 3)``.

    ``u`` is the longitudinal direction ``kt / |kt|``. ``e1`` is the
    normalized transverse projection of the z axis, falling back to the x axis
    where k is (nearly) parallel to z; ``e2 = conj(u x e1)``. Because the
    reference axes are real, the frame at -k is the complex conjugate of the
    frame at k. At k = 0 the frame is the Cartesian one.
    """
    kt = grid_symbol(spec)
    norm = np.sqrt(np.sum(np.abs(kt) ** 2, axis=-1))
    zero = norm == 0.0
    u = np.zeros_like(kt)
    u[~zero] = kt[~zero] / norm[~zero][:, None]
    u[zero] = np.array([1.0, 0.0, 0.0])

    def transverse(ref):
        proj = np.sum(np.conj(u) * ref, axis=-1)
        return ref - proj[..., None] * u

    e1 = transverse(_REFERENCE_AXES[0])
    n1 = np.sqrt(np.sum(np.abs(e1) ** 2, axis=-1))
    fallback = n1 < 0.5
    if np.any(fallback):
        alt = transverse(_REFERENCE_AXES[1])
        e1[fallback] = alt[fallback]
        n1 = np.sqrt(np.sum(np.abs(e1) ** 2, axis=-1))
    e1 = e1 / n1[..., None]
    e2 = np.conj(np.cross(u, e1))
    u[zero] = np.array([1.0, 0.0, 0.0])
    e1[zero] = np.array([0.0, 1.0, 0.0])
    e2[zero] = np.array([0.0, 0.0, 1.0])
    return u, e1, e2


def _project(frame, vec):
    return np.sum(np.conj(frame) * vec, axis=-1)


class EmModeSpectrum(Mapping):
    """Transverse mode amplitudes keyed by ``(grid_index, s)`` with ``s`` in {1, 2}.

    ``amplitudes``/``velocities`` have shape ``(L, L, L, 2)``; the
    longitudinal components and the k = 0 Cartesian vector are kept so the
    field can be rebuilt exactly.
    """

    def __init__(self, spec, amplitudes, velocities, longitudinal, longitudinal_dot,
                 zero_mode, zero_mode_dot, hbar=1.0):
        self.spec = spec
        self.amplitudes = np.asarray(amplitudes, complex)
        self.velocities = np.asarray(velocities, complex)
        self.longitudinal = np.asarray(longitudinal, complex)
        self.longitudinal_dot = np.asarray(longitudinal_dot, complex)
        self.zero_mode = np.asarray(zero_mode, complex)
        self.zero_mode_dot = np.asarray(zero_mode_dot, complex)
        self.hbar = float(hbar)
        self.omega = grid_frequency(spec)
        self.u, self.e1, self.e2 = polarization_basis(spec)
        c = spec.light_speed
        self.inertia = 1.0 / (4.0 * math.pi * c**2)
        energies = ladder.running_energy(self.amplitudes, self.velocities, self.omega[..., None], self.inertia)
        energies[0, 0, 0, :] = 0.0
        self.energies = energies

    @classmethod
    def empty(cls, spec, hbar=1.0):
        L = spec.cells_per_axis
        z2 = np.zeros((L, L, L, 2), complex)
        z1 = np.zeros((L, L, L), complex)
        return cls(spec, z2, z2.copy(), z1, z1.copy(), np.zeros(3, complex), np.zeros(3, complex), hbar)

    def _key(self, key):
        index, s = key
        L = self.spec.cells_per_axis
        index = tuple(int(i) % L for i in index)
        if len(index) != 3 or s not in (1, 2):
            raise KeyError(key)
        return index, s

    def __getitem__(self, key):
        index, s = self._key(key)
        omega = float(self.omega[index])
        energy = float(self.energies[index + (s - 1,)])
        return EmModeEntry(
            k=tuple(float(x) for x in wavenumbers(self.spec)[list(index)]),
            polarization=s,
            omega=omega,
            amplitude=complex(self.amplitudes[index + (s - 1,)]),
            momentum=complex(self.velocities[index + (s - 1,)]) * self.inertia,
            energy=energy,
            unit_vector=tuple(complex(x) for x in (self.e1 if s == 1 else self.e2)[index]),
            hbar=self.hbar,
        )

    def __iter__(self):
        L = self.spec.cells_per_axis
        for index in np.ndindex(L, L, L):
            if index == (0, 0, 0):
                continue
            yield index, 1
            yield index, 2

    def __len__(self):
        return 2 * (self.spec.n_cells - 1)

    @property
    def zero_mode_energy(self):
        return float(self.inertia * 0.5 * np.sum(np.abs(self.zero_mode_dot) ** 2))

    @property
    def longitudinal_energy(self):
        """Kinetic energy of longitudinal content (it has no curl energy)."""
        mask = np.ones(self.omega.shape, bool)
        mask[0, 0, 0] = False
        return float(self.inertia * 0.5 * np.sum(np.abs(self.longitudinal_dot[mask]) ** 2))

    @property
    def longitudinal_residual(self):
        """Largest longitudinal fraction of the k != 0 content of A or Adot."""
        mask = np.ones(self.omega.shape, bool)
        mask[0, 0, 0] = False
        out = 0.0
        for lon, tra in ((self.longitudinal, self.amplitudes), (self.longitudinal_dot, self.velocities)):
            num = float(np.sum(np.abs(lon[mask]) ** 2))
            den = num + float(np.sum(np.abs(tra[mask]) ** 2))
            if den > 0:
                out = max(out, num / den)
        return out

    def transverse_energy(self):
        return float(np.sum(self.energies))

    def total_energy(self):
        """Transverse + longitudinal + zero-mode energy; equals the real-space functional."""
        return self.transverse_energy() + self.longitudinal_energy + self.zero_mode_energy

    def pair_energy(self, index, s):
        index, s = self._key((index, s))
        L = self.spec.cells_per_axis
        partner = tuple((-i) % L for i in index)
        e = float(self.energies[index + (s - 1,)])
        if partner != index:
            e += float(self.energies[partner + (s - 1,)])
        return e

    def with_mode(self, index, s, amplitude, velocity):
        """Copy with transverse mode ``(k, s)`` set and -k set to its conjugate."""
        index, s = self._key((index, s))
        if index == (0, 0, 0):
            raise ZeroModeError("k = 0 has no transverse modes")
        L = self.spec.cells_per_axis
        partner = tuple((-i) % L for i in index)
        amps = self.amplitudes.copy()
        vels = self.velocities.copy()
        amps[index + (s - 1,)] = amplitude
        vels[index + (s - 1,)] = velocity
        amps[partner + (s - 1,)] = np.conj(amplitude)
        vels[partner + (s - 1,)] = np.conj(velocity)
        return EmModeSpectrum(self.spec, amps, vels, self.longitudinal, self.longitudinal_dot,
                              self.zero_mode, self.zero_mode_dot, self.hbar)


@dataclass(frozen=True)
class EmModeEntry:
    k: tuple
    polarization: int
    omega: float
    amplitude: complex
    momentum: complex  # canonical, Adot_k / (4 pi c^2)
    energy: float
    unit_vector: tuple
    hbar: float = 1.0

    @property
    def occupation(self):
        return photon_occupation(self, self.hbar)


def _fourier(spec, X):
    # 1/sqrt(V)-normalized expansion: X_k = a^{3/2} * FFT_ortho(X)
    return spec.cell_size**1.5 * np.fft.fftn(X, axes=(0, 1, 2), norm="ortho")


def _inverse(spec, Xk):
    return np.fft.ifftn(Xk, axes=(0, 1, 2), norm="ortho") / spec.cell_size**1.5


def field_to_modes(spec, field, hbar=1.0):
    """Expand ``field`` into transverse modes plus longitudinal residue."""
    _check(spec, field)
    Ak = _fourier(spec, field.A)
    Bk = _fourier(spec, field.Adot)
    u, e1, e2 = polarization_basis(spec)
    amps = np.stack((_project(e1, Ak), _project(e2, Ak)), axis=-1)
    vels = np.stack((_project(e1, Bk), _project(e2, Bk)), axis=-1)
    lon = _project(u, Ak)
    lon_dot = _project(u, Bk)
    zero = Ak[0, 0, 0].copy()
    zero_dot = Bk[0, 0, 0].copy()
    amps[0, 0, 0] = 0.0
    vels[0, 0, 0] = 0.0
    lon[0, 0, 0] = 0.0
    lon_dot[0, 0, 0] = 0.0
    return EmModeSpectrum(spec, amps, vels, lon, lon_dot, zero, zero_dot, hbar)


def _check_symmetry(spec, Xk, name):
    flipped = np.roll(np.flip(Xk, axis=(0, 1, 2)), 1, axis=(0, 1, 2))
    scale = max(1.0, float(np.max(np.abs(Xk))))
    err = float(np.max(np.abs(flipped - np.conj(Xk))))
    if err > SYMMETRY_TOL * scale:
        raise SymmetryError(f"{name} breaks conjugate symmetry (max error {err:.3e})")


def modes_to_field(spec, spectrum, time=0.0):
    """Inverse of :func:`field_to_modes`."""
    u, e1, e2 = spectrum.u, spectrum.e1, spectrum.e2
    Ak = (spectrum.amplitudes[..., 0:1] * e1 + spectrum.amplitudes[..., 1:2] * e2
          + spectrum.longitudinal[..., None] * u)
    Bk = (spectrum.velocities[..., 0:1] * e1 + spectrum.velocities[..., 1:2] * e2
          + spectrum.longitudinal_dot[..., None] * u)
    Ak[0, 0, 0] = spectrum.zero_mode
    Bk[0, 0, 0] = spectrum.zero_mode_dot
    _check_symmetry(spec, Ak, "A spectrum")
    _check_symmetry(spec, Bk, "Adot spectrum")
    return CellNetField(_inverse(spec, Ak).real, _inverse(spec, Bk).real, time)


def mode_vector(spec, field, index):
    """Cartesian Fourier vector ``A_k`` at one k, without a full FFT."""
    k = wavevector(spec, index)
    phase = np.exp(-1j * (cell_positions(spec) @ k))
    scale = spec.cell_size**1.5 / math.sqrt(spec.n_cells)
    return scale * np.tensordot(phase, field.A, axes=((0, 1, 2), (0, 1, 2)))


# --- photon ladder ------------------------------------------------------------

def photon_occupation(entry, hbar=1.0):
    """Raw occupation ``E / (hbar omega) - 1/2``; k = 0 raises ZeroModeError."""
    if not entry.omega > 0:
        raise ZeroModeError("the k = 0 field mode has no photon spectrum")
    return ladder.occupation(entry.energy, entry.omega, hbar)


def quantize_photon(entry, hbar=1.0):
    if not entry.omega > 0:
        raise ZeroModeError("the k = 0 field mode has no photon spectrum")
    return ladder.quantize_energy(entry.energy, entry.omega, hbar)


def prepare_amplitude(n, omega, light_speed=1.0, hbar=1.0, phase=0.0, self_conjugate=False):
    """Mode amplitude and its rate for the classical image of ``n`` photons.

    Uses the coordinate scale ``sqrt(2 pi hbar c^2 / omega)`` with ladder
    amplitude ``sqrt(n + 1/2) exp(-i phase)`` on the running component.
    Returns ``(A_k, dA_k/dt)``; the canonical momentum is the rate divided by
    ``4 pi c^2``.
    """
    inertia = 1.0 / (4.0 * math.pi * light_speed**2)
    b = math.sqrt(n + 0.5) * np.exp(-1j * phase)
    return ladder.amplitudes_from_ladder(b, b if self_conjugate else 0.0, omega, hbar, inertia)


def prepare_occupation(spec, index, s, n, hbar=1.0, phase=0.0, base=None):
    """Spectrum with transverse mode ``(k, s)`` at level ``n``."""
    spectrum = base if base is not None else EmModeSpectrum.empty(spec, hbar)
    index, s = spectrum._key((index, s))
    L = spec.cells_per_axis
    partner = tuple((-i) % L for i in index)
    omega = float(spectrum.omega[index])
    x, xdot = prepare_amplitude(n, omega, spec.light_speed, hbar, phase, self_conjugate=(partner == index))
    return spectrum.with_mode(index, s, x, xdot)


def photon_hamiltonian(spectrum, hbar=1.0):
    """Ladder sum ``hbar omega (round(n) + 1/2)`` over all k != 0 and s = 1, 2."""
    mask = spectrum.omega > 0
    omegas = np.repeat(spectrum.omega[mask], 2)
    energies = spectrum.energies[mask].ravel()
    return ladder.hamiltonian_sum(omegas, energies, hbar, spectrum.zero_mode_energy)


def plane_wave(spec, index, polarization, amplitude, phase=0.0):
    """``A = e A0 cos(k.x + phase)`` travelling along +k at the grid frequency.

    Transverse on the grid exactly when ``e`` is orthogonal to an
    axis-aligned k; oblique k leaves an O((ka)^2) longitudinal residue.
    """
    k = wavevector(spec, index)
    e = np.asarray(polarization, dtype=float)
    e = e / np.linalg.norm(e)
    omega = grid_frequency(spec, k)
    arg = cell_positions(spec) @ k + phase
    A = amplitude * np.cos(arg)[..., None] * e
    Adot = amplitude * omega * np.sin(arg)[..., None] * e
    return CellNetField(A, Adot, 0.0)


def random_field(spec, rng, scale=1.0):
    return CellNetField(scale * rng.standard_normal(spec.shape), scale * rng.standard_normal(spec.shape), 0.0)


def transverse_random_field(spec, rng, scale=1.0):
    """Random field with the longitudinal and k = 0 content removed."""
    spectrum = field_to_modes(spec, random_field(spec, rng, scale))
    spectrum.longitudinal[:] = 0.0
    spectrum.longitudinal_dot[:] = 0.0
    spectrum.zero_mode[:] = 0.0
    spectrum.zero_mode_dot[:] = 0.0
    return modes_to_field(spec, spectrum)


def prepare_vacuum(spec, hbar=1.0):
    """Every transverse k != 0 mode at level 0 (one zero-point quantum each)."""
    L = spec.cells_per_axis
    omega = grid_frequency(spec)
    inertia = 1.0 / (4.0 * math.pi * spec.light_speed**2)
    amps = np.zeros((L, L, L, 2), complex)
    vels = np.zeros_like(amps)
    b = math.sqrt(0.5)
    for index in np.ndindex(L, L, L):
        if index == (0, 0, 0):
            continue
        # b_k = b_-k = sqrt(1/2) keeps the spectrum conjugate-symmetric
        x, xdot = ladder.amplitudes_from_ladder(b, b, float(omega[index]), hbar, inertia)
        amps[index] = x
        vels[index] = xdot
    z1 = np.zeros((L, L, L), complex)
    return EmModeSpectrum(spec, amps, vels, z1, z1.copy(), np.zeros(3, complex), np.zeros(3, complex), hbar)
