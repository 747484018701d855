"""Periodic mass-spring lattice: geometry, Lagrangian and symplectic stepping.

Sites sit on a hypercubic grid with nearest-neighbour scalar springs of
stiffness ``gamma``. The potential ``(gamma/2) sum_<nn'> |r_n - r_n'|^2`` is
assembled into the bilinear form ``(1/2) sum_nn' K_nn' r_n . r_n'``, with
``K_nn = 2 gamma * dimension`` and ``K_nn' = -gamma`` for each bond, applied
to every Cartesian component independently.
"""

from dataclasses import dataclass, field
import math

import numpy as np
import scipy.sparse as sp

from .errors import IncommensurateError, ShapeError, SpecError, StabilityError

COMMENSURATE_TOL = 1e-9


@dataclass(frozen=True)
class LatticeSpec:
    dimension: int = 1
    sites_per_axis: int = 8
    mass: float = 1.0
    gamma: float = 1.0
    lattice_constant: float = 1.0

    boundary = "periodic"

    def __post_init__(self):
        problems = []
        if self.dimension not in (1, 2, 3):
            problems.append(f"dimension must be 1, 2 or 3, got {self.dimension!r}")
        if int(self.sites_per_axis) != self.sites_per_axis or self.sites_per_axis < 2:
            problems.append(f"sites_per_axis must be an integer >= 2, got {self.sites_per_axis!r}")
        for name in ("mass", "gamma", "lattice_constant"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                problems.append(f"{name} must be positive and finite, got {value!r}")
        if problems:
            raise SpecError("; ".join(problems))

    @property
    def grid_shape(self):
        return (self.sites_per_axis,) * self.dimension

    @property
    def n_sites(self):
        return self.sites_per_axis**self.dimension


@dataclass
class LatticeState:
    """Displacements and velocities with shape ``grid_shape + (dimension,)``."""

    displacements: np.ndarray
    velocities: np.ndarray
    time: float = 0.0

    def __post_init__(self):
        self.displacements = np.asarray(self.displacements, dtype=float)
        self.velocities = np.asarray(self.velocities, dtype=float)
        if self.displacements.shape != self.velocities.shape:
            raise ShapeError(
                f"displacements {self.displacements.shape} and velocities "
                f"{self.velocities.shape} differ in shape"
            )
        if not (np.all(np.isfinite(self.displacements)) and np.all(np.isfinite(self.velocities))):
            raise ValueError("lattice state contains non-finite values")

    def copy(self):
        return LatticeState(self.displacements.copy(), self.velocities.copy(), self.time)


@dataclass
class Lattice:
    """Assembled lattice: topology, coupling form and frequency bound."""

    spec: LatticeSpec
    neighbors: np.ndarray
    coupling: sp.csr_matrix
    omega_max: float
    positions: np.ndarray = field(repr=False)

    @property
    def shape(self):
        return self.spec.grid_shape + (self.spec.dimension,)

    @property
    def stability_bound(self):
        """Largest stable velocity-Verlet step, ``2 / omega_max``."""
        return 2.0 / self.omega_max

    def zero_state(self):
        return LatticeState(np.zeros(self.shape), np.zeros(self.shape), 0.0)

    def check_state(self, state):
        if state.displacements.shape != self.shape:
            raise ShapeError(f"state shape {state.displacements.shape} != lattice shape {self.shape}")


def build_lattice(spec):
    """Assemble neighbour table and coupling matrix for ``spec``."""
    if not isinstance(spec, LatticeSpec):
        raise SpecError("build_lattice expects a LatticeSpec")
    L, d = spec.sites_per_axis, spec.dimension
    n = spec.n_sites
    index = np.arange(n).reshape(spec.grid_shape)
    neighbors = np.empty((n, 2 * d), dtype=np.int64)
    for axis in range(d):
        neighbors[:, 2 * axis] = np.roll(index, -1, axis=axis).ravel()
        neighbors[:, 2 * axis + 1] = np.roll(index, 1, axis=axis).ravel()

    rows = np.repeat(np.arange(n), 2 * d)
    cols = neighbors.ravel()
    offdiag = sp.coo_matrix((np.full(rows.size, -spec.gamma), (rows, cols)), shape=(n, n))
    diag = sp.identity(n, format="coo") * (2.0 * d * spec.gamma)
    # duplicates (L == 2 wraps both bonds onto one pair) are summed by tocsr
    coupling = (offdiag + diag).tocsr()
    coupling.sum_duplicates()

    grids = np.meshgrid(*[np.arange(L)] * d, indexing="ij")
    positions = spec.lattice_constant * np.stack(grids, axis=-1).astype(float)

    ks = reciprocal_axis(spec)
    sin2 = np.sin(ks * spec.lattice_constant / 2.0) ** 2
    omega_max = 2.0 * math.sqrt(spec.gamma / spec.mass) * math.sqrt(d * sin2.max())
    return Lattice(spec, neighbors, coupling, omega_max, positions)


def reciprocal_axis(spec):
    """Commensurate wavenumbers along one axis, in FFT index order."""
    return 2.0 * np.pi * np.fft.fftfreq(spec.sites_per_axis, d=spec.lattice_constant)


def wavevector(spec, indices):
    """Wavevector for integer mode indices ``(j_1, ..., j_d)``."""
    indices = np.atleast_1d(np.asarray(indices, dtype=float))
    if indices.shape != (spec.dimension,):
        raise ShapeError(f"need {spec.dimension} mode indices, got {indices.shape}")
    return 2.0 * np.pi * indices / (spec.sites_per_axis * spec.lattice_constant)


def mode_indices(spec, k):
    """Integer indices of a commensurate wavevector, reduced into ``[0, L)``.

    Raises IncommensurateError if any component is not ``2 pi j / (L a)``.
    """
    k = np.atleast_1d(np.asarray(k, dtype=float))
    if k.shape != (spec.dimension,):
        raise ShapeError(f"wavevector needs {spec.dimension} components, got {k.shape}")
    j = k * spec.sites_per_axis * spec.lattice_constant / (2.0 * np.pi)
    jr = np.round(j)
    if np.any(np.abs(j - jr) > COMMENSURATE_TOL * np.maximum(1.0, np.abs(j))):
        raise IncommensurateError(f"k={k.tolist()} is not commensurate with the periodic box")
    return tuple(int(x) % spec.sites_per_axis for x in jr)


def _flat(lattice, array):
    return array.reshape(lattice.spec.n_sites, -1)


def kinetic_energy(lattice, state):
    lattice.check_state(state)
    return 0.5 * lattice.spec.mass * float(np.sum(state.velocities**2))


def potential_energy(lattice, state):
    lattice.check_state(state)
    r = _flat(lattice, state.displacements)
    return 0.5 * float(np.sum(r * (lattice.coupling @ r)))


def lagrangian(lattice, state):
    """Kinetic minus potential energy of ``state``."""
    return kinetic_energy(lattice, state) - potential_energy(lattice, state)


def total_energy(lattice, state):
    return kinetic_energy(lattice, state) + potential_energy(lattice, state)


def forces(lattice, displacements):
    """Negative gradient of the potential, same shape as ``displacements``."""
    r = _flat(lattice, np.asarray(displacements, dtype=float))
    return -(lattice.coupling @ r).reshape(np.shape(displacements))


def check_dt(lattice, dt):
    bound = lattice.stability_bound
    if not (dt > 0 and dt < bound):
        raise StabilityError(dt, bound, f"dt={dt!r} must satisfy 0 < dt < 2/omega_max = {bound!r}")


def _verlet(coupling, mass, x, v, dt, n_steps):
    """In-place velocity-Verlet on flat ``(n_sites, columns)`` arrays."""
    inv_m = 1.0 / mass
    a = -(coupling @ x) * inv_m
    half = 0.5 * dt
    for _ in range(n_steps):
        v += half * a
        x += dt * v
        a = -(coupling @ x) * inv_m
        v += half * a
    return x, v


def step(lattice, state, dt):
    """One velocity-Verlet step; returns a new state."""
    return evolve(lattice, state, dt, 1)


def evolve(lattice, state, dt, n_steps):
    """``n_steps`` velocity-Verlet steps; returns a new state."""
    lattice.check_state(state)
    check_dt(lattice, dt)
    x = _flat(lattice, state.displacements).copy()
    v = _flat(lattice, state.velocities).copy()
    _verlet(lattice.coupling, lattice.spec.mass, x, v, dt, int(n_steps))
    return LatticeState(
        x.reshape(lattice.shape), v.reshape(lattice.shape), state.time + n_steps * dt
    )


def excite_plane_wave(lattice, k, amplitude, phase=0.0, branch=0):
    """Right-travelling eigenmode ``r = A cos(k.x + phase)`` along ``branch``.

    Velocities are set for ``A cos(k.x - Omega t + phase)`` at the analytic
    branch frequency.
    """
    from .modes import dispersion

    spec = lattice.spec
    mode_indices(spec, k)
    if not 0 <= branch < spec.dimension:
        raise ValueError(f"branch must be in [0, {spec.dimension}), got {branch!r}")
    k = np.atleast_1d(np.asarray(k, dtype=float))
    omega = dispersion(spec, k, branch)
    arg = lattice.positions @ k + phase
    r = np.zeros(lattice.shape)
    v = np.zeros(lattice.shape)
    r[..., branch] = amplitude * np.cos(arg)
    v[..., branch] = amplitude * omega * np.sin(arg)
    return LatticeState(r, v, 0.0)


def random_state(lattice, rng, scale=1.0):
    """Gaussian displacements and velocities, for property checks."""
    return LatticeState(
        scale * rng.standard_normal(lattice.shape),
        scale * rng.standard_normal(lattice.shape),
        0.0,
    )

