import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from phonophot import cellnet as cn
from phonophot.errors import SpecError, StabilityError, SymmetryError, ZeroModeError


def loop_curl(A, a):
    """Forward-difference curl written cell by cell."""
    L = A.shape[0]
    out = np.zeros_like(A)
    for i, j, k in itertools.product(range(L), repeat=3):
        ip, jp, kp = (i + 1) % L, (j + 1) % L, (k + 1) % L
        d = lambda comp, axis: (  # noqa: E731
            A[(ip, j, k) if axis == 0 else (i, jp, k) if axis == 1 else (i, j, kp)][comp] - A[i, j, k][comp]
        ) / a
        out[i, j, k] = (d(2, 1) - d(1, 2), d(0, 2) - d(2, 0), d(1, 0) - d(0, 1))
    return out


def test_curl_matches_cell_loop():
    spec = cn.CellNetSpec(cells_per_axis=4, cell_size=0.7)
    A = np.random.default_rng(0).normal(size=spec.shape)
    np.testing.assert_allclose(cn.curl(spec, A), loop_curl(A, 0.7), atol=1e-12)


def test_curl_of_gradient_vanishes_and_div_of_curl_vanishes():
    spec = cn.CellNetSpec(cells_per_axis=6)
    rng = np.random.default_rng(1)
    phi = rng.normal(size=(6, 6, 6))
    grad = np.stack([np.roll(phi, -1, axis=i) - phi for i in range(3)], axis=-1)
    assert np.max(np.abs(cn.curl(spec, grad))) < 1e-12
    # the forward curl is annihilated by the forward divergence
    B = cn.curl(spec, rng.normal(size=spec.shape))
    div_fwd = sum(np.roll(B[..., i], -1, axis=i) - B[..., i] for i in range(3))
    assert np.max(np.abs(div_fwd)) < 1e-12


def test_curl_energy_equals_minus_a_dot_laplacian_on_transverse_fields():
    spec = cn.CellNetSpec(cells_per_axis=6)
    A = cn.transverse_random_field(spec, np.random.default_rng(2)).A
    lhs = np.sum(cn.curl(spec, A) ** 2)
    rhs = -np.sum(A * cn.laplacian(spec, A))
    assert lhs == pytest.approx(rhs, rel=1e-12)


@pytest.mark.parametrize("index", [(1, 0, 0), (1, 2, 3), (4, 4, 0), (2, 7, 5)])
def test_grid_frequency_is_laplacian_eigenvalue(index):
    spec = cn.CellNetSpec(cells_per_axis=8, cell_size=0.5, light_speed=3.0)
    k = cn.wavevector(spec, index)
    wave = np.exp(1j * (cn.cell_positions(spec) @ k))[..., None] * np.ones(3)
    lap = cn.laplacian(spec, wave.real) + 1j * cn.laplacian(spec, wave.imag)
    omega = cn.grid_frequency(spec, k)
    np.testing.assert_allclose(spec.light_speed**2 * lap, -(omega**2) * wave, atol=1e-10)
    assert cn.grid_frequency(spec)[index] == pytest.approx(omega)


def test_basis_is_orthonormal_and_conjugate_paired():
    spec = cn.CellNetSpec(cells_per_axis=6)
    u, e1, e2 = cn.polarization_basis(spec)
    frame = np.stack((u, e1, e2), axis=-2)
    gram = np.einsum("...ia,...ja->...ij", np.conj(frame), frame)
    np.testing.assert_allclose(gram, np.broadcast_to(np.eye(3), gram.shape), atol=1e-12)
    flip = lambda x: np.roll(np.flip(x, axis=(0, 1, 2)), 1, axis=(0, 1, 2))  # noqa: E731
    for v in (u, e1, e2):
        np.testing.assert_allclose(flip(v), np.conj(v), atol=1e-12)


@settings(max_examples=25, deadline=None)
@given(st.integers(4, 7), st.floats(0.2, 3.0), st.floats(0.2, 3.0), st.integers(0, 2**31))
def test_parseval_and_round_trip(L, a, c, seed):
    spec = cn.CellNetSpec(cells_per_axis=L, cell_size=a, light_speed=c)
    field = cn.random_field(spec, np.random.default_rng(seed))
    spectrum = cn.field_to_modes(spec, field)
    e = cn.energy(spec, field)
    assert abs(spectrum.total_energy() - e) <= 1e-10 * e
    back = cn.modes_to_field(spec, spectrum)
    np.testing.assert_allclose(back.A, field.A, atol=1e-11)
    np.testing.assert_allclose(back.Adot, field.Adot, atol=1e-11)


def test_transverse_field_has_no_divergence():
    spec = cn.CellNetSpec(cells_per_axis=6)
    f = cn.transverse_random_field(spec, np.random.default_rng(4))
    assert np.max(np.abs(cn.divergence(spec, f.A))) < 1e-12
    assert cn.field_to_modes(spec, f).longitudinal_residual < 1e-24


def test_mode_vector_matches_fft():
    spec = cn.CellNetSpec(cells_per_axis=5, cell_size=1.3)
    f = cn.random_field(spec, np.random.default_rng(5))
    full = spec.cell_size**1.5 * np.fft.fftn(f.A, axes=(0, 1, 2), norm="ortho")
    np.testing.assert_allclose(cn.mode_vector(spec, f, (1, 2, 4)), full[1, 2, 4], atol=1e-12)


def test_plane_wave_is_single_running_mode():
    spec = cn.CellNetSpec(cells_per_axis=8)
    f = cn.plane_wave(spec, (0, 2, 0), (1, 0, 0), 0.3)
    spectrum = cn.field_to_modes(spec, f)
    total = spectrum.total_energy()
    running = sum(spectrum[(0, 2, 0), s].energy for s in (1, 2))
    assert running == pytest.approx(total, rel=1e-12)
    assert spectrum.longitudinal_residual < 1e-28


def test_wave_step_conserves_discrete_energy():
    spec = cn.CellNetSpec(cells_per_axis=6)
    f = cn.transverse_random_field(spec, np.random.default_rng(6))
    dt = 0.5 * spec.dt_bound
    m = spec.cell_size**3 / (4 * math.pi * spec.light_speed**2)

    def shadow(field):
        acc = spec.light_speed**2 * cn.laplacian(spec, field.A)
        return cn.energy(spec, field) - m * dt**2 / 8 * np.sum(acc**2)

    e0 = shadow(f)
    out = cn.evolve_wave(spec, f, dt, 400)
    assert abs(shadow(out) - e0) <= 1e-11 * e0


def test_unstable_step_refused():
    spec = cn.CellNetSpec(cells_per_axis=4)
    cn.check_dt(spec, spec.cell_size / (spec.light_speed * math.sqrt(3)))
    with pytest.raises(StabilityError):
        cn.step_wave(spec, cn.zero_field(spec), 1.01 * spec.dt_bound)


def test_spec_validation():
    with pytest.raises(SpecError):
        cn.CellNetSpec(cells_per_axis=3)
    with pytest.raises(SpecError):
        cn.CellNetSpec(light_speed=0.0)


def test_lagrangian_density_of_static_field_is_minus_curl_term():
    spec = cn.CellNetSpec(cells_per_axis=4)
    A = np.random.default_rng(7).normal(size=spec.shape)
    parts = cn.em_lagrangian_density(spec, cn.CellNetField(A, np.zeros_like(A)))
    assert parts.kinetic == 0.0
    assert parts.value == pytest.approx(-np.mean(np.sum(cn.curl(spec, A) ** 2, -1)) / (8 * math.pi))


@pytest.mark.parametrize("n", [0, 1, 10, 1e3, 1e6])
@pytest.mark.parametrize("index,s", [((1, 0, 0), 1), ((1, 2, 3), 2), ((2, 0, 0), 1)])
def test_photon_occupation_round_trip(n, index, s):
    spec = cn.CellNetSpec(cells_per_axis=4, cell_size=0.8, light_speed=2.5)
    hbar = 0.7
    f = cn.modes_to_field(spec, cn.prepare_occupation(spec, index, s, n, hbar, phase=1.2))
    q = cn.quantize_photon(cn.field_to_modes(spec, f, hbar)[index, s], hbar)
    assert q.occupation_raw == pytest.approx(n, abs=1e-6 * max(n, 1))


def test_vacuum_zero_point_sum():
    spec = cn.CellNetSpec(cells_per_axis=4, cell_size=0.5, light_speed=2.0)
    hbar = 1.5
    spectrum = cn.field_to_modes(spec, cn.modes_to_field(spec, cn.prepare_vacuum(spec, hbar)), hbar)
    zp = 0.0
    for i, j, k in itertools.product(range(4), repeat=3):
        if (i, j, k) == (0, 0, 0):
            continue
        kk = (2 / 0.5) * math.sqrt(sum(math.sin(math.pi * x / 4) ** 2 for x in (i, j, k)))
        zp += 2 * 0.5 * hbar * 2.0 * kk
    h = cn.photon_hamiltonian(spectrum, hbar)
    assert h.total == pytest.approx(zp, rel=1e-12)
    assert spectrum.transverse_energy() == pytest.approx(zp, rel=1e-12)
    assert h.n_modes == 2 * 63


def test_zero_mode_rejected():
    spec = cn.CellNetSpec(cells_per_axis=4)
    with pytest.raises(ZeroModeError):
        cn.EmModeSpectrum.empty(spec).with_mode((0, 0, 0), 1, 1.0, 0.0)


def test_asymmetric_spectrum_rejected():
    spec = cn.CellNetSpec(cells_per_axis=4)
    s = cn.EmModeSpectrum.empty(spec)
    s.amplitudes[1, 0, 0, 0] = 1.0
    with pytest.raises(SymmetryError):
        cn.modes_to_field(spec, s)


def test_photon_and_phonon_ladders_share_one_mapping():
    """Same omega, same n: the field amplitude is the phonon one scaled by sqrt(4 pi) c."""
    from phonophot import lattice as lt
    from phonophot import modes as md

    c = 1.7
    lat = lt.build_lattice(lt.LatticeSpec(sites_per_axis=4))
    ph = md.prepare_occupation(lat, (1,), 0, 3.0)
    omega = float(ph.omega[1])
    A, Adot = cn.prepare_amplitude(3.0, omega, light_speed=c)
    assert A == pytest.approx(ph.amplitudes[1, 0] * math.sqrt(4 * math.pi) * c, rel=1e-14)
    assert Adot == pytest.approx(ph.momenta[1, 0] * math.sqrt(4 * math.pi) * c, rel=1e-14)
