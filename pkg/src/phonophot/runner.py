"""Scenario orchestration: run a parsed config and collect a RunReport.

Each scenario attaches oracle rows computed from closed forms, brute-force
sums or independent integration, never from the code path they check.
"""

import math
import time

import numpy as np

from . import cellnet as cn
from . import kinematics as kin
from . import lattice as lt
from . import modes as md
from .errors import NumericFailure
from .report import OracleRow, RunReport, _clean
from .spectral import spectral_peak

ENERGY_DRIFT_TOL = 1e-6
DISCRETE_ENERGY_TOL = 1e-10
PARSEVAL_TOL = 1e-10
PURITY_FLOOR = 0.999
REVERSIBILITY_TOL = 1e-8
DISPERSION_TOL = 0.01
OCCUPATION_TOL = 1e-6
ROUNDOFF_TOL = 1e-12
TRANSVERSE_TOL = 1e-10
TRAJECTORY_TOL = 1e-8


def run(config, strict=None):
    """Run ``config`` and return its report. ``strict`` overrides ``config.strict``."""
    if strict is not None:
        config.strict = strict
    start = time.perf_counter()
    handler = _SCENARIOS[config.kind]
    report = RunReport(scenario=config.kind, config=_clean(config.as_dict()))
    handler(config, report)
    if config.observables:
        keep = [n for n in report.series if n in config.observables or n == "time"]
        report.series = {n: report.series[n] for n in keep}
        report.units = {n: report.units[n] for n in keep}
    report.summary = _clean(report.summary)
    report.tables = _clean(report.tables)
    report.timing = time.perf_counter() - start
    return report


def _finite(step, *arrays):
    for arr in arrays:
        if not np.all(np.isfinite(arr)):
            raise NumericFailure(step)


# --- lattice ------------------------------------------------------------------

def _brute_potential(spec, displacements):
    """Spring sum over bonds, written independently of the assembled form."""
    d = spec.dimension
    total = 0.0
    for axis in range(d):
        diff = np.roll(displacements, -1, axis=axis) - displacements
        total += float(np.sum(diff**2))
    return 0.5 * spec.gamma * total


def _lattice_initial(config, lattice, rng):
    ex = config.excitation
    spec = lattice.spec
    etype = ex.get("type", "none")
    if etype == "none":
        return lattice.zero_state(), None
    if etype == "random":
        return lt.random_state(lattice, rng, ex.get("scale", 1.0)), None
    index = tuple(ex.get("k", (1,) + (0,) * (spec.dimension - 1)))
    k = lt.wavevector(spec, index)
    amp = ex.get("amplitude", 0.01 * spec.lattice_constant)
    state = lt.excite_plane_wave(lattice, k, amp, ex.get("phase", 0.0), ex.get("branch", 0))
    return state, tuple(j % spec.sites_per_axis for j in index)


def _run_phonon(config, report):
    spec = config.lattice
    lattice = lt.build_lattice(spec)
    rng = np.random.default_rng(config.seed)
    state0, index = _lattice_initial(config, lattice, rng)
    branch = config.excitation.get("branch", 0)
    dt, steps, stride = config.dt, config.steps, config.stride
    n = spec.n_sites
    x = state0.displacements.reshape(n, -1).copy()
    v = state0.velocities.reshape(n, -1).copy()
    m = spec.mass
    K = lattice.coupling

    def energies(x, v):
        ke = 0.5 * m * float(np.sum(v * v))
        kx = K @ x
        pe = 0.5 * float(np.sum(x * kx))
        shadow = ke + pe - (dt * dt / (8.0 * m)) * float(np.sum(kx * kx))
        return ke, pe, shadow

    samples = {"time": [], "kinetic": [], "potential": [], "total_energy": [], "lagrangian": [],
               "discrete_energy": []}
    mode_amp, mode_frac = [], []
    if index is not None:
        phase = np.exp(-1j * (lattice.positions @ lt.wavevector(spec, index))) / math.sqrt(n)
        phase = phase.ravel()

    def sample(step_no, x, v):
        _finite(step_no, x, v)
        ke, pe, shadow = energies(x, v)
        samples["time"].append(step_no * dt)
        samples["kinetic"].append(ke)
        samples["potential"].append(pe)
        samples["total_energy"].append(ke + pe)
        samples["lagrangian"].append(ke - pe)
        samples["discrete_energy"].append(shadow)
        if index is not None:
            a_k = math.sqrt(m) * complex(phase @ x[:, branch])
            p_k = math.sqrt(m) * complex(phase @ v[:, branch])
            om = md.frequency_grid(spec)[index]
            run_e = 0.5 * abs(om * a_k + 1j * p_k) ** 2
            mode_amp.append(abs(a_k))
            mode_frac.append(run_e / (ke + pe) if ke + pe > 0 else 0.0)

    sample(0, x, v)
    done = 0
    while done < steps:
        chunk = min(stride, steps - done)
        lt._verlet(K, m, x, v, dt, chunk)
        done += chunk
        sample(done, x, v)

    units = {"time": "t", "kinetic": "E", "potential": "E", "total_energy": "E", "lagrangian": "E",
             "discrete_energy": "E"}
    for name, vals in samples.items():
        report.add_series(name, units[name], vals)
    if index is not None:
        report.add_series("mode_amplitude", "L*sqrt(M)", mode_amp)
        report.add_series("mode_energy_fraction", "1", mode_frac)

    final = lt.LatticeState(x.reshape(lattice.shape), v.reshape(lattice.shape), done * dt)
    E = np.asarray(samples["total_energy"])
    E0 = E[0]
    report.summary.update({
        "omega_max": lattice.omega_max,
        "stability_bound": lattice.stability_bound,
        "dt": dt,
        "steps": steps,
        "initial_energy": E0,
        "final_energy": float(E[-1]),
    })

    if E0 == 0.0:
        report.oracles.append(OracleRow.bound("energy_stays_zero", float(np.max(np.abs(E))), 0.0))
    elif config.excitation.get("type") == "random":
        Es = np.asarray(samples["discrete_energy"])
        report.oracles.append(OracleRow.bound(
            "discrete_energy_drift", float(np.max(np.abs(Es - Es[0])) / Es[0]), DISCRETE_ENERGY_TOL))
        h = lattice.omega_max * dt
        report.oracles.append(OracleRow.bound(
            "energy_oscillation_within_scheme_bound", float(np.max(np.abs(E - E0)) / E0), 1.01 * h * h / 4.0))
    else:
        report.oracles.append(OracleRow.bound(
            "energy_drift", float(np.max(np.abs(E - E0)) / E0), ENERGY_DRIFT_TOL))

    # brute-force potential against the assembled coupling form
    pe_brute = _brute_potential(spec, final.displacements)
    report.oracles.append(OracleRow.compare(
        "potential_vs_bond_sum", pe_brute, samples["potential"][-1], ROUNDOFF_TOL,
        absolute=(pe_brute == 0.0)))

    spectrum = md.decompose(lattice, final)
    e_real = samples["total_energy"][-1]
    report.oracles.append(OracleRow.compare(
        "parseval", e_real, spectrum.total_energy(), PARSEVAL_TOL, absolute=(e_real == 0.0)))

    if index is not None and E0 > 0:
        report.oracles.append(OracleRow.at_least("single_mode_purity", mode_frac[-1], PURITY_FLOOR))
        report.summary["excited_index"] = list(index)
        report.summary["analytic_omega"] = float(md.frequency_grid(spec)[index])

    if steps and steps <= 100_000:
        xb = x.copy()
        vb = -v.copy()
        lt._verlet(K, m, xb, vb, dt, steps)
        x0 = state0.displacements.reshape(n, -1)
        scale = max(float(np.max(np.abs(x0))), 1e-300)
        err = float(np.max(np.abs(xb - x0))) / scale if np.any(x0) else float(np.max(np.abs(xb)))
        report.oracles.append(OracleRow.bound("time_reversibility", err, REVERSIBILITY_TOL))

    if config.full_state:
        report.tables["final_displacements"] = final.displacements.reshape(n, -1).tolist()
        report.tables["final_velocities"] = final.velocities.reshape(n, -1).tolist()


def dispersion_scan(spec, dt=None, periods=50.0, stride=10, amplitude=1e-3):
    """Measure each commensurate k along axis 0 from a simulated time series.

    All k are integrated together as independent columns of one flat state,
    for at least ``periods`` periods of the slowest mode. Returns a list of
    row dicts ordered by mode index.
    """
    lattice = lt.build_lattice(spec)
    if dt is None:
        dt = 0.1 / lattice.omega_max
    lt.check_dt(lattice, dt)
    L = spec.sites_per_axis
    d = spec.dimension
    indices = [(j,) + (0,) * (d - 1) for j in range(1, L)]
    omegas = np.array([md.dispersion(spec, lt.wavevector(spec, idx)) for idx in indices])
    n = spec.n_sites
    cols = len(indices)
    x = np.empty((n, cols))
    v = np.empty((n, cols))
    proj = np.empty((cols, n), complex)
    for c, idx in enumerate(indices):
        k = lt.wavevector(spec, idx)
        st = lt.excite_plane_wave(lattice, k, amplitude, 0.0, 0)
        x[:, c] = st.displacements[..., 0].ravel()
        v[:, c] = st.velocities[..., 0].ravel()
        proj[c] = (np.exp(-1j * (lattice.positions @ k)) / math.sqrt(n)).ravel()
    t_needed = periods * 2.0 * math.pi / omegas.min()
    n_samples = int(math.ceil(t_needed / (stride * dt))) + 1
    series = np.empty((n_samples, cols), complex)
    times = np.arange(n_samples) * stride * dt
    series[0] = np.einsum("cn,nc->c", proj, x)
    for s in range(1, n_samples):
        lt._verlet(lattice.coupling, spec.mass, x, v, dt, stride)
        _finite(s * stride, x)
        series[s] = np.einsum("cn,nc->c", proj, x)
    rows = []
    for c, idx in enumerate(indices):
        measured = spectral_peak(times, series[:, c])
        analytic = 2.0 * math.sqrt(spec.gamma / spec.mass) * abs(
            math.sin(math.pi * idx[0] / L))  # closed form, independent of md.dispersion
        rows.append({
            "index": idx[0],
            "k": float(2.0 * math.pi * idx[0] / (L * spec.lattice_constant)),
            "omega_analytic": analytic,
            "omega_measured": measured,
            "rel_error": abs(measured - analytic) / analytic,
            "periods": float(times[-1] * analytic / (2.0 * math.pi)),
        })
    return rows, {"dt": dt, "steps": (n_samples - 1) * stride, "samples": n_samples}


def _run_dispersion(config, report):
    if config.cellnet is not None:
        return _run_cellnet_dispersion(config, report)
    rows, info = dispersion_scan(config.lattice, config.dt, config.periods, config.stride,
                                 config.excitation.get("amplitude", 1e-3))
    report.summary.update(info)
    report.summary["max_rel_error"] = max(r["rel_error"] for r in rows)
    report.summary["min_periods"] = min(r["periods"] for r in rows)
    report.add_series("k", "1/L", [r["k"] for r in rows])
    report.add_series("omega_analytic", "1/t", [r["omega_analytic"] for r in rows])
    report.add_series("omega_measured", "1/t", [r["omega_measured"] for r in rows])
    report.add_series("rel_error", "1", [r["rel_error"] for r in rows])
    report.tables["dispersion"] = rows
    for r in rows:
        report.oracles.append(OracleRow.compare(
            f"dispersion_k{r['index']}", r["omega_analytic"], r["omega_measured"], DISPERSION_TOL))
    report.oracles.append(OracleRow.at_least("periods_simulated", report.summary["min_periods"], config.periods))


# --- cell net -----------------------------------------------------------------

LEAPFROG_DISPERSION_TOL = 1e-5
ORDER_TARGET, ORDER_TOL = 2.0, 0.2


def cellnet_dispersion(spec, index=(1, 0, 0), courant=0.3, periods=20.0, stride=4):
    """Measured angular frequency of a single travelling plane wave on ``spec``."""
    a, c = spec.cell_size, spec.light_speed
    dt = courant * a / c
    cn.check_dt(spec, dt)
    k = cn.wavevector(spec, index)
    pol = np.array([0.0, 1.0, 0.0]) if k[1] == 0 else np.array([0.0, 0.0, 1.0])
    field = cn.plane_wave(spec, index, pol, 1.0)
    A, Adot = field.A.copy(), field.Adot.copy()
    proj = np.exp(-1j * (cn.cell_positions(spec) @ k)) / spec.n_cells
    omega_grid = cn.grid_frequency(spec, k)
    n = int(math.ceil(periods * 2.0 * math.pi / omega_grid / (stride * dt))) + 1
    sig = np.empty(n, complex)
    for s in range(n):
        sig[s] = np.sum(proj * (A @ pol))
        if s < n - 1:
            cn._verlet(spec, A, Adot, dt, stride)
            _finite(s * stride, A)
    times = np.arange(n) * stride * dt
    measured = spectral_peak(times, sig)
    knorm = float(np.linalg.norm(k))
    return {
        "cells_per_axis": spec.cells_per_axis,
        "ka": knorm * a,
        "omega_measured": measured,
        "omega_grid": omega_grid,
        # leapfrog on top of the grid: sin(w dt / 2) = (dt / 2) omega_grid
        "omega_scheme": 2.0 / dt * math.asin(0.5 * dt * omega_grid),
        "omega_continuum": c * knorm,
        "phase_velocity": measured / knorm,
        "rel_error": abs(measured / knorm - c) / c,
        "steps": (n - 1) * stride,
    }


def dispersion_convergence(sizes=(8, 16, 32), length=1.0, light_speed=1.0, courant=0.3, periods=20.0):
    """Phase velocity of the longest wave in a box of fixed ``length`` under grid refinement.

    Returns ``(rows, order, extrapolated)``: the observed order is the
    least-squares slope of log error against log(ka), and the ka -> 0
    velocity is the Richardson extrapolation of the two finest grids
    assuming an O((ka)^2) leading error.
    """
    rows = []
    for L in sizes:
        spec = cn.CellNetSpec(cells_per_axis=L, cell_size=length / L, light_speed=light_speed)
        rows.append(cellnet_dispersion(spec, (1, 0, 0), courant, periods))
    ka = np.array([r["ka"] for r in rows])
    err = np.array([r["rel_error"] for r in rows])
    order = float(np.polyfit(np.log(ka), np.log(err), 1)[0])
    coarse, fine = rows[-2], rows[-1]
    ratio = (coarse["ka"] / fine["ka"]) ** 2
    extrapolated = (ratio * fine["phase_velocity"] - coarse["phase_velocity"]) / (ratio - 1.0)
    return rows, order, float(extrapolated)


def _run_cellnet_dispersion(config, report):
    spec = config.cellnet
    L = spec.cells_per_axis
    sizes = (L, 2 * L, 4 * L)
    length = L * spec.cell_size
    courant = spec.light_speed * config.dt / spec.cell_size
    rows, order, v0 = dispersion_convergence(sizes, length, spec.light_speed, courant, config.periods)
    for name, unit in (("cells_per_axis", "1"), ("ka", "1"), ("omega_measured", "1/t"),
                       ("omega_scheme", "1/t"), ("omega_grid", "1/t"), ("phase_velocity", "L/t"),
                       ("rel_error", "1")):
        report.add_series(name, unit, [r[name] for r in rows])
    report.tables["convergence"] = rows
    report.summary.update({"courant": courant, "convergence_order": order,
                           "extrapolated_phase_velocity": v0, "light_speed": spec.light_speed})
    for r in rows:
        report.oracles.append(OracleRow.compare(
            f"leapfrog_dispersion_L{r['cells_per_axis']}", r["omega_scheme"], r["omega_measured"],
            LEAPFROG_DISPERSION_TOL))
    report.oracles.append(OracleRow.compare("extrapolated_phase_velocity", spec.light_speed, v0, DISPERSION_TOL))
    report.oracles.append(OracleRow.compare("convergence_order", ORDER_TARGET, order, ORDER_TOL, absolute=True))

def _cellnet_initial(config, spec, rng):
    ex = config.excitation
    etype = ex.get("type", "none")
    if etype == "none":
        return cn.zero_field(spec), None
    if etype == "random":
        return cn.transverse_random_field(spec, rng, ex.get("scale", 1.0)), None
    index = tuple(ex.get("k", (1, 0, 0)))
    pol = ex.get("polarization", (0.0, 1.0, 0.0))
    field = cn.plane_wave(spec, index, pol, ex.get("amplitude", 1.0), ex.get("phase", 0.0))
    return field, (tuple(j % spec.cells_per_axis for j in index), np.asarray(pol, float) / np.linalg.norm(pol))


def _run_photon_field(config, report):
    spec = config.cellnet
    rng = np.random.default_rng(config.seed)
    field0, mode = _cellnet_initial(config, spec, rng)
    dt, steps, stride = config.dt, config.steps, config.stride
    c = spec.light_speed
    a3 = spec.cell_size**3
    A = field0.A.copy()
    Adot = field0.Adot.copy()
    lap = np.empty_like(A)

    names = ("time", "energy", "kinetic", "curl_energy", "discrete_energy")
    samples = {k: [] for k in names}
    mode_re, mode_im = [], []
    if mode is not None:
        index, pol = mode
        phase = np.exp(-1j * (cn.cell_positions(spec) @ cn.wavevector(spec, index)))
        phase *= spec.cell_size**1.5 / math.sqrt(spec.n_cells)

    def sample(step_no):
        _finite(step_no, A, Adot)
        f = cn.CellNetField(A, Adot, step_no * dt)
        parts = cn.em_lagrangian_density(spec, f)
        kin_e = parts.kinetic * spec.volume
        cur_e = parts.curl * spec.volume
        cn.laplacian(spec, A, out=lap)
        acc2 = c**4 * float(np.sum(lap * lap))
        shadow = kin_e + cur_e - a3 / (4.0 * math.pi * c**2) * dt * dt / 8.0 * acc2
        samples["time"].append(step_no * dt)
        samples["energy"].append(kin_e + cur_e)
        samples["kinetic"].append(kin_e)
        samples["curl_energy"].append(cur_e)
        samples["discrete_energy"].append(shadow)
        if mode is not None:
            amp = complex(np.tensordot(phase, A, axes=((0, 1, 2), (0, 1, 2))) @ pol)
            mode_re.append(amp.real)
            mode_im.append(amp.imag)

    sample(0)
    done = 0
    while done < steps:
        chunk = min(stride, steps - done)
        cn._verlet(spec, A, Adot, dt, chunk)
        done += chunk
        sample(done)

    units = {"time": "t", "energy": "E", "kinetic": "E", "curl_energy": "E", "discrete_energy": "E"}
    for name in names:
        report.add_series(name, units[name], samples[name])
    if mode is not None:
        report.add_series("mode_amplitude_re", "A*L^1.5", mode_re)
        report.add_series("mode_amplitude_im", "A*L^1.5", mode_im)

    E = np.asarray(samples["energy"])
    E0 = E[0]
    report.summary.update({"dt": dt, "courant": c * dt / spec.cell_size, "steps": steps,
                           "initial_energy": E0, "final_energy": float(E[-1])})
    if E0 == 0.0:
        report.oracles.append(OracleRow.bound("energy_stays_zero", float(np.max(np.abs(E))), 0.0))
    elif mode is None:
        Es = np.asarray(samples["discrete_energy"])
        report.oracles.append(OracleRow.bound(
            "discrete_energy_drift", float(np.max(np.abs(Es - Es[0])) / Es[0]), DISCRETE_ENERGY_TOL))
    else:
        report.oracles.append(OracleRow.bound(
            "energy_drift", float(np.max(np.abs(E - E0)) / E0), ENERGY_DRIFT_TOL))

    final = cn.CellNetField(A, Adot, done * dt)
    spectrum = cn.field_to_modes(spec, final)
    e_real = samples["energy"][-1]
    report.oracles.append(OracleRow.compare(
        "parseval", e_real, spectrum.total_energy(), PARSEVAL_TOL, absolute=(e_real == 0.0)))
    report.summary["longitudinal_residual"] = spectrum.longitudinal_residual
    if mode is None or _grid_transverse(spec, mode):
        report.oracles.append(OracleRow.bound("longitudinal_residual", spectrum.longitudinal_residual, TRANSVERSE_TOL))

    if mode is not None and E0 > 0:
        index, _ = mode
        k = cn.wavevector(spec, index)
        analytic = 2.0 * c / spec.cell_size * math.sqrt(sum(math.sin(x * spec.cell_size / 2.0) ** 2 for x in k))
        report.summary["grid_omega"] = analytic
        duration = done * dt
        if duration * analytic >= 4.0 * math.pi and len(mode_re) >= 8:
            sig = np.asarray(mode_re) + 1j * np.asarray(mode_im)
            measured = spectral_peak(np.asarray(samples["time"]), sig)
            report.summary["measured_omega"] = measured
            report.summary["phase_velocity"] = measured / float(np.linalg.norm(k))
            report.oracles.append(OracleRow.compare("grid_dispersion", analytic, measured, DISPERSION_TOL))

    if config.full_state:
        report.tables["final_A"] = A.reshape(-1, 3).tolist()
        report.tables["final_Adot"] = Adot.reshape(-1, 3).tolist()


def _grid_transverse(spec, mode):
    """Plane waves are exactly transverse on the grid for axis-aligned k with e orthogonal to k."""
    index, pol = mode
    k = cn.wavevector(spec, index)
    nonzero = np.flatnonzero(np.abs(np.sin(k * spec.cell_size / 2.0)) > 0)
    return bool(np.all(np.abs(pol[nonzero]) < 1e-15))


# --- quantization ---------------------------------------------------------------

DEFAULT_OCCUPATIONS = (0.0, 1.0, 10.0, 1e3, 1e6)


def _run_quantize(config, report):
    q = config.quantize
    hbar = q.get("hbar", 1.0)
    occupations = q.get("occupations", DEFAULT_OCCUPATIONS)
    if config.lattice is not None:
        rows, vac = _quantize_phonon(config.lattice, q, hbar, occupations)
    else:
        rows, vac = _quantize_photon(config.cellnet, q, hbar, occupations)
    report.add_series("n_target", "1", [r["n_target"] for r in rows])
    report.add_series("n_measured", "1", [r["n_measured"] for r in rows])
    report.add_series("n_rounded", "1", [r["n_rounded"] for r in rows])
    report.add_series("ladder_energy", "E", [r["ladder_energy"] for r in rows])
    report.tables["occupations"] = rows
    report.summary.update(vac)
    for r in rows:
        tol = OCCUPATION_TOL * max(r["n_target"], 1.0)
        report.oracles.append(OracleRow.compare(
            f"occupation_roundtrip_n{r['n_target']:g}", r["n_target"], r["n_measured"], tol, absolute=True))
    report.oracles.append(OracleRow.compare(
        "vacuum_is_zero_point", vac["zero_point_oracle"], vac["vacuum_hamiltonian"], ROUNDOFF_TOL))
    report.oracles.append(OracleRow.compare(
        "vacuum_mode_energy_sum", vac["zero_point_oracle"], vac["vacuum_mode_energy"], ROUNDOFF_TOL))
    report.oracles.append(OracleRow.compare(
        "one_quantum_step", vac["quantum"], vac["ladder_step"], ROUNDOFF_TOL))


def _quantize_phonon(spec, q, hbar, occupations):
    lattice = lt.build_lattice(spec)
    qc = md.QuantizationConstants(hbar)
    index = tuple(j % spec.sites_per_axis for j in q.get("k", (1,) + (0,) * (spec.dimension - 1)))
    s = q.get("branch", 0)
    rows = []
    for n in occupations:
        prepared = md.prepare_occupation(lattice, index, s, n, qc)
        state = md.reconstruct(lattice, prepared)
        entry = md.decompose(lattice, state, hbar)[index, s]
        qm = md.quantize(entry, qc)
        rows.append({"n_target": float(n), "n_measured": qm.occupation_raw, "n_rounded": qm.occupation,
                     "ladder_energy": qm.ladder_energy, "omega": qm.omega})
    vacuum = md.decompose(lattice, md.reconstruct(lattice, md.prepare_vacuum(lattice, qc)), hbar)
    ham = md.hamiltonian_total(vacuum, qc)
    # independent closed-form zero-point sum over every k != 0 and branch
    zp = 0.0
    L, d = spec.sites_per_axis, spec.dimension
    for idx in np.ndindex(*spec.grid_shape):
        if not any(idx):
            continue
        s2 = sum(math.sin(math.pi * j / L) ** 2 for j in idx)
        zp += d * 0.5 * hbar * 2.0 * math.sqrt(spec.gamma / spec.mass) * math.sqrt(s2)
    excited = md.prepare_occupation(lattice, index, s, 1.0, qc, base=md.prepare_vacuum(lattice, qc))
    ham1 = md.hamiltonian_total(md.decompose(lattice, md.reconstruct(lattice, excited), hbar), qc)
    quantum = hbar * md.dispersion(spec, lt.wavevector(spec, index), s)
    return rows, {
        "vacuum_hamiltonian": ham.total,
        "vacuum_zero_point": ham.zero_point,
        "vacuum_mode_energy": vacuum.total_energy(),
        "zero_point_oracle": zp,
        "retained_modes": ham.n_modes,
        "ladder_step": ham1.total - ham.total,
        "quantum": quantum,
    }


def _quantize_photon(spec, q, hbar, occupations):
    index = tuple(j % spec.cells_per_axis for j in q.get("k", (1, 0, 0)))
    s = q.get("branch", 1)
    rows = []
    for n in occupations:
        prepared = cn.prepare_occupation(spec, index, s, n, hbar)
        field = cn.modes_to_field(spec, prepared)
        entry = cn.field_to_modes(spec, field, hbar)[index, s]
        qm = cn.quantize_photon(entry, hbar)
        rows.append({"n_target": float(n), "n_measured": qm.occupation_raw, "n_rounded": qm.occupation,
                     "ladder_energy": qm.ladder_energy, "omega": qm.omega})
    vac_spec = cn.prepare_vacuum(spec, hbar)
    vacuum = cn.field_to_modes(spec, cn.modes_to_field(spec, vac_spec), hbar)
    ham = cn.photon_hamiltonian(vacuum, hbar)
    L, a, c = spec.cells_per_axis, spec.cell_size, spec.light_speed
    zp = 0.0
    for idx in np.ndindex(L, L, L):
        if not any(idx):
            continue
        kk = 2.0 / a * math.sqrt(sum(math.sin(math.pi * j / L) ** 2 for j in idx))
        zp += 2 * 0.5 * hbar * c * kk
    excited = cn.prepare_occupation(spec, index, s, 1.0, hbar, base=vac_spec)
    ham1 = cn.photon_hamiltonian(cn.field_to_modes(spec, cn.modes_to_field(spec, excited), hbar), hbar)
    quantum = hbar * cn.grid_frequency(spec, cn.wavevector(spec, index))
    return rows, {
        "vacuum_hamiltonian": ham.total,
        "vacuum_zero_point": ham.zero_point,
        "vacuum_mode_energy": vacuum.transverse_energy(),
        "zero_point_oracle": zp,
        "retained_modes": ham.n_modes,
        "ladder_step": ham1.total - ham.total,
        "quantum": quantum,
    }


# --- photon core ----------------------------------------------------------------

def _core_from(photon):
    lam = photon["wavelength"]
    if "period" in photon:
        T = photon["period"]
    else:
        T = lam / photon.get("light_speed", 1.0)
    return kin.PhotonCore(
        position=photon["position"],
        wavelength=lam,
        period=T,
        phase=photon.get("phase", 0.0),
        emission_time=photon.get("emission_time", 0.0),
        cell_size=photon["cell_size"],
    )


def _rk4_radial(p0, c, t_end, n_steps):
    """Classical RK4 on dn/dt = c n/|n|; oracle for the closed-form trajectory."""
    f = lambda p: c * p / math.sqrt(float(p @ p))  # noqa: E731
    p = np.asarray(p0, dtype=float)
    h = t_end / n_steps
    for _ in range(n_steps):
        k1 = f(p)
        k2 = f(p + 0.5 * h * k1)
        k3 = f(p + 0.5 * h * k2)
        k4 = f(p + h * k3)
        p = p + h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)
    return p


def _run_hop_trace(config, report):
    photon = config.photon
    core = _core_from(photon)
    a = core.cell_size
    c = core.light_speed
    D = photon["duration"]
    sched = kin.hop_schedule(core, a, D)
    tau = sched.lifetime
    t0 = core.emission_time
    n_samp = photon["samples"]
    start = tau if config.strict else 0.0
    times = [t0 + start + (D - start) * (i + 0.5) / n_samp for i in range(n_samp)]

    u = core.direction
    aligned = int(np.count_nonzero(u)) == 1
    if aligned:
        axis = int(np.flatnonzero(u)[0])
        ratio = core.position[axis] / a
        aligned = abs(ratio - round(ratio)) < 1e-12
    cols = {k: [] for k in ("time", "x", "y", "z", "radius", "phase", "cell_x", "cell_y", "cell_z",
                            "scheduled_x", "scheduled_y", "scheduled_z")}
    worst = 0
    for t in times:
        p = kin.core_position(core, t, strict=config.strict)
        cell = kin.cell_of(p, a)
        want = sched.cell_at(t)
        worst = max(worst, max(abs(i - j) for i, j in zip(cell, want)))
        d = c * (t - t0)
        for key, val in zip(("time", "x", "y", "z", "radius", "phase"),
                            (t, p[0], p[1], p[2], float(np.linalg.norm(p)), kin.phase_at_distance(core, d))):
            cols[key].append(val)
        for key, val in zip(("cell_x", "cell_y", "cell_z"), cell):
            cols[key].append(val)
        for key, val in zip(("scheduled_x", "scheduled_y", "scheduled_z"), want):
            cols[key].append(val)
    units = {"time": "t", "x": "L", "y": "L", "z": "L", "radius": "L", "phase": "rad"}
    for key, vals in cols.items():
        report.add_series(key, units.get(key, "cell"), vals)

    report.summary.update({
        "lifetime": tau,
        "cells_per_wavelength": sched.cells_per_wavelength,
        "hop_count": sched.hop_count,
        "traversal_cells": len(sched.traversal),
        "light_speed": c,
        "axis_aligned": aligned,
    })
    report.tables["schedule"] = [{"cell": list(cell), "entry_time": t} for cell, t in sched.entries]
    report.tables["traversal"] = [{"cell": list(cell), "entry_time": t, "residence": r}
                                  for cell, t, r in sched.traversal]

    report.oracles.append(OracleRow.compare("tau_c_equals_a", a, tau * c, ROUNDOFF_TOL))
    expected_hops = round(c * D / a)
    report.oracles.append(OracleRow.bound("hop_count", abs(sched.hop_count - expected_hops), 1))
    report.oracles.append(OracleRow.bound("schedule_matches_trajectory", worst, 0 if aligned else 1))

    restore = 0.0
    for d in np.linspace(0.0, c * D, 17):
        p1 = kin.phase_at_distance(core, float(d))
        p2 = kin.phase_at_distance(core, float(d) + core.wavelength)
        diff = abs(p1 - p2)
        restore = max(restore, min(diff, 2.0 * math.pi - diff))
    report.oracles.append(OracleRow.bound("phase_restoration", restore, ROUNDOFF_TOL * max(1.0, c * D / core.wavelength)))

    t_end = t0 + D
    closed = kin.core_position(core, t_end)
    numeric = _rk4_radial(core.position, c, D, 1000)
    err = float(np.linalg.norm(closed - numeric) / np.linalg.norm(closed))
    report.oracles.append(OracleRow.bound("trajectory_vs_rk4", err, TRAJECTORY_TOL))
    growth = (float(np.linalg.norm(closed)) - float(np.linalg.norm(core.position))) / D
    report.oracles.append(OracleRow.compare("radial_speed", c, growth, ROUNDOFF_TOL * 10))


def _run_lifetime(config, report):
    photon = config.photon
    rep = kin.lifetime_report(
        photon["wavelength"],
        photon.get("period"),
        photon.get("cell_size", 1.0),
        photon.get("light_speed"),
        photon.get("claimed_cells"),
        photon.get("claimed_lifetime"),
    )
    report.summary.update(rep.as_dict())
    report.warnings.extend(rep.warnings)
    report.add_series("cells_per_wavelength", "1", [rep.cells_per_wavelength])
    report.add_series("lifetime", "s", [rep.lifetime])
    report.add_series("consistency_ratio", "1", [rep.consistency_ratio])
    report.add_series("frequency", "Hz", [rep.frequency])
    # plain float arithmetic as the cross-check on the decimal path
    lam, a = photon["wavelength"], photon.get("cell_size", 1.0)
    T = photon["period"] if "period" in photon else lam / photon["light_speed"]
    report.oracles.append(OracleRow.compare("cells_per_wavelength", lam / a, rep.cells_per_wavelength, 1e-15))
    report.oracles.append(OracleRow.compare("lifetime", T * a / lam, rep.lifetime, 1e-15))
    report.oracles.append(OracleRow.compare("tau_times_implied_c", a, rep.lifetime * (lam / T), 1e-15))


_SCENARIOS = {
    "phonon-sim": _run_phonon,
    "photon-field-sim": _run_photon_field,
    "dispersion-scan": _run_dispersion,
    "quantize-report": _run_quantize,
    "hop-trace": _run_hop_trace,
    "lifetime-calc": _run_lifetime,
}
