"""Figures for run reports, rendered off-screen to PNG."""

import os

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

STYLE = {
    "figure.figsize": (6.0, 3.8),
    "figure.dpi": 100,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "axes.spines.top": False,
    "axes.spines.right": False,
    "font.size": 9,
    "legend.frameon": False,
}

# no timestamps or version strings, so identical reports give identical files
_PNG_META = {"Software": None}


def _label(report, name):
    unit = report.units.get(name, "")
    return f"{name} [{unit}]" if unit else name


def _energy_figure(report, names):
    fig, ax = plt.subplots()
    t = report.series["time"]
    for name in names:
        if name in report.series:
            ax.plot(t, report.series[name], label=name, lw=1.0)
    ax.set_xlabel(_label(report, "time"))
    ax.set_ylabel("energy")
    ax.legend()
    return fig


def _dispersion_figure(report):
    fig, ax = plt.subplots()
    if "k" in report.series:
        k = report.series["k"]
        ax.plot(k, report.series["omega_analytic"], "-", lw=1.0, label="analytic")
        ax.plot(k, report.series["omega_measured"], "o", ms=3, label="measured")
        ax.set_xlabel(_label(report, "k"))
        ax.set_ylabel("omega")
    else:
        ka = report.series["ka"]
        ax.loglog(ka, report.series["rel_error"], "o-", ms=3, lw=1.0)
        ax.set_xlabel("k a")
        ax.set_ylabel("|v_phase - c| / c")
    if ax.get_legend_handles_labels()[0]:
        ax.legend()
    return fig


def _hop_figure(report):
    fig, ax = plt.subplots()
    s = report.series
    ax.plot(s["time"], s["radius"], lw=1.0, label="radius")
    ax.set_xlabel(_label(report, "time"))
    ax.set_ylabel(_label(report, "radius"))
    ax2 = ax.twinx()
    ax2.plot(s["time"], s["phase"], lw=0.8, color="C1", label="phase")
    ax2.set_ylabel(_label(report, "phase"))
    return fig


def _occupation_figure(report):
    fig, ax = plt.subplots()
    s = report.series
    target = [max(n, 0.5) for n in s["n_target"]]
    measured = [max(n, 0.5) for n in s["n_measured"]]
    ax.loglog(target, measured, "o", ms=4)
    ax.loglog(target, target, "-", lw=0.8)
    ax.set_xlabel("prepared n (0 shown at 0.5)")
    ax.set_ylabel("recovered n")
    return fig


def _figures(report):
    kind = report.scenario
    if kind == "phonon-sim" and "time" in report.series:
        yield "energy", _energy_figure(report, ("kinetic", "potential", "total_energy"))
    elif kind == "photon-field-sim" and "time" in report.series:
        yield "energy", _energy_figure(report, ("kinetic", "curl_energy", "energy"))
    elif kind == "dispersion-scan":
        yield "dispersion", _dispersion_figure(report)
    elif kind == "hop-trace":
        yield "trajectory", _hop_figure(report)
    elif kind == "quantize-report":
        yield "occupation", _occupation_figure(report)


def render_figures(report, out_dir, stem):
    """Write the figures for ``report`` as ``<stem>_<name>.png``; returns the paths."""
    os.makedirs(out_dir, exist_ok=True)
    paths = []
    with plt.rc_context(STYLE):
        for name, fig in _figures(report):
            fig.tight_layout()
            path = os.path.join(out_dir, f"{stem}_{name}.png")
            fig.savefig(path, metadata=_PNG_META)
            plt.close(fig)
            paths.append(path)
    return paths
