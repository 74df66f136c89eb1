"""SVG plots rendered purely from a result bundle's CSV files.

No physics is computed here: every curve is read back from the CSVs that
:mod:`chargesim.experiments` wrote, so a plot can always be regenerated
from the data artifacts alone (``simcli plot <result-dir>``).
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .errors import InvalidParameterError


def _read_csv(path: Path) -> dict[str, np.ndarray]:
    """Columns of a result CSV as float arrays keyed by header name."""
    with open(path, encoding="utf-8", newline="") as handle:
        reader = csv.reader(handle)
        header = next(reader)
        rows = list(reader)
    columns = {}
    for k, name in enumerate(header):
        raw = [row[k] for row in rows]
        try:
            columns[name] = np.array([float(v) for v in raw])
        except ValueError:  # boolean or text column
            columns[name] = np.array(raw)
    return columns


def _save(figure, path: Path):
    figure.savefig(path, format="svg")
    plt.close(figure)


def render_bundle(directory) -> list[Path]:
    """Render every plot the bundle's experiment kind defines.

    Returns the list of written SVG paths.
    """
    directory = Path(directory)
    config_path = directory / "config.json"
    if not config_path.exists():
        raise InvalidParameterError(
            f"{directory} is not a result bundle (missing config.json)"
        )
    with open(config_path, encoding="utf-8") as handle:
        kind = json.load(handle)["experiment"]
    try:
        renderer = _RENDERERS[kind]
    except KeyError:
        raise InvalidParameterError(f"no plots defined for {kind!r}") from None
    return renderer(directory)


def _render_ground_state_map(directory: Path) -> list[Path]:
    data = _read_csv(directory / "ground_state_map.csv")
    etas = np.unique(data["eta"])
    ngs = np.unique(data["n_g"])
    grid = data["mean_jz"].reshape(len(etas), len(ngs))
    fig, ax = plt.subplots(figsize=(6.0, 4.5))
    mesh = ax.pcolormesh(
        ngs, etas, grid, shading="nearest", cmap="RdBu_r", vmin=-1.0, vmax=1.0
    )
    bounds = _read_csv(directory / "boundaries.csv")
    ax.plot(bounds["n_g_lower"], bounds["eta"], "k--", lw=1.0)
    ax.plot(bounds["n_g_upper"], bounds["eta"], "k--", lw=1.0)
    ax.set_yscale("log")
    ax.set_xlabel(r"gate charge $n_g$")
    ax.set_ylabel(r"coupling parameter $\eta$")
    fig.colorbar(mesh, ax=ax, label=r"$\langle j_z \rangle$")
    out = directory / "ground_state_map.svg"
    _save(fig, out)
    return [out]


def _render_time_series(directory: Path) -> list[Path]:
    data = _read_csv(directory / "trajectory_mean.csv")
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.plot(data["time_ns"], data["mean_jz"], lw=1.0)
    ax.set_xlabel("time (ns)")
    ax.set_ylabel(r"$\langle j_z \rangle$")
    out = directory / "trajectory_mean.svg"
    _save(fig, out)
    return [out]


def _render_ramsey(directory: Path) -> list[Path]:
    data = _read_csv(directory / "ramsey_fringe.csv")
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.errorbar(
        data["free_time_ns"], data["mean_jz"], yerr=data["sem_jz"],
        fmt="o-", ms=3, lw=1.0,
    )
    ax.set_xlabel("free evolution time (ns)")
    ax.set_ylabel(r"$\langle j_z \rangle$")
    out = directory / "ramsey_fringe.svg"
    _save(fig, out)
    return [out]


def _render_eta_sweep(directory: Path) -> list[Path]:
    t1 = _read_csv(directory / "t1_vs_eta.csv")
    czz = _read_csv(directory / "czz_vs_eta.csv")
    fig, (top, bottom) = plt.subplots(2, 1, figsize=(6.0, 6.5), sharex=True)
    top.loglog(t1["eta"], t1["T1_ns"], "o-")
    top.set_ylabel(r"$T_1$ (ns)")
    bottom.semilogx(czz["eta"], czz["czz_infinity"], "s-")
    bottom.set_xlabel(r"coupling parameter $\eta$")
    bottom.set_ylabel(r"$C_{zz}(t \to \infty)$")
    out = directory / "eta_sweep.svg"
    _save(fig, out)
    return [out]


def _render_histogram(directory: Path) -> list[Path]:
    written = []
    moments = _read_csv(directory / "jz_moments.csv")
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.plot(moments["time_ns"], moments["mean_jz"], label=r"$\langle j_z \rangle$")
    ax.plot(
        moments["time_ns"], np.sqrt(moments["var_jz"]), label=r"$\Delta j_z$"
    )
    ax.set_xlabel("time (ns)")
    ax.legend(frameon=False)
    out = directory / "jz_moments.svg"
    _save(fig, out)
    written.append(out)
    for snapshot in sorted(directory.glob("histogram_t*.csv")):
        data = _read_csv(snapshot)
        fig, ax = plt.subplots(figsize=(5.0, 3.6))
        widths = data["bin_right_jz"] - data["bin_left_jz"]
        ax.bar(data["bin_left_jz"], data["density"], width=widths, align="edge")
        ax.set_xlabel(r"$j_z$")
        ax.set_ylabel("density")
        out = snapshot.with_suffix(".svg")
        _save(fig, out)
        written.append(out)
    return written


def _render_hamming(directory: Path) -> list[Path]:
    data = _read_csv(directory / "hamming.csv")
    with open(directory / "summary.json", encoding="utf-8") as handle:
        summary = json.load(handle)
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.fill_between(
        data["time_ns"],
        data["mean_hamming"] - data["sem_hamming"],
        data["mean_hamming"] + data["sem_hamming"],
        alpha=0.3,
    )
    ax.plot(data["time_ns"], data["mean_hamming"], lw=1.2)
    meta = summary.get("metastable")
    if meta is not None:
        ax.plot([meta["time_ns"]], [meta["hamming"]], "r*", ms=10)
    ax.axhline(0.5, color="gray", ls=":", lw=0.8)
    ax.set_xlabel("time (ns)")
    ax.set_ylabel(r"$\mathcal{D}(t)$")
    ax.set_ylim(-0.02, 0.55)
    out = directory / "hamming.svg"
    _save(fig, out)
    return [out]


def _render_level_stats(directory: Path) -> list[Path]:
    data = _read_csv(directory / "ratio_histogram.csv")
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    widths = data["bin_right"] - data["bin_left"]
    ax.bar(
        data["bin_left"], data["density"], width=widths, align="edge",
        alpha=0.6, label="measured",
    )
    centers = data["bin_left"] + 0.5 * widths
    ax.plot(centers, data["poisson_density"], "k-", lw=1.2, label="uncorrelated")
    ax.set_xlabel(r"gap ratio $r$")
    ax.set_ylabel("density")
    ax.legend(frameon=False)
    out = directory / "ratio_histogram.svg"
    _save(fig, out)
    return [out]


def _render_spectrum(directory: Path) -> list[Path]:
    data = _read_csv(directory / "spectrum.csv")
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.loglog(
        data["frequency_Hz"], data["psd_estimated_per_Hz"],
        lw=0.8, label="estimated",
    )
    ax.loglog(
        data["frequency_Hz"], data["psd_target_per_Hz"],
        "k--", lw=1.2, label="target",
    )
    ax.set_xlabel("frequency (Hz)")
    ax.set_ylabel(r"$S_{n_g}(f)$ (1/Hz)")
    ax.legend(frameon=False)
    out = directory / "spectrum.svg"
    _save(fig, out)
    return [out]


_RENDERERS = {
    "ground-state-map": _render_ground_state_map,
    "rabi": _render_time_series,
    "ramsey": _render_ramsey,
    "eta-sweep": _render_eta_sweep,
    "histogram": _render_histogram,
    "mbl-clean": _render_hamming,
    "mbl-dissipative": _render_hamming,
    "level-stats": _render_level_stats,
    "noise-validate": _render_spectrum,
}
