"""Experiment harness: run a validated configuration to a result bundle.

Every run writes one directory containing

- ``config.json`` — the resolved configuration echo plus its content hash,
- ``*.csv`` — the data tables for the experiment kind,
- ``summary.json`` — fits, statistics, seeds, the resolved configuration and
  package versions (deterministic: reruns of an identical configuration are
  bit-identical),
- ``meta.json`` — wall time and timestamps (the only file allowed to differ
  between reruns),
- ``*.svg`` — plots rendered purely from the CSV files (optional).

Worker counts resolve as: explicit ``run.n_workers`` in the configuration,
else the ``SIMCLI_WORKERS`` environment variable, else serial.
"""

from __future__ import annotations

import csv
import datetime
import json
import math
import os
import time
from pathlib import Path

import numpy as np
import scipy

from . import __version__
from .analysis import compute_czz, ensemble_statistics, fit_T1, fit_T2
from .circuit import build_circuit, eta_to_Cc
from .config import ExperimentConfig, load_config, validate_config
from .dynamics import run_rabi_ensemble, run_ramsey
from .errors import FitFailureError, InvalidParameterError
from .mbl import (
    POISSON_MEAN_RATIO,
    fit_localization_rate,
    hamming_distance_run,
    level_spacing_ratios,
    metastable_hamming,
    poisson_ratio_density,
    ratio_chi_square,
)
from .meanfield import charge_step_boundaries, ground_state_map
from .noise import averaged_periodogram, synthesize_noise, target_psd
from .seeding import NOISE_STREAM, derive_seed

WORKERS_ENV_VAR = "SIMCLI_WORKERS"


def resolve_workers(config: ExperimentConfig) -> int | None:
    """Worker count: config value, else SIMCLI_WORKERS, else None (serial)."""
    if config.run.n_workers is not None:
        return config.run.n_workers
    raw = os.environ.get(WORKERS_ENV_VAR, "").strip()
    if not raw:
        return None
    try:
        value = int(raw)
    except ValueError:
        raise InvalidParameterError(
            f"{WORKERS_ENV_VAR} must be a positive integer, got {raw!r}"
        ) from None
    if value < 1:
        raise InvalidParameterError(
            f"{WORKERS_ENV_VAR} must be a positive integer, got {raw!r}"
        )
    return value


def run_experiment(source, *, out_dir=None, plots: bool | None = None) -> Path:
    """Execute one experiment and write its result bundle.

    ``source`` is a configuration file path, an already-parsed mapping, or a
    validated :class:`ExperimentConfig`. Returns the output directory.
    """
    if isinstance(source, ExperimentConfig):
        config = source
    elif isinstance(source, dict):
        config = validate_config(source)
    else:
        config = load_config(source)

    directory = Path(out_dir) if out_dir is not None else Path(
        config.resolved["output"]["directory"]
    )
    directory.mkdir(parents=True, exist_ok=True)

    started = time.perf_counter()
    runner = _RUNNERS[config.experiment]
    tables, summary = runner(config)
    wall_time = time.perf_counter() - started

    echo = dict(config.resolved)
    echo["config_hash"] = config.config_hash
    _write_json(directory / "config.json", echo)

    for name, (header, rows) in tables.items():
        _write_csv(directory / name, header, rows)

    summary = {
        "experiment": config.experiment,
        "config_hash": config.config_hash,
        "resolved_config": config.resolved,
        "versions": _versions(),
        **summary,
    }
    _write_json(directory / "summary.json", summary)

    _write_json(
        directory / "meta.json",
        {
            "wall_time_s": wall_time,
            "finished_utc": datetime.datetime.now(datetime.timezone.utc).isoformat(),
            "versions": _versions(),
        },
    )

    want_plots = config.output.plots if plots is None else plots
    if want_plots:
        from .plotting import render_bundle

        render_bundle(directory)
    return directory


# ----------------------------------------------------------------------
# serialization helpers
# ----------------------------------------------------------------------


def _versions() -> dict:
    return {
        "chargesim": __version__,
        "numpy": np.__version__,
        "scipy": scipy.__version__,
    }


def _write_json(path: Path, payload: dict):
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(payload, handle, indent=2, sort_keys=True)
        handle.write("\n")


def _write_csv(path: Path, header, rows):
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(header)
        for row in rows:
            writer.writerow([_cell(value) for value in row])


def _cell(value):
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return value


def _float(value) -> float:
    return float(value)


def _seed_block(config: ExperimentConfig, trajectory_seeds=None) -> dict:
    block = {
        "master_seed": config.run.master_seed,
        "splitting": "children are derive_seed(master_seed, stream, index); "
        "see chargesim.seeding",
    }
    if config.circuit.disorder_seed is not None:
        block["disorder_seed"] = config.circuit.disorder_seed
    if trajectory_seeds is not None:
        block["trajectory_seeds"] = [int(s) for s in trajectory_seeds]
    return block


def _fit_dict(fit) -> dict:
    return {
        "defined": True,
        "decay_time_ns": _float(fit.decay_time),
        "frequency_GHz": _float(fit.frequency),
        "amplitude": _float(fit.amplitude),
        "offset": _float(fit.offset),
        "phase_rad": _float(fit.phase),
        "residual_norm": _float(fit.residual_norm),
        "fit_window_ns": [_float(fit.fit_window[0]), _float(fit.fit_window[1])],
        "branch": fit.branch,
        "decayed": bool(fit.decayed),
    }


def _try_fit(fitter, times, values) -> dict:
    """Run a decay fit, recording failure instead of aborting the bundle."""
    try:
        return _fit_dict(fitter(times, values))
    except (InvalidParameterError, FitFailureError) as error:
        return {"defined": False, "error": str(error)}


def _sem_over_draws(per_draw: np.ndarray) -> np.ndarray:
    if per_draw.shape[0] < 2:
        return np.zeros(per_draw.shape[1])
    return per_draw.std(axis=0, ddof=1) / np.sqrt(per_draw.shape[0])


# ----------------------------------------------------------------------
# experiment runners
# ----------------------------------------------------------------------


def _run_ground_state_map(config: ExperimentConfig):
    grid = config.grid
    block = config.circuit
    eta_values = np.geomspace(grid.eta_min, grid.eta_max, grid.eta_points)
    n_g_values = np.linspace(grid.ng_min, grid.ng_max, grid.ng_points)
    result = ground_state_map(
        eta_values,
        n_g_values,
        gate_capacitance=block.gate_capacitance_aF,
        junction_capacitance=block.junction_capacitance_aF,
        josephson_energy=block.josephson_energy_GHz,
        n_qubits=block.n_qubits,
    )
    map_rows = []
    for i, eta in enumerate(result.eta_values):
        for j, n_g in enumerate(result.n_g_values):
            map_rows.append(
                (eta, n_g, result.jz[i, j], result.energy_per_qubit[i, j])
            )
    boundary_rows = []
    for eta in eta_values:
        coupling = eta_to_Cc(
            float(eta),
            block.gate_capacitance_aF,
            block.junction_capacitance_aF,
            block.josephson_energy_GHz,
        )
        circuit = build_circuit(
            n_qubits=block.n_qubits,
            gate_capacitance=block.gate_capacitance_aF,
            coupling_capacitance=coupling,
            junction_capacitance=block.junction_capacitance_aF,
            josephson_energy=block.josephson_energy_GHz,
        )
        lower, upper = charge_step_boundaries(circuit)
        boundary_rows.append((eta, coupling, lower, upper))
    tables = {
        "ground_state_map.csv": (
            ("eta", "n_g", "mean_jz", "energy_per_qubit_GHz"),
            map_rows,
        ),
        "boundaries.csv": (
            ("eta", "coupling_capacitance_aF", "n_g_lower", "n_g_upper"),
            boundary_rows,
        ),
    }
    summary = {
        "grid": {
            "eta_points": int(len(eta_values)),
            "ng_points": int(len(n_g_values)),
        },
        "polarized_fraction": _float(np.mean(np.abs(result.jz) > 0.5)),
        "seeds": {"master_seed": config.run.master_seed},
    }
    return tables, summary


def _rabi_ensemble(config: ExperimentConfig):
    circuit = config.circuit_params()
    noise_model = config.noise_model(circuit)
    records = run_rabi_ensemble(
        circuit,
        noise_model,
        config.propagation(),
        config.run.n_traj,
        config.run.master_seed,
        disorder_spread=config.ensemble_disorder_spread,
        protocol=config.protocol_spec("rabi"),
        n_workers=resolve_workers(config),
    )
    return records


def _run_rabi(config: ExperimentConfig):
    records = _rabi_ensemble(config)
    stats = ensemble_statistics(records)
    fit = _try_fit(fit_T2, stats.times, stats.mean_jz)
    rows = list(zip(stats.times, stats.mean_jz, stats.var_jz, stats.czz))
    tables = {
        "trajectory_mean.csv": (
            ("time_ns", "mean_jz", "var_jz", "czz"),
            rows,
        )
    }
    summary = {
        "n_traj": stats.n_traj,
        "oscillation_fit": fit,
        "seeds": _seed_block(config, [r.seed for r in records]),
    }
    return tables, summary


def _run_ramsey(config: ExperimentConfig):
    circuit = config.circuit_params()
    noise_model = config.noise_model(circuit)
    protocol = config.protocol
    signal = run_ramsey(
        circuit,
        noise_model,
        config.propagation(),
        protocol.free_time_grid_ns,
        config.run.n_traj,
        config.run.master_seed,
        n_g0=protocol.n_g0,
        free_evolution_bias=protocol.free_evolution_bias,
        pulse_duration=protocol.pulse_duration_ns,
        initial_state=protocol.initial_state,
    )
    sem = _sem_over_draws(np.asarray(signal.per_trajectory))
    fit = _try_fit(fit_T2, signal.free_times, signal.mean_jz)
    rows = list(zip(signal.free_times, signal.mean_jz, sem))
    tables = {
        "ramsey_fringe.csv": (("free_time_ns", "mean_jz", "sem_jz"), rows)
    }
    summary = {
        "n_traj": config.run.n_traj,
        "pulse_duration_ns": _float(signal.pulse_duration),
        "fringe_fit": fit,
        "seeds": _seed_block(config),
    }
    return tables, summary


def _run_eta_sweep(config: ExperimentConfig):
    block = config.circuit
    t1_rows, czz_rows, per_eta = [], [], {}
    for eta in config.etas:
        coupling = eta_to_Cc(
            eta,
            block.gate_capacitance_aF,
            block.junction_capacitance_aF,
            block.josephson_energy_GHz,
        )
        circuit = build_circuit(
            n_qubits=block.n_qubits,
            gate_capacitance=block.gate_capacitance_aF,
            coupling_capacitance=coupling,
            junction_capacitance=block.junction_capacitance_aF,
            josephson_energy=block.josephson_energy_GHz,
        )
        noise_model = config.noise_model(circuit)
        records = run_rabi_ensemble(
            circuit,
            noise_model,
            config.propagation(),
            config.run.n_traj,
            config.run.master_seed,
            disorder_spread=config.ensemble_disorder_spread,
            protocol=config.protocol_spec("rabi"),
            n_workers=resolve_workers(config),
        )
        stats = ensemble_statistics(records)
        fit = _try_fit(fit_T1, stats.times, stats.mean_jz)
        czz_inf = compute_czz(records, -1)
        t1_rows.append(
            (
                eta,
                coupling,
                fit.get("decay_time_ns", math.nan),
                fit.get("decayed", False),
            )
        )
        czz_rows.append((eta, coupling, czz_inf))
        per_eta[repr(float(eta))] = {
            "coupling_capacitance_aF": _float(coupling),
            "relaxation_fit": fit,
            "czz_infinity": _float(czz_inf),
        }
    tables = {
        "t1_vs_eta.csv": (
            ("eta", "coupling_capacitance_aF", "T1_ns", "decayed"),
            t1_rows,
        ),
        "czz_vs_eta.csv": (
            ("eta", "coupling_capacitance_aF", "czz_infinity"),
            czz_rows,
        ),
    }
    summary = {
        "n_traj": config.run.n_traj,
        "points": per_eta,
        "seeds": _seed_block(config),
    }
    return tables, summary


def _run_histogram(config: ExperimentConfig):
    records = _rabi_ensemble(config)
    times = np.asarray(records[0].times)
    requested = config.run.histogram_times_ns or (float(times[-1]),)
    indices = sorted({int(np.argmin(np.abs(times - t))) for t in requested})
    stats = ensemble_statistics(records, histogram_indices=indices)
    tables = {
        "jz_moments.csv": (
            ("time_ns", "mean_jz", "var_jz", "czz"),
            list(zip(stats.times, stats.mean_jz, stats.var_jz, stats.czz)),
        )
    }
    snapshots = {}
    for snap in stats.histograms:
        label = f"{snap.time:.4g}".replace(".", "p")
        widths = np.diff(snap.bin_edges)
        density = snap.counts / (stats.n_traj * widths)
        tables[f"histogram_t{label}.csv"] = (
            ("bin_left_jz", "bin_right_jz", "count", "density"),
            list(
                zip(snap.bin_edges[:-1], snap.bin_edges[1:], snap.counts, density)
            ),
        )
        snapshots[repr(float(snap.time))] = {
            "mean_jz": _float(snap.mean_jz),
            "std_jz": _float(snap.std_jz),
        }
    summary = {
        "n_traj": stats.n_traj,
        "snapshots": snapshots,
        "seeds": _seed_block(config, [r.seed for r in records]),
    }
    return tables, summary


def _run_mbl(config: ExperimentConfig):
    circuit = config.circuit_params()
    noise_model = config.noise_model(circuit)
    signal = hamming_distance_run(
        circuit,
        noise_model,
        config.propagation(),
        config.run.n_traj,
        config.run.master_seed,
        disorder_spread=config.circuit.disorder_spread,
        n_g=config.protocol.n_g0,
        n_workers=resolve_workers(config),
    )
    sem = _sem_over_draws(np.asarray(signal.per_draw))
    fit = fit_localization_rate(signal.times, signal.mean_hamming)
    tables = {
        "hamming.csv": (
            ("time_ns", "mean_hamming", "sem_hamming"),
            list(zip(signal.times, signal.mean_hamming, sem)),
        )
    }
    summary = {
        "n_draws": config.run.n_traj,
        "dissipative": bool(signal.dissipative),
        "localization_fit": {
            "gamma_per_ns": _float(fit.gamma),
            "hamming_infinity": _float(fit.d_infinity),
            "residual_norm": _float(fit.residual_norm),
            "defined": bool(fit.defined),
        },
        "final_hamming": _float(signal.mean_hamming[-1]),
        "seeds": _seed_block(config),
    }
    if signal.dissipative and fit.defined and fit.gamma > 0:
        t_meta, d_meta = metastable_hamming(signal, fit.gamma)
        summary["metastable"] = {
            "time_ns": _float(t_meta),
            "hamming": _float(d_meta),
        }
    return tables, summary


def _run_level_stats(config: ExperimentConfig):
    circuit = config.circuit_params()
    stats = level_spacing_ratios(
        circuit,
        config.protocol.n_g0,
        config.run.n_traj,
        config.run.master_seed,
        disorder_spread=config.circuit.disorder_spread,
    )
    edges = np.linspace(0.0, 1.0, 21)
    counts, _ = np.histogram(stats.values, bins=edges)
    density = counts / (len(stats.values) * np.diff(edges))
    centers = 0.5 * (edges[:-1] + edges[1:])
    chi_square, p_value = ratio_chi_square(stats.values)
    tables = {
        "ratio_histogram.csv": (
            ("bin_left", "bin_right", "count", "density", "poisson_density"),
            list(
                zip(
                    edges[:-1],
                    edges[1:],
                    counts,
                    density,
                    poisson_ratio_density(centers),
                )
            ),
        ),
        "ratio_values.csv": (
            ("gap_ratio",),
            [(v,) for v in stats.values],
        ),
    }
    summary = {
        "n_draws": config.run.n_traj,
        "ratio_mean": _float(stats.mean),
        "ratio_std_error": _float(stats.std_error),
        "n_ratios": int(len(stats.values)),
        "excluded_gaps": int(stats.excluded_gaps),
        "poisson_mean": _float(POISSON_MEAN_RATIO),
        "chi_square": _float(chi_square),
        "p_value": _float(p_value),
        "seeds": _seed_block(config),
    }
    return tables, summary


def _run_noise_validate(config: ExperimentConfig):
    circuit = config.circuit_params()
    model = config.noise_model(circuit)
    duration = config.run.t_end_ns
    dt = config.run.dt_ns
    if dt is None:
        # sample at the model's Nyquist rate: 1/dt = 2 f_max (f_max in Hz)
        dt = 1.0e9 / (2.0 * model.f_max)
    seeds = [
        derive_seed(config.run.master_seed, NOISE_STREAM, i)
        for i in range(config.run.n_traj)
    ]
    series = [synthesize_noise(model, duration, dt, seed) for seed in seeds]
    freqs, estimate = averaged_periodogram(series)
    keep = freqs > 0.0
    freqs, estimate = freqs[keep], estimate[keep]
    target = target_psd(model, freqs)
    with np.errstate(divide="ignore", invalid="ignore"):
        rel = np.abs(estimate / target - 1.0)
    # trust the interior band: a few bins above DC, a factor 4 below Nyquist
    f_low, f_high = 4.0 * freqs[0], freqs[-1] / 4.0
    band = (freqs >= f_low) & (freqs <= f_high)
    tables = {
        "spectrum.csv": (
            ("frequency_Hz", "psd_target_per_Hz", "psd_estimated_per_Hz"),
            list(zip(freqs, target, estimate)),
        )
    }
    summary = {
        "n_series": config.run.n_traj,
        "dt_ns": _float(dt),
        "duration_ns": _float(duration),
        "band_Hz": [_float(f_low), _float(f_high)],
        "max_relative_deviation_in_band": _float(np.max(rel[band])),
        "median_relative_deviation_in_band": _float(np.median(rel[band])),
        "seeds": _seed_block(config, seeds),
    }
    return tables, summary


_RUNNERS = {
    "ground-state-map": _run_ground_state_map,
    "rabi": _run_rabi,
    "ramsey": _run_ramsey,
    "eta-sweep": _run_eta_sweep,
    "histogram": _run_histogram,
    "mbl-clean": _run_mbl,
    "mbl-dissipative": _run_mbl,
    "level-stats": _run_level_stats,
    "noise-validate": _run_noise_validate,
}
