"""Disordered-Ising view of the array and localization diagnostics.

In the rotated spin basis (|up> = (|0>+|1>)/sqrt-2, |down> = (|0>-|1>)/
sqrt-2) the array Hamiltonian becomes a long-range Ising model: an
all-to-all coupling J_kk' = E_C,k E_C,k' / (4NV), a transverse field from
the mean tunneling energy, site disorder from the tunneling spread, and a
residual longitudinal term that vanishes at the degeneracy bias. The
rotation swaps the roles of the Pauli operators, so the spin-basis
"z" observable is the charge-basis sigma_x record.

Diagnostics: the normalized Hamming distance D(t) of a Neel initial state
(forward evolution only, using that the Neel state is a product of
spin-z eigenstates), its localization-rate fit D_inf*(1 - exp(-gamma*t)),
and adjacent-gap ratio statistics of the dense spectrum.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.optimize import curve_fit
from scipy.stats import chi2

from .circuit import (
    DISORDER_FLOOR,
    CircuitParams,
    dense_hamiltonian,
)
from .dynamics import (
    BATCH_SIZE,
    PropagationConfig,
    _batch_circuits,
    _check_step,
    _gate_charge_rows,
    _propagate_batch,
    _resolve_steps,
    default_time_step,
)
from .errors import FitFailureError, InvalidParameterError
from .noise import NoiseModel
from .seeding import DISORDER_STREAM, NOISE_STREAM, derive_seed

#: mean adjacent-gap ratio of an uncorrelated (Poisson) spectrum, 2 ln 2 - 1
POISSON_MEAN_RATIO = 2.0 * math.log(2.0) - 1.0

#: gaps below this (GHz) count as degenerate and are excluded from ratios
DEGENERACY_CUTOFF = 1e-12


@dataclass(frozen=True)
class IsingModel:
    """Spin-basis parameters of one (possibly disordered) array.

    ``couplings`` is the symmetric zero-diagonal matrix J_kk'; the
    Hamiltonian builder sums it over ordered pairs (k != k'). ``field``
    is the mean tunneling energy, ``site_disorder`` the per-site
    deviations from it (summing to zero by construction), and
    ``residual_field`` the longitudinal term, zero at gate bias 1/2.
    """

    couplings: np.ndarray  # (N, N) GHz
    field: float  # GHz
    site_disorder: np.ndarray  # (N,) GHz
    residual_field: np.ndarray  # (N,) GHz
    gate_bias: float


@dataclass(frozen=True)
class HammingSignal:
    """Ensemble-averaged Hamming distance of Neel-state evolution."""

    times: np.ndarray
    mean_hamming: np.ndarray
    per_draw: np.ndarray  # (n_draws, records)
    master_seed: int
    dissipative: bool


@dataclass(frozen=True)
class LocalizationFit:
    """Parameters of the saturation fit D_inf * (1 - exp(-gamma t)).

    ``gamma`` is the exponent rate in 1/ns (so 2 pi x 1.6 GHz reads as
    2 pi * 1.6 per ns). A flat-zero signal has no rate: ``defined`` is
    False and both parameters are nan.
    """

    gamma: float
    d_infinity: float
    residual_norm: float
    defined: bool


@dataclass(frozen=True)
class RatioStatistics:
    """Pooled adjacent-gap ratio statistics over a disorder ensemble."""

    values: np.ndarray  # all pooled r_n in [0, 1]
    mean: float
    std_error: float
    excluded_gaps: int  # degenerate gaps dropped, pooled


@dataclass(frozen=True)
class MblResult:
    """Joint localization diagnostics of one disordered configuration."""

    times: np.ndarray
    hamming: np.ndarray
    gamma: float
    d_infinity: float
    gamma_defined: bool
    r_values: np.ndarray
    r_mean: float
    r_std_error: float
    excluded_gaps: int


def ising_map(circuit: CircuitParams, n_g: float) -> IsingModel:
    """Spin-basis parameters of the array at gate bias ``n_g``.

    An uncoupled array (infinite interaction scale) maps to zero
    couplings, which is valid. The tunneling field splits into its sample
    mean and per-site deviations, so the deviations sum to zero exactly.
    """
    ec = circuit.charging_energies
    ej = np.asarray(circuit.josephson_energies, dtype=float)
    n = circuit.n_qubits
    v = circuit.interaction_scale
    if math.isinf(v):
        couplings = np.zeros((n, n))
        charging_sum = 0.0
    else:
        couplings = np.outer(ec, ec) / (4.0 * n * v)
        np.fill_diagonal(couplings, 0.0)
        charging_sum = float(np.sum(ec)) / (n * v)
    field = float(np.mean(ej))
    site_disorder = ej - field
    residual = 0.5 * ec * (1.0 - 2.0 * n_g) * (1.0 + charging_sum)
    return IsingModel(
        couplings=couplings,
        field=field,
        site_disorder=site_disorder,
        residual_field=residual,
        gate_bias=float(n_g),
    )


def _spin_signs(n_qubits):
    indices = np.arange(1 << n_qubits)
    return np.stack(
        [2.0 * ((indices >> k) & 1) - 1.0 for k in range(n_qubits)], axis=1
    )


def dense_ising_hamiltonian(model: IsingModel) -> np.ndarray:
    """Dense matrix of the spin model, written in the charge basis.

    The basis rotation maps the spin-basis x operator to charge-basis
    sigma_z and the spin-basis z operator to charge-basis sigma_x, so the
    coupling and residual terms are diagonal here while the field and
    disorder terms flip single bits. Equals the circuit Hamiltonian up to
    an additive constant.
    """
    n = model.couplings.shape[0]
    dim = 1 << n
    signs = _spin_signs(n)
    diagonal = np.einsum("ik,kl,il->i", signs, model.couplings, signs)
    diagonal = diagonal + signs @ model.residual_field
    h = np.diag(diagonal.astype(complex))
    tunneling = model.field + model.site_disorder
    for k in range(n):
        half = -0.5 * tunneling[k]
        stride = 1 << k
        for i in range(dim):
            if not i & stride:
                h[i, i | stride] += half
                h[i | stride, i] += half
    return h


def neel_state(n_qubits: int, *, leading_up: bool = True) -> np.ndarray:
    """Alternating spin-basis product state, written in the charge basis.

    Island 1 is spin-up by default (`leading_up`); the alternative sign
    pattern is the global flip. Flipping is the same as relabeling the
    islands in adjacent pairs, so disorder-ensemble statistics do not
    depend on the choice (individual draws do). Each factor is
    (|0> +/- |1>)/sqrt-2, so the amplitudes are uniform up to signs.
    """
    if n_qubits < 1:
        raise InvalidParameterError("need at least one island")
    pattern = neel_pattern(n_qubits, leading_up=leading_up)
    dim = 1 << n_qubits
    indices = np.arange(dim)
    amplitude = np.full(dim, 2.0 ** (-0.5 * n_qubits), dtype=np.complex128)
    for k in range(n_qubits):
        if pattern[k] < 0:
            amplitude[((indices >> k) & 1) == 1] *= -1.0
    return amplitude


def neel_pattern(n_qubits: int, *, leading_up: bool = True) -> np.ndarray:
    """Alternating +/-1 spin signs, island 1 first."""
    pattern = np.where(np.arange(n_qubits) % 2 == 0, 1.0, -1.0)
    return pattern if leading_up else -pattern


def hamming_trajectory(
    circuit: CircuitParams,
    noise_model: NoiseModel | None,
    config: PropagationConfig,
    seed: int,
    *,
    n_g: float = 0.5,
    leading_up: bool = True,
) -> tuple[np.ndarray, np.ndarray]:
    """(times, D(t)) of one fixed circuit from forward Neel evolution.

    No disorder is drawn here: the circuit is evolved as given, with one
    noise realization when a noise model is supplied.
    """
    dt = config.dt if config.dt is not None else default_time_step(circuit)
    _check_step([circuit], dt)
    n_steps, record_steps = _resolve_steps(config, dt)
    psi = neel_state(circuit.n_qubits, leading_up=leading_up)[None, :]
    gate = _gate_charge_rows(noise_model, n_g, n_steps, dt, [seed])
    _, _, _, sx, _, _ = _propagate_batch(
        [circuit], psi, gate, dt, record_steps, config.norm_tolerance
    )
    pattern = neel_pattern(circuit.n_qubits, leading_up=leading_up)
    hamming = 0.5 - (sx[:, 0, :] @ pattern) / (2.0 * circuit.n_qubits)
    return record_steps * dt, hamming


def _hamming_batch(payload):
    """Worker body: D(t) rows for one contiguous batch of draw indices."""
    (
        circuit,
        noise_model,
        config,
        n_g,
        master_seed,
        start,
        count,
        disorder_spread,
        disorder_floor,
        dt,
        leading_up,
    ) = payload
    indices = range(start, start + count)
    noise_seeds = [derive_seed(master_seed, NOISE_STREAM, i) for i in indices]
    disorder_seeds = [derive_seed(master_seed, DISORDER_STREAM, i) for i in indices]
    circuits = _batch_circuits(
        circuit, count, disorder_seeds, disorder_spread, disorder_floor
    )
    _check_step(circuits, dt)
    n_steps, record_steps = _resolve_steps(config, dt)
    psi = np.tile(neel_state(circuit.n_qubits, leading_up=leading_up), (count, 1))
    gate = _gate_charge_rows(noise_model, n_g, n_steps, dt, noise_seeds)
    _, _, _, sx, _, _ = _propagate_batch(
        circuits, psi, gate, dt, record_steps, config.norm_tolerance
    )
    pattern = neel_pattern(circuit.n_qubits, leading_up=leading_up)
    # D(t) = 1/2 - (1/2N) sum_k s_k <spin-z_k(t)>, spin-z being sigma_x here
    hamming = 0.5 - (sx @ pattern) / (2.0 * circuit.n_qubits)
    return record_steps * dt, hamming  # (records, rows)


def hamming_distance_run(
    circuit: CircuitParams,
    noise_model: NoiseModel | None,
    config: PropagationConfig,
    n_draws: int,
    master_seed: int,
    *,
    disorder_spread: float,
    disorder_floor: float = DISORDER_FLOOR,
    n_g: float = 0.5,
    leading_up: bool = True,
    n_workers: int | None = None,
) -> HammingSignal:
    """Ensemble-averaged Hamming distance from forward Neel evolution.

    Draw ``i`` takes its junction parameters from the disorder stream of
    ``master_seed`` and, when a noise model is supplied (the dissipative
    mode), its gate-charge fluctuations from the noise stream. The Neel
    state is a product of spin-z eigenstates, which reduces the Hamming
    distance to a single forward evolution per draw.
    """
    if n_draws < 1:
        raise InvalidParameterError(f"n_draws must be >= 1, got {n_draws}")
    if disorder_spread < 0:
        raise InvalidParameterError("disorder_spread must be >= 0")
    dt = config.dt if config.dt is not None else default_time_step(circuit, disorder_spread)
    payloads = [
        (
            circuit,
            noise_model,
            config,
            n_g,
            master_seed,
            start,
            min(BATCH_SIZE, n_draws - start),
            disorder_spread,
            disorder_floor,
            dt,
            leading_up,
        )
        for start in range(0, n_draws, BATCH_SIZE)
    ]
    if n_workers is not None and n_workers > 1 and len(payloads) > 1:
        with ProcessPoolExecutor(max_workers=n_workers) as pool:
            outputs = list(pool.map(_hamming_batch, payloads))
    else:
        outputs = [_hamming_batch(p) for p in payloads]
    times = outputs[0][0]
    per_draw = np.concatenate([h.T for _, h in outputs], axis=0)
    mean = np.array(
        [math.fsum(per_draw[:, j]) / n_draws for j in range(per_draw.shape[1])]
    )
    return HammingSignal(
        times=times,
        mean_hamming=mean,
        per_draw=per_draw,
        master_seed=master_seed,
        dissipative=noise_model is not None,
    )


def _saturation_model(t, d_infinity, gamma):
    return d_infinity * (1.0 - np.exp(-gamma * t))


def fit_localization_rate(times, hamming) -> LocalizationFit:
    """Fit D(t) to D_inf * (1 - exp(-gamma t)).

    A signal that never leaves zero carries no rate information: the
    result is flagged undefined instead of inventing parameters.
    """
    times = np.asarray(times, dtype=float)
    values = np.asarray(hamming, dtype=float)
    if times.shape != values.shape or times.size < 4:
        raise InvalidParameterError("need matching series of at least 4 samples")
    peak = float(np.max(np.abs(values)))
    if peak < 1e-9:
        return LocalizationFit(
            gamma=math.nan, d_infinity=math.nan, residual_norm=0.0, defined=False
        )
    tail = float(np.mean(values[-max(len(values) // 4, 1):]))
    crossing = np.nonzero(values >= 0.5 * tail)[0]
    if len(crossing) > 0 and times[crossing[0]] > 0:
        gamma_guess = math.log(2.0) / times[crossing[0]]
    else:
        gamma_guess = 4.0 / max(times[-1] - times[0], 1e-9)
    try:
        popt, _ = curve_fit(
            _saturation_model,
            times,
            values,
            p0=[max(tail, 1e-6), gamma_guess],
            bounds=([0.0, 0.0], [1.0, np.inf]),
            maxfev=20000,
        )
    except RuntimeError as error:
        raise FitFailureError(f"localization-rate fit failed: {error}") from None
    residual = float(np.sqrt(np.mean((_saturation_model(times, *popt) - values) ** 2)))
    return LocalizationFit(
        gamma=float(popt[1]),
        d_infinity=float(popt[0]),
        residual_norm=residual,
        defined=True,
    )


def metastable_hamming(signal: HammingSignal, gamma: float) -> tuple[float, float]:
    """(time, D) at three rate-constants, the metastable readout point."""
    if not (gamma > 0 and math.isfinite(gamma)):
        raise InvalidParameterError("need a positive finite rate")
    target = 3.0 / gamma
    index = int(np.argmin(np.abs(signal.times - target)))
    return float(signal.times[index]), float(signal.mean_hamming[index])


def ratio_values(eigenvalues) -> tuple[np.ndarray, int]:
    """Adjacent-gap ratios r_n = min/max of consecutive sorted gaps.

    Degenerate gaps (below ``DEGENERACY_CUTOFF``) are excluded; the count
    of such gaps is returned alongside.
    """
    levels = np.sort(np.asarray(eigenvalues, dtype=float))
    gaps = np.diff(levels)
    tiny = gaps < DEGENERACY_CUTOFF
    excluded = int(np.count_nonzero(tiny))
    left, right = gaps[:-1], gaps[1:]
    valid = ~(tiny[:-1] | tiny[1:])
    r = np.minimum(left[valid], right[valid]) / np.maximum(left[valid], right[valid])
    return r, excluded


def level_spacing_ratios(
    circuit: CircuitParams,
    n_g: float,
    n_draws: int,
    master_seed: int,
    *,
    disorder_spread: float,
    disorder_floor: float = DISORDER_FLOOR,
) -> RatioStatistics:
    """Pooled gap-ratio statistics over a disorder ensemble (dense spectra).

    Draw ``i`` uses the same disorder-stream seed as the Hamming runs, so
    one master seed diagnoses one ensemble both ways.
    """
    if n_draws < 1:
        raise InvalidParameterError(f"n_draws must be >= 1, got {n_draws}")
    if not circuit.is_homogeneous:
        raise InvalidParameterError(
            "disorder ensembles take a homogeneous base circuit"
        )
    pooled = []
    excluded = 0
    for i in range(n_draws):
        if disorder_spread > 0:
            drawn = _batch_circuits(
                circuit,
                1,
                [derive_seed(master_seed, DISORDER_STREAM, i)],
                disorder_spread,
                disorder_floor,
            )[0]
        else:
            drawn = circuit
        spectrum = np.linalg.eigvalsh(dense_hamiltonian(drawn, n_g))
        r, dropped = ratio_values(spectrum)
        pooled.append(r)
        excluded += dropped
    values = np.concatenate(pooled)
    if len(values) == 0:
        raise InvalidParameterError("no valid gap ratios (all gaps degenerate)")
    mean = float(values.mean())
    std_error = float(values.std(ddof=1) / math.sqrt(len(values))) if len(values) > 1 else math.inf
    return RatioStatistics(
        values=values, mean=mean, std_error=std_error, excluded_gaps=excluded
    )


def poisson_ratio_density(r):
    """Gap-ratio density 2/(1+r)^2 of an uncorrelated spectrum."""
    r = np.asarray(r, dtype=float)
    return 2.0 / (1.0 + r) ** 2


def ratio_chi_square(values, n_bins: int = 20) -> tuple[float, float]:
    """Chi-square goodness of fit of gap ratios to the uncorrelated density.

    Bins ``values`` uniformly over [0, 1] and compares with the exact bin
    masses of 2/(1+r)^2, whose CDF is 2r/(1+r). Returns ``(statistic,
    p_value)`` with ``n_bins - 1`` degrees of freedom.
    """
    values = np.asarray(values, dtype=float)
    if values.size < 5 * n_bins:
        raise InvalidParameterError(
            f"need at least {5 * n_bins} ratios for a {n_bins}-bin test, "
            f"got {values.size}"
        )
    edges = np.linspace(0.0, 1.0, n_bins + 1)
    observed, _ = np.histogram(values, bins=edges)
    cdf = 2.0 * edges / (1.0 + edges)
    expected = values.size * np.diff(cdf)
    statistic = float(np.sum((observed - expected) ** 2 / expected))
    p_value = float(chi2.sf(statistic, n_bins - 1))
    return statistic, p_value


def localization_diagnostics(
    circuit: CircuitParams,
    noise_model: NoiseModel | None,
    config: PropagationConfig,
    n_draws: int,
    master_seed: int,
    *,
    disorder_spread: float,
    disorder_floor: float = DISORDER_FLOOR,
    n_g: float = 0.5,
    spectral_draws: int | None = None,
    n_workers: int | None = None,
) -> MblResult:
    """Hamming dynamics, rate fit and (clean runs) gap-ratio statistics.

    Spectral statistics describe the noiseless spectrum, so they are
    computed only for clean runs (no noise model); ``spectral_draws``
    defaults to ``n_draws`` capped at 100 to keep diagonalization cheap.
    """
    signal = hamming_distance_run(
        circuit,
        noise_model,
        config,
        n_draws,
        master_seed,
        disorder_spread=disorder_spread,
        disorder_floor=disorder_floor,
        n_g=n_g,
        n_workers=n_workers,
    )
    fit = fit_localization_rate(signal.times, signal.mean_hamming)
    if noise_model is None:
        count = spectral_draws if spectral_draws is not None else min(n_draws, 100)
        ratios = level_spacing_ratios(
            circuit,
            n_g,
            count,
            master_seed,
            disorder_spread=disorder_spread,
            disorder_floor=disorder_floor,
        )
        r_values, r_mean = ratios.values, ratios.mean
        r_std_error, excluded = ratios.std_error, ratios.excluded_gaps
    else:
        r_values, r_mean, r_std_error, excluded = np.array([]), math.nan, math.nan, 0
    return MblResult(
        times=signal.times,
        hamming=signal.mean_hamming,
        gamma=fit.gamma,
        d_infinity=fit.d_infinity,
        gamma_defined=fit.defined,
        r_values=r_values,
        r_mean=r_mean,
        r_std_error=r_std_error,
        excluded_gaps=excluded,
    )
