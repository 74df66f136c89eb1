"""Ensemble statistics and fits: means, variances, correlations, T1/T2.

Reductions over trajectories use exact float summation (``math.fsum``), so
results are independent of trajectory order. Fits report their residual
norm, their fit window, and which model branch produced them; a fit that
cannot work (non-decaying input for a decay fit) raises instead of
returning something misleading.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import curve_fit

from .dynamics import TrajectoryRecord, pair_columns
from .errors import FitFailureError, InvalidParameterError

#: fixed histogram binning over the physical range of j_z
HISTOGRAM_BINS = 50

#: amplitude-ratio threshold below which an envelope counts as decaying
DECAY_RATIO = 0.99


@dataclass(frozen=True)
class HistogramSnapshot:
    """Ensemble histogram of j_z at one record time."""

    time: float
    bin_edges: np.ndarray  # length n_bins + 1, spanning [-1, 1]
    counts: np.ndarray  # integer, sums to the ensemble size
    mean_jz: float
    std_jz: float


@dataclass(frozen=True)
class EnsembleStats:
    """Per-time ensemble reductions of a trajectory set."""

    times: np.ndarray
    mean_jz: np.ndarray
    var_jz: np.ndarray  # population variance, clipped at 0
    czz: np.ndarray  # ensemble mean of per-trajectory connected zz
    n_traj: int
    histograms: tuple[HistogramSnapshot, ...] = field(default=())


@dataclass(frozen=True)
class DecayFit:
    """One decay-model fit: y ~ amplitude * exp(-t/decay_time) * osc + offset.

    ``branch`` records which model produced the numbers: "envelope" or
    "direct" for relaxation fits, "oscillatory" or "no-decay" for fringe
    fits. ``decayed`` False means no decay was detectable and
    ``decay_time`` is infinity.
    """

    decay_time: float  # ns
    frequency: float  # GHz; 0.0 when the branch carries no oscillation
    amplitude: float
    offset: float
    phase: float
    residual_norm: float  # rms misfit over the fit window
    fit_window: tuple[float, float]
    branch: str
    decayed: bool = True


@dataclass(frozen=True)
class SteadyStateResult:
    """Outcome of the windowed plateau search."""

    t_star: float  # nan when not converged
    converged: bool
    window_duration: float


def _trajectory_matrix(records, attribute):
    return np.stack([np.asarray(getattr(r, attribute)) for r in records])


def _column_fsum(matrix):
    return np.array([math.fsum(matrix[:, j]) for j in range(matrix.shape[1])])


def _connected_zz_series(record):
    """Per-time connected pair correlation of one trajectory.

    Mean over unordered pairs of <s_k1 s_k2> - <s_k1><s_k2>, which equals
    the double sum over ordered pairs divided by N(N-1).
    """
    sz = np.asarray(record.sz)
    zz = np.asarray(record.zz)
    n_qubits = sz.shape[1]
    if n_qubits < 2:
        raise InvalidParameterError(
            "pair correlations need at least two islands"
        )
    k1, k2 = np.array(pair_columns(n_qubits)).T
    return (zz - sz[:, k1] * sz[:, k2]).mean(axis=1)


def compute_czz(ensemble, time_index: int = -1) -> float:
    """Ensemble-averaged connected zz correlation at one record time.

    ``ensemble`` is either a sequence of trajectory records (evaluated at
    ``time_index`` of their shared record grid) or a sequence of raw state
    vectors (each of length 2**N), for which the expectations are computed
    directly.
    """
    if len(ensemble) == 0:
        raise InvalidParameterError("empty ensemble")
    if isinstance(ensemble[0], TrajectoryRecord):
        values = [_connected_zz_series(r)[time_index] for r in ensemble]
    else:
        values = [_state_connected_zz(np.asarray(psi)) for psi in ensemble]
    return math.fsum(values) / len(ensemble)


def _state_connected_zz(psi):
    dim = psi.shape[0]
    n_qubits = dim.bit_length() - 1
    if 1 << n_qubits != dim:
        raise InvalidParameterError(f"state length {dim} is not a power of two")
    if n_qubits < 2:
        raise InvalidParameterError("pair correlations need at least two islands")
    prob = np.abs(psi) ** 2
    indices = np.arange(dim)
    signs = np.stack(
        [2.0 * ((indices >> k) & 1) - 1.0 for k in range(n_qubits)], axis=1
    )
    sz = prob @ signs
    terms = [
        prob @ (signs[:, k1] * signs[:, k2]) - sz[k1] * sz[k2]
        for k1, k2 in pair_columns(n_qubits)
    ]
    return math.fsum(terms) / len(terms)


def histogram_jz(
    records, time_index: int = -1, n_bins: int = HISTOGRAM_BINS
) -> HistogramSnapshot:
    """Fixed-bin histogram of j_z over the ensemble at one record time.

    Bins span [-1, 1] regardless of the data; values are clipped by one
    rounding unit so the counts always conserve the ensemble size.
    """
    if len(records) == 0:
        raise InvalidParameterError("empty ensemble")
    values = np.array([r.jz[time_index] for r in records])
    edges = np.linspace(-1.0, 1.0, n_bins + 1)
    counts, _ = np.histogram(np.clip(values, -1.0, 1.0), bins=edges)
    mean = math.fsum(values) / len(values)
    var = max(math.fsum((values - mean) ** 2) / len(values), 0.0)
    return HistogramSnapshot(
        time=float(records[0].times[time_index]),
        bin_edges=edges,
        counts=counts,
        mean_jz=mean,
        std_jz=math.sqrt(var),
    )


def ensemble_statistics(records, histogram_indices=()) -> EnsembleStats:
    """Reduce a trajectory ensemble to mean, variance and correlation series.

    All trajectories must share one record grid. Passing record indices in
    ``histogram_indices`` attaches j_z histograms at those times.
    """
    if len(records) == 0:
        raise InvalidParameterError("empty ensemble")
    times = np.asarray(records[0].times)
    for record in records[1:]:
        if not np.array_equal(np.asarray(record.times), times):
            raise InvalidParameterError(
                "ensemble trajectories disagree on the record grid"
            )
    n = len(records)
    jz = _trajectory_matrix(records, "jz")
    mean = _column_fsum(jz) / n
    second = _column_fsum(jz**2) / n
    var = np.maximum(second - mean**2, 0.0)
    if np.asarray(records[0].sz).shape[1] < 2:
        # a single island has no pairs; the correlation channel is undefined
        czz = np.full(len(times), np.nan)
    else:
        czz_rows = np.stack([_connected_zz_series(r) for r in records])
        czz = _column_fsum(czz_rows) / n
    histograms = tuple(histogram_jz(records, int(i)) for i in histogram_indices)
    return EnsembleStats(
        times=times,
        mean_jz=mean,
        var_jz=var,
        czz=czz,
        n_traj=n,
        histograms=histograms,
    )


# ----------------------------------------------------------------------
# decay fits
# ----------------------------------------------------------------------


def _refined_extrema(times, values):
    """Interior extrema with sub-grid parabolic refinement: (t_i, v_i)."""
    t_out, v_out = [], []
    for i in range(1, len(values) - 1):
        left = values[i] - values[i - 1]
        right = values[i + 1] - values[i]
        if left * right < 0.0:
            coeffs = np.polyfit(times[i - 1 : i + 2], values[i - 1 : i + 2], 2)
            if coeffs[0] != 0.0:
                t_ext = -coeffs[1] / (2.0 * coeffs[0])
                v_ext = np.polyval(coeffs, t_ext)
            else:
                t_ext, v_ext = times[i], values[i]
            t_out.append(float(t_ext))
            v_out.append(float(v_ext))
    return np.array(t_out), np.array(v_out)


def _require_decay(times, values, label):
    """Raise unless the leading amplitude clearly exceeds the trailing one."""
    third = max(len(values) // 3, 2)
    center = np.median(values)
    first = float(np.max(np.abs(values[:third] - center)))
    last = float(np.max(np.abs(values[-third:] - center)))
    if not last < DECAY_RATIO * first:
        raise FitFailureError(
            f"{label}: signal does not decay (leading amplitude {first:.3e}, "
            f"trailing amplitude {last:.3e})"
        )
    return first, last


def _exp_model(t, amplitude, decay_time, offset):
    return amplitude * np.exp(-t / decay_time) + offset


def _fit_exponential(t, y, label):
    spread = float(np.max(y) - np.min(y))
    guess_offset = float(np.min(y))
    head, tail = y[0] - guess_offset, y[-1] - guess_offset
    if head > 0 and tail > 0 and head > tail:
        guess_decay = (t[-1] - t[0]) / math.log(head / tail)
    else:
        guess_decay = (t[-1] - t[0]) / 3.0
    try:
        popt, _ = curve_fit(
            _exp_model,
            t,
            y,
            p0=[max(spread, 1e-12), max(guess_decay, 1e-9), guess_offset],
            bounds=([0.0, 1e-12, -2.0], [np.inf, np.inf, 2.0]),
            maxfev=20000,
        )
    except RuntimeError as error:
        raise FitFailureError(f"{label}: exponential fit failed: {error}") from None
    residual = float(np.sqrt(np.mean((_exp_model(t, *popt) - y) ** 2)))
    return popt, residual


def fit_T1(times, mean_jz) -> DecayFit:
    """Relaxation time from the decay of an ensemble-mean j_z series.

    Oscillating signals (>= 4 extrema) are fitted through the magnitudes
    of their refined extrema ("envelope" branch); overdamped signals are
    fitted directly to a decaying exponential plus offset ("direct"
    branch). Non-decaying input raises with both amplitudes quoted.
    """
    times = np.asarray(times, dtype=float)
    values = np.asarray(mean_jz, dtype=float)
    if times.shape != values.shape or times.size < 8:
        raise InvalidParameterError("need matching series of at least 8 samples")
    _require_decay(times, values, "fit_T1")
    t_ext, v_ext = _refined_extrema(times, values)
    if len(t_ext) >= 4:
        envelope = np.abs(v_ext)
        popt, residual = _fit_exponential(t_ext, envelope, "fit_T1")
        spacing = np.diff(t_ext)
        frequency = 1.0 / (2.0 * float(np.mean(spacing)))
        window = (float(t_ext[0]), float(t_ext[-1]))
        branch = "envelope"
    else:
        popt, residual = _fit_exponential(times, values, "fit_T1")
        frequency = 0.0
        window = (float(times[0]), float(times[-1]))
        branch = "direct"
    return DecayFit(
        decay_time=float(popt[1]),
        frequency=frequency,
        amplitude=float(popt[0]),
        offset=float(popt[2]),
        phase=0.0,
        residual_norm=residual,
        fit_window=window,
        branch=branch,
    )


def _fringe_model(t, amplitude, frequency, phase, offset):
    return amplitude * np.cos(2.0 * math.pi * frequency * t + phase) + offset


def _damped_fringe_model(t, amplitude, decay_time, frequency, phase, offset):
    return (
        amplitude
        * np.exp(-t / decay_time)
        * np.cos(2.0 * math.pi * frequency * t + phase)
        + offset
    )


def _dominant_frequency(times, values):
    spectrum = np.abs(np.fft.rfft(values - values.mean()))
    if len(spectrum) < 2:
        return 0.0
    step = times[1] - times[0]
    grid = np.fft.rfftfreq(len(values), d=step)
    return float(grid[1 + int(np.argmax(spectrum[1:]))])


def fit_T2(free_times, signal) -> DecayFit:
    """Dephasing time and fringe frequency of a free-evolution signal.

    Fits amplitude * exp(-t/T2) * cos(2 pi f t + phase) + offset. When the
    trailing amplitude has not dropped below the leading one, the decay is
    undetectable on this window: the fit falls back to a pure fringe, the
    flag ``decayed`` is False and ``decay_time`` is infinity.
    """
    times = np.asarray(free_times, dtype=float)
    values = np.asarray(signal, dtype=float)
    if times.shape != values.shape or times.size < 8:
        raise InvalidParameterError("need matching series of at least 8 samples")
    frequency_guess = _dominant_frequency(times, values)
    amplitude_guess = float(np.ptp(values)) / 2.0
    offset_guess = float(values.mean())
    window = (float(times[0]), float(times[-1]))

    third = max(len(values) // 3, 2)
    center = np.median(values)
    first = float(np.max(np.abs(values[:third] - center)))
    last = float(np.max(np.abs(values[-third:] - center)))
    if not last < DECAY_RATIO * first:
        try:
            popt, _ = curve_fit(
                _fringe_model,
                times,
                values,
                p0=[amplitude_guess, frequency_guess, 0.0, offset_guess],
                maxfev=20000,
            )
        except RuntimeError as error:
            raise FitFailureError(f"fit_T2: fringe fit failed: {error}") from None
        residual = float(np.sqrt(np.mean((_fringe_model(times, *popt) - values) ** 2)))
        return DecayFit(
            decay_time=math.inf,
            frequency=abs(float(popt[1])),
            amplitude=float(popt[0]),
            offset=float(popt[3]),
            phase=float(popt[2]),
            residual_norm=residual,
            fit_window=window,
            branch="no-decay",
            decayed=False,
        )

    span = times[-1] - times[0]
    try:
        popt, _ = curve_fit(
            _damped_fringe_model,
            times,
            values,
            p0=[amplitude_guess, span / 2.0, frequency_guess, 0.0, offset_guess],
            bounds=(
                [0.0, 1e-12, 0.0, -2.0 * math.pi, -2.0],
                [np.inf, np.inf, np.inf, 2.0 * math.pi, 2.0],
            ),
            maxfev=20000,
        )
    except RuntimeError as error:
        raise FitFailureError(f"fit_T2: damped fringe fit failed: {error}") from None
    residual = float(
        np.sqrt(np.mean((_damped_fringe_model(times, *popt) - values) ** 2))
    )
    return DecayFit(
        decay_time=float(popt[1]),
        frequency=float(popt[2]),
        amplitude=float(popt[0]),
        offset=float(popt[4]),
        phase=float(popt[3]),
        residual_norm=residual,
        fit_window=window,
        branch="oscillatory",
        decayed=True,
    )


# ----------------------------------------------------------------------
# steady-state detection
# ----------------------------------------------------------------------


def _window_means(series, n_windows):
    chunks = np.array_split(series, n_windows)
    return np.array([chunk.mean() for chunk in chunks])


def _unsettled_mask(window_values, threshold):
    """True at window i while the series has not yet reached its plateau.

    Window i counts as settled when, from it to the end, (a) every window
    mean is within ``threshold`` of the final one and (b) consecutive
    windows differ by less than ``threshold``; both are measured against
    the full spread of the window means, so a constant series is settled
    everywhere.
    """
    spread = float(np.ptp(window_values))
    if spread < 1e-12:
        return np.zeros(len(window_values), dtype=bool)
    limit = threshold * spread
    near_final = np.abs(window_values - window_values[-1]) <= limit
    small_step = np.abs(np.diff(window_values)) <= limit
    unsettled = np.empty(len(window_values), dtype=bool)
    good = True
    for i in range(len(window_values) - 1, -1, -1):
        good = good and near_final[i] and (i == len(window_values) - 1 or small_step[i])
        unsettled[i] = not good
    return unsettled


def steady_state_detect(
    times,
    mean_jz,
    var_jz,
    *,
    n_windows: int = 24,
    threshold: float = 0.02,
    consecutive: int = 3,
) -> SteadyStateResult:
    """Earliest time after which mean and variance both sit on a plateau.

    The series are split into ``n_windows`` equal windows; a window opens
    the plateau when every later window mean stays within ``threshold``
    (relative to the full spread of window means) of the final one and of
    its neighbor, for both series, with at least ``consecutive`` windows
    left. For a pure exponential this lands near 4 decay times. A series
    that never settles returns an explicit not-converged result.
    """
    times = np.asarray(times, dtype=float)
    mean_series = np.asarray(mean_jz, dtype=float)
    var_series = np.asarray(var_jz, dtype=float)
    if not (times.shape == mean_series.shape == var_series.shape):
        raise InvalidParameterError("times, mean and variance must align")
    if times.size < 2 * n_windows:
        raise InvalidParameterError(
            f"need at least {2 * n_windows} samples for {n_windows} windows"
        )
    mean_windows = _window_means(mean_series, n_windows)
    var_windows = _window_means(var_series, n_windows)
    unsettled = _unsettled_mask(mean_windows, threshold) | _unsettled_mask(
        var_windows, threshold
    )
    window_starts = np.array(
        [chunk[0] for chunk in np.array_split(times, n_windows)]
    )
    window_duration = float(times[-1] - times[0]) / n_windows
    for i in range(n_windows - consecutive + 1):
        if not unsettled[i]:
            return SteadyStateResult(
                t_star=float(window_starts[i]),
                converged=True,
                window_duration=window_duration,
            )
    return SteadyStateResult(
        t_star=math.nan, converged=False, window_duration=window_duration
    )
