"""Gate-charge noise: target spectrum and time-series synthesis.

The fluctuation delta-N_g of the reduced gate charge has a two-component
one-sided spectral density (units 1/Hz, f in Hz):

* an Ohmic part ``pi * R * hbar * C_g^2 * f / e^2`` from the impedance of the
  biasing network, dominant at high frequency, and
* a flicker part ``alpha / (2 pi f)`` from background charge motion,
  dominant at low frequency.

With the standard 300 aF gate and R = 50 Ohm the two cross near 1.17 GHz.

Synthesis works in the frequency domain: each positive-frequency bin inside
the requested band gets the deterministic magnitude ``sqrt(S(f) df / 2)``
and an independent uniform random phase; Hermitian symmetry then yields a
real series via the inverse FFT. Under this convention the sample variance
equals the band integral of S exactly (discrete Parseval) and the one-sided
periodogram of a full record reproduces S bin by bin.

All qubits share one gate line, so a single series is sampled per trajectory
and applied identically to every island. Propagation holds each sample for
one integrator step (zero-order hold), which is what :func:`resample_hold`
implements.
"""

from dataclasses import dataclass

import numpy as np

from .circuit import CircuitParams
from .constants import ELEMENTARY_CHARGE_C, GHZ_TO_HZ, NS_TO_S, HBAR_J_S
from .errors import InvalidParameterError

#: shortest series worth synthesizing; below this the band is essentially empty
MIN_SAMPLES = 64


@dataclass(frozen=True)
class NoiseModel:
    """Parameters of the gate-charge fluctuation spectrum.

    ``f_min``/``f_max`` bound the synthesis band in Hz; ``None`` defers to
    the record defaults (lowest resolvable frequency 1/duration, and the
    Nyquist frequency of the requested sampling).
    """

    gate_capacitance: float  # aF
    resistance: float = 50.0  # Ohm
    flicker_amplitude: float = 5.0e-7
    include_ohmic: bool = True
    include_flicker: bool = True
    f_min: float | None = None
    f_max: float | None = None


@dataclass(frozen=True)
class NoiseSeries:
    """A synthesized gate-charge fluctuation record.

    ``samples[i]`` is the value held on ``[i*dt, (i+1)*dt)`` (dt in ns).
    """

    dt: float
    samples: np.ndarray
    seed: int
    f_min: float
    f_max: float

    @property
    def duration(self) -> float:
        return len(self.samples) * self.dt


def default_noise_model(circuit: CircuitParams, **overrides) -> NoiseModel:
    """Noise model matched to a circuit: same gate, band capped at 10x the
    largest charging energy (fluctuations faster than that average out of the
    dynamics)."""
    overrides.setdefault("f_max", 10.0 * max(circuit.charging_energies) * GHZ_TO_HZ)
    return NoiseModel(gate_capacitance=circuit.gate_capacitance, **overrides)


def target_psd(model: NoiseModel, frequency) -> np.ndarray:
    """One-sided spectral density of delta-N_g at ``frequency`` (Hz) in 1/Hz."""
    f = np.asarray(frequency, dtype=float)
    if np.any(f <= 0):
        raise InvalidParameterError("spectral density is defined for f > 0 only")
    cg_farad = model.gate_capacitance * 1e-18
    s = np.zeros_like(f)
    if model.include_ohmic:
        s = s + (np.pi * model.resistance * HBAR_J_S * cg_farad**2 / ELEMENTARY_CHARGE_C**2) * f
    if model.include_flicker:
        s = s + model.flicker_amplitude / (2.0 * np.pi * f)
    return s if s.shape else float(s)


def synthesize_noise(model: NoiseModel, duration: float, dt: float, seed: int) -> NoiseSeries:
    """Generate one noise record of ``duration`` ns sampled every ``dt`` ns.

    The band is [f_min, min(f_max, Nyquist)]; bins outside it stay exactly
    zero. Deterministic for a given seed.
    """
    if dt <= 0 or duration <= 0:
        raise InvalidParameterError("duration and dt must be positive")
    n = int(round(duration / dt))
    if n < MIN_SAMPLES:
        raise InvalidParameterError(
            f"noise record needs at least {MIN_SAMPLES} samples, got {n}; "
            "increase duration or decrease dt"
        )
    dt_s = dt * NS_TO_S
    freqs = np.fft.rfftfreq(n, d=dt_s)
    df = freqs[1]
    nyquist = 0.5 / dt_s
    f_lo = model.f_min if model.f_min is not None else 1.0 / (n * dt_s)
    f_hi = nyquist if model.f_max is None else min(model.f_max, nyquist)
    if f_lo > f_hi:
        raise InvalidParameterError(
            f"empty synthesis band: f_min = {f_lo:g} Hz exceeds f_max = {f_hi:g} Hz"
        )
    band = (freqs > 0) & (freqs < nyquist) & (freqs >= f_lo * (1 - 1e-12)) & (
        freqs <= f_hi * (1 + 1e-12)
    )
    spectrum = np.zeros(len(freqs), dtype=complex)
    if band.any():
        amplitude = np.sqrt(target_psd(model, freqs[band]) * df / 2.0)
        phases = np.random.default_rng(seed).uniform(0.0, 2.0 * np.pi, size=int(band.sum()))
        spectrum[band] = n * amplitude * np.exp(1j * phases)
    samples = np.fft.irfft(spectrum, n=n)
    return NoiseSeries(dt=dt, samples=samples, seed=seed, f_min=f_lo, f_max=f_hi)


def resample_hold(series: NoiseSeries, times) -> np.ndarray:
    """Zero-order-hold lookup of the record at arbitrary times (ns).

    Sample ``i`` is held on ``[i*dt, (i+1)*dt)``; the final sample extends to
    ``t = duration`` inclusive. Times outside [0, duration] are an error.
    """
    t = np.asarray(times, dtype=float)
    if np.any(t < 0) or np.any(t > series.duration * (1 + 1e-12)):
        raise InvalidParameterError(
            f"requested times outside the record [0, {series.duration:g}] ns"
        )
    idx = np.minimum((t / series.dt).astype(np.int64), len(series.samples) - 1)
    out = series.samples[idx]
    return out if out.shape else float(out)


def band_variance(model: NoiseModel, f_lo: float, f_hi: float) -> float:
    """Integral of the target spectrum over [f_lo, f_hi] (the series variance).

    Closed form: the Ohmic part integrates to coef*(f_hi^2 - f_lo^2)/2, the
    flicker part to alpha/(2 pi) * ln(f_hi/f_lo).
    """
    if f_lo <= 0 or f_hi <= f_lo:
        raise InvalidParameterError("need 0 < f_lo < f_hi")
    total = 0.0
    if model.include_ohmic:
        cg_farad = model.gate_capacitance * 1e-18
        coef = np.pi * model.resistance * HBAR_J_S * cg_farad**2 / ELEMENTARY_CHARGE_C**2
        total += 0.5 * coef * (f_hi**2 - f_lo**2)
    if model.include_flicker:
        total += model.flicker_amplitude / (2.0 * np.pi) * np.log(f_hi / f_lo)
    return total


def periodogram(series: NoiseSeries):
    """One-sided periodogram of a full record: (frequencies Hz, estimate 1/Hz).

    Normalized so that for this synthesis convention the in-band estimate
    reproduces the target density bin by bin.
    """
    n = len(series.samples)
    dt_s = series.dt * NS_TO_S
    freqs = np.fft.rfftfreq(n, d=dt_s)
    spec = np.fft.rfft(series.samples)
    est = 2.0 * np.abs(spec) ** 2 * dt_s / n
    return freqs[1:], est[1:]


def averaged_periodogram(series_list):
    """Average the full-record periodograms of same-shaped records.

    Accepts any iterable of records, including one-shot generators.
    """
    freqs = None
    acc = None
    count = 0
    for series in series_list:
        f, p = periodogram(series)
        if acc is None:
            freqs, acc = f, p.astype(float)
        else:
            if len(f) != len(acc):
                raise InvalidParameterError("records must share length and dt to average")
            acc += p
        count += 1
    if acc is None:
        raise InvalidParameterError("need at least one record")
    return freqs, acc / count
