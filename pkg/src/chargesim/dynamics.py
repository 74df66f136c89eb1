"""Trajectory propagation for the full 2^N array under gate-charge noise.

The state advances with a split-step scheme built from two exactly solvable
pieces of the Hamiltonian:

* the charge-basis diagonal (bias + collective charging square), whose
  propagator is a pure phase per basis state, and
* the tunneling term, a product of commuting single-island x-rotations.

One step applies a half phase, the rotations, and another half phase, which
is unitary by construction (norms are checked, never repaired) and accurate
to second order in the step size. The gate fluctuation is held constant
across each step (zero-order hold on the synthesized record), so the phases
pick up the step's gate charge through the quadratic coefficient tables the
circuit exposes; between consecutive rotation sweeps the two adjacent half
phases merge into one, halving the phase work without changing the result.

Trajectories are propagated in fixed-size batches of 64 so that ensembles of
any size reuse the same per-row arithmetic; work is split at batch
boundaries and merged by index, making results independent of the worker
count, and per-trajectory seeds are derived from the master seed by index,
so growing an ensemble never perturbs the trajectories already in it.
"""

import math
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .circuit import (
    DISORDER_FLOOR,
    CircuitParams,
    DisorderSpec,
    apply_hamiltonian,
    build_circuit,
)
from .constants import CHARGING_SCALE_GHZ_AF
from .errors import ChargingLimitWarning, IntegrationError, InvalidParameterError
from .noise import NoiseModel, synthesize_noise
from .seeding import DISORDER_STREAM, NOISE_STREAM, derive_seed

#: rows propagated together; ensemble results never depend on this grouping
BATCH_SIZE = 64


@dataclass(frozen=True)
class PropagationConfig:
    """Time grid for a propagation run.

    ``dt = None`` defers to :func:`default_time_step`; ``record_stride``
    keeps every k-th step (plus the initial and final states).
    """

    t_end: float
    dt: float | None = None
    record_stride: int = 1
    norm_tolerance: float = 1e-9
    record_energy: bool = False

    def __post_init__(self):
        if self.t_end <= 0:
            raise InvalidParameterError(f"t_end must be positive, got {self.t_end}")
        if self.dt is not None and self.dt <= 0:
            raise InvalidParameterError(f"dt must be positive, got {self.dt}")
        if self.record_stride < 1:
            raise InvalidParameterError(
                f"record_stride must be >= 1, got {self.record_stride}"
            )
        if self.norm_tolerance <= 0:
            raise InvalidParameterError("norm_tolerance must be positive")


@dataclass(frozen=True)
class ProtocolSpec:
    """What to drive and what to start from.

    ``initial_state`` is a named state ("ones", "zeros") or a bitstring
    whose first character is island 1. Ramsey runs add the free-flight
    bias, the pulse length (``None`` means the quarter-period pi/2 time,
    with the pulse held at ``n_g0``), and the grid of free-evolution times.
    """

    kind: str = "rabi"
    n_g0: float = 0.5
    initial_state: str = "ones"
    free_evolution_bias: float = 0.0
    pulse_duration: float | None = None
    free_time_grid: tuple = ()

    def __post_init__(self):
        if self.kind not in ("rabi", "ramsey"):
            raise InvalidParameterError(f"unknown protocol kind {self.kind!r}")
        if self.kind == "ramsey" and len(self.free_time_grid) == 0:
            raise InvalidParameterError("a Ramsey protocol needs a free_time_grid")


@dataclass(frozen=True)
class TrajectoryRecord:
    """Observables of one trajectory on the record grid.

    ``zz`` columns run over island pairs (1,2), (1,3), ..., (2,3), ... in
    lexicographic order; for a Ramsey run ``times`` is the free-time grid
    and each row holds the post-sequence readout.
    """

    times: np.ndarray
    jz: np.ndarray
    sz: np.ndarray  # (records, N)
    zz: np.ndarray  # (records, N(N-1)/2)
    sx: np.ndarray  # (records, N)
    seed: int
    norm_error: float
    #: <H> (GHz) at each record, using the gate charge held over the step
    #: that starts there; populated only when the config asks for it
    energy: np.ndarray | None = None


@dataclass(frozen=True)
class RamseySignal:
    """Ensemble-averaged Ramsey readout versus free-evolution time."""

    free_times: np.ndarray
    mean_jz: np.ndarray
    per_trajectory: np.ndarray  # (n_traj, len(free_times))
    pulse_duration: float
    master_seed: int


def default_time_step(circuit: CircuitParams, disorder_spread: float = 0.0) -> float:
    """Step resolving the fastest phase: 1/20 of the shortest period.

    The rate combines the largest charging energy, the interaction-induced
    detuning 2 E_C^2/V (which exceeds E_C itself deep in the strong-coupling
    regime), and the tunneling rate. With ``disorder_spread`` > 0 the bound
    widens to cover junction draws down at the floor (which raise E_C) and a
    +8 sigma tunneling excursion, so one deterministic step serves every
    trajectory of a disordered ensemble regardless of its size.
    """
    ec_max = float(np.max(circuit.charging_energies))
    ej_max = float(np.max(circuit.josephson_energies))
    if disorder_spread > 0:
        floor_junctions = DISORDER_FLOOR * float(np.min(circuit.junction_capacitances))
        ec_max = CHARGING_SCALE_GHZ_AF / (
            circuit.gate_capacitance + circuit.coupling_capacitance + floor_junctions
        )
        ej_max = ej_max * (1.0 + 8.0 * disorder_spread)
    v = circuit.interaction_scale
    detuning = 0.0 if math.isinf(v) else 2.0 * circuit.mean_charging_energy**2 / v
    return 0.05 / (ec_max + detuning + ej_max)


def initial_state_vector(circuit: CircuitParams, name: str) -> np.ndarray:
    """Charge-basis state for a name ("ones"/"zeros") or bitstring."""
    dim = circuit.dim
    psi = np.zeros(dim, dtype=np.complex128)
    if name == "ones":
        psi[dim - 1] = 1.0
    elif name == "zeros":
        psi[0] = 1.0
    else:
        if len(name) != circuit.n_qubits or set(name) - {"0", "1"}:
            raise InvalidParameterError(
                f"initial state {name!r} is neither a named state nor an "
                f"{circuit.n_qubits}-character bitstring"
            )
        index = sum(1 << k for k, bit in enumerate(name) if bit == "1")
        psi[index] = 1.0
    return psi


def pair_columns(n_qubits: int) -> list[tuple[int, int]]:
    """Island-pair order of the ``zz`` record columns (0-based indices)."""
    return [(k1, k2) for k1 in range(n_qubits) for k2 in range(k1 + 1, n_qubits)]


def _pair_signs(circuit: CircuitParams) -> np.ndarray:
    """(dim, N(N-1)/2) products s_k1 s_k2 for all pairs k1 < k2."""
    signs = circuit._spin_signs
    cols = [signs[:, k1] * signs[:, k2] for k1, k2 in pair_columns(circuit.n_qubits)]
    if not cols:
        return np.zeros((circuit.dim, 0))
    return np.stack(cols, axis=1)


def _resolve_steps(config: PropagationConfig, dt: float) -> tuple[int, np.ndarray]:
    """Number of steps and the record-step indices (0, k, 2k, ..., n)."""
    n_steps = max(1, int(round(config.t_end / dt)))
    records = np.arange(0, n_steps + 1, config.record_stride, dtype=np.int64)
    if records[-1] != n_steps:
        records = np.append(records, n_steps)
    return n_steps, records


class _DiagonalPhases:
    """Half-step and merged-step phases for one batch at a fixed dt.

    Three table layouts share one code path: a popcount table shared by the
    batch (homogeneous circuit), a full table shared by the batch, or
    per-row full tables (disordered ensembles); the gate charge enters per
    row, per step.
    """

    def __init__(self, coeffs, popcounts, dt):
        self.a, self.b, self.c = coeffs  # each (levels,) or (rows, levels)
        self.popcounts = popcounts  # None, or a (dim,) gather index
        self.minus_i_pi_dt = -1j * math.pi * dt

    def _phase(self, u1, u2=None):
        u1 = np.asarray(u1, dtype=float)[:, None]
        arg = self.a + u1 * self.b + u1**2 * self.c
        if u2 is not None:
            u2 = np.asarray(u2, dtype=float)[:, None]
            arg = arg + self.a + u2 * self.b + u2**2 * self.c
        phase = np.exp(self.minus_i_pi_dt * arg)
        if self.popcounts is not None:
            phase = phase[:, self.popcounts]
        return phase

    def half(self, u):
        return self._phase(u)

    def merged(self, u_now, u_next):
        return self._phase(u_now, u_next)


@dataclass
class _PhaseTables:
    coeffs: tuple
    popcounts: np.ndarray | None

    def bind(self, dt):
        return _DiagonalPhases(self.coeffs, self.popcounts, dt)


def _diagonal_tables(circuits) -> _PhaseTables:
    """Pick the cheapest table layout for a batch of per-row circuits."""
    first = circuits[0]
    if all(c is first for c in circuits):
        if first.is_homogeneous:
            return _PhaseTables(first.diagonal_coefficients_by_popcount, first.popcounts)
        return _PhaseTables(first.diagonal_coefficients, None)
    stacked = tuple(
        np.stack([c.diagonal_coefficients[i] for c in circuits]) for i in range(3)
    )
    return _PhaseTables(stacked, None)


def _rotation_tables(circuits, dt):
    """cos/sin of the per-island rotation angle pi E_J dt, batch-shaped."""
    first = circuits[0]
    if all(c is first for c in circuits):
        angles = math.pi * np.asarray(first.josephson_energies) * dt  # (N,)
        return np.cos(angles), np.sin(angles), False
    ej = np.stack([np.asarray(c.josephson_energies) for c in circuits])  # (B, N)
    angles = math.pi * ej * dt
    return np.cos(angles), np.sin(angles), True


def _apply_rotations(psi, cos_t, sin_t, per_row, n_qubits):
    """In-place product of single-island x-rotations cos + i sin sigma_x."""
    rows = psi.shape[0]
    for k in range(n_qubits):
        view = psi.reshape(rows, -1, 2, 1 << k)
        if per_row:
            c = cos_t[:, k][:, None, None]
            s = 1j * sin_t[:, k][:, None, None]
        else:
            c = cos_t[k]
            s = 1j * sin_t[k]
        low = view[:, :, 0, :]
        high = view[:, :, 1, :]
        new_low = c * low + s * high
        view[:, :, 1, :] = s * low + c * high
        view[:, :, 0, :] = new_low


def _measure(psi, signs, pair_signs, n_qubits):
    """Per-row (jz, sz, zz, sx) of a batch state."""
    prob = np.abs(psi) ** 2
    sz = prob @ signs
    zz = prob @ pair_signs
    rows = psi.shape[0]
    sx = np.empty((rows, n_qubits))
    for k in range(n_qubits):
        view = psi.reshape(rows, -1, 2, 1 << k)
        overlap = np.sum(np.conj(view[:, :, 0, :]) * view[:, :, 1, :], axis=(1, 2))
        sx[:, k] = 2.0 * overlap.real
    return sz.mean(axis=1), sz, zz, sx


def _propagate_batch(
    circuits, psi, gate_charges, dt, record_steps, norm_tolerance, record_energy=False
):
    """Advance a batch in place; stack observables at the record steps.

    ``gate_charges`` is (rows, n_steps) for noisy runs or (rows,) for a
    constant bias, in which case the phases are built once and reused.
    With ``record_energy`` the per-row <H> is evaluated at each record,
    using the gate charge held over the step that starts there.
    """
    first = circuits[0]
    signs = first._spin_signs
    pair_signs = _pair_signs(first)
    n_qubits = first.n_qubits
    phases = _diagonal_tables(circuits).bind(dt)
    cos_t, sin_t, per_row = _rotation_tables(circuits, dt)

    constant_bias = gate_charges.ndim == 1
    if constant_bias:
        half_const = phases.half(gate_charges)
        merged_const = half_const * half_const

    n_records = len(record_steps)
    rows = psi.shape[0]
    jz = np.empty((n_records, rows))
    sz = np.empty((n_records, rows, n_qubits))
    zz = np.empty((n_records, rows, pair_signs.shape[1]))
    sx = np.empty((n_records, rows, n_qubits))
    energies = np.empty((n_records, rows)) if record_energy else None
    worst_norm = 0.0

    def take_energy(index, step):
        if energies is None:
            return
        held = (
            gate_charges
            if constant_bias
            else gate_charges[:, min(step, gate_charges.shape[1] - 1)]
        )
        for r in range(rows):
            h_psi = apply_hamiltonian(circuits[r], float(held[r]), psi[r])
            energies[index, r] = np.vdot(psi[r], h_psi).real

    jz[0], sz[0], zz[0], sx[0] = _measure(psi, signs, pair_signs, n_qubits)
    take_energy(0, 0)
    for index in range(1, n_records):
        start, stop = record_steps[index - 1], record_steps[index]
        psi *= half_const if constant_bias else phases.half(gate_charges[:, start])
        for step in range(start, stop):
            _apply_rotations(psi, cos_t, sin_t, per_row, n_qubits)
            if step < stop - 1:
                psi *= (
                    merged_const
                    if constant_bias
                    else phases.merged(gate_charges[:, step], gate_charges[:, step + 1])
                )
        psi *= half_const if constant_bias else phases.half(gate_charges[:, stop - 1])
        drift = np.max(np.abs(np.linalg.norm(psi, axis=1) - 1.0))
        worst_norm = max(worst_norm, float(drift))
        if drift > norm_tolerance:
            raise IntegrationError(
                f"norm drifted by {drift:.3e} (tolerance {norm_tolerance:.1e}), "
                "refusing to renormalize",
                step_index=int(stop),
            )
        jz[index], sz[index], zz[index], sx[index] = _measure(
            psi, signs, pair_signs, n_qubits
        )
        take_energy(index, stop)
    return jz, sz, zz, sx, worst_norm, energies


def _check_step(circuits, dt):
    ec_max = max(float(np.max(c.charging_energies)) for c in circuits)
    if dt > 0.1 / ec_max:
        raise InvalidParameterError(
            f"dt = {dt:g} ns cannot resolve the fastest charging scale "
            f"{ec_max:g} GHz (need dt <= {0.1 / ec_max:g} ns)"
        )


def _gate_charge_rows(noise_model, bias, n_steps, dt, seeds):
    """(rows, n_steps) gate charge, or (rows,) when the noise is off."""
    if noise_model is None:
        return np.full(len(seeds), float(bias))
    rows = [
        bias + synthesize_noise(noise_model, n_steps * dt, dt, seed).samples[:n_steps]
        for seed in seeds
    ]
    return np.stack(rows)


def _batch_circuits(circuit, rows, batch_seeds, disorder_spread, disorder_floor):
    """Per-row circuits for a batch: shared, or fresh junction draws."""
    if disorder_spread == 0.0:
        return [circuit] * rows
    if not circuit.is_homogeneous:
        raise InvalidParameterError(
            "disordered ensembles take a homogeneous base circuit; the "
            "per-trajectory draws supply the inhomogeneity"
        )
    with warnings.catch_warnings():
        # the base circuit's build already vetted the charging-limit regime
        warnings.simplefilter("ignore", ChargingLimitWarning)
        return [
            build_circuit(
                n_qubits=circuit.n_qubits,
                gate_capacitance=circuit.gate_capacitance,
                coupling_capacitance=circuit.coupling_capacitance,
                junction_capacitance=circuit.junction_capacitances[0],
                josephson_energy=circuit.josephson_energies[0],
                disorder=DisorderSpec(disorder_spread, seed, disorder_floor),
            )
            for seed in batch_seeds
        ]


def evolve_trajectory(
    circuit: CircuitParams,
    noise_model: NoiseModel | None,
    protocol: ProtocolSpec,
    config: PropagationConfig,
    seed: int,
) -> TrajectoryRecord:
    """Propagate a single trajectory (one noise realization).

    For a Rabi protocol the record grid spans [0, t_end] at the configured
    stride; for a Ramsey protocol the pulse--free-flight--pulse sequence
    runs once per entry of the free-time grid (the noise record is shared
    across the whole sequence) and ``times`` is that grid.
    """
    if protocol.kind == "ramsey":
        free_times, jz, sz, zz, sx, pulse = _ramsey_rows(
            circuit, noise_model, protocol, config, [seed]
        )
        return TrajectoryRecord(
            times=free_times,
            jz=jz[0],
            sz=sz[0],
            zz=zz[0],
            sx=sx[0],
            seed=seed,
            norm_error=math.nan,
        )
    dt = config.dt if config.dt is not None else default_time_step(circuit)
    _check_step([circuit], dt)
    n_steps, record_steps = _resolve_steps(config, dt)
    psi = initial_state_vector(circuit, protocol.initial_state)[None, :]
    gate = _gate_charge_rows(noise_model, protocol.n_g0, n_steps, dt, [seed])
    jz, sz, zz, sx, worst, energies = _propagate_batch(
        [circuit],
        psi,
        gate,
        dt,
        record_steps,
        config.norm_tolerance,
        record_energy=config.record_energy,
    )
    return TrajectoryRecord(
        times=record_steps * dt,
        jz=jz[:, 0],
        sz=sz[:, 0],
        zz=zz[:, 0],
        sx=sx[:, 0],
        seed=seed,
        norm_error=worst,
        energy=None if energies is None else energies[:, 0],
    )


def _rabi_batch(payload):
    """Worker body: propagate one contiguous batch of trajectory indices."""
    (
        circuit,
        noise_model,
        config,
        protocol,
        master_seed,
        start,
        count,
        disorder_spread,
        disorder_floor,
        dt,
    ) = payload
    indices = range(start, start + count)
    noise_seeds = [derive_seed(master_seed, NOISE_STREAM, i) for i in indices]
    disorder_seeds = [derive_seed(master_seed, DISORDER_STREAM, i) for i in indices]
    circuits = _batch_circuits(
        circuit, count, disorder_seeds, disorder_spread, disorder_floor
    )
    _check_step(circuits, dt)
    n_steps, record_steps = _resolve_steps(config, dt)
    psi0 = initial_state_vector(circuit, protocol.initial_state)
    psi = np.tile(psi0, (count, 1))
    gate = _gate_charge_rows(noise_model, protocol.n_g0, n_steps, dt, noise_seeds)
    jz, sz, zz, sx, worst, energies = _propagate_batch(
        circuits,
        psi,
        gate,
        dt,
        record_steps,
        config.norm_tolerance,
        record_energy=config.record_energy,
    )
    times = record_steps * dt
    return [
        TrajectoryRecord(
            times=times,
            jz=jz[:, r],
            sz=sz[:, r],
            zz=zz[:, r],
            sx=sx[:, r],
            seed=noise_seeds[r],
            norm_error=worst,
            energy=None if energies is None else energies[:, r],
        )
        for r in range(count)
    ]


def run_rabi_ensemble(
    circuit: CircuitParams,
    noise_model: NoiseModel | None,
    config: PropagationConfig,
    n_traj: int,
    master_seed: int,
    *,
    disorder_spread: float = 0.0,
    disorder_floor: float = DISORDER_FLOOR,
    protocol: ProtocolSpec | None = None,
    n_workers: int | None = None,
) -> list[TrajectoryRecord]:
    """Independent noisy trajectories from a common initial state.

    Trajectory ``i`` draws its noise (and, when ``disorder_spread`` > 0,
    its junction parameters) from seeds derived from ``(master_seed, i)``.
    ``n_workers`` > 1 distributes whole batches across processes; the
    output order and every value are identical to the serial run.
    """
    if n_traj < 1:
        raise InvalidParameterError(f"n_traj must be >= 1, got {n_traj}")
    if protocol is None:
        protocol = ProtocolSpec(kind="rabi", n_g0=0.5, initial_state="ones")
    if protocol.kind != "rabi":
        raise InvalidParameterError("run_rabi_ensemble drives constant-bias protocols")
    dt = config.dt if config.dt is not None else default_time_step(circuit, disorder_spread)
    payloads = [
        (
            circuit,
            noise_model,
            config,
            protocol,
            master_seed,
            start,
            min(BATCH_SIZE, n_traj - start),
            disorder_spread,
            disorder_floor,
            dt,
        )
        for start in range(0, n_traj, BATCH_SIZE)
    ]
    if n_workers is not None and n_workers > 1 and len(payloads) > 1:
        with ProcessPoolExecutor(max_workers=n_workers) as pool:
            batches = list(pool.map(_rabi_batch, payloads))
    else:
        batches = [_rabi_batch(p) for p in payloads]
    return [record for batch in batches for record in batch]


def _ramsey_rows(circuit, noise_model, protocol, config, seeds):
    """Readout after pulse / free flight / pulse, one row per seed.

    Returns (free_times, jz, sz, zz, sx, pulse_duration) with the leading
    axis of the observables indexing seeds and the second the free times.
    All durations are rounded to whole steps; the noise record is
    synthesized once per seed over the longest sequence, so shorter free
    times see a prefix of the same fluctuation history.
    """
    dt = config.dt if config.dt is not None else default_time_step(circuit)
    _check_step([circuit], dt)
    pulse = (
        protocol.pulse_duration
        if protocol.pulse_duration is not None
        else 1.0 / (4.0 * circuit.mean_josephson_energy)
    )
    n_pulse = max(1, int(round(pulse / dt)))
    free_steps = [int(round(tau / dt)) for tau in protocol.free_time_grid]
    if any(n < 0 for n in free_steps):
        raise InvalidParameterError("free times must be non-negative")
    longest = 2 * n_pulse + max(free_steps)

    if noise_model is None:
        histories = None
    else:
        covered = max(longest, 64)  # the synthesis floor; extra samples unused
        histories = np.stack(
            [synthesize_noise(noise_model, covered * dt, dt, s).samples for s in seeds]
        )

    rows = len(seeds)
    n_tau = len(free_steps)
    pair_count = circuit.n_qubits * (circuit.n_qubits - 1) // 2
    jz = np.empty((rows, n_tau))
    sz = np.empty((rows, n_tau, circuit.n_qubits))
    zz = np.empty((rows, n_tau, pair_count))
    sx = np.empty((rows, n_tau, circuit.n_qubits))
    psi0 = initial_state_vector(circuit, protocol.initial_state)

    for j, n_free in enumerate(free_steps):
        total = 2 * n_pulse + n_free
        bias = np.empty(total)
        bias[:n_pulse] = protocol.n_g0
        bias[n_pulse : n_pulse + n_free] = protocol.free_evolution_bias
        bias[n_pulse + n_free :] = protocol.n_g0
        for start in range(0, rows, BATCH_SIZE):
            stop = min(start + BATCH_SIZE, rows)
            count = stop - start
            psi = np.tile(psi0, (count, 1))
            if histories is None:
                # a constant-bias fast path does not apply: the bias steps
                # between segments, so feed the schedule as per-row charges
                gate = np.tile(bias, (count, 1))
            else:
                gate = bias[None, :] + histories[start:stop, :total]
            out = _propagate_batch(
                [circuit] * count,
                psi,
                gate,
                dt,
                np.array([0, total], dtype=np.int64),
                config.norm_tolerance,
            )
            jz[start:stop, j] = out[0][1]
            sz[start:stop, j] = out[1][1]
            zz[start:stop, j] = out[2][1]
            sx[start:stop, j] = out[3][1]
    free_times = np.asarray(free_steps, dtype=float) * dt
    return free_times, jz, sz, zz, sx, n_pulse * dt


def run_ramsey(
    circuit: CircuitParams,
    noise_model: NoiseModel | None,
    config: PropagationConfig,
    free_time_grid,
    n_traj: int,
    master_seed: int,
    *,
    n_g0: float = 0.5,
    free_evolution_bias: float = 0.0,
    pulse_duration: float | None = None,
    initial_state: str = "ones",
) -> RamseySignal:
    """Ensemble-averaged Ramsey fringes over a grid of free-flight times.

    Two quarter-period pulses at the resonant bias bracket a free flight at
    the detuned bias; the same continuous noise record runs through each
    trajectory's whole sequence. Reported free times are rounded to whole
    steps of the resolved dt.
    """
    if n_traj < 1:
        raise InvalidParameterError(f"n_traj must be >= 1, got {n_traj}")
    protocol = ProtocolSpec(
        kind="ramsey",
        n_g0=n_g0,
        initial_state=initial_state,
        free_evolution_bias=free_evolution_bias,
        pulse_duration=pulse_duration,
        free_time_grid=tuple(float(t) for t in free_time_grid),
    )
    seeds = [derive_seed(master_seed, NOISE_STREAM, i) for i in range(n_traj)]
    free_times, jz, _, _, _, pulse = _ramsey_rows(
        circuit, noise_model, protocol, config, seeds
    )
    mean = np.array([math.fsum(jz[:, j]) / n_traj for j in range(jz.shape[1])])
    return RamseySignal(
        free_times=free_times,
        mean_jz=mean,
        per_trajectory=jz,
        pulse_duration=pulse,
        master_seed=master_seed,
    )
