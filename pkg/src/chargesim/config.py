"""Experiment configuration: parsing, validation, and resolution.

A configuration is one JSON document per experiment. Physical quantities
carry explicit unit suffixes in their key names (``_aF``, ``_GHz``, ``_ns``,
``_ohm``, ``_Hz``) so a value can never silently change meaning. Validation
collects every offending field before raising, and resolution materializes
all defaults into a canonical dictionary whose SHA-256 hash identifies the
run.
"""

from __future__ import annotations

import hashlib
import json
import math
import warnings
from dataclasses import dataclass, field

from .circuit import CircuitParams, DisorderSpec, build_circuit, eta_to_Cc
from .dynamics import PropagationConfig, ProtocolSpec
from .errors import ConfigError
from .noise import NoiseModel, default_noise_model

EXPERIMENT_KINDS = (
    "ground-state-map",
    "rabi",
    "ramsey",
    "eta-sweep",
    "histogram",
    "mbl-clean",
    "mbl-dissipative",
    "level-stats",
    "noise-validate",
)

#: experiments whose natural mode is noisy; the rest default to noiseless
_NOISY_BY_DEFAULT = {
    "rabi",
    "ramsey",
    "eta-sweep",
    "histogram",
    "mbl-dissipative",
    "noise-validate",
}

#: experiments that may never run with noise (they characterize the
#: noiseless system) and ones that are meaningless without it
_NEVER_NOISY = {"ground-state-map", "mbl-clean", "level-stats"}
_ALWAYS_NOISY = {"mbl-dissipative", "noise-validate"}


@dataclass(frozen=True)
class CircuitBlock:
    n_qubits: int = 10
    gate_capacitance_aF: float = 300.0
    junction_capacitance_aF: float = 30.0
    josephson_energy_GHz: float = 3.0
    coupling_capacitance_aF: float = 0.0
    eta: float | None = None  # alternative to coupling_capacitance_aF
    disorder_spread: float = 0.0
    disorder_seed: int | None = None  # locks one fixed disorder draw


@dataclass(frozen=True)
class NoiseBlock:
    enabled: bool = False  # resolved per experiment kind when omitted
    resistance_ohm: float = 50.0
    flicker_amplitude: float = 5.0e-7
    f_min_Hz: float | None = None
    f_max_Hz: float | None = None


@dataclass(frozen=True)
class RunBlock:
    t_end_ns: float = 10.0
    dt_ns: float | None = None  # None: stability default from the circuit
    n_traj: int = 100
    master_seed: int = 12345
    record_stride: int = 10
    n_workers: int | None = None  # None: SIMCLI_WORKERS env or serial
    histogram_times_ns: tuple[float, ...] = ()


@dataclass(frozen=True)
class ProtocolBlock:
    n_g0: float = 0.5
    initial_state: str = "ones"
    free_evolution_bias: float = 0.0
    pulse_duration_ns: float | None = None
    free_time_grid_ns: tuple[float, ...] = ()


@dataclass(frozen=True)
class GridBlock:
    eta_min: float = 0.05
    eta_max: float = 20.0
    eta_points: int = 25
    ng_min: float = 0.0
    ng_max: float = 1.0
    ng_points: int = 25


@dataclass(frozen=True)
class OutputBlock:
    directory: str = ""  # "" resolves to results/<experiment>
    plots: bool = True


@dataclass(frozen=True)
class ExperimentConfig:
    """A fully validated experiment description.

    ``resolved`` is the canonical dictionary with every default
    materialized (and ``eta`` converted to a coupling capacitance);
    ``config_hash`` is its SHA-256. Two configs with equal hashes produce
    bit-identical data artifacts under equal code versions.
    """

    experiment: str
    circuit: CircuitBlock
    noise: NoiseBlock
    run: RunBlock
    protocol: ProtocolBlock
    grid: GridBlock
    output: OutputBlock
    etas: tuple[float, ...] = ()
    resolved: dict = field(default_factory=dict, compare=False)
    config_hash: str = ""

    def circuit_params(self) -> CircuitParams:
        disorder = None
        if self.circuit.disorder_seed is not None:
            disorder = DisorderSpec(
                self.circuit.disorder_spread, self.circuit.disorder_seed
            )
        return build_circuit(
            n_qubits=self.circuit.n_qubits,
            gate_capacitance=self.circuit.gate_capacitance_aF,
            junction_capacitance=self.circuit.junction_capacitance_aF,
            coupling_capacitance=self.circuit.coupling_capacitance_aF,
            josephson_energy=self.circuit.josephson_energy_GHz,
            disorder=disorder,
        )

    def noise_model(self, circuit: CircuitParams) -> NoiseModel | None:
        if not self.noise.enabled:
            return None
        overrides = {
            "resistance": self.noise.resistance_ohm,
            "flicker_amplitude": self.noise.flicker_amplitude,
        }
        if self.noise.f_min_Hz is not None:
            overrides["f_min"] = self.noise.f_min_Hz
        if self.noise.f_max_Hz is not None:
            overrides["f_max"] = self.noise.f_max_Hz
        return default_noise_model(circuit, **overrides)

    def propagation(self, **overrides) -> PropagationConfig:
        values = {
            "t_end": self.run.t_end_ns,
            "dt": self.run.dt_ns,
            "record_stride": self.run.record_stride,
        }
        values.update(overrides)
        return PropagationConfig(**values)

    def protocol_spec(self, kind: str) -> ProtocolSpec:
        return ProtocolSpec(
            kind=kind,
            n_g0=self.protocol.n_g0,
            initial_state=self.protocol.initial_state,
            free_evolution_bias=self.protocol.free_evolution_bias,
            pulse_duration=self.protocol.pulse_duration_ns,
            free_time_grid=self.protocol.free_time_grid_ns,
        )

    @property
    def ensemble_disorder_spread(self) -> float:
        """Spread handed to per-trajectory draws (zero when a seed locks one)."""
        if self.circuit.disorder_seed is not None:
            return 0.0
        return self.circuit.disorder_spread


class _Problems:
    def __init__(self):
        self.items: list[str] = []

    def add(self, path: str, message: str):
        self.items.append(f"{path}: {message}")


class _Block:
    """Reads one configuration section, recording every problem it sees."""

    def __init__(self, data: dict, path: str, problems: _Problems):
        self.data = dict(data)
        self.path = path
        self.problems = problems

    def _report(self, key, message):
        prefix = f"{self.path}." if self.path else ""
        self.problems.add(f"{prefix}{key}", message)

    def finish(self):
        for key in self.data:
            self.problems.add(f"{self.path}.{key}", "unknown key")

    def _pull(self, key, default):
        return self.data.pop(key, default)

    def number(self, key, default, *, minimum=None, exclusive=False,
               optional=False, maximum=None):
        raw = self._pull(key, default)
        if raw is None:
            if optional:
                return None
            self._report(key, "must be a number, got null")
            return default
        if isinstance(raw, bool) or not isinstance(raw, (int, float)):
            self._report(key, f"must be a number, got {type(raw).__name__}")
            return default
        value = float(raw)
        if not math.isfinite(value):
            self._report(key, "must be finite")
            return default
        if minimum is not None:
            if exclusive and value <= minimum:
                self._report(key, f"must be > {minimum}, got {raw}")
                return default
            if not exclusive and value < minimum:
                self._report(key, f"must be >= {minimum}, got {raw}")
                return default
        if maximum is not None and value > maximum:
            self._report(key, f"must be <= {maximum}, got {raw}")
            return default
        return value

    def integer(self, key, default, *, minimum=None, optional=False):
        raw = self._pull(key, default)
        if raw is None:
            if optional:
                return None
            self._report(key, "must be an integer, got null")
            return default
        if isinstance(raw, bool) or not isinstance(raw, int):
            self._report(key, f"must be an integer, got {type(raw).__name__}")
            return default
        if minimum is not None and raw < minimum:
            self._report(key, f"must be >= {minimum}, got {raw}")
            return default
        return raw

    def boolean(self, key, default):
        raw = self._pull(key, default)
        if raw is None:
            return default
        if not isinstance(raw, bool):
            self._report(key, f"must be true or false, got {type(raw).__name__}")
            return default
        return raw

    def text(self, key, default):
        raw = self._pull(key, default)
        if not isinstance(raw, str):
            self._report(key, f"must be a string, got {type(raw).__name__}")
            return default
        return raw

    def number_list(self, key, default=(), *, minimum=None, exclusive=False):
        raw = self._pull(key, None)
        if raw is None:
            return tuple(default)
        if not isinstance(raw, (list, tuple)):
            self._report(key, f"must be a list of numbers, got {type(raw).__name__}")
            return tuple(default)
        values = []
        for i, item in enumerate(raw):
            if isinstance(item, bool) or not isinstance(item, (int, float)) or not math.isfinite(float(item)):
                self._report(key, f"element {i} must be a finite number, got {item!r}")
                continue
            value = float(item)
            if minimum is not None and (value <= minimum if exclusive else value < minimum):
                bound = ">" if exclusive else ">="
                self._report(key, f"element {i} must be {bound} {minimum}, got {item!r}")
                continue
            values.append(value)
        return tuple(values)


def _section(data: dict, key: str, problems: _Problems) -> _Block:
    raw = data.pop(key, {})
    if not isinstance(raw, dict):
        problems.add(key, f"must be an object, got {type(raw).__name__}")
        raw = {}
    return _Block(raw, key, problems)


def validate_config(data: dict) -> ExperimentConfig:
    """Validate a parsed configuration mapping into an ExperimentConfig.

    Every offending field is collected; the raised ConfigError lists all of
    them in one message.
    """
    if not isinstance(data, dict):
        raise ConfigError(["top-level document must be a JSON object"])
    data = dict(data)
    problems = _Problems()

    experiment = data.pop("experiment", None)
    if not isinstance(experiment, str) or experiment not in EXPERIMENT_KINDS:
        problems.add(
            "experiment",
            f"must be one of {', '.join(EXPERIMENT_KINDS)}; got {experiment!r}",
        )
        experiment = "rabi"  # placeholder so block validation still runs

    section = _section(data, "circuit", problems)
    n_qubits = section.integer("n_qubits", 10, minimum=1)
    gate_cap = section.number("gate_capacitance_aF", 300.0, minimum=0.0, exclusive=True)
    junction_cap = section.number("junction_capacitance_aF", 30.0, minimum=0.0, exclusive=True)
    ej = section.number("josephson_energy_GHz", 3.0, minimum=0.0, exclusive=True)
    coupling = section.number("coupling_capacitance_aF", None, minimum=0.0, optional=True)
    eta = section.number("eta", None, minimum=0.0, optional=True)
    spread = section.number("disorder_spread", 0.0, minimum=0.0)
    disorder_seed = section.integer("disorder_seed", None, minimum=0, optional=True)
    section.finish()
    if coupling is not None and eta is not None:
        problems.add(
            "circuit", "give either coupling_capacitance_aF or eta, not both"
        )
    if eta is not None:
        try:
            coupling = eta_to_Cc(eta, gate_cap, junction_cap, ej)
        except Exception as error:  # InvalidParameterError carries the detail
            problems.add("circuit.eta", str(error))
            coupling = 0.0
    elif coupling is None:
        coupling = 0.0
    if disorder_seed is not None and spread == 0.0:
        problems.add(
            "circuit.disorder_seed",
            "set together with disorder_spread == 0 has no effect; "
            "drop the seed or give a positive spread",
        )
    circuit = CircuitBlock(
        n_qubits=n_qubits,
        gate_capacitance_aF=gate_cap,
        junction_capacitance_aF=junction_cap,
        josephson_energy_GHz=ej,
        coupling_capacitance_aF=coupling,
        eta=eta,
        disorder_spread=spread,
        disorder_seed=disorder_seed,
    )

    section = _section(data, "noise", problems)
    enabled_raw = section.data.get("enabled", None)
    enabled = section.boolean("enabled", experiment in _NOISY_BY_DEFAULT)
    if experiment in _NEVER_NOISY and enabled_raw is True:
        problems.add(
            "noise.enabled",
            f"{experiment} characterizes the noiseless system; noise cannot be enabled",
        )
        enabled = False
    if experiment in _ALWAYS_NOISY and enabled_raw is False:
        problems.add(
            "noise.enabled",
            f"{experiment} is meaningless without noise; it cannot be disabled",
        )
        enabled = True
    if experiment in _NEVER_NOISY:
        enabled = False
    noise = NoiseBlock(
        enabled=enabled,
        resistance_ohm=section.number("resistance_ohm", 50.0, minimum=0.0, exclusive=True),
        flicker_amplitude=section.number("flicker_amplitude", 5.0e-7, minimum=0.0),
        f_min_Hz=section.number("f_min_Hz", None, minimum=0.0, exclusive=True, optional=True),
        f_max_Hz=section.number("f_max_Hz", None, minimum=0.0, exclusive=True, optional=True),
    )
    section.finish()
    if (
        noise.f_min_Hz is not None
        and noise.f_max_Hz is not None
        and noise.f_min_Hz >= noise.f_max_Hz
    ):
        problems.add("noise.f_min_Hz", "must be below f_max_Hz")

    section = _section(data, "run", problems)
    run = RunBlock(
        t_end_ns=section.number("t_end_ns", 10.0, minimum=0.0, exclusive=True),
        dt_ns=section.number("dt_ns", None, minimum=0.0, exclusive=True, optional=True),
        n_traj=section.integer("n_traj", 100, minimum=1),
        master_seed=section.integer("master_seed", 12345, minimum=0),
        record_stride=section.integer("record_stride", 10, minimum=1),
        n_workers=section.integer("n_workers", None, minimum=1, optional=True),
        histogram_times_ns=section.number_list("histogram_times_ns", (), minimum=0.0),
    )
    section.finish()

    section = _section(data, "protocol", problems)
    initial_state = section.text("initial_state", "ones")
    protocol = ProtocolBlock(
        n_g0=section.number("n_g0", 0.5),
        initial_state=initial_state,
        free_evolution_bias=section.number("free_evolution_bias", 0.0),
        pulse_duration_ns=section.number(
            "pulse_duration_ns", None, minimum=0.0, exclusive=True, optional=True
        ),
        free_time_grid_ns=section.number_list("free_time_grid_ns", (), minimum=0.0),
    )
    section.finish()
    if initial_state not in ("ones", "zeros") and (
        set(initial_state) - {"0", "1"} or len(initial_state) != n_qubits
    ):
        problems.add(
            "protocol.initial_state",
            f'must be "ones", "zeros", or a 0/1 string of length {n_qubits}; '
            f"got {initial_state!r}",
        )

    section = _section(data, "grid", problems)
    grid = GridBlock(
        eta_min=section.number("eta_min", 0.05, minimum=0.0, exclusive=True),
        eta_max=section.number("eta_max", 20.0, minimum=0.0, exclusive=True),
        eta_points=section.integer("eta_points", 25, minimum=2),
        ng_min=section.number("ng_min", 0.0),
        ng_max=section.number("ng_max", 1.0),
        ng_points=section.integer("ng_points", 25, minimum=2),
    )
    section.finish()
    if grid.eta_min >= grid.eta_max:
        problems.add("grid.eta_min", "must be below eta_max")
    if grid.ng_min >= grid.ng_max:
        problems.add("grid.ng_min", "must be below ng_max")

    section = _section(data, "output", problems)
    output = OutputBlock(
        directory=section.text("directory", ""),
        plots=section.boolean("plots", True),
    )
    section.finish()

    etas_block = _Block({"etas": data.pop("etas", None)}, "", problems)
    etas = etas_block.number_list("etas", (), minimum=0.0, exclusive=True)

    for key in data:
        problems.add(key, "unknown key")

    if experiment == "ramsey" and len(protocol.free_time_grid_ns) == 0:
        problems.add(
            "protocol.free_time_grid_ns", "ramsey requires a nonempty list of free times"
        )
    if experiment == "eta-sweep" and len(etas) < 2:
        problems.add("etas", "eta-sweep requires at least two eta values")
    for i, value in enumerate(etas):
        try:
            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                eta_to_Cc(value, gate_cap, junction_cap, ej)
        except Exception as error:
            problems.add(f"etas[{i}]", str(error))
    if experiment == "ground-state-map" and circuit.disorder_spread > 0:
        problems.add(
            "circuit.disorder_spread",
            "ground-state-map describes the homogeneous circuit; spread must be 0",
        )
    if (
        experiment == "ramsey"
        and circuit.disorder_spread > 0
        and circuit.disorder_seed is None
    ):
        problems.add(
            "circuit.disorder_spread",
            "ramsey interrogates one circuit; give a disorder_seed to fix a "
            "single draw, or set the spread to 0",
        )
    if experiment in ("mbl-clean", "mbl-dissipative", "level-stats") and (
        circuit.disorder_seed is not None
    ):
        problems.add(
            "circuit.disorder_seed",
            f"{experiment} averages over fresh disorder draws from the master "
            "seed; a fixed disorder_seed is not supported",
        )

    if problems.items:
        raise ConfigError(problems.items)

    resolved = _resolved_dict(experiment, circuit, noise, run, protocol, grid, output, etas)
    return ExperimentConfig(
        experiment=experiment,
        circuit=circuit,
        noise=noise,
        run=run,
        protocol=protocol,
        grid=grid,
        output=output,
        etas=etas,
        resolved=resolved,
        config_hash=config_hash(resolved),
    )


def _resolved_dict(experiment, circuit, noise, run, protocol, grid, output, etas) -> dict:
    return {
        "experiment": experiment,
        "circuit": {
            "n_qubits": circuit.n_qubits,
            "gate_capacitance_aF": circuit.gate_capacitance_aF,
            "junction_capacitance_aF": circuit.junction_capacitance_aF,
            "josephson_energy_GHz": circuit.josephson_energy_GHz,
            "coupling_capacitance_aF": circuit.coupling_capacitance_aF,
            "eta": circuit.eta,
            "disorder_spread": circuit.disorder_spread,
            "disorder_seed": circuit.disorder_seed,
        },
        "noise": {
            "enabled": noise.enabled,
            "resistance_ohm": noise.resistance_ohm,
            "flicker_amplitude": noise.flicker_amplitude,
            "f_min_Hz": noise.f_min_Hz,
            "f_max_Hz": noise.f_max_Hz,
        },
        "run": {
            "t_end_ns": run.t_end_ns,
            "dt_ns": run.dt_ns,
            "n_traj": run.n_traj,
            "master_seed": run.master_seed,
            "record_stride": run.record_stride,
            "n_workers": run.n_workers,
            "histogram_times_ns": list(run.histogram_times_ns),
        },
        "protocol": {
            "n_g0": protocol.n_g0,
            "initial_state": protocol.initial_state,
            "free_evolution_bias": protocol.free_evolution_bias,
            "pulse_duration_ns": protocol.pulse_duration_ns,
            "free_time_grid_ns": list(protocol.free_time_grid_ns),
        },
        "grid": {
            "eta_min": grid.eta_min,
            "eta_max": grid.eta_max,
            "eta_points": grid.eta_points,
            "ng_min": grid.ng_min,
            "ng_max": grid.ng_max,
            "ng_points": grid.ng_points,
        },
        "output": {
            "directory": output.directory or f"results/{experiment}",
            "plots": output.plots,
        },
        "etas": list(etas),
    }


def config_hash(resolved: dict) -> str:
    """SHA-256 of the canonical (sorted, compact) JSON form."""
    canonical = json.dumps(resolved, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode()).hexdigest()


def load_config(path) -> ExperimentConfig:
    """Parse and validate one JSON experiment file."""
    try:
        with open(path, encoding="utf-8") as handle:
            data = json.load(handle)
    except FileNotFoundError:
        raise ConfigError([f"{path}: no such file"]) from None
    except json.JSONDecodeError as error:
        raise ConfigError([f"{path}: not valid JSON ({error})"]) from None
    return validate_config(data)
