"""Ground states of the shared-gate array: variational and exact.

The array's low-energy physics reduces to a competition between the gate-
charge bias and Josephson tunneling, with the shared coupling capacitor
turning the charging term into a collective square. For a homogeneous array
a product ansatz with per-island amplitude ``beta`` on the extra-pair state
gives the energy per island

    e(beta) = (E_C^2 / 4V) (2 beta^2 - 1 + Xi)^2 - E_J beta sqrt(1 - beta^2)

where ``Xi = (1 + V/E_C)(1 - 2 n_g)`` collects the gate bias. The first term
wants the polarization ``jz = 2 beta^2 - 1`` pinned at ``-Xi`` (clamped to
physical range), the second wants the equal superposition ``jz = 0``; their
ratio is controlled by ``eta = E_C^2 / (E_J V)``.

Because every island couples to every other with the same strength, the
exact ground state lives in the permutation-symmetric sector, an (N+1)-
dimensional collective-spin block. :func:`collective_hamiltonian` builds that
block directly, so exact ground states remain cheap at sizes where the full
2^N matrix would not be, and :func:`exact_ground_state` uses it as the
benchmark the variational answer is judged against.
"""

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .circuit import CircuitParams, build_circuit, eta_to_Cc
from .errors import ChargingLimitWarning, InvalidParameterError

#: number of cells used to bracket stationary points of the energy
_BRACKET_GRID = 2048
#: bisection tolerance on beta
_BETA_TOL = 1e-12


@dataclass(frozen=True)
class GroundState:
    """Variational (or collective-exact) ground state at one gate point."""

    n_g: float
    beta: float
    jz: float
    jx: float
    energy_per_qubit: float


@dataclass(frozen=True)
class GroundStateMap:
    """Polarization surface over a (gate charge) x (coupling) grid."""

    eta_values: np.ndarray
    n_g_values: np.ndarray
    jz: np.ndarray  # shape (len(eta_values), len(n_g_values))
    energy_per_qubit: np.ndarray


def charge_bias(circuit: CircuitParams, n_g: float) -> float:
    """Reduced gate bias Xi = (1 + V/E_C)(1 - 2 n_g) entering the energy."""
    v = circuit.interaction_scale
    if math.isinf(v):
        raise InvalidParameterError(
            "the collective bias is undefined for an uncoupled array (C_c = 0)"
        )
    return (1.0 + v / circuit.mean_charging_energy) * (1.0 - 2.0 * n_g)


def mean_field_energy(circuit: CircuitParams, n_g: float, beta) -> np.ndarray:
    """Product-state energy per island at amplitude(s) ``beta`` (GHz)."""
    b = np.asarray(beta, dtype=float)
    if np.any((b < 0) | (b > 1)):
        raise InvalidParameterError("beta must lie in [0, 1]")
    xi = charge_bias(circuit, n_g)
    ec = circuit.mean_charging_energy
    ej = circuit.mean_josephson_energy
    v = circuit.interaction_scale
    charging = ec**2 / (4.0 * v) * (2.0 * b**2 - 1.0 + xi) ** 2
    tunneling = -ej * b * np.sqrt(np.clip(1.0 - b**2, 0.0, None))
    out = charging + tunneling
    return out if out.shape else float(out)


def _angle_energy(theta, xi, ec, ej, v):
    """Energy per island along beta = sin(theta/2): jz = -cos, jx = sin."""
    return ec**2 / (4.0 * v) * (xi - np.cos(theta)) ** 2 - 0.5 * ej * np.sin(theta)


def _angle_derivative(theta, xi, ec, ej, v):
    """d e / d theta: exactly -E_J/2 at 0 and +E_J/2 at pi, so a crossing
    always exists strictly inside the interval."""
    return (ec**2 / (2.0 * v)) * (xi - np.cos(theta)) * np.sin(theta) - 0.5 * ej * np.cos(
        theta
    )


def _state_from_theta(n_g, theta, energy):
    beta = math.sin(0.5 * theta)
    return GroundState(
        n_g=n_g,
        beta=beta,
        jz=-math.cos(theta),
        jx=math.sin(theta),
        energy_per_qubit=energy,
    )


def solve_ground_state(circuit: CircuitParams, n_g: float) -> GroundState:
    """Minimize the product-state energy over the Bloch angle.

    Works in theta with beta = sin(theta/2), where the slope is finite and
    changes sign at least once on (0, pi) whenever tunneling is on; every
    bracketed stationary point is polished by bisection and the lowest-
    energy one wins (competing wells appear near the step edges). Without
    tunneling the clamped square is minimized directly.
    """
    xi = charge_bias(circuit, n_g)
    ec = circuit.mean_charging_energy
    ej = circuit.mean_josephson_energy
    v = circuit.interaction_scale
    if ej == 0.0:
        theta = math.acos(float(np.clip(xi, -1.0, 1.0)))
        return _state_from_theta(n_g, theta, float(_angle_energy(theta, xi, ec, ej, v)))

    grid = np.linspace(0.0, math.pi, _BRACKET_GRID + 1)
    slope = _angle_derivative(grid, xi, ec, ej, v)
    sign_change = np.nonzero(np.diff(np.sign(slope)) != 0)[0]
    candidates = []
    for i in sign_change:
        lo, hi = grid[i], grid[i + 1]
        f_lo = slope[i]
        while hi - lo > _BETA_TOL:
            mid = 0.5 * (lo + hi)
            f_mid = _angle_derivative(mid, xi, ec, ej, v)
            if (f_lo < 0) == (f_mid < 0):
                lo, f_lo = mid, f_mid
            else:
                hi = mid
        candidates.append(0.5 * (lo + hi))
    energies = [float(_angle_energy(t, xi, ec, ej, v)) for t in candidates]
    best = int(np.argmin(energies))
    return _state_from_theta(n_g, candidates[best], energies[best])


def charge_step_boundaries(circuit: CircuitParams) -> tuple[float, float]:
    """Gate charges where the clamped zero-tunneling polarization saturates.

    Solves Xi = +1 and Xi = -1 for n_g; between the two values the
    polarization interpolates, outside it is pinned at -/+ 1. The window
    collapses onto n_g = 1/2 as V/E_C grows and fills [0, 1] as it shrinks.
    """
    v = circuit.interaction_scale
    if math.isinf(v):
        raise InvalidParameterError("boundaries are undefined for an uncoupled array")
    half_width = 0.5 / (1.0 + v / circuit.mean_charging_energy)
    return 0.5 - half_width, 0.5 + half_width


def ground_state_map(
    eta_values,
    n_g_values,
    *,
    gate_capacitance: float,
    junction_capacitance: float,
    josephson_energy: float,
    n_qubits: int = 10,
    method: str = "mean-field",
) -> GroundStateMap:
    """Polarization jz over an (eta, n_g) grid for a homogeneous array.

    ``method`` selects the variational answer ("mean-field") or the
    collective-sector diagonalization ("exact").
    """
    if method not in ("mean-field", "exact"):
        raise InvalidParameterError(f"unknown method {method!r}")
    etas = np.asarray(eta_values, dtype=float)
    gates = np.asarray(n_g_values, dtype=float)
    if etas.ndim != 1 or gates.ndim != 1 or len(etas) == 0 or len(gates) == 0:
        raise InvalidParameterError("eta_values and n_g_values must be 1-D and non-empty")
    jz = np.empty((len(etas), len(gates)))
    energy = np.empty_like(jz)
    with warnings.catch_warnings():
        # sweeping far into the weak-charging regime is the whole point here
        warnings.simplefilter("ignore", ChargingLimitWarning)
        for i, eta in enumerate(etas):
            cc = eta_to_Cc(
                eta,
                gate_capacitance=gate_capacitance,
                junction_capacitance=junction_capacitance,
                josephson_energy=josephson_energy,
            )
            circuit = build_circuit(
                n_qubits=n_qubits,
                gate_capacitance=gate_capacitance,
                coupling_capacitance=cc,
                junction_capacitance=junction_capacitance,
                josephson_energy=josephson_energy,
            )
            for j, n_g in enumerate(gates):
                state = (
                    solve_ground_state(circuit, n_g)
                    if method == "mean-field"
                    else exact_ground_state(circuit, n_g)
                )
                jz[i, j] = state.jz
                energy[i, j] = state.energy_per_qubit
    return GroundStateMap(eta_values=etas, n_g_values=gates, jz=jz, energy_per_qubit=energy)


def collective_hamiltonian(circuit: CircuitParams, n_g: float) -> np.ndarray:
    """Symmetric-sector Hamiltonian on the (N+1)-dim collective-spin basis.

    All islands see the same gate and the same all-to-all coupling, so the
    Hamiltonian commutes with every island permutation and the (unique,
    nodeless) ground state lies in the maximal-spin block spanned by
    |S = N/2, M>, M = -S .. S. In that block

        H = (E_C^2 / 4 N V) (2 S_z + N Xi)^2 - E_J S_x

    reproduces the full-array spectrum restricted to the sector, up to the
    state-independent shift (E_C^2 N / 4V)(Xi^2 - (1 - 2 n_g)^2) relative to
    the microscopic diagonal.
    """
    if not circuit.is_homogeneous:
        raise InvalidParameterError("the collective block exists only for homogeneous arrays")
    xi = charge_bias(circuit, n_g)
    n = circuit.n_qubits
    ec = circuit.mean_charging_energy
    ej = circuit.mean_josephson_energy
    v = circuit.interaction_scale
    s = n / 2.0
    m = np.arange(-s, s + 1.0)
    h = np.diag(ec**2 / (4.0 * n * v) * (2.0 * m + n * xi) ** 2)
    ladder = 0.5 * np.sqrt(s * (s + 1.0) - m[:-1] * (m[:-1] + 1.0))  # <M+1|S_x|M>
    off = -ej * ladder
    h += np.diag(off, 1) + np.diag(off, -1)
    return h


def exact_ground_state(circuit: CircuitParams, n_g: float) -> GroundState:
    """Ground state from the collective block: polarization and energy/island.

    The reported energy subtracts the same reference as the variational
    functional, so the two are directly comparable; beta is inferred from
    jz and jx from <2 S_x>/N.
    """
    h = collective_hamiltonian(circuit, n_g)
    evals, evecs = np.linalg.eigh(h)
    ground = evecs[:, 0]
    n = circuit.n_qubits
    s = n / 2.0
    m = np.arange(-s, s + 1.0)
    jz = 2.0 * float(ground @ (m * ground)) / n
    ladder = 0.5 * np.sqrt(s * (s + 1.0) - m[:-1] * (m[:-1] + 1.0))
    sx = 2.0 * float(ground[1:] @ (ladder * ground[:-1]))  # real psi: both triangles
    jx = 2.0 * sx / n
    beta = math.sqrt(max(0.0, (jz + 1.0) / 2.0))
    return GroundState(
        n_g=n_g,
        beta=beta,
        jz=jz,
        jx=jx,
        energy_per_qubit=float(evals[0]) / n,
    )
