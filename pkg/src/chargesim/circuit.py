"""Circuit model for capacitively coupled charge-qubit arrays.

``N`` Cooper-pair boxes share one gate voltage and are coupled pairwise
through a common coupling capacitor ``C_c``. In the charging limit each
island is truncated to its two lowest charge states, so the array lives on a
``2**N``-dimensional Hilbert space indexed by bitstrings: bit ``k-1`` of the
basis index is the charge state of qubit ``k`` (qubit 1 is the least
significant bit), with ``s_k = +1`` for the extra-pair state ``|1>``.

The Hamiltonian (divided by h, in GHz) is the sum of

* a single-qubit part: ``sum_k  E_C_k/2 (1 - 2 N_g) sigma_z_k
  - E_J_k/2 sigma_x_k``, and
* a quadratic charging part from the shared coupling:
  ``( sum_k  E_C_k / (2 sqrt(N V)) (sigma_z_k + 1 - 2 N_g) )**2``,

where ``V = (2e)^2/(2 C_c) - mean_k(E_C_k)`` sets the interaction scale
(infinite when ``C_c = 0``, in which case the quadratic part vanishes).

The diagonal of H is a quadratic polynomial in the gate charge,
``A + B*N_g + C*N_g**2``; the basis-indexed coefficient vectors are cached on
the circuit so time-dependent gate charges only cost one phase evaluation per
step.
"""

from dataclasses import dataclass
from functools import cached_property
import math
import warnings

import numpy as np

from .constants import CHARGING_SCALE_GHZ_AF
from .errors import ChargingLimitWarning, InvalidParameterError

#: hard cap for dense operations (2**14 doubles squared ~ 2 GB)
DENSE_LIMIT = 14

#: junction scale factors are redrawn below this floor
DISORDER_FLOOR = 0.05

#: advisory threshold for the two-state (charging-limit) approximation
CHARGING_LIMIT_RATIO = 10.0


@dataclass(frozen=True)
class DisorderSpec:
    """Junction fabrication disorder.

    Each qubit gets a scale factor ``a_k ~ Normal(1, spread)``, redrawn until
    ``a_k >= floor``; its junction capacitance and Josephson energy are both
    multiplied by the same ``a_k`` (junction area scales both together).
    """

    spread: float
    seed: int
    floor: float = DISORDER_FLOOR


@dataclass(frozen=True)
class CircuitParams:
    """Immutable parameter set of one array realization.

    Capacitances in aF, energies in GHz. Derived quantities are cached
    properties so repeated Hamiltonian applications reuse them.
    """

    n_qubits: int
    gate_capacitance: float
    coupling_capacitance: float
    junction_capacitances: tuple
    josephson_energies: tuple

    @cached_property
    def total_capacitances(self) -> np.ndarray:
        """Per-island total capacitance C_g + C_j_k + C_c (aF)."""
        cj = np.asarray(self.junction_capacitances, dtype=float)
        return self.gate_capacitance + cj + self.coupling_capacitance

    @cached_property
    def charging_energies(self) -> np.ndarray:
        """Per-qubit charging energy (2e)^2 / (2 C_total) in GHz."""
        return CHARGING_SCALE_GHZ_AF / self.total_capacitances

    @cached_property
    def mean_charging_energy(self) -> float:
        return float(np.mean(self.charging_energies))

    @cached_property
    def mean_josephson_energy(self) -> float:
        return float(np.mean(self.josephson_energies))

    @cached_property
    def interaction_scale(self) -> float:
        """Energy scale V of the shared-capacitor coupling (GHz).

        Infinite for an uncoupled array (C_c = 0); the quadratic charging
        term carries a 1/V prefactor, so V = inf switches it off cleanly.
        """
        if self.coupling_capacitance == 0.0:
            return math.inf
        return (
            CHARGING_SCALE_GHZ_AF / self.coupling_capacitance
            - self.mean_charging_energy
        )

    @cached_property
    def coupling_parameter(self) -> float:
        """Dimensionless coupling strength eta = E_C^2 / (E_J V) (means)."""
        if math.isinf(self.interaction_scale):
            return 0.0
        return self.mean_charging_energy**2 / (
            self.mean_josephson_energy * self.interaction_scale
        )

    @cached_property
    def is_homogeneous(self) -> bool:
        return (
            len(set(self.junction_capacitances)) == 1
            and len(set(self.josephson_energies)) == 1
        )

    @cached_property
    def dim(self) -> int:
        return 2**self.n_qubits

    @cached_property
    def _spin_signs(self) -> np.ndarray:
        """(dim, N) array of s_k = +/-1 for every basis state."""
        idx = np.arange(self.dim)
        bits = (idx[:, None] >> np.arange(self.n_qubits)[None, :]) & 1
        return 2.0 * bits - 1.0

    @cached_property
    def diagonal_coefficients(self):
        """Basis-indexed vectors (A, B, C) with diag(H) = A + B*N_g + C*N_g^2.

        Derivation: with a_k = E_C_k/2 and c_k = E_C_k / (2 sqrt(N V)), the
        diagonal on basis state s is
        ``(1 - 2 N_g) sum_k a_k s_k + (w(s) - 2 N_g G)^2`` where
        ``w(s) = sum_k c_k (s_k + 1)`` and ``G = sum_k c_k``. Expanding in
        powers of N_g gives A = p + w^2, B = -2p - 4wG, C = 4G^2 with
        p(s) = sum_k a_k s_k. C is state independent but returned as an array
        for uniform broadcasting.
        """
        ec = self.charging_energies
        s = self._spin_signs
        p = s @ (ec / 2.0)
        v = self.interaction_scale
        if math.isinf(v):
            c = np.zeros_like(ec)
        else:
            c = ec / (2.0 * math.sqrt(self.n_qubits * v))
        w = s @ c + c.sum()
        g = c.sum()
        a_vec = p + w**2
        b_vec = -2.0 * p - 4.0 * w * g
        c_vec = np.full(self.dim, 4.0 * g * g)
        return a_vec, b_vec, c_vec

    @cached_property
    def popcounts(self) -> np.ndarray:
        """Number of set bits of every basis index (int64)."""
        idx = np.arange(self.dim)
        counts = np.zeros(self.dim, dtype=np.int64)
        for k in range(self.n_qubits):
            counts += (idx >> k) & 1
        return counts

    @cached_property
    def diagonal_coefficients_by_popcount(self):
        """Compressed (A, B, C) tables for homogeneous circuits.

        For equal charging energies the diagonal depends on the basis state
        only through its popcount j (total charge), so the per-step phase can
        be evaluated on N+1 values and gathered to 2**N.
        """
        if not self.is_homogeneous:
            raise InvalidParameterError(
                "popcount-compressed diagonal requires a homogeneous circuit"
            )
        ec = float(self.charging_energies[0])
        n = self.n_qubits
        j = np.arange(n + 1, dtype=float)
        m = 2.0 * j - n  # sum of s_k
        v = self.interaction_scale
        c = 0.0 if math.isinf(v) else ec / (2.0 * math.sqrt(n * v))
        p = (ec / 2.0) * m
        w = 2.0 * c * j
        g = n * c
        return p + w**2, -2.0 * p - 4.0 * w * g, np.full(n + 1, 4.0 * g * g)


def sample_disorder(n_qubits: int, spread: float, seed: int, floor: float = DISORDER_FLOOR) -> np.ndarray:
    """Draw junction scale factors a_k ~ Normal(1, spread), redrawn below ``floor``.

    The redraw makes the distribution a lower-truncated normal; for
    spread = 0.5 that shifts the mean to ~1.034 and the std to ~0.466
    (conditioning on a_k >= 0.05 removes the lower 1.9-sigma tail).
    Deterministic for a given seed.
    """
    if spread < 0:
        raise InvalidParameterError(f"disorder spread must be >= 0, got {spread}")
    rng = np.random.default_rng(seed)
    if spread == 0:
        return np.ones(n_qubits)
    factors = rng.normal(1.0, spread, size=n_qubits)
    bad = factors < floor
    while np.any(bad):
        factors[bad] = rng.normal(1.0, spread, size=int(bad.sum()))
        bad = factors < floor
    return factors


def build_circuit(
    n_qubits: int,
    gate_capacitance: float,
    coupling_capacitance: float,
    junction_capacitance: float,
    josephson_energy: float,
    disorder: DisorderSpec | None = None,
) -> CircuitParams:
    """Assemble a circuit realization from mean parameters.

    Parameters
    ----------
    n_qubits : int
        Number of islands N >= 1.
    gate_capacitance, coupling_capacitance, junction_capacitance : float
        C_g, C_c and the mean junction capacitance, all in aF.
    josephson_energy : float
        Mean Josephson energy in GHz.
    disorder : DisorderSpec, optional
        When given, junction capacitances and Josephson energies are both
        scaled per qubit by the same drawn factor a_k.

    Warns with :class:`ChargingLimitWarning` when any island has
    E_C/E_J < 10, where the two-state truncation degrades.
    """
    if n_qubits < 1:
        raise InvalidParameterError(f"n_qubits must be >= 1, got {n_qubits}")
    if gate_capacitance <= 0:
        raise InvalidParameterError(f"gate capacitance must be > 0 aF, got {gate_capacitance}")
    if coupling_capacitance < 0:
        raise InvalidParameterError(
            f"coupling capacitance must be >= 0 aF, got {coupling_capacitance}"
        )
    if junction_capacitance <= 0:
        raise InvalidParameterError(
            f"junction capacitance must be > 0 aF, got {junction_capacitance}"
        )
    if josephson_energy < 0:
        raise InvalidParameterError(f"Josephson energy must be >= 0 GHz, got {josephson_energy}")

    if disorder is not None and disorder.spread > 0:
        factors = sample_disorder(n_qubits, disorder.spread, disorder.seed, disorder.floor)
    else:
        factors = np.ones(n_qubits)

    circuit = CircuitParams(
        n_qubits=n_qubits,
        gate_capacitance=float(gate_capacitance),
        coupling_capacitance=float(coupling_capacitance),
        junction_capacitances=tuple(float(f) * junction_capacitance for f in factors),
        josephson_energies=tuple(float(f) * josephson_energy for f in factors),
    )

    if circuit.interaction_scale <= 0:
        raise InvalidParameterError(
            f"interaction scale V = {circuit.interaction_scale:.6g} GHz must be positive; "
            "the coupling capacitor is too large for these island parameters"
        )
    ej = np.asarray(circuit.josephson_energies)
    if np.any(ej > 0):
        ratios = circuit.charging_energies[ej > 0] / ej[ej > 0]
        worst = float(ratios.min())
        if worst < CHARGING_LIMIT_RATIO:
            warnings.warn(
                f"E_C/E_J = {worst:.3g} is below {CHARGING_LIMIT_RATIO:g}; the two-state "
                "island approximation is marginal for these parameters",
                ChargingLimitWarning,
                stacklevel=2,
            )
    return circuit


def eta_to_Cc(
    eta: float,
    gate_capacitance: float,
    junction_capacitance: float,
    josephson_energy: float,
) -> float:
    """Invert the coupling parameter to a coupling capacitance (aF).

    For a homogeneous array, eta = (E_C/E_J) * C_c / (C_g + C_j) with
    E_C = (2e)^2 / (2 (C_g + C_j + C_c)), which solves in closed form:

        C_c = eta * E_J * S^2 / (K - eta * E_J * S),   S = C_g + C_j,

    with K the charging scale constant. eta has a finite supremum
    K / (E_J S) (reached as C_c -> inf); values at or above it are rejected.
    A :class:`ChargingLimitWarning` is emitted when the resulting circuit has
    E_C/E_J below 10.
    """
    if eta < 0:
        raise InvalidParameterError(f"eta must be >= 0, got {eta}")
    if josephson_energy <= 0:
        raise InvalidParameterError("eta inversion needs a positive Josephson energy")
    if eta == 0:
        return 0.0
    shunt = gate_capacitance + junction_capacitance
    eta_sup = CHARGING_SCALE_GHZ_AF / (josephson_energy * shunt)
    if eta >= eta_sup:
        raise InvalidParameterError(
            f"eta = {eta:g} is unreachable: the supremum for these parameters is "
            f"{eta_sup:.4g} (approached only as C_c -> infinity)"
        )
    cc = eta * josephson_energy * shunt**2 / (
        CHARGING_SCALE_GHZ_AF - eta * josephson_energy * shunt
    )
    ec = CHARGING_SCALE_GHZ_AF / (shunt + cc)
    if ec / josephson_energy < CHARGING_LIMIT_RATIO:
        warnings.warn(
            f"eta = {eta:g} gives E_C/E_J = {ec / josephson_energy:.3g} < "
            f"{CHARGING_LIMIT_RATIO:g}; charging-limit results are marginal there",
            ChargingLimitWarning,
            stacklevel=2,
        )
    return float(cc)


def hamiltonian_diagonal(circuit: CircuitParams, n_g: float) -> np.ndarray:
    """Diagonal of H at gate charge n_g, via the cached quadratic coefficients."""
    a_vec, b_vec, c_vec = circuit.diagonal_coefficients
    return a_vec + n_g * b_vec + (n_g * n_g) * c_vec


def apply_hamiltonian(circuit: CircuitParams, n_g: float, psi: np.ndarray) -> np.ndarray:
    """Matrix-free application of H (GHz) to a state vector.

    ``psi`` has length 2**N; the result is a new array. The diagonal comes
    from the cached quadratic-in-N_g decomposition; the off-diagonal part is
    the per-qubit bit-flip transfer with weight -E_J_k/2.
    """
    psi = np.asarray(psi)
    if psi.shape != (circuit.dim,):
        raise InvalidParameterError(
            f"state vector must have shape ({circuit.dim},), got {psi.shape}"
        )
    out = hamiltonian_diagonal(circuit, n_g) * psi
    for k in range(circuit.n_qubits):
        half = -0.5 * circuit.josephson_energies[k]
        src = psi.reshape(-1, 2, 2**k)
        dst = out.reshape(-1, 2, 2**k)
        dst[:, 0, :] += half * src[:, 1, :]
        dst[:, 1, :] += half * src[:, 0, :]
    return out


def dense_hamiltonian(circuit: CircuitParams, n_g: float) -> np.ndarray:
    """Dense H (GHz) built directly from the defining expression.

    Intentionally does not reuse the cached quadratic decomposition, so it
    serves as an independent cross-check of :func:`apply_hamiltonian`.
    Guarded to N <= 14 against memory blowup.
    """
    n = circuit.n_qubits
    if n > DENSE_LIMIT:
        raise InvalidParameterError(
            f"dense Hamiltonian limited to N <= {DENSE_LIMIT}, got N = {n}"
        )
    ec = circuit.charging_energies
    s = circuit._spin_signs
    bias = 1.0 - 2.0 * n_g
    diag = s @ (0.5 * bias * ec)
    v = circuit.interaction_scale
    if not math.isinf(v):
        c = ec / (2.0 * math.sqrt(n * v))
        diag = diag + (s @ c + bias * c.sum()) ** 2
    h = np.diag(diag)
    idx = np.arange(circuit.dim)
    for k in range(n):
        lower = idx[(idx >> k) & 1 == 0]
        upper = lower + (1 << k)
        h[lower, upper] = -0.5 * circuit.josephson_energies[k]
        h[upper, lower] = -0.5 * circuit.josephson_energies[k]
    return h
