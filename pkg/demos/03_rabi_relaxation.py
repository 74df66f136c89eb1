"""Collective Rabi decay under gate noise: relaxation is not monotonic.

Every island starts in its upper charge state at the degeneracy point
and simply tunnels: a collective Rabi oscillation of the polarization
j_z.  The shared gate noise dephases and relaxes the ensemble average.

The surprise is the coupling dependence.  Turning the interqubit
coupling up from eta << 1 first *shortens* the decay (the array
develops a collective sensitivity to the common noise), but pushing it
far above one *lengthens* it again: strong electrostatic correlations
stiffen the array against the same fluctuations.  A small ensemble on a
4-island array already resolves the dip.

Run:  python3 demos/03_rabi_relaxation.py    (about a minute)
"""

import pathlib
import time

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from chargesim import (
    PropagationConfig,
    build_circuit,
    default_noise_model,
    ensemble_statistics,
    eta_to_Cc,
    fit_T1,
    run_rabi_ensemble,
)

OUT = pathlib.Path(__file__).resolve().parent / "output"
OUT.mkdir(exist_ok=True)

GATE_AF, JUNCTION_AF, TUNNEL_GHZ = 300.0, 30.0, 3.0
N, N_TRAJ, MASTER = 4, 48, 7


def device(eta):
    return build_circuit(
        n_qubits=N,
        gate_capacitance=GATE_AF,
        junction_capacitance=JUNCTION_AF,
        josephson_energy=TUNNEL_GHZ,
        coupling_capacitance=eta_to_Cc(eta, GATE_AF, JUNCTION_AF, TUNNEL_GHZ),
    )


cases = [  # (eta, horizon long enough to resolve the envelope)
    (0.08, 10.0),
    (0.77, 4.0),
    (7.0, 25.0),
]

fig, axes = plt.subplots(len(cases), 1, figsize=(8, 8), sharex=False)
t1s = []
for ax, (eta, t_end) in zip(axes, cases):
    circuit = device(eta)
    noise = default_noise_model(circuit)
    config = PropagationConfig(t_end=t_end, record_stride=200)
    tic = time.time()
    records = run_rabi_ensemble(circuit, noise, config, N_TRAJ, MASTER)
    stats = ensemble_statistics(records)
    fit = fit_T1(stats.times, stats.mean_jz)
    t1s.append((eta, fit.decay_time))
    print(f"eta = {eta:5.2f}:  T1 = {fit.decay_time:6.3f} ns  "
          f"({fit.branch} fit, {N_TRAJ} trajectories, {time.time()-tic:.1f} s)")

    ax.plot(stats.times, stats.mean_jz, lw=0.9,
            label=rf"$\langle j_z\rangle$, eta = {eta}")
    envelope = np.exp(-stats.times / fit.decay_time)
    ax.plot(stats.times, envelope, "k--", lw=1.1,
            label=rf"$e^{{-t/T_1}}$, $T_1$ = {fit.decay_time:.2f} ns")
    ax.plot(stats.times, -envelope, "k--", lw=1.1)
    ax.set_ylabel(r"$\langle j_z \rangle$")
    ax.legend(loc="upper right", fontsize=8)
axes[-1].set_xlabel("time [ns]")
fig.suptitle("Ensemble-averaged Rabi decay across the coupling dip")
fig.tight_layout()
path = OUT / "03_rabi_relaxation.png"
fig.savefig(path, dpi=150)

print("\n— the non-monotonic pattern —")
print(f"  {t1s[0][1]:.2f} ns (weak)  ->  {t1s[1][1]:.2f} ns (dip)  ->  "
      f"{t1s[2][1]:.2f} ns (strong): down, then up again")
print(f"\nfigure -> {path}")
