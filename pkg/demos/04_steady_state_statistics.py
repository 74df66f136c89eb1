"""What the noisy steady state looks like: spread, histograms, correlations.

Long after the collective Rabi oscillation has decayed, the ensemble
mean of j_z sits at zero — but individual trajectories do not.  Each
noise history strands its trajectory at some quasi-frozen polarization,
and the shape of that distribution encodes the coupling strength:

* weak coupling: trajectories scatter broadly (large spread, hardly any
  interqubit correlation — each island decoheres on its own),
* intermediate and strong coupling: the spread tightens while the
  connected pair correlator C_zz grows and then saturates — relaxation
  proceeds through genuinely collective states.

Run:  python3 demos/04_steady_state_statistics.py    (about two minutes)
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
    histogram_jz,
    run_rabi_ensemble,
)

OUT = pathlib.Path(__file__).resolve().parent / "output"
OUT.mkdir(exist_ok=True)

GATE_AF, JUNCTION_AF, TUNNEL_GHZ = 300.0, 30.0, 3.0
N, N_TRAJ, MASTER = 4, 64, 19

# per coupling: a horizon comfortably past the decay and the late
# window over which the statistics are read off
cases = {
    0.08: (10.0, (7.0, 10.0)),
    0.77: (4.0, (2.5, 4.0)),
    7.0: (25.0, (18.0, 25.0)),
}

fig, axes = plt.subplots(1, 3, figsize=(12, 3.8), sharey=True)
summary = {}
for ax, (eta, (t_end, window)) in zip(axes, cases.items()):
    circuit = build_circuit(
        n_qubits=N,
        gate_capacitance=GATE_AF,
        junction_capacitance=JUNCTION_AF,
        josephson_energy=TUNNEL_GHZ,
        coupling_capacitance=eta_to_Cc(eta, GATE_AF, JUNCTION_AF, TUNNEL_GHZ),
    )
    noise = default_noise_model(circuit)
    config = PropagationConfig(t_end=t_end, record_stride=200)
    tic = time.time()
    records = run_rabi_ensemble(circuit, noise, config, N_TRAJ, MASTER)
    stats = ensemble_statistics(records)
    mask = (stats.times >= window[0]) & (stats.times <= window[1])

    mean = float(np.mean(stats.mean_jz[mask]))
    spread = float(np.mean(np.sqrt(stats.var_jz[mask])))
    czz = float(np.mean(stats.czz[mask]))
    summary[eta] = (mean, spread, czz)
    print(f"eta = {eta:5.2f}  [{window[0]:.0f}-{window[1]:.0f} ns]:  "
          f"<j_z> = {mean:+.3f}   spread = {spread:.3f}   "
          f"C_zz = {czz:+.3f}   ({time.time()-tic:.0f} s)")

    # late-time snapshot histogram of the per-trajectory polarization
    snapshot = histogram_jz(records, time_index=-1, n_bins=15)
    centers = 0.5 * (snapshot.edges[1:] + snapshot.edges[:-1])
    ax.bar(centers, snapshot.density, width=np.diff(snapshot.edges),
           alpha=0.75, edgecolor="k", linewidth=0.4)
    ax.set_title(f"eta = {eta}")
    ax.set_xlabel(r"trajectory $\langle j_z \rangle$ at $t_{end}$")
    ax.set_xlim(-1, 1)
axes[0].set_ylabel("probability density")
fig.suptitle("Steady-state polarization statistics across couplings")
fig.tight_layout()
path = OUT / "04_steady_state_statistics.png"
fig.savefig(path, dpi=150)

print("\n— reading the table —")
print("  the mean vanishes everywhere; the spread shrinks with coupling")
print("  while the pair correlator grows: collective, correlated freezing")
print(f"\nfigure -> {path}")
