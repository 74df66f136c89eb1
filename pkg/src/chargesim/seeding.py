"""Deterministic hierarchical seed derivation.

Every stochastic ingredient of an ensemble (the gate-charge noise realization
of trajectory ``i``, the junction-disorder draw of trajectory ``i``) gets its
own child seed derived from a single master seed:

    child = SeedSequence(entropy=master_seed, spawn_key=(stream, index))
    seed  = first uint64 of child.generate_state(1)

The construction is pure arithmetic on ``(master_seed, stream, index)``; the
seed of trajectory ``i`` never depends on how many trajectories exist, so
growing an ensemble appends new trajectories without perturbing old ones.
"""

import numpy as np

#: stream ids, one per independent random ingredient
NOISE_STREAM = 0
DISORDER_STREAM = 1


def derive_seed(master_seed: int, stream: int, index: int) -> int:
    """Return the child seed for (stream, index) under the given master seed."""
    if index < 0:
        raise ValueError(f"index must be non-negative, got {index}")
    child = np.random.SeedSequence(entropy=master_seed, spawn_key=(stream, index))
    return int(child.generate_state(1, dtype=np.uint64)[0])
