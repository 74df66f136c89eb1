"""Physical constants and unit conventions.

Unit system used throughout the package:

* energies are stored as frequencies ``E/h`` in GHz,
* times are in ns (so ``E/h * t`` is a phase in cycles),
* capacitances are in aF,
* spectral densities are in 1/Hz with frequencies in Hz (SI), converted at
  the boundaries where they meet the GHz/ns world.

The only nontrivial derived constant is the Cooper-pair charging scale
``(2e)^2 / (2C) / h``: with ``C`` in aF it evaluates to
``CHARGING_SCALE_GHZ_AF / C`` GHz.
"""

from scipy.constants import e as ELEMENTARY_CHARGE_C
from scipy.constants import h as PLANCK_J_S
from scipy.constants import hbar as HBAR_J_S

# (2e)^2 / 2 / h expressed in GHz * aF:  E_C[GHz] = CHARGING_SCALE_GHZ_AF / C[aF]
CHARGING_SCALE_GHZ_AF = 2.0 * ELEMENTARY_CHARGE_C**2 / PLANCK_J_S * 1e9

AF_TO_F = 1e-18
GHZ_TO_HZ = 1e9
NS_TO_S = 1e-9
