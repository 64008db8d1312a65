# %% [markdown]
# Speeds of the pseudo-time system
#
# Adding a time derivative turns the steady system into one that can be
# marched.  Along any direction w its eight speeds are real: the flow speed
# twice, an Alfven pair and the fast and slow magnetosonic pairs.

# %%
import numpy as np

from conimhd import IdealGas, SurfaceState
from conimhd.geometry import flat_metric
from conimhd.pseudotime import pseudo_speeds_formula, pseudo_speeds_numeric

g = flat_metric()
gas = IdealGas(5 / 3)
s = SurfaceState(1.0, 0.6, -0.3, 0.1, 0.8, 0.5, 0.4, -0.2)

for ang in np.linspace(0, np.pi, 5):
    w = [np.cos(ang), np.sin(ang)]
    speeds, cf, cs = pseudo_speeds_formula(s, g, gas, w)
    lam = pseudo_speeds_numeric(s, g, gas, w)
    print(f"angle={ang:.3f}  c_f={cf:.4f}  c_s={cs:.4f}  "
          f"max|formula-numeric|={np.max(np.abs(lam.real - speeds)):.1e}  max|Im|={np.max(np.abs(lam.imag)):.1e}")

# %% [markdown]
# The flow speed v.w always appears twice, so the system is hyperbolic but
# never strictly so.

# %%
speeds, _, _ = pseudo_speeds_formula(s, g, gas, [1.0, 0.0])
print(np.round(speeds, 6))
