# %% [markdown]
# Characteristic speeds of the steady conical system
#
# Steady conical flow marches in neither direction on the sphere; its type
# follows from the roots of det(C2 - lambda C1) = 0.  Four roots have
# closed forms, the other four satisfy a quartic.

# %%
import numpy as np

from conimhd import IdealGas, SurfaceState, explicit_speeds, full_spectrum, quartic_residual
from conimhd.characteristics import match_explicit
from conimhd.geometry import flat_metric

g = flat_metric()
air = IdealGas(1.4)

# %% [markdown]
# Without a magnetic field the acoustic pair obeys
# (v2 - lambda v1)^2 = c^2 (lambda^2 + 1).  With unit sound speed a crossflow
# of 2 gives lambda = +-1/sqrt(3); a crossflow of 0.1 gives a complex pair.

# %%
for v1 in (2.0, 0.1):
    s = SurfaceState(1.0, v1, 0.0, 0.0, 1 / 1.4, 0.0, 0.0, 0.0)
    sp = full_spectrum(s, g, air)
    print(f"v1={v1}: type {sp.flow_type.value}")
    print("   ", np.round(sp.eigenvalues, 6))

# %% [markdown]
# A magnetized state.  The four closed-form speeds sit inside the numeric
# spectrum, and the remaining four satisfy the quartic.

# %%
mono = IdealGas(5 / 3)
s = SurfaceState(1.0, 3.0, 0.2, 0.1, 1.0, 0.8, -0.4, 0.5)
sp = full_spectrum(s, g, mono)
closed = explicit_speeds(s)
dev, idx, rest = match_explicit(sp.eigenvalues, closed)
print("closed-form speeds:", closed.round(6))
print("relative deviation:", dev)
for j in rest:
    lam = sp.eigenvalues[j]
    print(f"  lambda={lam:.6f}  quartic residual={quartic_residual(s, g, mono, lam):.2e}")

# %% [markdown]
# When v1 and b1 both vanish the pencil has an infinite root and the point
# is labelled degenerate.

# %%
s = SurfaceState(1.0, 0.0, 2.0, 0.0, 1 / 1.4, 0.0, 0.0, 0.0)
sp = full_spectrum(s, g, air)
print("type", sp.flow_type.value, "infinite roots:", sp.n_infinite)
