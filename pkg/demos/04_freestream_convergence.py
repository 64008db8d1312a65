# %% [markdown]
# Uniform flow is an exact conical solution
#
# A constant Cartesian velocity and magnetic field solve ideal MHD.  Projected
# onto the sphere they give a conical field whose discrete residual is pure
# truncation error, so it must fall by four each time the grid is halved.

# %%
import numpy as np

from conimhd.residual import assemble_residual, powell_divergence
from conimhd.verify.convergence import observed_orders
from conimhd.verify.fields import band_chart, freestream_field, radial_field

chart = band_chart()
res, powell = [], []
for n in (16, 32, 64, 128):
    f = freestream_field(chart, n, n, 1.0, (1.0, 0.0, 0.2), 1.0, (0.3, 0.1, 0.0))
    res.append(np.max(np.abs(assemble_residual(f))))
    powell.append(np.max(np.abs(powell_divergence(f))))
    print(f"n={n:4d}  max|R|={res[-1]:.3e}  max|div B|={powell[-1]:.3e}")
print("observed orders (residual):", np.round(observed_orders(res), 3))
print("observed orders (div B):   ", np.round(observed_orders(powell), 3))

# %% [markdown]
# A purely radial unit field is not solenoidal: the surface part of the
# divergence is zero and the radial part contributes 2 at r = 1.

# %%
print("radial field bracket:", np.unique(powell_divergence(radial_field(chart, 8, 8))))
