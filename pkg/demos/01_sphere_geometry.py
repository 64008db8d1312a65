# %% [markdown]
# Geometry of the unit sphere
#
# A conical field depends only on direction, so every quantity lives on the
# unit sphere.  This walk-through evaluates the metric, the Christoffel
# symbols and the split of a Cartesian vector into surface and radial parts.

# %%
import numpy as np

from conimhd.geometry import lift_vector, metric_at, named_embedding_chart, project_vector, spherical_chart

sph = spherical_chart()
for theta in (np.pi / 2, np.pi / 3, np.pi / 6):
    m = metric_at(sph, theta, 0.0)
    print(f"theta={theta:.4f}  g=diag({m.g[0, 0]:.3f}, {m.g[1, 1]:.3f})  sqrt(g)={m.sqrt_det:.3f}")

# %% [markdown]
# Christoffel symbols at 45 degrees: Gamma^theta_{phi phi} = -sin cos and
# Gamma^phi_{theta phi} = cot.

# %%
G = metric_at(sph, np.pi / 4, 0.0).christoffel
print("Gamma^th_ph,ph =", round(G[0, 1, 1], 12), "  Gamma^ph_th,ph =", round(G[1, 0, 1], 12))

# %% [markdown]
# Any embedding works.  The gnomonic chart below has no closed form in the
# package, its derivatives come from finite differences of the embedding.

# %%
gn = named_embedding_chart("gnomonic")
m = metric_at(gn, 0.3, -0.2)
print("gnomonic metric\n", m.g.round(6))
print("g^-1 g =\n", (m.ginv @ m.g).round(12))

# %% [markdown]
# Splitting the Cartesian z axis at the equator: it points along -theta.

# %%
comps = project_vector(sph, np.pi / 2, 0.0, [0.0, 0.0, 1.0])
print("(w1, w2, W3) =", comps.round(12))
print("lifted back  =", lift_vector(sph, np.pi / 2, 0.0, comps).round(12))
