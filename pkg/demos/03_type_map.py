# %% [markdown]
# Mapping elliptic and hyperbolic regions
#
# The crossflow v1 rises from 0.1 to 2 across a patch of the equatorial band
# with unit sound speed.  Each node is classified; the strip printed below
# shows one row of the map.

# %%
import os
import tempfile

from conimhd.characteristics import type_map, write_type_map_csv
from conimhd.verify.fields import interpolated_v1_field

f = interpolated_v1_field(n1=8, n2=40)
tm = type_map(f)
print("counts:", tm.counts())
print("v1 :", " ".join(f"{x:.1f}" for x in f.phi[1, 0, ::4]))
print("row:", "".join(tm.labels[0]))

# %% [markdown]
# The transition sits where v1 crosses the sound speed.  The map can be
# written as CSV for plotting.

# %%
out = os.path.join(tempfile.mkdtemp(), "typemap.csv")
write_type_map_csv(out, tm)
print("wrote", out, os.path.getsize(out), "bytes")
