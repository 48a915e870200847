"""Geometry of the hexagonal shaping lattice.

Run with ``python3 demos/01_hexagonal_lattice.py``.
"""

# %%
import numpy as np

from aircomp.lattice import HEX_NSM, cubic_lattice, hexagonal_lattice

# The shaping lattice is scaled so that a point drawn uniformly from its
# Voronoi cell has per-coordinate power 1.
lat, stats = hexagonal_lattice(1.0)
print("generator rows:\n", lat.generator)
for name in ("packing_radius", "covering_radius", "effective_radius",
             "cell_volume", "second_moment", "normalized_second_moment"):
    print(f"{name:>26}: {getattr(stats, name):.6f}")

# %%
# The same quantities computed from the Voronoi polygon agree with the
# closed forms. The square lattice is a worse quantizer (G = 1/12).
poly = lat.stats()
print("polygon G:", poly.normalized_second_moment, " closed form:", HEX_NSM)
_, square = cubic_lattice(1.0, 2)
print("square G :", square.normalized_second_moment)

# %%
# Dithers are uniform over the cell, so their empirical power is close to 1.
rng = np.random.default_rng(0)
u = lat.sample_dither(rng, 200_000)
print("empirical power per coordinate:", np.mean(u**2))
print("all dithers quantize to the origin:", bool(np.all(lat.nearest_coordinates(u) == 0)))

# %%
# Reduction modulo the lattice folds any point back into the cell.
v = rng.normal(scale=10, size=(5, 2))
print(np.column_stack([v, lat.mod(v)]))
