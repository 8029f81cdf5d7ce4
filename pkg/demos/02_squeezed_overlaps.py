"""Overlap distributions P_n(mu, nu; s) of displaced squeezed vacua.

Squeezing narrows the distribution along one phase-space axis and widens it
along the other.  Swapping s -> 1/s transposes the grid.  The grids behind the
six overlap panels (n = 0, 1 and s = 1, sqrt 5, 1/sqrt 5 at N = 17) are written
by ``dsqs reproduce fig1``; here we print a coarse text view and the checks.
"""

import math

import numpy as np

from dsqs import phase_space

N = 17
shades = " .:-=+*#%@"


def show(grid):
    top = grid.max()
    for row in grid[::2, ::2]:
        print("   " + "".join(shades[min(int(v / top * 9.999), 9)] * 2 for v in row))


for n in (0, 1):
    grids = {}
    for label, s in (("s = 1", 1.0), ("s^2 = 5", math.sqrt(5)), ("s^-2 = 5", 1 / math.sqrt(5))):
        grids[label] = phase_space.overlap_Pn(N, n, s).values
        print(f"P_{n}, {label}  (rows mu, columns nu)")
        show(grids[label])
    t = np.abs(grids["s^2 = 5"] - grids["s^-2 = 5"].T).max()
    print(f"  transpose check {t:.1e}, grid sum {grids['s = 1'].sum():.12f} (should be N = {N})\n")
