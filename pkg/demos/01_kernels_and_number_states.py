"""Finite number states and their overlap kernels.

The number states on an N-point lattice are periodized Hermite functions.
Their kernel K_n(eta, xi) = sqrt(N) <n|S(eta, xi)|n> can be computed two
ways: from the lattice coefficients, or from Taylor jets of a theta-function
product.  This script builds both and shows they agree, then looks at how far
the finite set is from being orthonormal.
"""

import numpy as np

from dsqs import kernels, states

N = 7

print(f"N = {N}: coordinate amplitudes of the first three number states")
for n in range(3):
    print(f"  |{n}>:", np.array2string(states.number_state(N, n).real, precision=4, suppress_small=True))

print("\nnumber-state kernels, coefficient route vs jet route")
for n in range(N):
    kc = kernels.kernel_number(N, n, "coeff").values
    kj = kernels.kernel_number(N, n, "jet").values
    print(f"  n = {n}: max |difference| = {np.abs(kc - kj).max():.1e}")

print("\nnormalization N_n^-2: lattice sum vs closed-form jet")
for n in range(4):
    print(f"  n = {n}: {states.normalization_sum(N, n):.12f}  {states.normalization_closed_form(N, n):.12f}")

print("\nthe states are only approximately orthogonal")
for M in (3, 5, 7, 9, 17):
    print(f"  N = {M:2d}: max off-diagonal Gram entry {states.gram_deviation(M):.3e}")
