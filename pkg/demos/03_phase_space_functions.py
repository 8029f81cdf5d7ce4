"""Husimi, Wigner and Glauber-Sudarshan functions on the discrete grid.

All three come from one characteristic function weighted by a power of the
vacuum kernel.  The Wigner function of a mixed state is real and can go
negative; the Husimi function is a probability; the P-function divides by the
kernel and gets ill-conditioned as N grows.
"""

import numpy as np

from dsqs import operators, phase_space, states

N = 5
rho = 0.5 * states.pure_density(states.number_state(N, 1)) + 0.5 * states.pure_density(states.coherent_state(N, 1, -1))

for order, name in ((-1, "Husimi"), (0, "Wigner"), (1, "P-function")):
    F = phase_space.quasi_distribution(rho, order).values
    print(f"{name:10s} min {F.real.min():+.4f}  max {F.real.max():+.4f}  (1/N) sum {F.sum().real / N:.12f}")

P = phase_space.pfunction(rho).values
back = operators.reconstruct(N, -1, P)
print(f"\nstate rebuilt from its P-function: max error {np.abs(back - rho).max():.1e}")
for M in (3, 5, 7, 9):
    print(f"  N = {M}: kernel spread max K / min K = {phase_space.pfunction_condition(M):.3e}")

print("\ncontinuum limit of the vacuum overlap, q = sqrt(2 pi / N) mu")
for M in (11, 21, 31, 41, 51):
    print(f"  N = {M}: max deviation {phase_space.continuum_check(M, 0):.2e}")
