"""Reading the characteristic and Wigner functions from an ancilla circuit.

An ancilla qubit is put through Hadamard, a controlled gate and Hadamard
again; its z and y polarizations give the real and imaginary parts of
Tr[G rho].  With G = sqrt(N) S(eta, xi) this is sqrt(N) times the
characteristic function.  sqrt(N) T0 is not an involution on this lattice, so
the Wigner function is obtained by a classical transform of the scan.
"""

import math

import numpy as np

from dsqs import circuit, operators, phase_space, states

N = 3
rho = states.random_density(N, 7)
s = math.sqrt(5)

r = circuit.char_via_circuit(N, 1, -1, rho, s)
print(f"gate {r.gate_label}: <sz> = {r.sz:+.6f}, <sy> = {r.sy:+.6f}")
print(f"sqrt(N) Xi0(1,-1; s)   = {math.sqrt(N) * phase_space.char_function(rho, 0, s).values[2, 0]:+.6f}")

print(f"\ninvolution defect of sqrt(N) T0 at N = {N}: {operators.involution_report(N):.3f}")
W, synthesized = circuit.scan_circuit(N, rho, s, "wigner")
print(f"Wigner grid from circuit runs (synthesized transform: {synthesized})")
print(np.array2string(W.values.real, precision=5))
print(f"max deviation from the direct grid: {np.abs(W.values - phase_space.wigner(rho, s).values).max():.1e}")

noisy = circuit.char_via_circuit(N, 1, -1, rho, s, shots=2000, rng=0)
print(f"\nwith 2000 shots: <sz> ~ {noisy.sz:+.4f}, <sy> ~ {noisy.sy:+.4f}")
