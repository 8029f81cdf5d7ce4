"""Density-matrix simulation of the ancilla scattering circuit.

The ancilla starts in ``|0>``, the system in the squeezed state
``X^dagger rho X / Tr``.  The sequence is Hadamard, controlled gate (fires on
ancilla ``|1>``), Hadamard, then a ``Z`` phase flip on the ancilla so that
``<sigma_z> = Re Tr[G rho']`` and ``<sigma_y> = +Im Tr[G rho']``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import DomainError, NumericalConsistencyError
from .numerics import as_dims
from .operators import involution_defect, map_kernel_T, schwinger_S, validate_density
from .phase_space import PhaseSpaceFunction, centered_dft, squeeze_state

HAD = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)
PAULI_Z = np.diag([1.0, -1.0]).astype(complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]])
INVOLUTION_TOL = 1e-8


@dataclass(frozen=True)
class CircuitResult:
    sz: float
    sy: float
    gate_label: str
    used_ft: bool = False
    synthesized_ft: bool = False

    @property
    def value(self) -> complex:
        return complex(self.sz, self.sy)


def _ancilla(state: np.ndarray, N: int) -> np.ndarray:
    """Reduced ancilla state (ancilla is the leading tensor factor)."""
    return np.einsum("aibi->ab", state.reshape(2, N, 2, N))


def _check_ancilla(rho_a: np.ndarray, stage: str):
    tr = np.trace(rho_a).real
    ev = np.linalg.eigvalsh((rho_a + rho_a.conj().T) / 2)
    if abs(tr - 1) > 1e-12 or ev.min() < -1e-12 or ev.max() > 1 + 1e-12:
        raise NumericalConsistencyError(f"ancilla state invalid after {stage}: trace {tr}, eigenvalues {ev}")


def _sample(p_exp: float, shots: int, rng) -> float:
    p = min(max((1 + p_exp) / 2, 0.0), 1.0)
    return 2 * rng.binomial(shots, p) / shots - 1


def run_scattering(
    gate: np.ndarray,
    rho: np.ndarray,
    s: float = 1.0,
    label: str = "G",
    shots: Optional[int] = None,
    rng=None,
    construction: str = "biorthogonal",
) -> CircuitResult:
    """Simulate the circuit for ``gate`` and return the ancilla polarizations."""
    gate = np.asarray(gate, dtype=complex)
    rho = np.asarray(rho, dtype=complex)
    N = rho.shape[0]
    if gate.shape != (N, N):
        raise DomainError(f"gate shape {gate.shape} does not match state dimension {N}")
    rho_s, _ = squeeze_state(validate_density(rho), s, construction)

    I = np.eye(N)
    unitary = np.abs(gate.conj().T @ gate - I).max() < 1e-10
    had = np.kron(HAD, I)
    cg = np.block([[I, np.zeros((N, N))], [np.zeros((N, N)), gate]])
    phase = np.kron(PAULI_Z, I)

    state = np.zeros((2 * N, 2 * N), dtype=complex)
    state[:N, :N] = rho_s
    for stage, op in (("first Hadamard", had), ("controlled gate", cg), ("second Hadamard", had), ("phase", phase)):
        state = op @ state @ op.conj().T
        if unitary:
            _check_ancilla(_ancilla(state, N), stage)
    rho_a = _ancilla(state, N)
    sz = float(np.trace(PAULI_Z @ rho_a).real)
    sy = float(np.trace(PAULI_Y @ rho_a).real)

    direct = complex(np.trace(gate @ rho_s))
    if abs(complex(sz, sy) - direct) > 1e-12:
        raise NumericalConsistencyError(f"circuit readout {sz}+{sy}i disagrees with trace {direct}")
    bound = np.linalg.norm(gate, 2) + 1e-10
    if abs(direct) > bound:
        raise NumericalConsistencyError(f"|Tr[G rho]| = {abs(direct)} exceeds the operator-norm bound {bound}")

    if shots is not None:
        rng = np.random.default_rng(rng)
        sz, sy = _sample(sz, shots, rng), _sample(sy, shots, rng)
    return CircuitResult(sz, sy, label)


def char_via_circuit(dims, eta: int, xi: int, rho, s: float = 1.0, **kw) -> CircuitResult:
    """Circuit with gate ``sqrt(N) S(eta, xi)``: reads ``sqrt(N) Xi^(0)(eta, xi; s)``."""
    d = as_dims(dims)
    G = math.sqrt(d.N) * schwinger_S(d, eta, xi)
    return run_scattering(G, rho, s, label=f"sqrt(N) S({eta},{xi})", **kw)


def _char_grid(d, rho, s, **kw) -> np.ndarray:
    L = d.labels
    vals = np.array([[char_via_circuit(d, int(e), int(x), rho, s, **kw).value for x in L] for e in L])
    return vals / math.sqrt(d.N)


def wigner_via_circuit(dims, mu_bar: int, nu_bar: int, rho, s: float = 1.0, **kw) -> CircuitResult:
    """Wigner value at ``(mu_bar, nu_bar)``: ``sz + i sy = sqrt(N) W(mu_bar, nu_bar; s)``.

    The gate ``sqrt(N) T0(mu_bar, nu_bar)`` is used only when it is measured to
    be an involution; otherwise the characteristic function is read out on the
    whole grid and transformed classically (``synthesized_ft=True``).
    """
    d = as_dims(dims)
    if involution_defect(d, mu_bar, nu_bar) < INVOLUTION_TOL:
        G = math.sqrt(d.N) * map_kernel_T(d, 0, mu_bar, nu_bar)
        res = run_scattering(G, rho, s, label=f"sqrt(N) T0({mu_bar},{nu_bar})", **kw)
        return CircuitResult(res.sz, res.sy, res.gate_label, used_ft=True)
    W = centered_dft(_char_grid(d, rho, s, **kw), -1)
    w = math.sqrt(d.N) * W[d.index(mu_bar), d.index(nu_bar)]
    return CircuitResult(float(w.real), float(w.imag), "characteristic scan + classical DFT", synthesized_ft=True)


def scan_circuit(dims, rho, s: float = 1.0, mode: str = "char", **kw):
    """Full-grid characteristic (``mode="char"``) or Wigner (``"wigner"``) function from circuit runs.

    Returns ``(grid, synthesized_ft)``.
    """
    d = as_dims(dims)
    if mode == "char":
        return PhaseSpaceFunction(d, "characteristic", _char_grid(d, rho, s, **kw), 0, float(s)), False
    if mode != "wigner":
        raise DomainError(f"mode must be 'char' or 'wigner', got {mode!r}")
    L = d.labels
    if all(involution_defect(d, int(m), int(n)) < INVOLUTION_TOL for m in L for n in L):
        vals = np.array([[wigner_via_circuit(d, int(m), int(n), rho, s, **kw).value for n in L] for m in L])
        return PhaseSpaceFunction(d, "wigner", vals / math.sqrt(d.N), 0, float(s)), False
    W = centered_dft(_char_grid(d, rho, s, **kw), -1)
    return PhaseSpaceFunction(d, "wigner", W, 0, float(s)), True
