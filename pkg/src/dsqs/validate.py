"""Self-check runner: every invariant of the library evaluated with measured deviations.

Hard checks decide the exit status; monitored checks are informational.
"""

from __future__ import annotations

import math
import time
import warnings
from dataclasses import asdict, dataclass
from typing import Optional

import numpy as np

from . import circuit, entropy, kernels, operators, phase_space, states
from .numerics import LatticeDims

REFERENCE_ENTROPIES = {3: 0.625948, 5: 0.953965, 7: 0.992272, 9: 0.998598}
SQRT5 = math.sqrt(5.0)


@dataclass
class Check:
    name: str
    N: int
    deviation: float
    tol: Optional[float]
    hard: bool = True

    @property
    def within_tol(self) -> Optional[bool]:
        return None if self.tol is None else bool(self.deviation <= self.tol)

    @property
    def passed(self) -> Optional[bool]:
        """``None`` for monitored entries."""
        return self.within_tol if self.hard else None

    def to_dict(self) -> dict:
        d = asdict(self)
        d["passed"] = self.passed
        d["within_tol"] = self.within_tol
        return d


def _max(x) -> float:
    return float(np.max(np.abs(x)))


def _identities(N: int, out: list):
    d = LatticeDims(N)
    B = operators.schwinger_basis(d).reshape(N * N, N, N)
    gram = np.einsum("iab,jab->ij", B.conj(), B)
    out.append(Check("schwinger orthogonality", N, _max(gram - np.eye(N * N)), 1e-10))
    for order in operators.ORDERS:
        T = operators.t_basis(d, order).reshape(N * N, N, N)
        tr = np.einsum("iaa->i", T)
        out.append(Check(f"T({order}) unit trace", N, _max(tr - 1), 1e-10))
        Td = operators.t_basis(d, -order).reshape(N * N, N, N)
        dual = np.einsum("iab,jba->ij", T, Td)
        out.append(Check(f"T({order}) duality", N, _max(dual - N * np.eye(N * N)), 1e-10))
    L = d.labels
    res = sum(np.outer(v, v.conj()) for v in (states.coherent_state(d, m, n) for m in L for n in L)) / N
    out.append(Check("coherent resolution of identity", N, _max(res - np.eye(N)), 1e-10))


def _kernels(N: int, out: list):
    d = LatticeDims(N)
    for s in (0.3, 1.0, SQRT5):
        dev = abs(kernels.mfunc(d, s, 0, 0) - kernels.mfunc_origin_landen(d, s))
        out.append(Check(f"Landen two-form s={s:.4g}", N, dev, 1e-11))
        for n in range(min(5, N - 1) + 1):
            a, b = states.normalization_sum(d, n, s), states.normalization_closed_form(d, n, s)
            # the closed form cancels O(1) terms, so scale by max(1, value)
            out.append(Check(f"normalization routes n={n} s={s:.4g}", N, abs(a - b) / max(1.0, abs(a)), 1e-11))
    js = states.j_split(d)
    out.append(Check("J even/odd split", N, abs(js["J"] - js["J_e"] - js["J_o"]), 1e-13))
    for n in range(min(N - 1, 10) + 1):
        kc = kernels.kernel_number(d, n, "coeff").values
        kj = kernels.kernel_number(d, n, "jet").values
        out.append(Check(f"number kernel routes n={n}", N, _max(kc - kj), 1e-10))
        v = states.number_state(d, n)
        dense = math.sqrt(N) * np.einsum("a,exab,b->ex", v.conj(), operators.schwinger_basis(d), v)
        out.append(Check(f"number kernel dense n={n}", N, _max(kc - dense), 1e-10))


def _states(N: int, out: list):
    d = LatticeDims(N)
    L = d.labels
    for s in (1.0, SQRT5, 1 / SQRT5):
        dev = max(
            _max(states.displaced_squeezed_projector(d, m, n, s) - states.pure_density(states.displaced_squeezed_vacuum(d, m, n, s)))
            for m in L
            for n in L
        )
        out.append(Check(f"squeezed projector Fourier form s={s:.4g}", N, dev, 1e-10))
        rho0 = states.pure_density(states.number_state(d, 0))
        H = phase_space.squeezed_husimi(rho0, s).values
        P0 = phase_space.overlap_Pn(d, 0, s).values
        out.append(Check(f"P0 kernel route vs Husimi s={s:.4g}", N, _max(H - P0), 1e-10))
    c1, c2 = states.coherent_state(d, 1, 0), states.coherent_state(d, -1, 1)
    dev = _max(states.nondiagonal_projector(d, 1, 0, -1, 1) - np.outer(c1, c2.conj()))
    out.append(Check("nondiagonal projector", N, dev, 1e-10))
    X1 = states.squeezing_generator(d, 1.0)
    out.append(Check("X(1) fixes number states", N, _max(X1 @ states.number_basis(d) - states.number_basis(d)), 1e-12))
    out.append(Check("Mehta Gram deviation s=1", N, states.gram_deviation(d, 1.0), None, hard=False))
    out.append(Check("X(sqrt5) unitarity defect", N, states.unitarity_defect(states.squeezing_generator(d, SQRT5)), None, hard=False))
    out.append(Check("involution defect sqrt(N) T0", N, operators.involution_report(d), None, hard=False))
    out.append(Check("P-function kernel spread", N, phase_space.pfunction_condition(d), None, hard=False))
    eq15 = abs(
        states.squeezed_coherent_coefficient(d, 1, 0, 1, -1, SQRT5)
        - states.squeezed_coherent_coefficient_direct(d, 1, 0, 1, -1, SQRT5)
    )
    out.append(Check("number-basis expansion of squeezed coherent coefficient", N, eq15, None, hard=False))


def _phase_entropy_circuit(N: int, out: list, rng):
    d = LatticeDims(N)
    grid = entropy.default_s_grid()
    rhos = [states.pure_density(states.number_state(d, 0))] + [states.random_density(d, rng) for _ in range(5)]
    worst_sub = worst_cond = worst_bal = worst_al = -np.inf
    for rho in rhos:
        for r in entropy.entropy_scan(rho, grid, min_ref="B", min_value=0.0):
            worst_sub = max(worst_sub, r.E_joint - r.E_Q - r.E_R)
            worst_cond = max(worst_cond, r.E_cond_Q - r.E_R, r.E_cond_R - r.E_Q)
            worst_bal = max(worst_bal, r.balance_defect())
            worst_al = max(worst_al, r.araki_lieb_defect())
    out.append(Check("subadditivity", N, max(worst_sub, 0.0), 1e-10))
    out.append(Check("conditional entropy bounds", N, max(worst_cond, 0.0), 1e-10))
    out.append(Check("balance equation", N, worst_bal, 1e-12))
    out.append(Check("Araki-Lieb lower bound", N, max(worst_al, 0.0), 1e-10, hard=False))

    r = rhos[1]
    W = phase_space.wigner(r).values
    out.append(Check("Wigner normalization", N, abs(W.sum() / N - 1), 1e-10))
    for s in (1.0, SQRT5):
        cg, _ = circuit.scan_circuit(d, r, s, "char")
        out.append(Check(f"circuit characteristic s={s:.4g}", N, _max(cg.values - phase_space.char_function(r, 0, s).values), 1e-12))
        wg, _ = circuit.scan_circuit(d, r, s, "wigner")
        out.append(Check(f"circuit Wigner s={s:.4g}", N, _max(wg.values - phase_space.wigner(r, s).values), 1e-10))


def run_validation(level: str = "fast", seed: int = 0) -> dict:
    if level not in ("fast", "full"):
        raise ValueError("level must be 'fast' or 'full'")
    t0 = time.perf_counter()
    rng = np.random.default_rng(seed)
    dims = (3,) if level == "fast" else (3, 5, 7)
    checks: list = []
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        for N in dims:
            _identities(N, checks)
            _kernels(N, checks)
            _states(N, checks)
            _phase_entropy_circuit(N, checks, rng)
        if level == "full":
            devs = {N: phase_space.continuum_check(N, 0) for N in (31, 41, 51)}
            checks.append(Check("continuum limit n=0", 51, devs[51], 1e-4))
            checks.append(Check("continuum refinement 31 -> 51", 51, max(devs[51] - devs[31], 0.0), 0.0))
            for N, ref in REFERENCE_ENTROPIES.items():
                rho = states.pure_density(states.number_state(N, 0))
                E = entropy.entropy_report(rho, 1.0, min_ref="B", min_value=0.0).E_joint
                checks.append(Check("vacuum entropy at s=1", N, abs(E - ref), 5e-6))
    hard_ok = all(c.passed for c in checks if c.hard)
    return {
        "level": level,
        "passed": hard_ok,
        "elapsed_s": time.perf_counter() - t0,
        "checks": [c.to_dict() for c in checks],
    }
