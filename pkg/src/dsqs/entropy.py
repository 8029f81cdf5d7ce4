"""Entropy functionals of the squeezed discrete Husimi function.

Joint entropy ``-(1/N) sum H ln H`` and marginal entropies
``-(1/sqrt N) sum Q ln Q`` in nats, with ``0 ln 0 = 0``.  The squeezing
parameter enters through the displaced squeezed vacua that define ``H``.
"""

from __future__ import annotations

import csv
import io
import json
import math
import warnings
from dataclasses import asdict, dataclass
from typing import Optional

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import DomainError, InvalidDistributionError
from .kernels import _check_s, kernel_grid
from .numerics import as_dims
from .operators import validate_density, weyl_traces
from .phase_space import centered_dft
from .states import pure_density, number_state

NEG_TOL = 1e-10
MIN_REFS = ("A", "B", "C")
SCAN_COLUMNS = ("s", "E_joint", "E_Q", "E_R", "E_cond_Q", "E_cond_R", "correlation")


def _xlogx(p: np.ndarray, what: str) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    low = p.min()
    if low < -NEG_TOL:
        raise InvalidDistributionError(f"{what} has negative entry {low:.3e}")
    p = np.clip(p, 0.0, None)
    out = np.zeros_like(p)
    pos = p > 0
    out[pos] = p[pos] * np.log(p[pos])
    return out


def joint_entropy(H: np.ndarray) -> float:
    H = np.asarray(H, dtype=float)
    N = H.shape[0]
    if abs(H.sum() / N - 1) > 1e-8:
        raise InvalidDistributionError(f"Husimi grid normalization {H.sum() / N} differs from 1")
    return float(-_xlogx(H, "Husimi grid").sum() / N)


def marginal_entropy(Q: np.ndarray) -> float:
    Q = np.asarray(Q, dtype=float)
    rt = math.sqrt(Q.size)
    if abs(Q.sum() / rt - 1) > 1e-8:
        raise InvalidDistributionError(f"marginal normalization {Q.sum() / rt} differs from 1")
    return float(-_xlogx(Q, "marginal").sum() / rt)


def marginal_entropies(Q, R):
    return marginal_entropy(Q), marginal_entropy(R)


def correlation(E_joint: float, E_Q: float, E_R: float, min_E: float) -> float:
    """``(E_Q + E_R - E_joint) / (E_Q + E_R - min_E)``; zero for a vanishing denominator."""
    if min_E > E_joint + 1e-12:
        raise DomainError(f"reference minimum {min_E} exceeds the joint entropy {E_joint}")
    den = E_Q + E_R - min_E
    if den < -1e-12:
        raise DomainError(f"inconsistent reference: negative denominator {den:.3e}")
    if den < 1e-9:
        return 0.0
    return float((E_Q + E_R - E_joint) / den)


class _Evaluator:
    """Reuses ``Tr[S rho]`` for a fixed state across many values of ``s``."""

    def __init__(self, rho: np.ndarray):
        self.rho = validate_density(rho)
        self.dims = as_dims(self.rho.shape[0])
        self.traces = weyl_traces(self.dims, self.rho)

    def grids(self, s: float):
        d = self.dims
        Ks = kernel_grid(d, _check_s(s))
        W = Ks * self.traces
        H = centered_dft(W, -1).real
        # marginals from the axis slices of the characteristic function
        F = np.exp(-2j * np.pi * np.outer(d.labels, d.labels) / d.N)
        Q = (F @ W[:, d.ell]).real
        R = (F @ W[d.ell, :]).real
        return H, Q, R

    def joint(self, s: float) -> float:
        return joint_entropy(self.grids(s)[0])

    def all(self, s: float):
        H, Q, R = self.grids(s)
        return joint_entropy(H), marginal_entropy(Q), marginal_entropy(R)


def default_s_grid(smin: float = 1 / 8, smax: float = 8.0, points: int = 33) -> np.ndarray:
    if points < 3 or not 0 < smin < smax:
        raise DomainError("scan needs 0 < smin < smax and at least 3 points")
    return np.geomspace(smin, smax, points)


def min_entropy_scan(rho, s_grid=None, xtol: float = 1e-9):
    """Minimum of the joint entropy over ``s``: grid scan then bounded refinement in ``log s``.

    Returns ``(min_E, s_at_min)``.  Several interior local minima on the grid
    trigger a warning and the global grid minimum's bracket is refined.
    """
    ev = rho if isinstance(rho, _Evaluator) else _Evaluator(rho)
    s_grid = default_s_grid() if s_grid is None else np.asarray(s_grid, dtype=float)
    E = np.array([ev.joint(s) for s in s_grid])
    i = int(np.argmin(E))
    inner = (E[1:-1] < E[:-2]) & (E[1:-1] < E[2:])
    if inner.sum() > 1:
        warnings.warn("entropy scan is not unimodal; refining around the global grid minimum", RuntimeWarning)
    if i in (0, len(s_grid) - 1):
        return float(E[i]), float(s_grid[i])
    lo, hi = math.log(s_grid[i - 1]), math.log(s_grid[i + 1])
    res = minimize_scalar(lambda x: ev.joint(math.exp(x)), bounds=(lo, hi), method="bounded", options={"xatol": xtol})
    if res.fun <= E[i]:
        return float(res.fun), float(math.exp(res.x))
    return float(E[i]), float(s_grid[i])


def vacuum_min_entropy(dims, s_grid=None):
    d = as_dims(dims)
    return min_entropy_scan(pure_density(number_state(d, 0)), s_grid)


@dataclass(frozen=True)
class EntropyReport:
    s: float
    E_joint: float
    E_Q: float
    E_R: float
    E_cond_Q: float
    E_cond_R: float
    correlation: float
    min_E_joint: float
    s_at_min: float
    min_ref: str = "A"

    def balance_defect(self) -> float:
        return abs((self.E_cond_Q + self.E_Q) - (self.E_cond_R + self.E_R))

    def araki_lieb_defect(self) -> float:
        """Positive when ``|E_Q - E_R| > E_joint``."""
        return abs(self.E_Q - self.E_R) - self.E_joint

    def to_json(self) -> str:
        return json.dumps(asdict(self))


def _reference(ev: _Evaluator, min_ref: str, min_value: Optional[float], s_grid):
    if min_ref == "A":
        return min_entropy_scan(ev, s_grid)
    if min_ref == "B":
        if min_value is None:
            raise DomainError("min_ref 'B' needs a reference value")
        return float(min_value), float("nan")
    if min_ref == "C":
        return vacuum_min_entropy(ev.dims, s_grid)
    raise DomainError(f"min_ref must be one of {MIN_REFS}")


def _report(ev: _Evaluator, s: float, ref) -> EntropyReport:
    Ej, Eq, Er = ev.all(s)
    min_E, s_min = ref[0], ref[1]
    return EntropyReport(
        s=float(s),
        E_joint=Ej,
        E_Q=Eq,
        E_R=Er,
        E_cond_Q=Ej - Eq,
        E_cond_R=Ej - Er,
        correlation=correlation(Ej, Eq, Er, min(min_E, Ej)),
        min_E_joint=min_E,
        s_at_min=s_min,
        min_ref=ref[2],
    )


def entropy_report(rho, s: float = 1.0, min_ref: str = "A", min_value=None, s_grid=None) -> EntropyReport:
    """Joint, marginal, conditional entropies and the correlation functional at one ``s``."""
    ev = _Evaluator(rho)
    ref = _reference(ev, min_ref, min_value, s_grid) + (min_ref,)
    return _report(ev, s, ref)


def entropy_scan(rho, s_values, min_ref: str = "A", min_value=None, s_grid=None) -> list:
    """Reports at each ``s`` in ``s_values`` sharing one reference minimum."""
    ev = _Evaluator(rho)
    ref = _reference(ev, min_ref, min_value, s_grid) + (min_ref,)
    return [_report(ev, s, ref) for s in s_values]


def scan_to_csv(reports) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SCAN_COLUMNS)
    for r in reports:
        w.writerow([repr(float(getattr(r, c))) for c in SCAN_COLUMNS])
    return buf.getvalue()


def scan_to_json(reports) -> str:
    return json.dumps([asdict(r) for r in reports])
