"""Discrete phase-space functions on the N x N grid.

Characteristic functions are tabulated on ``(eta, xi)``, distributions on
``(mu, nu)``, both in storage order ``-ell .. ell``.  The centered transform
carries the prefactor ``N^-1/2`` forward and ``N^-3/2`` backward.

Two squeezed Husimi functions appear here and they differ for ``s != 1``:

* :func:`squeezed_husimi` uses the displaced squeezed vacua ``|mu, nu; s>``
  (kernel ``K_s`` times ``Tr[S rho]``).  It gives ``P_n(mu, nu; s)`` for a
  number state and is the function fed to the entropy functionals.
* :func:`quasi_distribution` with ``s != 1`` first transforms the state,
  ``rho -> X^dagger rho X / Tr``, and then applies the unsqueezed transform.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import NumericalConsistencyError
from .kernels import _check_s, kernel_number, kernel_ratio, kernel_vacuum
from .numerics import LatticeDims, as_dims
from .operators import kernel_weight, validate_density, weyl_traces
from .states import squeezed_coherent_state, squeezing_generator

KIND_NAMES = {-1: "husimi", 0: "wigner", 1: "pfunction"}
NEG_TOL = 1e-10


@dataclass(frozen=True)
class PhaseSpaceFunction:
    dims: LatticeDims
    kind: str
    values: np.ndarray
    order: Optional[int] = None
    s: float = 1.0

    def __post_init__(self):
        self.values.setflags(write=False)

    def to_json(self, **extra) -> str:
        v = np.asarray(self.values, dtype=complex).ravel()
        payload = {
            "N": self.dims.N,
            "s": self.s,
            "order": self.order,
            "kind": self.kind,
            "values": [[float(z.real), float(z.imag)] for z in v],
        }
        payload.update(extra)
        return json.dumps(payload)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        L = self.dims.labels
        vals = np.asarray(self.values, dtype=complex)
        if vals.ndim == 1:
            w.writerow(["mu", "re", "im"])
            for m, z in zip(L, vals):
                w.writerow([int(m), repr(float(z.real)), repr(float(z.imag))])
        else:
            w.writerow(["mu", "nu", "re", "im"])
            for i, m in enumerate(L):
                for j, n in enumerate(L):
                    z = vals[i, j]
                    w.writerow([int(m), int(n), repr(float(z.real)), repr(float(z.imag))])
        return buf.getvalue()


def centered_dft(grid: np.ndarray, sign: int = -1) -> np.ndarray:
    """``G(mu, nu) = N^-1/2 sum exp(sign 2 pi i (eta mu + xi nu)/N) g(eta, xi)``."""
    grid = np.asarray(grid)
    N = grid.shape[0]
    if grid.shape != (N, N):
        raise ValueError(f"expected a square grid, got shape {grid.shape}")
    d = as_dims(N)
    F = np.exp(sign * 2j * np.pi * np.outer(d.labels, d.labels) / N)
    return F @ grid @ F.T / math.sqrt(N)


def centered_idft(grid: np.ndarray, sign: int = -1) -> np.ndarray:
    """Inverse of :func:`centered_dft` with the same ``sign``."""
    N = np.asarray(grid).shape[0]
    return centered_dft(grid, -sign) / N


def squeeze_state(rho: np.ndarray, s: float, construction: str = "biorthogonal"):
    """``X^dagger rho X`` renormalized to unit trace; returns ``(rho', trace)``."""
    rho = validate_density(rho)
    if _check_s(s) == 1.0:
        return rho, 1.0
    X = squeezing_generator(rho.shape[0], s, construction)
    out = X.conj().T @ rho @ X
    tr = float(np.trace(out).real)
    out = out / tr
    return (out + out.conj().T) / 2, tr


def char_function(rho: np.ndarray, order: int = 0, s: float = 1.0, construction: str = "biorthogonal") -> PhaseSpaceFunction:
    """``K^-order (eta, xi) Tr[S(eta, xi) rho']`` with ``rho'`` the squeezed state."""
    rho_s, _ = squeeze_state(rho, s, construction)
    d = as_dims(rho_s.shape[0])
    vals = kernel_weight(d, order) * weyl_traces(d, rho_s)
    return PhaseSpaceFunction(d, "characteristic", vals, order, float(s))


def quasi_distribution(rho: np.ndarray, order: int = 0, s: float = 1.0, construction: str = "biorthogonal") -> PhaseSpaceFunction:
    """Husimi (-1), Wigner (0) or Glauber-Sudarshan (+1) function of the squeezed state."""
    xi = char_function(rho, order, s, construction)
    vals = centered_dft(xi.values, -1)
    if order in (-1, 0):
        vals = vals.real
    return PhaseSpaceFunction(xi.dims, KIND_NAMES.get(order, "quasiprobability"), vals, order, float(s))


def husimi(rho, s: float = 1.0) -> PhaseSpaceFunction:
    return quasi_distribution(rho, -1, s)


def wigner(rho, s: float = 1.0) -> PhaseSpaceFunction:
    return quasi_distribution(rho, 0, s)


def pfunction(rho, s: float = 1.0) -> PhaseSpaceFunction:
    return quasi_distribution(rho, 1, s)


def pfunction_condition(dims) -> float:
    """Spread ``max K / min K`` of the vacuum kernel that the ``+1`` order divides by."""
    K = np.abs(kernel_vacuum(dims, 1.0).values)
    return float(K.max() / K.min())


def squeezed_husimi(rho: np.ndarray, s: float = 1.0) -> PhaseSpaceFunction:
    """``<mu, nu; s| rho |mu, nu; s>`` on the displaced squeezed vacua."""
    rho = validate_density(rho)
    d = as_dims(rho.shape[0])
    Ks = kernel_vacuum(d, s).values
    vals = centered_dft(Ks * weyl_traces(d, rho), -1).real
    return PhaseSpaceFunction(d, "husimi", vals, -1, float(s))


def _check_nonnegative(vals: np.ndarray, what: str):
    low = float(vals.min())
    if low < -NEG_TOL:
        raise NumericalConsistencyError(f"{what} has entry {low:.3e} below -{NEG_TOL:g}")


def overlap_Pn(dims, n: int, s: float = 1.0, route: str = "coeff") -> PhaseSpaceFunction:
    """``P_n(mu, nu; s)`` as the double Fourier transform of ``K_s K_n`` (divided by N)."""
    d = as_dims(dims)
    prod = kernel_vacuum(d, s).values * kernel_number(d, n, route).values
    vals = centered_dft(prod, -1).real / math.sqrt(d.N)
    _check_nonnegative(vals, f"P_{n}")
    return PhaseSpaceFunction(d, "overlap", vals, -1, float(s))


def overlap_Pn_bar(dims, n: int, mu_bar: int, nu_bar: int, s: float, construction: str = "biorthogonal") -> float:
    """``P_n-bar``: weight of ``|n>`` in the renormalized squeezed coherent state.

    Assembled as ``N^-1/2 sum <psi| S^dagger(eta, xi) |psi> K_n(eta, xi)``
    with ``psi`` built from direct matrices.
    """
    d = as_dims(dims)
    psi, _ = squeezed_coherent_state(d, mu_bar, nu_bar, s, construction)
    tr = weyl_traces(d, np.outer(psi, psi.conj()))  # Tr[S psi psi^dag] = <psi|S|psi>
    # <psi|S^dag(e,x)|psi> = conj(<psi|S(e,x)|psi>)
    coeff = tr.conj()
    val = (coeff * kernel_number(d, n).values).sum() / math.sqrt(d.N)
    return float(val.real)


def marginals(rho: np.ndarray, s: float = 1.0):
    """Axis marginals ``(Q(mu; s), R(nu; s))`` from the Husimi characteristic function.

    ``Q(mu; s) = sum_eta exp(-2 pi i eta mu / N) (K_s / K)(eta, 0) Xi^(-1)(eta, 0)``.
    """
    rho = validate_density(rho)
    d = as_dims(rho.shape[0])
    xi = kernel_vacuum(d, 1.0).values * weyl_traces(d, rho)
    ratio = kernel_ratio(d, s).values
    L = d.labels
    F = np.exp(-2j * np.pi * np.outer(L, L) / d.N)
    Q = F @ (ratio[:, d.ell] * xi[:, d.ell])
    R = F @ (ratio[d.ell, :] * xi[d.ell, :])
    for name, v in (("Q", Q), ("R", R)):
        if np.abs(v.imag).max() > 1e-11:
            raise NumericalConsistencyError(f"marginal {name} has imaginary residue {np.abs(v.imag).max():.2e}")
    return Q.real, R.real


def continuum_Pn(dims, n: int) -> np.ndarray:
    """Continuum limit ``(1/n!) exp(-x) x^n``, ``x = (q^2 + p^2)/2``, ``q = sqrt(2 pi / N) mu``."""
    d = as_dims(dims)
    q = math.sqrt(2 * math.pi / d.N) * d.labels
    x = (q[:, None] ** 2 + q[None, :] ** 2) / 2
    return np.exp(-x) * x**n / math.factorial(n)


def continuum_check(dims, n: int = 0) -> float:
    """Largest deviation of ``P_n(mu, nu; 1)`` from its continuum limit."""
    d = as_dims(dims)
    return float(np.abs(overlap_Pn(d, n, 1.0).values - continuum_Pn(d, n)).max())
