"""Dense Schwinger operators and the mod(N)-invariant operator basis.

Rows and columns are labelled by the coordinate label ``kappa`` in
``[-ell, ell]`` stored at index ``kappa + ell``.  ``U`` is diagonal with
eigenvalues ``exp(2 pi i kappa / N)`` and ``V`` shifts ``|u_kappa> ->
|u_{kappa-1}>`` cyclically, so that ``V U = exp(2 pi i / N) U V``.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .errors import DomainError, NumericalConsistencyError
from .kernels import check_divisor, kernel_vacuum
from .numerics import LatticeDims, as_dims

ORDERS = (-1, 0, 1)


def build_U(dims) -> np.ndarray:
    d = as_dims(dims)
    return np.diag(np.exp(2j * np.pi * d.labels / d.N))


def build_V(dims) -> np.ndarray:
    d = as_dims(dims)
    return np.roll(np.eye(d.N, dtype=complex), -1, axis=0)


def _U_power(d: LatticeDims, eta: int) -> np.ndarray:
    return np.diag(np.exp(2j * np.pi * eta * d.labels / d.N))


def _V_power(d: LatticeDims, xi: int) -> np.ndarray:
    return np.roll(np.eye(d.N, dtype=complex), -int(xi), axis=0)


def schwinger_S(dims, eta: int, xi: int) -> np.ndarray:
    """``S(eta, xi) = N^-1/2 exp(i pi eta xi / N) U^eta V^xi`` for any integers."""
    d = as_dims(dims)
    phase = np.exp(1j * np.pi * eta * xi / d.N) / np.sqrt(d.N)
    return phase * (_U_power(d, eta) @ _V_power(d, xi))


@lru_cache(maxsize=32)
def _schwinger_basis(N: int) -> np.ndarray:
    d = LatticeDims(N)
    L = d.labels
    B = np.empty((N, N, N, N), dtype=complex)
    for i, e in enumerate(L):
        for j, x in enumerate(L):
            B[i, j] = schwinger_S(d, int(e), int(x))
    B.setflags(write=False)
    return B


def schwinger_basis(dims) -> np.ndarray:
    """All ``S(eta, xi)`` stacked as ``B[eta + ell, xi + ell] -> N x N matrix``."""
    return _schwinger_basis(as_dims(dims).N)


def weyl_traces(dims, rho: np.ndarray) -> np.ndarray:
    """Grid of ``Tr[S(eta, xi) rho]``."""
    return np.einsum("ijab,ba->ij", schwinger_basis(dims), rho)


def kernel_weight(dims, order, experimental: bool = False) -> np.ndarray:
    """``K(eta, xi) ** (-order)`` on the grid."""
    d = as_dims(dims)
    if order not in ORDERS and not experimental:
        raise DomainError(f"order must be one of {ORDERS}, got {order}")
    K = kernel_vacuum(d, 1.0).values
    if order == 0:
        return np.ones_like(K)
    if order > 0:
        check_divisor(d, K)
    if order in ORDERS:
        return K ** (-order)
    return np.power(K.astype(complex), -order)


def _fourier_phase(d: LatticeDims, sign: int = -1) -> np.ndarray:
    L = d.labels
    return np.exp(sign * 2j * np.pi * np.outer(L, L) / d.N)


def t_basis(dims, order, experimental: bool = False) -> np.ndarray:
    """All ``T^(order)(mu, nu)`` stacked as ``T[mu + ell, nu + ell]``."""
    d = as_dims(dims)
    W = kernel_weight(d, order, experimental)
    Fp = _fourier_phase(d, -1)  # [mu, eta]
    weighted = schwinger_basis(d) * W[:, :, None, None]
    return np.einsum("me,nx,exab->mnab", Fp, Fp, weighted) / np.sqrt(d.N)


def map_kernel_T(dims, order, mu: int, nu: int, experimental: bool = False) -> np.ndarray:
    """``T^(order)(mu, nu) = N^-1/2 sum exp(-2 pi i (eta mu + xi nu)/N) K^-order S(eta, xi)``."""
    d = as_dims(dims)
    W = kernel_weight(d, order, experimental)
    L = d.labels
    phase = np.exp(-2j * np.pi * (np.outer(L, np.ones_like(L)) * mu + np.outer(np.ones_like(L), L) * nu) / d.N)
    return np.einsum("ex,exab->ab", phase * W, schwinger_basis(d)) / np.sqrt(d.N)


def decompose(dims, order, O: np.ndarray) -> np.ndarray:
    """Expansion coefficients ``Tr[T^(-order)(mu, nu) O]`` on the (mu, nu) grid."""
    d = as_dims(dims)
    return np.einsum("mnab,ba->mn", t_basis(d, -order), O)


def reconstruct(dims, order, coeffs: np.ndarray) -> np.ndarray:
    """``(1/N) sum coeffs(mu, nu) T^(order)(mu, nu)``; inverse of :func:`decompose`."""
    d = as_dims(dims)
    return np.einsum("mn,mnab->ab", coeffs, t_basis(d, order)) / d.N


def expectation(O: np.ndarray, rho: np.ndarray, order=0, tol: float = 1e-10) -> complex:
    """``Tr[O rho]``, cross-checked against the phase-space sum with the given order."""
    d = as_dims(O.shape[0])
    direct = complex(np.trace(O @ rho))
    coeffs = decompose(d, order, O)
    F = np.einsum("mnab,ba->mn", t_basis(d, order), rho)
    via_grid = complex((coeffs * F).sum() / d.N)
    if abs(via_grid - direct) > tol * max(1.0, abs(direct)):
        raise NumericalConsistencyError(
            f"phase-space expectation {via_grid} disagrees with trace {direct} (order {order})"
        )
    return direct


def involution_defect(dims, mu: int, nu: int) -> float:
    """``max |N T0(mu,nu)^2 - 1|``: zero iff ``sqrt(N) T0`` is an involution."""
    d = as_dims(dims)
    T0 = map_kernel_T(d, 0, mu, nu)
    return float(np.abs(d.N * T0 @ T0 - np.eye(d.N)).max())


def involution_report(dims) -> float:
    """Largest involution defect of ``sqrt(N) T0`` over the whole grid."""
    d = as_dims(dims)
    T = t_basis(d, 0)
    sq = d.N * np.einsum("mnab,mnbc->mnac", T, T) - np.eye(d.N)
    return float(np.abs(sq).max())


def is_density(rho: np.ndarray, tol: float = 1e-10) -> bool:
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        return False
    if np.abs(rho - rho.conj().T).max() > 1e-12:
        return False
    if abs(np.trace(rho) - 1) > 1e-12:
        return False
    return np.linalg.eigvalsh(rho).min() >= -tol


def validate_density(rho: np.ndarray) -> np.ndarray:
    rho = np.asarray(rho, dtype=complex)
    if not is_density(rho):
        raise DomainError("not a valid density matrix (Hermitian, unit trace, positive)")
    return rho
