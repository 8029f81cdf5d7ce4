"""Theta-sum kernels on the (eta, xi) grid.

``mfunc`` is the four-term product of theta functions whose normalized
values give the vacuum kernel (s = 1) and the squeezed-vacuum kernel.  The
number-state kernel is available through the coefficient sum (default) and
through Taylor jets of the theta composite (validation route).
"""

from __future__ import annotations

import json
import math
import threading
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import DomainError, IllConditionedKernelError
from .numerics import MAX_JET_ORDER, EPS_TAIL, Jet, LatticeDims, as_dims, theta, theta_jet

KINDS = ("vacuum", "squeezed", "number", "ratio")
RATIO_FLOOR = 1e-12


@dataclass(frozen=True)
class KernelTable:
    dims: LatticeDims
    kind: str
    values: np.ndarray
    s: Optional[float] = None
    n: Optional[int] = None

    def __post_init__(self):
        self.values.setflags(write=False)

    def __call__(self, eta: int, xi: int) -> float:
        d = self.dims
        return float(self.values[d.index(eta), d.index(xi)])

    def to_dict(self) -> dict:
        return {
            "N": self.dims.N,
            "kind": self.kind,
            "s": self.s,
            "n": self.n,
            "values": self.values.ravel().tolist(),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "KernelTable":
        dims = LatticeDims(int(d["N"]))
        values = np.asarray(d["values"], dtype=float).reshape(dims.N, dims.N)
        return cls(dims, d["kind"], values, d.get("s"), d.get("n"))


def _check_s(s: float) -> float:
    s = float(s)
    if not s > 0 or not math.isfinite(s):
        raise DomainError(f"squeezing parameter must be positive, got {s}")
    return s


def mfunc(dims, s: float, eta, xi, eps_tail: float = EPS_TAIL):
    """Four-term theta product ``M_s(eta, xi)`` at integer arguments.

    Arguments are not restricted to ``[-ell, ell]``; outside that range the
    theta expression itself provides the extension (this is what the
    off-diagonal coherent projector needs).  Scalars or broadcastable arrays.
    """
    d = as_dims(dims)
    s = _check_s(s)
    a, N = d.a, d.N
    eta = np.asarray(eta)
    xi = np.asarray(xi)
    t_eta, t_xi = a * s * s, a / (s * s)
    th3e, th4e = theta(3, a * eta, t_eta, eps_tail), theta(4, a * eta, t_eta, eps_tail)
    th3x, th4x = theta(3, a * xi, t_xi, eps_tail), theta(4, a * xi, t_xi, eps_tail)
    sign_e = np.where(eta % 2 == 0, 1.0, -1.0)
    sign_x = np.where(xi % 2 == 0, 1.0, -1.0)
    sign_ex = np.where((eta + xi + N) % 2 == 0, 1.0, -1.0)
    val = 0.5 * math.sqrt(a) * s * (
        th3e * th3x + th3e * th4x * sign_e + th4e * th3x * sign_x + th4e * th4x * sign_ex
    )
    return float(val) if np.ndim(val) == 0 else val


def mfunc_origin_landen(dims, s: float, eps_tail: float = EPS_TAIL) -> float:
    """Two-term closed form of ``M_s(0, 0)`` obtained from the Landen relations."""
    d = as_dims(dims)
    s = _check_s(s)
    a = d.a
    return math.sqrt(a) * s * (
        theta(3, 0.0, 4 * a / s**2, eps_tail) * theta(3, 0.0, a * s**2, eps_tail)
        + theta(2, 0.0, 4 * a / s**2, eps_tail) * theta(4, 0.0, a * s**2, eps_tail)
    )


def kernel_value(dims, s: float, eta, xi):
    """``M_s(eta, xi) / M_s(0, 0)`` for arbitrary integer arguments."""
    return mfunc(dims, s, eta, xi) / mfunc(dims, s, 0, 0)


# --------------------------------------------------------------------------
# table cache

_cache: dict = {}
_cache_lock = threading.Lock()


def _key(N, kind, s, n, route=None):
    return (N, kind, None if s is None else float(s).hex(), n, route)


def _cached(key, build):
    with _cache_lock:
        hit = _cache.get(key)
    if hit is not None:
        return hit
    table = build()
    with _cache_lock:
        return _cache.setdefault(key, table)


def clear_cache():
    with _cache_lock:
        _cache.clear()


def save_cache(path) -> int:
    """Write every cached table to a JSON file; returns the number of tables."""
    with _cache_lock:
        items = [(k, v) for k, v in _cache.items()]
    payload = []
    for key, table in items:
        entry = table.to_dict()
        entry["route"] = key[4]
        payload.append(entry)
    with open(path, "w") as fh:
        json.dump({"tables": payload}, fh)
    return len(payload)


def load_cache(path) -> int:
    with open(path) as fh:
        payload = json.load(fh)
    count = 0
    for entry in payload.get("tables", []):
        table = KernelTable.from_dict(entry)
        key = _key(table.dims.N, table.kind, table.s, table.n, entry.get("route"))
        with _cache_lock:
            _cache.setdefault(key, table)
        count += 1
    return count


# --------------------------------------------------------------------------
# tables


def _grid(d: LatticeDims):
    L = d.labels
    return L[:, None], L[None, :]


def kernel_grid(dims, s: float = 1.0) -> np.ndarray:
    """Uncached ``M_s(eta, xi) / M_s(0, 0)`` on the grid (used by s-scans)."""
    d = as_dims(dims)
    E, X = _grid(d)
    values = mfunc(d, s, E, X) / mfunc(d, s, 0, 0)
    values[d.ell, d.ell] = 1.0
    return values


def kernel_vacuum(dims, s: float = 1.0) -> KernelTable:
    """Normalized squeezed-vacuum kernel ``M_s(eta, xi) / M_s(0, 0)``; ``s = 1`` is the vacuum kernel."""
    d = as_dims(dims)
    s = _check_s(s)
    kind = "vacuum" if s == 1.0 else "squeezed"

    def build():
        return KernelTable(d, kind, kernel_grid(d, s), s=s)

    return _cached(_key(d.N, kind, s, None), build)


def _check_level(d: LatticeDims, n: int):
    if not 0 <= n <= d.N - 1:
        raise DomainError(f"number-state level must lie in [0, {d.N - 1}], got {n}")


def kernel_number_coeff_route(dims, n: int) -> KernelTable:
    """Number-state kernel from the coordinate-basis coefficients.

    ``K_n(eta, xi) = exp(-i pi eta xi / N) sum_sigma exp(2 pi i sigma eta / N)
    F_{sigma,n} conj(F_{sigma-xi,n})`` with ``sigma - xi`` wrapped mod N.
    """
    d = as_dims(dims)
    _check_level(d, n)

    def build():
        from .states import fock_coefficients

        table = fock_coefficients(d, n, 1.0)
        F = table.values
        L = d.labels
        N = d.N
        # shifted[xi, sigma] = F[wrap(sigma - xi)]
        shifted = F[d.wrap(L[None, :] - L[:, None]) + d.ell]
        phase = np.exp(2j * np.pi * np.outer(L, L) / N)  # [eta, sigma]
        vals = np.exp(-1j * np.pi * np.outer(L, L) / N) * (phase @ (F[:, None] * shifted.T.conj()))
        if np.abs(vals.imag).max() > 1e-12:
            raise AssertionError(f"number kernel has imaginary residue {np.abs(vals.imag).max():.2e}")
        values = vals.real / vals.real[d.ell, d.ell]
        return KernelTable(d, "number", values, n=n)

    return _cached(_key(d.N, "number", None, n, "coeff"), build)


def _nome_jet(a: float, order: int, s2: float = 1.0) -> Jet:
    """Jet of ``s2 * i a (1 - 2z) / (1 + 2z)``."""
    z = Jet.variable(order)
    return (1j * a * s2) * (1 - 2 * z) / (1 + 2 * z)


def mfunc_number(dims, n: int, eta=None, xi=None):
    """``M_n(eta, xi) = sqrt(a) d^n/dz^n [(1+2z)^-1 M(eta, xi; z)]`` at ``z = 0``.

    Returns the full table when ``eta``/``xi`` are omitted.
    """
    d = as_dims(dims)
    if n > MAX_JET_ORDER:
        raise DomainError(f"jet order {n} exceeds the supported maximum {MAX_JET_ORDER}")
    if n < 0:
        raise DomainError(f"level must be non-negative, got {n}")
    a = d.a
    f = _nome_jet(a, n)
    inv = 1 / (1 + 2 * Jet.variable(n))
    labels = d.labels if eta is None else np.unique(np.r_[np.atleast_1d(eta), np.atleast_1d(xi)])
    th3 = {int(k): theta_jet(3, a * k, f, n) for k in labels}
    th4 = {int(k): theta_jet(4, a * k, f, n) for k in labels}

    def one(e, x):
        se = 1.0 if e % 2 == 0 else -1.0
        sx = 1.0 if x % 2 == 0 else -1.0
        sex = 1.0 if (e + x + d.N) % 2 == 0 else -1.0
        M = 0.5 * (th3[e] * th3[x] + th3[e] * th4[x] * se + th4[e] * th3[x] * sx + th4[e] * th4[x] * sex)
        return math.sqrt(a) * (inv * M).derivative_at_zero(n)

    if eta is not None:
        return one(int(eta), int(xi)).real
    L = d.labels
    out = np.array([[one(int(e), int(x)) for x in L] for e in L])
    if np.abs(out.imag).max() > 1e-12 * max(1.0, np.abs(out.real).max()):
        raise AssertionError("jet-route M_n has a non-negligible imaginary part")
    return out.real


def kernel_number_jet_route(dims, n: int) -> KernelTable:
    """Number-state kernel ``M_n(eta, xi) / M_n(0, 0)`` from theta jets."""
    d = as_dims(dims)
    if n > MAX_JET_ORDER:
        raise DomainError(f"jet order {n} exceeds the supported maximum {MAX_JET_ORDER}")
    _check_level(d, n)

    def build():
        M = mfunc_number(d, n)
        return KernelTable(d, "number", M / M[d.ell, d.ell], n=n)

    return _cached(_key(d.N, "number", None, n, "jet"), build)


def kernel_number(dims, n: int, route: str = "coeff") -> KernelTable:
    if route == "coeff":
        return kernel_number_coeff_route(dims, n)
    if route == "jet":
        return kernel_number_jet_route(dims, n)
    raise ValueError(f"unknown route {route!r}")


def kernel_ratio(dims, s: float) -> KernelTable:
    """Elementwise ratio of the squeezed-vacuum kernel to the vacuum kernel."""
    d = as_dims(dims)
    s = _check_s(s)

    def build():
        Kv = kernel_vacuum(d, 1.0).values
        check_divisor(d, Kv)
        return KernelTable(d, "ratio", kernel_vacuum(d, s).values / Kv, s=s)

    return _cached(_key(d.N, "ratio", s, None), build)


def check_divisor(d: LatticeDims, K: np.ndarray, floor: float = RATIO_FLOOR):
    """Raise :class:`IllConditionedKernelError` if any entry of ``K`` is below ``floor``."""
    bad = np.argwhere(np.abs(K) < floor)
    if bad.size:
        i, j = bad[0]
        raise IllConditionedKernelError(int(i) - d.ell, int(j) - d.ell, float(K[i, j]))
