"""Scalar special functions and truncated power series.

Jacobi theta functions are evaluated as truncated Gaussian lattice sums with
the convention

    theta_3(z | tau) = sum_n exp(i pi tau n^2 + 2 pi i n z),

theta_4(z | tau) = theta_3(z + 1/2 | tau) and theta_2 summing over half-odd
integers.  Only purely imaginary nomes ``tau = i t`` (``t > 0``) are needed for
scalar evaluations; :func:`theta_jet` accepts a nome given as a :class:`Jet`
whose leading coefficient lies in the upper half plane.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from numbers import Number

import numpy as np

from .errors import DomainError, SingularityError

EPS_TAIL = 1e-16
MAX_JET_ORDER = 64


@dataclass(frozen=True)
class LatticeDims:
    """Odd Hilbert-space dimension ``N`` with ``ell = (N-1)/2`` and ``a = 1/(2N)``."""

    N: int

    def __post_init__(self):
        if isinstance(self.N, bool) or not isinstance(self.N, (int, np.integer)):
            raise DomainError(f"N must be an integer, got {self.N!r}")
        if self.N < 3 or self.N % 2 == 0:
            raise DomainError(f"N must be odd and >= 3, got {self.N}")
        object.__setattr__(self, "N", int(self.N))
        assert abs(2 * self.N * self.a - 1.0) < 1e-15

    @property
    def ell(self) -> int:
        return (self.N - 1) // 2

    @property
    def a(self) -> float:
        return 1.0 / (2 * self.N)

    @property
    def labels(self) -> np.ndarray:
        """Grid labels ``-ell, ..., ell`` in storage order."""
        return np.arange(-self.ell, self.ell + 1)

    def index(self, label: int) -> int:
        """Storage index of a label in ``[-ell, ell]``."""
        if not -self.ell <= label <= self.ell:
            raise DomainError(f"label {label} outside [-{self.ell}, {self.ell}]")
        return int(label) + self.ell

    def wrap(self, k):
        """Map an integer (or array) to its representative in ``[-ell, ell]``."""
        return (np.asarray(k) + self.ell) % self.N - self.ell


def as_dims(dims) -> LatticeDims:
    if isinstance(dims, LatticeDims):
        return dims
    return LatticeDims(dims)


@dataclass(frozen=True)
class TailBudget:
    eps_tail: float = EPS_TAIL
    B: int = 0


# --------------------------------------------------------------------------
# truncated power series


class Jet:
    """Truncated Taylor series ``sum_k coeffs[k] z^k`` about ``z = 0``."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        c = np.array(coeffs, dtype=complex).ravel()
        if c.size == 0:
            raise ValueError("a jet needs at least one coefficient")
        self.coeffs = c

    @classmethod
    def constant(cls, value, order: int) -> "Jet":
        c = np.zeros(order + 1, dtype=complex)
        c[0] = value
        return cls(c)

    @classmethod
    def variable(cls, order: int) -> "Jet":
        """The identity series ``z`` truncated at ``order``."""
        c = np.zeros(order + 1, dtype=complex)
        if order >= 1:
            c[1] = 1.0
        return cls(c)

    @property
    def order(self) -> int:
        return self.coeffs.size - 1

    def _coerce(self, other) -> "Jet":
        if isinstance(other, Jet):
            if other.order != self.order:
                raise ValueError(f"jet orders differ: {self.order} vs {other.order}")
            return other
        if isinstance(other, Number):
            return Jet.constant(other, self.order)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return Jet(self.coeffs + other.coeffs)

    __radd__ = __add__

    def __neg__(self):
        return Jet(-self.coeffs)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return Jet(self.coeffs - other.coeffs)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Number):
            return Jet(self.coeffs * other)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return Jet(np.convolve(self.coeffs, other.coeffs)[: self.order + 1])

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Number):
            return Jet(self.coeffs / other)
        return self * jet_reciprocal(self._coerce(other))

    def __rtruediv__(self, other):
        return jet_reciprocal(self) * other

    def __repr__(self):
        return f"Jet({np.array2string(self.coeffs, precision=6)})"

    def derivative_at_zero(self, n: int) -> complex:
        return jet_derivative_at_zero(self, n)


def jet_add(a: Jet, b: Jet) -> Jet:
    return a + b


def jet_mul(a: Jet, b: Jet) -> Jet:
    return a * b


def jet_reciprocal(f: Jet) -> Jet:
    c = f.coeffs
    if c[0] == 0:
        raise SingularityError("reciprocal of a jet with zero leading coefficient")
    r = np.zeros_like(c)
    r[0] = 1.0 / c[0]
    for k in range(1, c.size):
        r[k] = -r[0] * np.dot(c[1 : k + 1], r[k - 1 :: -1][:k])
    return Jet(r)


def _exp_rows(E: np.ndarray) -> np.ndarray:
    """Row-wise series exponential of a (terms, order+1) coefficient array."""
    G = np.zeros_like(E)
    G[:, 0] = np.exp(E[:, 0])
    k_idx = np.arange(E.shape[1])
    for k in range(1, E.shape[1]):
        j = k_idx[1 : k + 1]
        G[:, k] = (E[:, 1 : k + 1] * j * G[:, k - 1 :: -1][:, :k]).sum(axis=1) / k
    return G


def jet_exp(f: Jet) -> Jet:
    return Jet(_exp_rows(f.coeffs[None, :])[0])


def jet_derivative_at_zero(f: Jet, n: int) -> complex:
    if not 0 <= n <= f.order:
        raise ValueError(f"derivative order {n} exceeds jet order {f.order}")
    return complex(math.factorial(n) * f.coeffs[n])


# --------------------------------------------------------------------------
# lattice sums


def lattice_cutoff(decay: float, n: int = 0, eps_tail: float = EPS_TAIL) -> int:
    """Smallest ``B`` with ``exp(-r B^2) (1+B)^n C_n < eps_tail``.

    ``C_n = 2 * 4**n / (1 - exp(-r))`` covers both tails of the sum, bounds
    the ratio of successive Gaussian terms geometrically and leaves room for
    the polynomial (Hermite or series-coefficient) growth of the summand.
    """
    if not decay > 0:
        raise DomainError(f"lattice decay must be positive, got {decay}")
    if not eps_tail > 0:
        raise DomainError(f"eps_tail must be positive, got {eps_tail}")
    log_c = math.log(2.0) + n * math.log(4.0) - math.log1p(-math.exp(-decay))
    log_eps = math.log(eps_tail)
    B = 0
    while -decay * B * B + n * math.log1p(B) + log_c >= log_eps:
        B += 1
    return B


def _theta_terms(kind: int):
    if kind not in (2, 3, 4):
        raise DomainError(f"theta kind must be 2, 3 or 4, got {kind}")


def theta_complex(kind: int, z, t: float, eps_tail: float = EPS_TAIL):
    """Raw complex accumulation of ``theta_kind(z | i t)``; see :func:`theta`."""
    _theta_terms(kind)
    if not t > 0:
        raise DomainError(f"theta needs t > 0 (nome i*t), got t={t}")
    B = lattice_cutoff(math.pi * t, 0, eps_tail)
    n = np.arange(-B - 1, B + 1) if kind == 2 else np.arange(-B, B + 1)
    m = n + 0.5 if kind == 2 else n.astype(float)
    w = np.exp(-math.pi * t * m * m)
    if kind == 4:
        w = w * np.where(n % 2 == 0, 1.0, -1.0)
    z = np.asarray(z, dtype=float)
    out = np.exp(2j * math.pi * np.multiply.outer(z, m)) @ w
    return out


def theta(kind: int, z, t: float, eps_tail: float = EPS_TAIL):
    """Jacobi theta function ``theta_kind(z | i t)`` for real ``z`` (scalar or array)."""
    val = theta_complex(kind, z, t, eps_tail)
    val = np.real(val)
    return float(val) if np.ndim(val) == 0 else val


def theta_jet(kind: int, z, nome, order: int, eps_tail: float = EPS_TAIL) -> Jet:
    """Taylor jet of ``theta_kind(z | nome)`` where ``z`` and/or ``nome`` are jets.

    A real ``z`` or a scalar nome ``i t`` is promoted to a constant jet.  The
    lattice is widened until the outermost terms contribute less than
    ``eps_tail`` relative to the largest coefficient of the sum.
    """
    _theta_terms(kind)
    if order > MAX_JET_ORDER:
        raise DomainError(f"jet order {order} exceeds the supported maximum {MAX_JET_ORDER}")
    zj = z if isinstance(z, Jet) else Jet.constant(z, order)
    if isinstance(nome, Jet):
        qj = nome
    else:
        qj = Jet.constant(nome, order)
    if zj.order != order or qj.order != order:
        raise ValueError("jet orders must match the requested order")
    t0 = qj.coeffs[0].imag
    if not t0 > 0:
        raise DomainError(f"nome leading coefficient must have positive imaginary part, got {qj.coeffs[0]}")

    B = max(lattice_cutoff(math.pi * t0, 2 * order, eps_tail), 1)
    while True:
        n = np.arange(-B - 1, B + 1) if kind == 2 else np.arange(-B, B + 1)
        m = n + 0.5 if kind == 2 else n.astype(float)
        E = 1j * math.pi * np.outer(m * m, qj.coeffs) + 2j * math.pi * np.outer(m, zj.coeffs)
        if kind == 4:
            E[:, 0] += 1j * math.pi * n
        G = _exp_rows(E)
        total = G.sum(axis=0)
        edge = np.abs(G[[0, -1]]).max()
        scale = max(np.abs(total).max(), 1.0)
        if edge < eps_tail * scale or B > 10_000:
            return Jet(total)
        B *= 2


def hermite(n: int, x):
    """Physicists' Hermite polynomial ``H_n(x)`` by the three-term recurrence."""
    if n < 0:
        raise DomainError(f"Hermite degree must be non-negative, got {n}")
    x = np.asarray(x, dtype=float)
    h_prev = np.ones_like(x)
    if n == 0:
        return h_prev if h_prev.ndim else float(h_prev)
    h = 2.0 * x
    for k in range(1, n):
        h_prev, h = h, 2.0 * x * h - 2.0 * k * h_prev
    return h if h.ndim else float(h)
