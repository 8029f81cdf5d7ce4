"""State constructors: number states, squeezed number states, coherent and
squeezed states, the squeezing generator and the projector expansions.

All vectors are amplitudes in the coordinate-like basis ``|u_kappa>``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DomainError, StateSpecError
from .kernels import kernel_ratio, kernel_value, kernel_vacuum, _check_s
from .numerics import EPS_TAIL, Jet, LatticeDims, as_dims, hermite, jet_exp, lattice_cutoff, theta, theta_jet
from .operators import schwinger_basis, schwinger_S, validate_density

CONSTRUCTIONS = ("biorthogonal", "literal")


@dataclass(frozen=True)
class CoefficientTable:
    dims: LatticeDims
    n: int
    s: float
    values: np.ndarray
    norm_const: float

    def __post_init__(self):
        self.values.setflags(write=False)

    def at(self, kappa):
        """Coefficient with the periodic extension ``F[kappa + N] = F[kappa]``."""
        return self.values[self.dims.wrap(kappa) + self.dims.ell]


def _check_level(d: LatticeDims, n: int):
    if not 0 <= n <= d.N - 1:
        raise DomainError(f"level must lie in [0, {d.N - 1}], got {n}")


def raw_coefficients(dims, n: int, s: float = 1.0, eps_tail: float = EPS_TAIL) -> np.ndarray:
    """Unnormalized lattice sum ``((-i)^n / sqrt N) sum_beta exp(...) H_n(...)``."""
    d = as_dims(dims)
    s = _check_s(s)
    N = d.N
    B = lattice_cutoff(math.pi / (N * s * s), n, eps_tail)
    beta = np.arange(-B, B + 1)
    weights = np.exp(-math.pi * beta**2 / (N * s * s)) * hermite(n, math.sqrt(2 * math.pi / N) * beta / s)
    phase = np.exp(2j * math.pi * np.outer(d.labels, beta) / N)
    return ((-1j) ** n / math.sqrt(N)) * (phase @ weights)


@lru_cache(maxsize=512)
def _fock(N: int, n: int, s: float) -> CoefficientTable:
    d = LatticeDims(N)
    raw = raw_coefficients(d, n, s)
    norm2 = float(np.vdot(raw, raw).real)
    return CoefficientTable(d, n, s, raw / math.sqrt(norm2), 1.0 / math.sqrt(norm2))


def fock_coefficients(dims, n: int, s: float = 1.0) -> CoefficientTable:
    """Normalized coefficients ``F_{kappa,n}(s)`` of the squeezed number state ``|n; s>``."""
    d = as_dims(dims)
    _check_level(d, n)
    return _fock(d.N, int(n), _check_s(s))


def normalization_sum(dims, n: int, s: float = 1.0) -> float:
    """``N_n(s)^-2`` as the plain sum of squared moduli of the raw coefficients."""
    raw = raw_coefficients(dims, n, s)
    return float(np.vdot(raw, raw).real)


def normalization_closed_form(dims, n: int, s: float = 1.0) -> float:
    """``N_n(s)^-2`` from the n-th derivative of the theta-product generating function."""
    d = as_dims(dims)
    s = _check_s(s)
    a = d.a
    z = Jet.variable(n)
    f = (1j * a) * (1 - 2 * z) / (1 + 2 * z)
    inner = theta_jet(3, 0.0, f * (4 / s**2), n) * theta_jet(3, 0.0, f * s**2, n) + theta_jet(
        2, 0.0, f * (4 / s**2), n
    ) * theta_jet(4, 0.0, f * s**2, n)
    val = math.sqrt(a) * s * (inner / (1 + 2 * z)).derivative_at_zero(n)
    return val.real


def normalization_constant(dims, n: int, s: float = 1.0) -> float:
    """Normalization constant ``N_n(s)`` (closed-form route)."""
    d = as_dims(dims)
    _check_level(d, n)
    return 1.0 / math.sqrt(normalization_closed_form(d, n, s))


def j_split(dims) -> dict:
    """Even/odd split of the ``z = 0`` normalization double sum.

    Returns the direct double sum ``J`` over ``(beta, beta')`` together with the
    theta-product forms ``J_e`` and ``J_o``.
    """
    d = as_dims(dims)
    N, a = d.N, d.a
    B = lattice_cutoff(math.pi / N, 0) + 2
    b = np.arange(-B, B + 1)
    bp = np.arange(-B, B + 1)
    arg = -(2 * math.pi / N) * (b[:, None] + bp[None, :] * N / 2) ** 2 - (math.pi * N / 2) * bp[None, :] ** 2
    J = float(np.exp(arg).sum())
    J_e = math.sqrt(a) * theta(3, 0.0, 4 * a) * theta(3, 0.0, a)
    J_o = math.sqrt(a) * theta(2, 0.0, 4 * a) * theta(4, 0.0, a)
    return {"J": J, "J_e": J_e, "J_o": J_o}


def fock_coefficients_jet(dims, n: int, s: float = 1.0) -> np.ndarray:
    """Coefficients from ``d^n/dz^n [exp(pi a s^2 z^2) theta_3(2a(kappa - z) | 2 i a s^-2)]``."""
    d = as_dims(dims)
    _check_level(d, n)
    s = _check_s(s)
    a = d.a
    z = Jet.variable(n)
    gauss = jet_exp((math.pi * a * s * s) * (z * z))
    pref = normalization_constant(d, n, s) / math.sqrt((math.pi * a * s * s) ** n * d.N)
    out = np.empty(d.N, dtype=complex)
    for i, k in enumerate(d.labels):
        th = theta_jet(3, 2 * a * k - 2 * a * z, 2j * a / s**2, n)
        out[i] = pref * (gauss * th).derivative_at_zero(n)
    return out


# --------------------------------------------------------------------------
# states


def number_state(dims, n: int) -> np.ndarray:
    return np.array(fock_coefficients(dims, n, 1.0).values)


def squeezed_number_state(dims, n: int, s: float) -> np.ndarray:
    """Amplitudes of ``|n; s>``."""
    return np.array(fock_coefficients(dims, n, s).values)


def number_basis(dims, s: float = 1.0) -> np.ndarray:
    """Matrix whose columns are ``|n; s>`` for ``n = 0 .. N-1``."""
    d = as_dims(dims)
    return np.column_stack([fock_coefficients(d, n, s).values for n in range(d.N)])


def _check_point(d: LatticeDims, mu: int, nu: int):
    d.index(mu)
    d.index(nu)


def coherent_state(dims, mu: int, nu: int) -> np.ndarray:
    """``|mu, nu> = sqrt(N) S(nu, -mu) |0>``."""
    d = as_dims(dims)
    _check_point(d, mu, nu)
    return math.sqrt(d.N) * schwinger_S(d, nu, -mu) @ number_state(d, 0)


def displaced_squeezed_vacuum(dims, mu: int, nu: int, s: float) -> np.ndarray:
    """``|mu, nu; s> = sqrt(N) S(nu, -mu) |0; s>``."""
    d = as_dims(dims)
    _check_point(d, mu, nu)
    return math.sqrt(d.N) * schwinger_S(d, nu, -mu) @ squeezed_number_state(d, 0, s)


@lru_cache(maxsize=128)
def _generator(N: int, s: float, construction: str) -> np.ndarray:
    d = LatticeDims(N)
    A = number_basis(d, 1.0)
    As = number_basis(d, s)
    if construction == "biorthogonal":
        X = np.linalg.solve(A.T, As.T).T
    else:
        X = As @ A.conj().T
    X.setflags(write=False)
    return X


def squeezing_generator(dims, s: float, construction: str = "biorthogonal") -> np.ndarray:
    """Squeezing operator mapping each number state ``|n>`` onto ``|n; s>``.

    The number states are not mutually orthogonal, so the plain outer-product
    sum ``sum_n |n; s><n|`` does not map ``|n>`` onto ``|n; s>``.  The default
    ``"biorthogonal"`` construction pairs ``|n; s>`` with the dual basis of
    ``{|n>}``, which makes ``X|n> = |n; s>`` and ``X(1) = 1`` exact;
    ``"literal"`` returns the outer-product sum.  Neither is unitary in
    general -- see :func:`unitarity_defect`.
    """
    d = as_dims(dims)
    if construction not in CONSTRUCTIONS:
        raise ValueError(f"construction must be one of {CONSTRUCTIONS}")
    return _generator(d.N, _check_s(s), construction)


def unitarity_defect(X: np.ndarray) -> float:
    return float(np.abs(X.conj().T @ X - np.eye(X.shape[0])).max())


def gram_matrix(dims, s: float = 1.0) -> np.ndarray:
    """Overlaps ``<m; s | n; s>``."""
    A = number_basis(dims, s)
    return A.conj().T @ A


def gram_deviation(dims, s: float = 1.0) -> float:
    G = gram_matrix(dims, s)
    return float(np.abs(G - np.eye(G.shape[0])).max())


def squeezed_coherent_state(dims, mu_bar: int, nu_bar: int, s: float, construction: str = "biorthogonal"):
    """``X(s)|mu_bar, nu_bar>`` renormalized to unit norm.

    Returns ``(state, norm)`` where ``norm`` is the length of the unnormalized
    vector (1 for a unitary generator).
    """
    d = as_dims(dims)
    v = squeezing_generator(d, s, construction) @ coherent_state(d, mu_bar, nu_bar)
    norm = float(np.linalg.norm(v))
    return v / norm, norm


def gamma_element(dims, m: int, n: int, alpha: int, beta: int, s: float) -> complex:
    """``exp(-i pi alpha beta/N) sum_kappa exp(2 pi i kappa alpha/N) conj(F_{kappa-beta,m}) F_{kappa,n}``.

    This equals ``sqrt(N) <m; s| S(alpha, beta) |n; s>``.
    """
    d = as_dims(dims)
    Fm = fock_coefficients(d, m, s)
    Fn = fock_coefficients(d, n, s)
    L = d.labels
    terms = np.exp(2j * np.pi * L * alpha / d.N) * Fm.at(L - beta).conj() * Fn.values
    return complex(np.exp(-1j * np.pi * alpha * beta / d.N) * terms.sum())


def gamma_matrix(dims, alpha: int, beta: int, s: float) -> np.ndarray:
    d = as_dims(dims)
    return np.array([[gamma_element(d, m, n, alpha, beta, s) for n in range(d.N)] for m in range(d.N)])


def squeezed_coherent_coefficient(dims, mu_bar: int, nu_bar: int, eta: int, xi: int, s: float) -> complex:
    """Number-basis expansion of ``<mu_bar, nu_bar; s| S^dagger(eta, xi) |mu_bar, nu_bar; s>``.

    Exact only when the number states are orthonormal; compare with
    :func:`squeezed_coherent_coefficient_direct`.
    """
    d = as_dims(dims)
    left = np.array([gamma_element(d, 0, m, -nu_bar, mu_bar, 1.0) for m in range(d.N)])
    right = np.array([gamma_element(d, n, 0, nu_bar, -mu_bar, 1.0) for n in range(d.N)])
    return complex(left @ gamma_matrix(d, -eta, -xi, s) @ right / math.sqrt(d.N))


def squeezed_coherent_coefficient_direct(dims, mu_bar, nu_bar, eta, xi, s, construction="biorthogonal") -> complex:
    """Direct matrix value of the same quantity, using the unnormalized ``X|mu_bar, nu_bar>``."""
    d = as_dims(dims)
    v = squeezing_generator(d, s, construction) @ coherent_state(d, mu_bar, nu_bar)
    return complex(v.conj() @ schwinger_S(d, eta, xi).conj().T @ v)


# --------------------------------------------------------------------------
# projector expansions


def nondiagonal_projector(dims, mu: int, nu: int, mu2: int, nu2: int) -> np.ndarray:
    """``|mu, nu><mu2, nu2|`` assembled from the shifted vacuum kernel.

    The kernel is evaluated at the unwrapped shifted arguments
    ``(eta - nu + nu2, xi + mu - mu2)``.
    """
    d = as_dims(dims)
    L = d.labels
    E, X = L[:, None], L[None, :]
    K = kernel_value(d, 1.0, E - nu + nu2, X + mu - mu2)
    phase = np.exp(-1j * np.pi / d.N * (E * (mu + mu2) + X * (nu + nu2) + mu * nu2 - mu2 * nu))
    return np.einsum("ex,exab->ab", phase * K, schwinger_basis(d)) / math.sqrt(d.N)


def displaced_squeezed_projector(dims, mu: int, nu: int, s: float) -> np.ndarray:
    """``|mu, nu; s><mu, nu; s|`` as the Fourier sum of the squeezed kernel times ``S``."""
    d = as_dims(dims)
    L = d.labels
    phase = np.exp(-2j * np.pi * (L[:, None] * mu + L[None, :] * nu) / d.N)
    Ks = kernel_vacuum(d, s).values
    return np.einsum("ex,exab->ab", phase * Ks, schwinger_basis(d)) / math.sqrt(d.N)


def displaced_squeezed_projector_ratio(dims, mu: int, nu: int, s: float) -> np.ndarray:
    """Same projector built from coherent-state projectors weighted by the ratio kernel."""
    d = as_dims(dims)
    L = d.labels
    N = d.N
    R = kernel_ratio(d, s).values
    coh = np.array([[coherent_state(d, m, n) for n in L] for m in L])  # [mu', nu', a]
    proj = np.einsum("mna,mnb->mnab", coh, coh.conj())
    inner = np.exp(2j * np.pi * np.outer(L, L) / N)  # [eta, mu']
    # sum_{mu',nu'} exp(2 pi i (mu' eta + nu' xi)/N) |mu',nu'><mu',nu'|  for each (eta, xi)
    G = np.einsum("em,xn,mnab->exab", inner, inner, proj)
    phase = np.exp(-2j * np.pi * (L[:, None] * mu + L[None, :] * nu) / N)
    return np.einsum("ex,exab->ab", phase * R, G) / N**2


# --------------------------------------------------------------------------
# densities and state specifications


def pure_density(psi: np.ndarray) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex)
    psi = psi / np.linalg.norm(psi)
    return np.outer(psi, psi.conj())


def maximally_mixed(dims) -> np.ndarray:
    d = as_dims(dims)
    return np.eye(d.N, dtype=complex) / d.N


def random_density(dims, rng=None, rank=None) -> np.ndarray:
    """Random mixed state ``G G^dagger / Tr`` with complex Gaussian ``G``."""
    d = as_dims(dims)
    rng = np.random.default_rng(rng)
    k = d.N if rank is None else rank
    G = rng.normal(size=(d.N, k)) + 1j * rng.normal(size=(d.N, k))
    rho = G @ G.conj().T
    return rho / np.trace(rho).real


def _need(spec: dict, key: str):
    if key not in spec:
        raise StateSpecError(f"state of type {spec.get('type')!r} needs field {key!r}")
    return spec[key]


def _load_density_file(path, d: LatticeDims) -> np.ndarray:
    with open(path) as fh:
        text = fh.read()
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise StateSpecError(f"invalid JSON in {path}: {exc.msg}", exc.pos) from None
    values = payload["values"] if isinstance(payload, dict) else payload
    arr = np.asarray(values, dtype=float)
    if arr.shape[-1] != 2 or arr.size != 2 * d.N * d.N:
        raise StateSpecError(f"{path}: expected {d.N * d.N} complex pairs [re, im]")
    arr = arr.reshape(-1, 2)
    return (arr[:, 0] + 1j * arr[:, 1]).reshape(d.N, d.N)


def density_from_spec(spec, dims) -> np.ndarray:
    """Density matrix for a state specification (dict or JSON text)."""
    d = as_dims(dims)
    if isinstance(spec, str):
        try:
            spec = json.loads(spec)
        except json.JSONDecodeError as exc:
            raise StateSpecError(f"invalid state JSON: {exc.msg}", exc.pos) from None
    if not isinstance(spec, dict) or "type" not in spec:
        raise StateSpecError("state specification must be an object with a 'type' field")
    kind = spec["type"]
    try:
        if kind == "fock":
            rho = pure_density(squeezed_number_state(d, int(_need(spec, "n")), float(spec.get("s", 1.0))))
        elif kind == "coherent":
            rho = pure_density(coherent_state(d, int(_need(spec, "mu")), int(_need(spec, "nu"))))
        elif kind == "squeezed_vacuum":
            rho = pure_density(squeezed_number_state(d, 0, float(_need(spec, "s"))))
        elif kind == "displaced_squeezed_vacuum":
            psi = displaced_squeezed_vacuum(d, int(_need(spec, "mu")), int(_need(spec, "nu")), float(_need(spec, "s")))
            rho = pure_density(psi)
        elif kind == "squeezed_coherent":
            psi, _ = squeezed_coherent_state(d, int(_need(spec, "mu")), int(_need(spec, "nu")), float(_need(spec, "s")))
            rho = pure_density(psi)
        elif kind == "maximally_mixed":
            rho = maximally_mixed(d)
        elif kind == "mixture":
            terms = _need(spec, "terms")
            if not terms:
                raise StateSpecError("mixture needs at least one term")
            weights = np.array([float(_need(t, "weight")) for t in terms])
            if (weights < 0).any() or weights.sum() <= 0:
                raise StateSpecError("mixture weights must be non-negative with positive sum")
            rho = sum(w * density_from_spec(t["state"], d) for w, t in zip(weights, terms)) / weights.sum()
        elif kind == "density_file":
            rho = _load_density_file(_need(spec, "path"), d)
        else:
            raise StateSpecError(f"unknown state type {kind!r}")
    except DomainError as exc:
        raise StateSpecError(str(exc)) from None
    try:
        return validate_density(rho)
    except DomainError as exc:
        raise StateSpecError(str(exc)) from None
