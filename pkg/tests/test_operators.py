import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dsqs import operators as ops
from dsqs import states
from dsqs.errors import DomainError, NumericalConsistencyError
from dsqs.numerics import LatticeDims


@pytest.mark.parametrize("N", [3, 5, 7])
def test_clock_and_shift(N):
    U, V = ops.build_U(N), ops.build_V(N)
    w = np.exp(2j * np.pi / N)
    assert np.allclose(V @ U, w * U @ V)
    assert np.allclose(np.linalg.matrix_power(U, N), np.eye(N))
    assert np.allclose(np.linalg.matrix_power(V, N), np.eye(N))
    # V |u_k> = |u_{k-1}>
    e = np.zeros(N)
    e[N // 2] = 1
    assert np.argmax(np.abs(V @ e)) == N // 2 - 1


@pytest.mark.parametrize("N", [3, 5])
def test_schwinger_properties(N):
    d = LatticeDims(N)
    assert np.allclose(ops.schwinger_S(d, 0, 0), np.eye(N) / math.sqrt(N))
    for e in range(-N, N + 1):
        for x in range(-N, N + 1):
            S = ops.schwinger_S(d, e, x)
            assert np.allclose(S.conj().T, ops.schwinger_S(d, -e, -x), atol=1e-14)
            assert np.allclose(N * S @ S.conj().T, np.eye(N), atol=1e-14)


@pytest.mark.parametrize("N", [3, 5])
def test_t_basis_identities(N):
    d = LatticeDims(N)
    for order in ops.ORDERS:
        T = ops.t_basis(d, order)
        assert np.abs(np.einsum("mnaa->mn", T) - 1).max() < 1e-12
        Td = ops.t_basis(d, -order)
        dual = np.einsum("mnab,pqba->mnpq", T, Td).reshape(N * N, N * N)
        assert np.abs(dual - N * np.eye(N * N)).max() < 1e-10
        assert np.allclose(ops.map_kernel_T(d, order, 1, -1), T[d.index(1), d.index(-1)])
    # the Husimi basis elements are the coherent projectors
    T_h = ops.t_basis(d, -1)
    for m in d.labels:
        for n in d.labels:
            c = states.coherent_state(d, m, n)
            assert np.abs(T_h[d.index(m), d.index(n)] - np.outer(c, c.conj())).max() < 1e-12


def random_operator(N, seed):
    rng = np.random.default_rng(seed)
    return rng.normal(size=(N, N)) + 1j * rng.normal(size=(N, N))


@settings(max_examples=25, deadline=None)
@given(st.sampled_from([3, 5]), st.sampled_from(ops.ORDERS), st.integers(0, 10_000))
def test_decompose_reconstruct_roundtrip(N, order, seed):
    O = random_operator(N, seed)
    back = ops.reconstruct(N, order, ops.decompose(N, order, O))
    assert np.abs(back - O).max() < 1e-9 * max(1, np.abs(O).max())


@settings(max_examples=25, deadline=None)
@given(st.sampled_from(ops.ORDERS), st.integers(0, 10_000))
def test_expectation_phase_space_route(order, seed):
    N = 3
    O = random_operator(N, seed)
    rho = states.random_density(N, seed)
    assert abs(ops.expectation(O, rho, order) - np.trace(O @ rho)) < 1e-10


def test_expectation_flags_disagreement(monkeypatch):
    rho = states.random_density(3, 1)
    monkeypatch.setattr(ops, "decompose", lambda d, order, O: np.zeros((3, 3)))
    with pytest.raises(NumericalConsistencyError):
        ops.expectation(np.eye(3), rho)


def test_involution_defects_are_large():
    # sqrt(N) T0 squares to the identity only up to an O(N) defect
    expected = {3: 4.6667, 5: 8.1889, 7: 12.5052}
    for N, ref in expected.items():
        assert abs(ops.involution_report(N) - ref) < 1e-3
    assert ops.involution_defect(3, 0, 0) <= ops.involution_report(3) + 1e-12


def test_order_domain_and_experimental():
    with pytest.raises(DomainError):
        ops.kernel_weight(3, 2)
    W = ops.kernel_weight(3, 0.5, experimental=True)
    assert np.allclose(W ** -2, ops.kernel_weight(3, 1) ** -1)


def test_density_validation():
    assert ops.is_density(np.eye(3) / 3)
    assert not ops.is_density(np.eye(3))
    assert not ops.is_density(np.diag([1.5, -0.5, 0]))
    with pytest.raises(DomainError):
        ops.validate_density(np.ones((3, 3)))
