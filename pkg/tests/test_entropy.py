import json
import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dsqs import entropy as ent
from dsqs import states
from dsqs.errors import DomainError, InvalidDistributionError
from dsqs.phase_space import marginals, squeezed_husimi


def vacuum(N):
    return states.pure_density(states.number_state(N, 0))


def test_uniform_cases():
    N = 5
    H = np.full((N, N), 1 / N)
    assert abs(ent.joint_entropy(H) - math.log(N)) < 1e-14
    Q = np.full(N, 1 / math.sqrt(N))
    EQ, ER = ent.marginal_entropies(Q, Q)
    assert abs(EQ - math.log(N) / 2) < 1e-14 and EQ == ER
    assert ent.correlation(math.log(N), EQ, ER, 0.5) == 0.0


def test_zero_log_zero_and_invalid_grids():
    H = np.zeros((3, 3))
    H[1, 1] = 3.0
    assert ent.joint_entropy(H) == pytest.approx(-math.log(3))
    bad = np.full((3, 3), 1 / 3)
    bad[0, 0] -= 1e-6
    bad[0, 1] += 1e-6
    ent.joint_entropy(bad)
    bad[0, 0] = -1e-3
    with pytest.raises(InvalidDistributionError):
        ent.joint_entropy(bad)
    with pytest.raises(InvalidDistributionError):
        ent.marginal_entropy(np.ones(3))


def test_correlation_errors_and_degenerate_case():
    with pytest.raises(DomainError):
        ent.correlation(0.5, 0.4, 0.4, 0.6)
    assert ent.correlation(1.0, 0.5, 0.5, 1.0) == 0.0


@pytest.mark.parametrize("N,ref", [(3, 0.625948), (5, 0.953965), (7, 0.992272), (9, 0.998598)])
def test_vacuum_entropy_reference_values(N, ref):
    assert abs(ent.entropy_report(vacuum(N), 1.0, "B", 0.0).E_joint - ref) < 5e-6


def test_vacuum_marginal_symmetries():
    rho = vacuum(5)
    r1 = ent.entropy_report(rho, 1.0, "B", 0.0)
    assert abs(r1.E_Q - r1.E_R) < 1e-10
    a = ent.entropy_report(rho, 2.5, "B", 0.0)
    b = ent.entropy_report(rho, 0.4, "B", 0.0)
    assert abs(a.E_Q - b.E_R) < 1e-10 and abs(a.E_joint - b.E_joint) < 1e-10


def test_scan_is_symmetric_in_log_s():
    ev = ent._Evaluator(vacuum(3))
    for s in ent.default_s_grid():
        assert abs(ev.joint(s) - ev.joint(1 / s)) < 1e-9


def test_vacuum_minimizer_n3():
    E, s = ent.min_entropy_scan(vacuum(3))
    assert abs(s - 1) < 1e-4 and abs(E - 0.625948) < 5e-6
    r = ent.entropy_report(vacuum(3), 1.0)
    assert abs(r.correlation - 1) < 1e-9
    assert ent.entropy_report(vacuum(3), 5.0).correlation < r.correlation


def test_n5_vacuum_scan_is_bimodal():
    # s = 1 is a local maximum at N = 5; the two minima are mirror images in log s
    with pytest.warns(RuntimeWarning):
        E, s = ent.min_entropy_scan(vacuum(5))
    assert E < 0.953965 - 1e-3
    ev = ent._Evaluator(vacuum(5))
    assert abs(ev.joint(1 / s) - E) < 1e-9


def test_vacuum_min_entropy_increases_with_N():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        mins = [ent.vacuum_min_entropy(N)[0] for N in (3, 5, 7, 9, 11)]
    assert all(a < b for a, b in zip(mins, mins[1:4]))
    assert mins[4] >= 0.999


@pytest.mark.filterwarnings("ignore::RuntimeWarning")
def test_report_invariants_and_reference_modes():
    rho = states.random_density(5, 3)
    for mode, val in (("A", None), ("B", 0.1), ("C", None)):
        r = ent.entropy_report(rho, 1.3, mode, val)
        assert abs(r.E_cond_Q - (r.E_joint - r.E_Q)) < 1e-12
        assert r.balance_defect() < 1e-12
        assert -1e-10 <= r.correlation <= 1 + 1e-10
        assert r.min_ref == mode
    with pytest.raises(DomainError):
        ent.entropy_report(rho, 1.0, "B")
    with pytest.raises(DomainError):
        ent.entropy_report(rho, 1.0, "Z")


def test_entropy_matches_husimi_and_marginals():
    rho = states.random_density(5, 7)
    r = ent.entropy_report(rho, 1.7, "B", 0.0)
    H = squeezed_husimi(rho, 1.7).values
    Q, R = marginals(rho, 1.7)
    assert abs(r.E_joint - ent.joint_entropy(H)) < 1e-12
    assert abs(r.E_Q - ent.marginal_entropy(Q)) < 1e-12 and abs(r.E_R - ent.marginal_entropy(R)) < 1e-12


@settings(max_examples=12, deadline=None)
@given(st.sampled_from([3, 5]), st.integers(0, 10_000))
def test_subadditivity_and_conditional_bounds(N, seed):
    rho = states.random_density(N, seed)
    for r in ent.entropy_scan(rho, ent.default_s_grid(), "B", 0.0):
        assert r.E_joint <= r.E_Q + r.E_R + 1e-10
        assert r.E_cond_Q <= r.E_R + 1e-10
        assert r.E_cond_R <= r.E_Q + 1e-10
        assert r.balance_defect() < 1e-12


def test_scan_exports():
    reports = ent.entropy_scan(vacuum(3), [0.5, 1.0, 2.0])
    lines = ent.scan_to_csv(reports).splitlines()
    assert lines[0] == "s,E_joint,E_Q,E_R,E_cond_Q,E_cond_R,correlation" and len(lines) == 4
    rows = json.loads(ent.scan_to_json(reports))
    assert rows[1]["s"] == 1.0 and set(rows[1]) >= {"min_E_joint", "s_at_min"}
    with pytest.raises(DomainError):
        ent.default_s_grid(2, 1, 5)
