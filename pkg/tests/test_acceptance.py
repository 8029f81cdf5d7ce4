"""Acceptance suite: one test per criterion, each printing a single PASS/FAIL line.

Run ``pytest tests/test_acceptance.py -v -s`` to see the lines inline, or
``python3 tests/test_acceptance.py`` for the lines alone.  The same lines are
repeated in the pytest terminal summary.
"""

import math
import time
import warnings

import numpy as np

from dsqs import circuit, entropy, kernels, operators, phase_space, states
from dsqs.numerics import LatticeDims

SQRT5 = math.sqrt(5)
RESULTS = []


def report(k, ok, detail):
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {k:>2}: {detail}"
    RESULTS.append(line)
    print(line)
    assert ok, line


def vacuum(N):
    return states.pure_density(states.number_state(N, 0))


def test_criterion_01_entropy_table():
    ref = {3: 0.625948, 5: 0.953965, 7: 0.992272, 9: 0.998598}
    t0 = time.perf_counter()
    got = {N: entropy.entropy_report(vacuum(N), 1.0, "B", 0.0).E_joint for N in ref}
    elapsed = time.perf_counter() - t0
    dev = max(abs(got[N] - ref[N]) for N in ref)
    values = ", ".join(f"{got[N]:.6f}" for N in ref)
    report(1, dev < 5e-6 and elapsed < 60, f"E[P0;1] = {values}; max dev {dev:.1e} (tol 5e-6), {elapsed:.2f} s")


def test_criterion_02_minimizer_at_s1():
    rho = vacuum(3)
    E_min, s_min = entropy.min_entropy_scan(rho)
    grid = entropy.default_s_grid()
    reps = entropy.entropy_scan(rho, list(grid) + [s_min], "A")
    C = np.array([r.correlation for r in reps])
    at_min = reps[-1].correlation
    ok = abs(s_min - 1) < 1e-4 and at_min >= C.max() - 1e-12
    report(2, ok, f"argmin s = {s_min:.8f} (tol 1e-4), C(argmin) = {at_min:.12f}, max C over grid = {C.max():.12f}")


def test_criterion_03_monotone_approach():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        mins = {N: entropy.vacuum_min_entropy(N)[0] for N in (3, 5, 7, 9, 11)}
    at1 = {N: entropy.entropy_report(vacuum(N), 1.0, "B", 0.0).E_joint for N in (3, 5, 7, 9, 11)}
    seq = [mins[N] for N in (3, 5, 7, 9)]
    seq1 = [at1[N] for N in (3, 5, 7, 9)]
    ok = all(a < b for a, b in zip(seq, seq[1:])) and mins[11] >= 0.999
    ok = ok and all(a < b for a, b in zip(seq1, seq1[1:])) and at1[11] >= 0.999
    report(3, ok, "min over s: " + ", ".join(f"{mins[N]:.6f}" for N in mins) + f"; at s=1, N=11: {at1[11]:.6f}")


def test_criterion_04_figure1_properties():
    d = LatticeDims(17)
    worst_t = worst_sym = worst_sum = 0.0
    low = np.inf
    for n in (0, 1):
        g = {tag: phase_space.overlap_Pn(d, n, s).values for tag, s in (("1", 1.0), ("sq5", SQRT5), ("isq5", 1 / SQRT5))}
        worst_t = max(worst_t, np.abs(g["sq5"] - g["isq5"].T).max())
        worst_sym = max(worst_sym, np.abs(g["1"] - g["1"].T).max())
        for v in g.values():
            low = min(low, v.min())
            worst_sum = max(worst_sum, abs(v.sum() - 17))
    ok = worst_t < 1e-11 and worst_sym < 1e-11 and low >= -1e-10 and worst_sum < 1e-8
    report(4, ok, f"transpose {worst_t:.1e}, mu<->nu {worst_sym:.1e}, min entry {low:.1e}, |sum - N| {worst_sum:.1e}")


def test_criterion_05_number_kernel_routes():
    worst_route = worst_dense = 0.0
    for N in (3, 5, 7):
        B = operators.schwinger_basis(N)
        for n in range(min(N - 1, 10) + 1):
            kc = kernels.kernel_number(N, n, "coeff").values
            kj = kernels.kernel_number(N, n, "jet").values
            v = states.number_state(N, n)
            dense = math.sqrt(N) * np.einsum("a,exab,b->ex", v.conj(), B, v)
            worst_route = max(worst_route, np.abs(kc - kj).max())
            worst_dense = max(worst_dense, np.abs(kc - dense).max())
    ok = worst_route < 1e-10 and worst_dense < 1e-10
    report(5, ok, f"coefficient vs jet {worst_route:.1e}, coefficient vs dense {worst_dense:.1e} (tol 1e-10)")


def test_criterion_06_operator_identities():
    worst = {"orth": 0.0, "trace": 0.0, "dual": 0.0, "res": 0.0}
    for N in (3, 5):
        d = LatticeDims(N)
        S = operators.schwinger_basis(d).reshape(N * N, N, N)
        worst["orth"] = max(worst["orth"], np.abs(np.einsum("iab,jab->ij", S.conj(), S) - np.eye(N * N)).max())
        for order in operators.ORDERS:
            T = operators.t_basis(d, order).reshape(N * N, N, N)
            Td = operators.t_basis(d, -order).reshape(N * N, N, N)
            worst["trace"] = max(worst["trace"], np.abs(np.einsum("iaa->i", T) - 1).max())
            worst["dual"] = max(worst["dual"], np.abs(np.einsum("iab,jba->ij", T, Td) - N * np.eye(N * N)).max())
        cs = [states.coherent_state(d, m, n) for m in d.labels for n in d.labels]
        res = sum(np.outer(c, c.conj()) for c in cs) / N
        worst["res"] = max(worst["res"], np.abs(res - np.eye(N)).max())
    ok = max(worst.values()) < 1e-10
    report(6, ok, ", ".join(f"{k} {v:.1e}" for k, v in worst.items()) + " (tol 1e-10)")


def test_criterion_07_circuit_contract():
    N = 3
    d = LatticeDims(N)
    rho = states.random_density(d, 2024)
    worst_c = worst_w = 0.0
    for s in (1.0, SQRT5):
        xi = phase_space.char_function(rho, 0, s).values
        for e in d.labels:
            for x in d.labels:
                r = circuit.char_via_circuit(d, int(e), int(x), rho, s)
                target = math.sqrt(N) * xi[d.index(e), d.index(x)]
                worst_c = max(worst_c, abs(r.sz - target.real), abs(r.sy - target.imag))
        w, _ = circuit.scan_circuit(d, rho, s, "wigner")
        worst_w = max(worst_w, np.abs(w.values - phase_space.wigner(rho, s).values).max())
    ok = worst_c < 1e-12 and worst_w < 1e-10
    report(7, ok, f"polarizations vs sqrt(N) Xi0 {worst_c:.1e} (tol 1e-12), Wigner scan {worst_w:.1e} (tol 1e-10)")


def test_criterion_08_entropy_inequalities():
    rng = np.random.default_rng(8)
    grid = entropy.default_s_grid(points=33)
    sub = cond = bal = -np.inf
    for N in (3, 5):
        for rho in [vacuum(N)] + [states.random_density(N, rng) for _ in range(5)]:
            for r in entropy.entropy_scan(rho, grid, "B", 0.0):
                sub = max(sub, r.E_joint - r.E_Q - r.E_R)
                cond = max(cond, r.E_cond_Q - r.E_R, r.E_cond_R - r.E_Q)
                bal = max(bal, r.balance_defect())
    ok = sub <= 1e-10 and cond <= 1e-10 and bal <= 1e-12
    report(8, ok, f"max(E_H - E_Q - E_R) {sub:.3e}, max conditional excess {cond:.3e}, balance {bal:.1e}")


def test_criterion_09_continuum_limit():
    devs = {N: phase_space.continuum_check(N, 0) for N in (31, 41, 51)}
    ok = devs[51] < 1e-4 and devs[51] < devs[41] < devs[31]
    report(9, ok, "max deviation " + ", ".join(f"N={N}: {v:.1e}" for N, v in devs.items()))


def test_criterion_10_landen_and_normalization():
    worst_l = worst_n = 0.0
    for N in (3, 5, 7, 9):
        for s in (0.3, 1.0, SQRT5):
            worst_l = max(worst_l, abs(kernels.mfunc(N, s, 0, 0) - kernels.mfunc_origin_landen(N, s)))
            for n in range(min(5, N - 1) + 1):
                a = states.normalization_sum(N, n, s)
                b = states.normalization_closed_form(N, n, s)
                worst_n = max(worst_n, abs(a - b) / max(1.0, a))
    ok = worst_l < 1e-11 and worst_n < 1e-11
    report(10, ok, f"Landen two-form {worst_l:.1e}, N_n^-2 routes {worst_n:.1e} (tol 1e-11)")


if __name__ == "__main__":
    import sys

    failed = 0
    for name, fn in sorted(globals().items()):
        if name.startswith("test_criterion_"):
            try:
                fn()
            except AssertionError:
                failed += 1
    sys.exit(1 if failed else 0)
