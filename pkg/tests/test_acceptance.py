"""Acceptance battery.

Every check prints one ``criterion k: PASS|FAIL`` line (collected again in
the terminal summary) and then asserts at the stated tolerance.
"""
import math
import re
import subprocess
import sys
import time
from pathlib import Path

import numpy as np
import pytest

from dualsim import (
    CnfFormula,
    MeasurementPolicy,
    Model,
    Oracle,
    SubWave,
    basis_state,
    brute_force_solutions,
    detection_intensity,
    divide,
    duality_sat_state,
    effective_operator,
    enumerate_solutions,
    grouped_divider,
    norm_sq,
    outcome_distribution,
    run_program,
    sample,
    single_query_search,
)
from dualsim.gates import apply_circuit
from dualsim.optics import cnot_construction, mach_zehnder
from dualsim.verify import (
    identical_branch_program,
    random_circuit,
    random_program,
    random_unitary,
    two_path_operator,
)

ROOT = Path(__file__).resolve().parent.parent
DATA = ROOT / "demos" / "data"
CNOT = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]])


def random_cnf(rng, max_vars=10, max_clauses=30):
    n = int(rng.integers(1, max_vars + 1))
    clauses = []
    for _ in range(int(rng.integers(0, max_clauses + 1))):
        width = int(rng.integers(1, min(3, n) + 1))
        vars_ = rng.choice(n, size=width, replace=False) + 1
        signs = rng.choice([-1, 1], size=width)
        clauses.append(tuple(int(v * s) for v, s in zip(vars_, signs)))
    return CnfFormula(n, tuple(clauses))


@pytest.fixture(scope="module")
def cnf_corpus():
    rng = np.random.default_rng(2024)
    return [random_cnf(rng) for _ in range(200)]


def test_criterion_01_single_query_exact(monkeypatch, criterion):
    calls = []
    real = Oracle.apply
    monkeypatch.setattr(Oracle, "apply", lambda self, a: calls.append(1) or real(self, a))
    rng = np.random.default_rng(1)
    worst_marked = worst_other = 0.0
    bad_queries = 0
    t = time.perf_counter()
    for n in range(1, 11):
        for tau in rng.integers(0, 2**n, size=20):
            calls.clear()
            res = single_query_search(n, int(tau))
            amps = res.final_state.amplitudes.copy()
            worst_marked = max(worst_marked, abs(amps[tau] - 2 ** (-n / 2)))
            amps[tau] = 0
            worst_other = max(worst_other, float(np.max(np.abs(amps))))
            bad_queries += len(calls) != 1 or res.queries_used != 1
    elapsed = time.perf_counter() - t
    ok = worst_marked < 1e-10 and worst_other < 1e-10 and bad_queries == 0 and elapsed < 5
    criterion(
        1,
        ok,
        f"search exact: marked err {worst_marked:.1e}, off err {worst_other:.1e}, "
        f"{bad_queries} runs with != 1 query, {elapsed:.2f}s",
    )
    assert ok


def test_criterion_02_sat_state(cnf_corpus, criterion):
    t = time.perf_counter()
    support_bad = 0
    amp_err = norm_err = 0.0
    for f in cnf_corpus:
        s = duality_sat_state(f)
        sols = brute_force_solutions(f)
        big = 2**f.n_vars
        support = set(np.flatnonzero(np.abs(s.amplitudes) > 0.5 / math.sqrt(big)).tolist())
        support_bad += support != sols
        others = np.delete(s.amplitudes, sorted(sols)) if sols else s.amplitudes
        if others.size:
            amp_err = max(amp_err, float(np.max(np.abs(others))))
        if sols:
            amp_err = max(amp_err, float(np.max(np.abs(s.amplitudes[sorted(sols)] - 1 / math.sqrt(big)))))
        norm_err = max(norm_err, abs(norm_sq(s) - len(sols) / big))
    elapsed = time.perf_counter() - t
    ok = support_bad == 0 and amp_err < 1e-10 and norm_err < 1e-9 and elapsed < 30
    criterion(
        2,
        ok,
        f"SAT state: {support_bad}/200 support mismatches, amp err {amp_err:.1e}, "
        f"norm err {norm_err:.1e}, {elapsed:.2f}s",
    )
    assert ok


def test_criterion_03_deletion_enumeration(cnf_corpus, criterion):
    mismatches = 0
    zero_err = other_err = 0.0
    policy = MeasurementPolicy(Model.MODEL_2)
    for k, f in enumerate(cnf_corpus):
        res = enumerate_solutions(f, policy, seed=k, record_states=True)
        mismatches += set(res.solutions) != brute_force_solutions(f)
        for tau, before, after in zip(res.solutions, res.states, res.states[1:]):
            zero_err = max(zero_err, abs(after[tau]))
            diff = after.amplitudes - before.amplitudes
            diff[tau] = 0
            other_err = max(other_err, float(np.max(np.abs(diff))))
    ok = mismatches == 0 and zero_err < 1e-12 and other_err < 1e-12
    criterion(
        3,
        ok,
        f"MODEL_2 enumeration: {mismatches}/200 set mismatches, deleted residue {zero_err:.1e}, "
        f"collateral change {other_err:.1e}",
    )
    assert ok


def test_criterion_04_lcu_law(criterion):
    rng = np.random.default_rng(4)
    worst = 0.0
    for _ in range(100):
        n = int(rng.integers(1, 7))
        prog = random_program(n, int(rng.integers(1, 4)), rng)
        op = effective_operator(prog)
        for i in range(2**n):
            col = run_program(basis_state(n, i), prog).amplitudes
            worst = max(worst, float(np.max(np.abs(col - op[:, i]))))
    ok = worst < 1e-10
    criterion(4, ok, f"run_program vs effective operator on all basis inputs: max err {worst:.1e}")
    assert ok


def _unitary_pairs():
    rng = np.random.default_rng(44)
    for _ in range(100):
        dim = 2 ** int(rng.integers(1, 3))
        yield random_unitary(dim, rng), random_unitary(dim, rng)


def test_criterion_04_gram_identity_as_stated(criterion):
    """M^dag M against (2I + U1 U2^dag + U2 U1^dag)/4, taken literally.

    This form is not an identity: expanding M^dag M gives the cross terms
    U1^dag U2 + U2^dag U1, while U1 U2^dag + U2 U1^dag belongs to M M^dag.
    The two coincide for commuting pairs but not for Haar-random ones, so
    this check is kept literal and fails.
    """
    worst = 0.0
    for u1, u2 in _unitary_pairs():
        m = two_path_operator(u1, u2)
        stated = (2 * np.eye(len(u1)) + u1 @ u2.conj().T + u2 @ u1.conj().T) / 4
        worst = max(worst, float(np.max(np.abs(m.conj().T @ m - stated))))
    ok = worst < 1e-12
    criterion(4, ok, f"M^dag M = (2I + U1 U2^dag + U2 U1^dag)/4 as stated: max err {worst:.2e}")
    assert ok


def test_criterion_04_gram_identities_corrected(criterion):
    worst_left = worst_right = 0.0
    for u1, u2 in _unitary_pairs():
        m = two_path_operator(u1, u2)
        eye = np.eye(len(u1))
        left = (2 * eye + u1.conj().T @ u2 + u2.conj().T @ u1) / 4
        right = (2 * eye + u1 @ u2.conj().T + u2 @ u1.conj().T) / 4
        worst_left = max(worst_left, float(np.max(np.abs(m.conj().T @ m - left))))
        worst_right = max(worst_right, float(np.max(np.abs(m @ m.conj().T - right))))
    ok = worst_left < 1e-12 and worst_right < 1e-12
    criterion(
        4,
        ok,
        f"corrected forms M^dag M = (2I + U1^dag U2 + U2^dag U1)/4 ({worst_left:.1e}), "
        f"M M^dag = (2I + U1 U2^dag + U2 U1^dag)/4 ({worst_right:.1e})",
    )
    assert ok


def test_criterion_05_mach_zehnder(criterion):
    worst = 0.0
    for lam in np.linspace(0, 2 * math.pi, 100):
        f, _ = mach_zehnder(lam)
        target = abs(1j * (1 + np.exp(1j * lam)) / 2) ** 2
        worst = max(worst, abs(abs(f) ** 2 - target), abs(abs(f) ** 2 - math.cos(lam / 2) ** 2))
    landmarks = [abs(mach_zehnder(lam)[0]) ** 2 for lam in (0, math.pi, 2 * math.pi)]
    land_err = max(abs(a - b) for a, b in zip(landmarks, (1, 0, 1)))
    ok = worst < 1e-12 and land_err < 1e-12
    criterion(5, ok, f"MZ fringe err {worst:.1e} over 100 phases; 0, pi, 2pi -> " + ", ".join(f"{x:.3g}" for x in landmarks))
    assert ok


def test_criterion_06_optical_cnot(criterion):
    m = cnot_construction()
    integral = bool(np.all(m.imag == 0) and np.all(m.real == np.round(m.real)))
    exact = integral and np.array_equal(m.real.astype(int), CNOT)
    involution = np.array_equal(m @ m, np.eye(4))
    ok = exact and involution
    criterion(6, ok, f"optical CNOT exact={exact}, squares to identity={involution}")
    assert ok


def test_criterion_07_measurement_models(criterion):
    t = time.perf_counter()
    state = single_query_search(2, 2).final_state
    shots = 100_000
    draws1 = sample(state, MeasurementPolicy(Model.MODEL_1), shots, seed=7)
    rate = float(np.mean(draws1 >= 0))
    t0 = 1.5
    pol2 = MeasurementPolicy(Model.MODEL_2, t0=t0)
    draws2 = sample(state, pol2, shots, seed=8)
    time2 = outcome_distribution(state, pol2).expected_time
    pol3 = MeasurementPolicy(Model.MODEL_3, epsilon=0.1, t0=t0)
    draws3 = sample(state, pol3, shots, seed=9)
    time3 = outcome_distribution(state, pol3).expected_time
    elapsed = time.perf_counter() - t
    ok = (
        abs(rate - 0.25) <= 0.005
        and bool(np.all(draws2 == 2))
        and abs(time2 - 4 * t0) < 1e-12
        and bool(np.all(draws3 == 2))
        and time3 == t0
        and elapsed < 10
    )
    criterion(
        7,
        ok,
        f"MODEL_1 click rate {rate:.4f}; MODEL_2 tau {np.mean(draws2 == 2):.0%} at {time2 / t0:.12g} t0; "
        f"MODEL_3 tau {np.mean(draws3 == 2):.0%} at {time3 / t0:g} t0; {elapsed:.2f}s",
    )
    assert ok


def test_criterion_08_interference(criterion):
    scalar = basis_state(0, 0)
    waves = divide(scalar, grouped_divider([(1 / 3, 1), (2 / 3, 2)]))
    single = detection_intensity(waves[:1], 0)
    pair = detection_intensity(waves[1:], 0)
    total = detection_intensity(waves, 0)
    split_err = max(abs(single - 1 / 3), abs(pair - 2 / 3), abs(total - 1))

    rng = np.random.default_rng(8)
    cross = 0.0
    for _ in range(100):
        n = int(rng.integers(1, 4))
        a, b = (apply_circuit(basis_state(n, 0), random_circuit(n, 8, rng)) for _ in range(2))
        wa = SubWave(math.sqrt(0.5), a, rng.uniform(0, 2 * math.pi), "chi1")
        wb = SubWave(math.sqrt(0.5), b, rng.uniform(0, 2 * math.pi), "chi2")
        for i in range(2**n):
            both = detection_intensity([wa, wb], i)
            cross = max(cross, abs(both - detection_intensity([wa], i) - detection_intensity([wb], i)))
    ok = split_err < 1e-12 and cross < 1e-12
    criterion(8, ok, f"three-slit 1/3 + 2/3 err {split_err:.1e}; orthogonal-tag cross term {cross:.1e}")
    assert ok


def test_criterion_09_reduction(criterion):
    rng = np.random.default_rng(9)
    worst = 0.0
    for _ in range(50):
        n = int(rng.integers(1, 7))
        c = random_circuit(n, int(rng.integers(0, 40)), rng)
        prog = identical_branch_program(c, int(rng.integers(1, 4)), rng)
        v = rng.standard_normal(2**n) + 1j * rng.standard_normal(2**n)
        s = v / np.linalg.norm(v)
        worst = max(worst, float(np.max(np.abs(run_program(s, prog).amplitudes - apply_circuit(s, c).amplitudes))))
    ok = worst <= 1e-12
    criterion(9, ok, f"identical-branch programs vs plain circuit: max err {worst:.1e}")
    assert ok


CLI_RUNS = [
    ["run", str(DATA / "search_n2_tau2.dsp"), "--seed", "3"],
    ["run", str(DATA / "search_n2_tau2.dsp"), "--model", "3", "--epsilon", "0.1", "--threads", "4"],
    ["search", "--n", "5", "--tau", "17", "--seed", "11"],
    ["sat", str(DATA / "or2.cnf"), "--enumerate", "--seed", "12"],
    ["sat", str(DATA / "or2.cnf"), "--model", "2"],
    ["mz-sweep", "--points", "9"],
    ["verify", "--suite", "all", "--seed", "1"],
]


def test_criterion_10_cli_determinism(criterion):
    def once(argv):
        res = subprocess.run([sys.executable, "-m", "dualsim", *argv], capture_output=True, text=True)
        return res.returncode, re.sub(r"^wall_time_s: .*$", "", res.stdout, flags=re.M)

    differing = [" ".join(a[:2]) for a in CLI_RUNS if once(a) != once(a)]
    ok = not differing
    criterion(10, ok, f"{len(CLI_RUNS)} CLI invocations rerun byte-identical (excluding wall time); differing: {differing or 'none'}")
    assert ok
