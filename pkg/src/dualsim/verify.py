"""Randomized program generators and the on-demand invariant batteries."""
from __future__ import annotations

import math

import numpy as np

from .amplitude import basis_state
from .engine import (
    Block,
    Divider,
    DualityProgram,
    detection_intensity,
    divide,
    effective_operator,
    grouped_divider,
    run_program,
    symmetric_divider,
    weighted_divider,
)
from .gates import Circuit, Gate, circuit_matrix, standard_gate
from .optics import cnot_construction

LCU_TOL = 1e-10
IDENTITY_TOL = 1e-12


def random_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary via QR of a complex Ginibre matrix."""
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / math.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def random_circuit(n: int, steps: int, rng: np.random.Generator) -> Circuit:
    ops = []
    for _ in range(steps):
        kind = rng.integers(7)
        if n >= 2 and kind == 6:
            c, t = rng.choice(n, size=2, replace=False)
            ops.append(standard_gate("CNOT").on(int(c), int(t)))
        elif n >= 2 and kind == 5:
            a, b = rng.choice(n, size=2, replace=False)
            ops.append(Gate("U4", random_unitary(4, rng)).on(int(a), int(b)))
        else:
            name = ["H", "X", "Z", "R", "P", "U2", "U2"][kind]
            q = int(rng.integers(n))
            if name == "U2":
                ops.append(Gate("U2", random_unitary(2, rng)).on(q))
            elif name in ("R", "P"):
                ops.append(standard_gate(name, [rng.uniform(0, 2 * math.pi)]).on(q))
            else:
                ops.append(standard_gate(name).on(q))
    return Circuit(n, tuple(ops))


def _random_block(n, depth, max_branches, rng, max_steps):
    items = [random_circuit(n, int(rng.integers(0, max_steps + 1)), rng)]
    if depth > 0 and rng.random() < 0.8:
        k = int(rng.integers(2, max_branches + 1))
        spec = weighted_divider(rng.dirichlet(np.ones(k))) if rng.random() < 0.5 else symmetric_divider(k)
        paths = [_random_block(n, depth - 1, max_branches, rng, max_steps) for _ in range(k)]
        phases = rng.uniform(0, 2 * math.pi, size=k) if rng.random() < 0.5 else np.zeros(k)
        items.append(Divider(spec, tuple(paths), tuple(phases)))
        items.append(random_circuit(n, int(rng.integers(0, max_steps + 1)), rng))
    return Block(tuple(items))


def random_program(
    n: int, depth: int, rng: np.random.Generator, max_branches: int = 3, max_steps: int = 6
) -> DualityProgram:
    """Random single-tag program with at most ``depth`` divider levels."""
    return DualityProgram(n, _random_block(n, depth, max_branches, rng, max_steps))


def identical_branch_program(circuit: Circuit, depth: int, rng: np.random.Generator) -> DualityProgram:
    """Program whose every divider carries the same circuit on all paths.

    Splits the circuit into a prefix and suffix around each divider so the
    program evaluates to the circuit itself.
    """

    def build(steps, level):
        if level == 0 or len(steps) < 1:
            return Block((Circuit(circuit.n_dubits, steps),))
        cut = int(rng.integers(0, len(steps) + 1))
        k = int(rng.integers(2, 4))
        spec = weighted_divider(rng.dirichlet(np.ones(k)))
        inner = build(steps[cut:], level - 1)
        return Block((Circuit(circuit.n_dubits, steps[:cut]), Divider(spec, (inner,) * k)))

    return DualityProgram(circuit.n_dubits, build(circuit.steps, depth))


def lcu_max_error(prog: DualityProgram) -> float:
    op = effective_operator(prog)
    worst = 0.0
    for i in range(2**prog.n_dubits):
        col = run_program(basis_state(prog.n_dubits, i), prog).amplitudes
        worst = max(worst, float(np.max(np.abs(col - op[:, i]))))
    return worst


def two_path_operator(u1: np.ndarray, u2: np.ndarray) -> np.ndarray:
    """Effective operator of the symmetric two-path program (U1 + U2)/2."""
    n = u1.shape[0].bit_length() - 1
    paths = tuple(Circuit(n, (Gate("U", u).on(*range(n)),)) for u in (u1, u2))
    return effective_operator(DualityProgram(n, Block((Divider(symmetric_divider(2), paths),))))


def gram_identity_errors(u1: np.ndarray, u2: np.ndarray) -> tuple:
    """Residuals of M^dag M = (2I + U1^dag U2 + U2^dag U1)/4 and
    M M^dag = (2I + U1 U2^dag + U2 U1^dag)/4 for M = (U1 + U2)/2."""
    m = two_path_operator(u1, u2)
    eye = np.eye(m.shape[0])
    left = (2 * eye + u1.conj().T @ u2 + u2.conj().T @ u1) / 4
    right = (2 * eye + u1 @ u2.conj().T + u2 @ u1.conj().T) / 4
    return (
        float(np.max(np.abs(m.conj().T @ m - left))),
        float(np.max(np.abs(m @ m.conj().T - right))),
    )


def suite_optics_cnot(seed: int = 0) -> list:
    m = cnot_construction()
    target = circuit_matrix(Circuit(2, (standard_gate("CNOT").on(0, 1),)))
    return [
        ("CNOT matrix exact", bool(np.array_equal(m, target)), ""),
        ("CNOT squares to identity", bool(np.array_equal(m @ m, np.eye(4))), ""),
    ]


def suite_lcu(seed: int = 0, programs: int = 20, pairs: int = 20) -> list:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(programs):
        n = int(rng.integers(1, 5))
        worst = max(worst, lcu_max_error(random_program(n, int(rng.integers(1, 4)), rng)))
    worst_id = 0.0
    for _ in range(pairs):
        dim = 2 ** int(rng.integers(1, 3))
        errs = gram_identity_errors(random_unitary(dim, rng), random_unitary(dim, rng))
        worst_id = max(worst_id, *errs)
    return [
        ("run_program matches effective operator", worst < LCU_TOL, f"max err {worst:.3e}"),
        ("(U1+U2)/2 Gram identities", worst_id < IDENTITY_TOL, f"max err {worst_id:.3e}"),
    ]


def suite_dividers(seed: int = 0) -> list:
    results = []
    rng = np.random.default_rng(seed)
    ok = all(abs(sum(symmetric_divider(d).class_weights().values()) - 1) < 1e-12 for d in range(2, 12))
    results.append(("symmetric dividers normalized", ok, ""))

    three_slit = grouped_divider([(1 / 3, 1), (2 / 3, 2)])
    want = (math.sqrt(1 / 3), 0.5 * math.sqrt(2 / 3), 0.5 * math.sqrt(2 / 3))
    ok = max(abs(a - b) for a, b in zip(three_slit.coeffs, want)) < 1e-15
    results.append(("three-slit grouped coefficients", ok, ""))

    worst = 0.0
    for _ in range(50):
        k = int(rng.integers(1, 5))
        w = rng.dirichlet(np.ones(k))
        groups = [(float(x), int(rng.integers(1, 4))) for x in w]
        if sum(g for _, g in groups) < 2:
            groups[0] = (groups[0][0], 2)
        spec = grouped_divider(groups)
        waves = divide(basis_state(0, 0), spec)
        worst = max(worst, abs(detection_intensity(waves, 0) - 1.0))
    results.append(("grouped dividers deliver unit in-phase intensity", worst < 1e-9, f"max err {worst:.3e}"))
    return results


SUITES = {
    "optics-cnot": suite_optics_cnot,
    "lcu": suite_lcu,
    "dividers": suite_dividers,
}


def run_suites(name: str, seed: int = 0) -> list:
    names = list(SUITES) if name == "all" else [name]
    out = []
    for n in names:
        out.extend(SUITES[n](seed))
    return out
