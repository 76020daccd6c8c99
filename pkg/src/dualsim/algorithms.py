"""Single-query search and SAT by duality parallelism.

Both algorithms run the same 1-level 2-path program on the uniform
superposition: the upper path is left alone, the lower path gets the query
that flips every *unmarked* amplitude.  Recombination cancels all unmarked
components and leaves ``1/sqrt(N)`` on each marked one.

Assignments map to basis indices with variable 1 on the most significant
bit, so ``x1=1, x2=0`` is index ``0b10 = 2`` for two variables.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .amplitude import StateVector, basis_state, check_capacity, norm_sq
from .engine import run_program, two_path_program
from .errors import DimensionError, ParseError
from .gates import FLIP_MARKED, FLIP_UNMARKED, Circuit, Oracle, walsh_hadamard
from .measurement import DEFAULT_SEED, MeasurementOutcome, MeasurementPolicy, Model, measure

EXACT_TOL = 1e-10
EMPTY_NORM = 1e-12
MODEL1_RETRY_CAP = 64


@dataclass(frozen=True)
class CnfFormula:
    n_vars: int
    clauses: tuple

    def __post_init__(self):
        clauses = tuple(tuple(int(l) for l in c) for c in self.clauses)
        object.__setattr__(self, "clauses", clauses)
        if self.n_vars < 0:
            raise ValueError("variable count must be non-negative")
        for c in clauses:
            if not c:
                raise ValueError("empty clause")
            for lit in c:
                if lit == 0 or abs(lit) > self.n_vars:
                    raise ValueError(f"literal {lit} outside 1..{self.n_vars}")

    def evaluate(self, assignment) -> bool:
        """``assignment[k]`` is the truth value of variable ``k + 1``."""
        return all(any(assignment[abs(l) - 1] == (l > 0) for l in c) for c in self.clauses)


def parse_dimacs(text: str) -> CnfFormula:
    header = None
    literals: list = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("c") or line.startswith("%"):
            continue
        if line.startswith("p"):
            if header is not None:
                raise ParseError("second problem line", lineno)
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise ParseError(f"malformed header {line!r}, expected 'p cnf <vars> <clauses>'", lineno)
            try:
                header = (int(parts[2]), int(parts[3]))
            except ValueError:
                raise ParseError(f"non-integer counts in header {line!r}", lineno) from None
            if header[0] < 0 or header[1] < 0:
                raise ParseError("negative counts in header", lineno)
            continue
        if header is None:
            raise ParseError("clause data before the 'p cnf' header", lineno)
        try:
            nums = [int(tok) for tok in line.split()]
        except ValueError:
            raise ParseError(f"non-integer literal in {line!r}", lineno) from None
        for lit in nums:
            if abs(lit) > header[0]:
                raise ParseError(f"literal {lit} exceeds declared {header[0]} variables", lineno)
        literals.extend((lit, lineno) for lit in nums)
    if header is None:
        raise ParseError("missing 'p cnf' header")

    clauses, current = [], []
    for lit, lineno in literals:
        if lit == 0:
            if not current:
                raise ParseError("empty clause", lineno)
            clauses.append(tuple(current))
            current = []
        else:
            current.append(lit)
    if current:
        clauses.append(tuple(current))
    if len(clauses) != header[1]:
        raise ParseError(f"header declares {header[1]} clauses, found {len(clauses)}")
    return CnfFormula(header[0], tuple(clauses))


def to_dimacs(f: CnfFormula) -> str:
    lines = [f"p cnf {f.n_vars} {len(f.clauses)}"]
    lines += [" ".join(map(str, c)) + " 0" for c in f.clauses]
    return "\n".join(lines) + "\n"


def brute_force_solutions(f: CnfFormula) -> set:
    """Exhaustive truth-table evaluation, one assignment at a time."""
    if f.n_vars > 26:
        raise DimensionError(f"brute force limited to 26 variables, got {f.n_vars}")
    sols = set()
    for index, bits in enumerate(itertools.product((False, True), repeat=f.n_vars)):
        if f.evaluate(bits):
            sols.add(index)
    return sols


def satisfying_mask(f: CnfFormula) -> np.ndarray:
    """Clause predicate evaluated on every basis index at once."""
    check_capacity(f.n_vars)
    n = f.n_vars
    idx = np.arange(2**n, dtype=np.int64)
    ok = np.ones(2**n, dtype=bool)
    for clause in f.clauses:
        sat = np.zeros(2**n, dtype=bool)
        for lit in clause:
            bit = ((idx >> (n - abs(lit))) & 1).astype(bool)
            sat |= bit if lit > 0 else ~bit
        ok &= sat
    return ok


def format_assignment(index: int, n: int) -> str:
    return format(index, f"0{n}b") if n else ""


@dataclass(frozen=True)
class SearchResult:
    final_state: StateVector
    measurement: MeasurementOutcome
    queries_used: int


def search_program(n: int, oracle: Oracle):
    prep = walsh_hadamard(n)
    return two_path_program(Circuit(n), Circuit(n, (oracle,)), prepare=prep)


def single_query_search(
    n: int, tau: int, policy: MeasurementPolicy | None = None, seed: int = DEFAULT_SEED
) -> SearchResult:
    if n < 1:
        raise DimensionError("search needs at least one dubit")
    if not 0 <= tau < 2**n:
        raise DimensionError(f"marked index {tau} out of range for {n} dubits")
    policy = policy or MeasurementPolicy()
    prog = search_program(n, Oracle.from_marked(n, {tau}, FLIP_UNMARKED))
    final = run_program(basis_state(n, 0), prog)

    amps = final.amplitudes.copy()
    expected = 2.0 ** (-n / 2)
    if abs(amps[tau] - expected) >= EXACT_TOL:
        raise AssertionError(f"marked amplitude {amps[tau]} != {expected}")
    amps[tau] = 0
    if np.max(np.abs(amps)) >= EXACT_TOL:
        raise AssertionError("unmarked amplitudes did not cancel")

    return SearchResult(final, measure(final, policy, seed), prog.count_queries())


def duality_sat_state(f: CnfFormula) -> StateVector:
    n = f.n_vars
    if n < 1:
        raise DimensionError("the duality register needs at least one variable")
    oracle = Oracle.from_mask(satisfying_mask(f), FLIP_UNMARKED, label="SAT")
    return run_program(basis_state(n, 0), search_program(n, oracle))


def deletion_pass(state: StateVector, tau: int) -> StateVector:
    """Divide, flip ``tau`` on the lower path only, recombine: removes ``tau``."""
    n = state.n_dubits
    oracle = Oracle.from_marked(n, {tau}, FLIP_MARKED)
    return run_program(state, two_path_program(Circuit(n), Circuit(n, (oracle,))))


@dataclass(frozen=True)
class EnumerationResult:
    solutions: tuple
    passes: int
    satisfiable: bool
    complete: bool = True
    states: tuple = field(default=(), repr=False)


def enumerate_solutions(
    f: CnfFormula,
    policy: MeasurementPolicy | None = None,
    seed: int = DEFAULT_SEED,
    retry_cap: int = MODEL1_RETRY_CAP,
    record_states: bool = False,
) -> EnumerationResult:
    """Measure, delete the found solution, repeat until the wave runs dry.

    Stopping rule per model: MODEL_2 stops once the wave norm vanishes;
    MODEL_3 at the first no-click; MODEL_1 after ``retry_cap`` consecutive
    no-clicks.  ``complete`` is False if the loop stopped while solution
    weight remained in the wave.
    """
    policy = policy or MeasurementPolicy()
    rng = np.random.default_rng(seed)
    state = duality_sat_state(f)
    states = [state] if record_states else []
    found: list = []
    passes = 0
    misses = 0
    while True:
        if policy.model is Model.MODEL_2 and norm_sq(state) < EMPTY_NORM:
            break
        result = measure(state, policy, int(rng.integers(2**63)))
        if not result.clicked:
            misses += 1
            if policy.model is Model.MODEL_1 and misses < retry_cap:
                continue
            break
        misses = 0
        tau = result.outcome
        if tau in found:
            # defensive: deleted components are exactly zero and cannot click
            raise AssertionError(f"solution {tau} re-measured after deletion")
        found.append(tau)
        state = deletion_pass(state, tau)
        passes += 1
        if record_states:
            states.append(state)
    complete = norm_sq(state) < EMPTY_NORM
    return EnumerationResult(tuple(found), passes, bool(found), complete, tuple(states))
