"""Gate catalog, the marked-set oracle and circuit evaluation.

Gates act on big-endian dubit registers (dubit 0 = most significant bit).
``apply_gate`` works on the ``(2,) * n`` tensor view of the state; the
verification path ``circuit_matrix`` builds each embedded step matrix by
index arithmetic instead, so the two never share code.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence, Union

import numpy as np

from .amplitude import StateVector, as_state, check_capacity
from .errors import DimensionError

UNITARY_TOL = 1e-12
MATRIX_MAX_DUBITS = 10

FLIP_UNMARKED = "flip-unmarked"
FLIP_MARKED = "flip-marked"


@dataclass(frozen=True, eq=False)
class Gate:
    label: str
    matrix: np.ndarray

    def __post_init__(self):
        m = np.array(self.matrix, dtype=np.complex128)
        if m.shape not in ((2, 2), (4, 4)):
            raise DimensionError(f"gate {self.label!r}: matrix shape {m.shape} is not 2x2 or 4x4")
        err = np.max(np.abs(m.conj().T @ m - np.eye(m.shape[0])))
        if err >= UNITARY_TOL:
            raise ValueError(f"gate {self.label!r} is not unitary (max deviation {err:.3g})")
        m.flags.writeable = False
        object.__setattr__(self, "matrix", m)

    @property
    def arity(self) -> int:
        return self.matrix.shape[0].bit_length() - 1

    def on(self, *targets: int) -> "GateInstance":
        return GateInstance(self, tuple(targets))


_S2 = 1 / math.sqrt(2)
_FIXED = {
    "H": [[_S2, _S2], [_S2, -_S2]],
    "X": [[0, 1], [1, 0]],
    "Z": [[1, 0], [0, -1]],
    "CNOT": [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]],
}


def rotation_matrix(theta: float) -> np.ndarray:
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, -s], [s, c]], dtype=np.complex128)


def standard_gate(name: str, params: Sequence[float] = ()) -> Gate:
    """Catalog gate by name: H, X, Z, CNOT, R (angle) or P (phase).

    ``R(theta)`` is the polarization rotation |0> -> cos|0> + sin|1>;
    ``P(lam)`` multiplies the dubit by ``exp(i*lam)``.  The Walsh-Hadamard
    layer is a circuit, see :func:`walsh_hadamard`.
    """
    name = name.upper()
    params = tuple(params)
    if name in _FIXED:
        if params:
            raise ValueError(f"{name} takes no parameters, got {len(params)}")
        return Gate(name, np.array(_FIXED[name], dtype=np.complex128))
    if name in ("R", "P"):
        if len(params) != 1:
            raise ValueError(f"{name} takes exactly one parameter, got {len(params)}")
        (x,) = params
        if name == "R":
            return Gate(f"R({x:g})", rotation_matrix(x))
        return Gate(f"P({x:g})", np.exp(1j * x) * np.eye(2, dtype=np.complex128))
    raise ValueError(f"unknown gate {name!r}")


@dataclass(frozen=True)
class GateInstance:
    gate: Gate
    targets: tuple

    def __post_init__(self):
        object.__setattr__(self, "targets", tuple(int(t) for t in self.targets))
        if len(self.targets) != self.gate.arity:
            raise DimensionError(
                f"{self.gate.label} needs {self.gate.arity} target(s), got {len(self.targets)}"
            )
        if len(set(self.targets)) != len(self.targets):
            raise DimensionError(f"{self.gate.label}: target collision {self.targets}")
        if min(self.targets) < 0:
            raise DimensionError(f"{self.gate.label}: negative target {self.targets}")

    def check(self, n: int) -> None:
        if max(self.targets) >= n:
            raise DimensionError(
                f"{self.gate.label} targets {self.targets} outside a {n}-dubit register"
            )


@dataclass(frozen=True)
class OracleSpec:
    n_dubits: int
    marked: frozenset
    convention: str = FLIP_UNMARKED

    def __post_init__(self):
        object.__setattr__(self, "marked", frozenset(int(i) for i in self.marked))
        if self.convention not in (FLIP_UNMARKED, FLIP_MARKED):
            raise ValueError(f"unknown oracle convention {self.convention!r}")
        if self.n_dubits < 1:
            raise DimensionError("oracle needs a non-empty register")
        if any(not 0 <= i < 2**self.n_dubits for i in self.marked):
            raise DimensionError(f"marked index outside [0, {2**self.n_dubits})")


class Oracle:
    """Diagonal +/-1 query operator, stored as its sign sequence."""

    def __init__(self, signs, label: str = "ORACLE"):
        signs = np.asarray(signs, dtype=np.int8).reshape(-1)
        size = signs.size
        if size < 2 or size & (size - 1):
            raise DimensionError(f"oracle length {size} is not 2**n with n >= 1")
        if not np.all((signs == 1) | (signs == -1)):
            raise ValueError("oracle entries must be +1 or -1")
        signs.flags.writeable = False
        self.signs = signs
        self.label = label
        self.n_dubits = size.bit_length() - 1

    @classmethod
    def from_marked(cls, n: int, marked: Iterable[int], convention: str = FLIP_UNMARKED):
        spec = OracleSpec(n, frozenset(marked), convention)
        hit = np.zeros(2**n, dtype=bool)
        hit[list(spec.marked)] = True
        return cls.from_mask(hit, convention)

    @classmethod
    def from_mask(cls, marked_mask, convention: str = FLIP_UNMARKED, label: str = "ORACLE"):
        mask = np.asarray(marked_mask, dtype=bool)
        if convention == FLIP_UNMARKED:
            signs = np.where(mask, 1, -1)
        elif convention == FLIP_MARKED:
            signs = np.where(mask, -1, 1)
        else:
            raise ValueError(f"unknown oracle convention {convention!r}")
        return cls(signs.astype(np.int8), label)

    def check(self, n: int) -> None:
        if n != self.n_dubits:
            raise DimensionError(f"{self.n_dubits}-dubit oracle in a {n}-dubit register")

    def apply(self, amps: np.ndarray) -> np.ndarray:
        return amps * self.signs

    def matrix(self) -> np.ndarray:
        return np.diag(self.signs.astype(np.complex128))

    def __repr__(self):
        return f"Oracle({self.label}, n_dubits={self.n_dubits})"


def oracle_gate(spec: OracleSpec) -> Oracle:
    return Oracle.from_marked(spec.n_dubits, spec.marked, spec.convention)


Step = Union[GateInstance, Oracle]


@dataclass(frozen=True)
class Circuit:
    n_dubits: int
    steps: tuple = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "steps", tuple(self.steps))
        for step in self.steps:
            step.check(self.n_dubits)

    def __add__(self, other: "Circuit") -> "Circuit":
        if other.n_dubits != self.n_dubits:
            raise DimensionError("cannot concatenate circuits of different widths")
        return Circuit(self.n_dubits, self.steps + other.steps)

    def count_queries(self) -> int:
        return sum(isinstance(s, Oracle) for s in self.steps)


def walsh_hadamard(n: int) -> Circuit:
    """H on every dubit; prepares the uniform superposition from |0...0>."""
    h = standard_gate("H")
    return Circuit(n, [h.on(i) for i in range(n)])


def _apply_instance(amps: np.ndarray, n: int, inst: GateInstance) -> np.ndarray:
    k = inst.gate.arity
    psi = amps.reshape((2,) * n)
    mat = inst.gate.matrix.reshape((2,) * (2 * k))
    out = np.tensordot(mat, psi, axes=(list(range(k, 2 * k)), list(inst.targets)))
    # tensordot puts the gate's output axes first
    out = np.moveaxis(out, list(range(k)), list(inst.targets))
    return np.ascontiguousarray(out).reshape(-1)


def apply_step(amps: np.ndarray, n: int, step: Step) -> np.ndarray:
    step.check(n)
    if isinstance(step, Oracle):
        return step.apply(amps)
    return _apply_instance(amps, n, step)


def apply_gate(state, inst: Step) -> StateVector:
    state = as_state(state)
    return StateVector(apply_step(state.amplitudes, state.n_dubits, inst), check_norm=False)


def run_steps(amps: np.ndarray, n: int, circuit: Circuit) -> np.ndarray:
    if circuit.n_dubits != n:
        raise DimensionError(f"{circuit.n_dubits}-dubit circuit on a {n}-dubit state")
    for step in circuit.steps:
        amps = apply_step(amps, n, step)
    return amps


def apply_circuit(state, circuit: Circuit) -> StateVector:
    state = as_state(state)
    return StateVector(run_steps(state.amplitudes, state.n_dubits, circuit), check_norm=False)


def embed_matrix(inst: GateInstance, n: int) -> np.ndarray:
    """Full 2**n x 2**n matrix of a gate instance, by index arithmetic."""
    inst.check(n)
    dim = 2**n
    idx = np.arange(dim)
    shifts = [n - 1 - t for t in inst.targets]
    sub = np.zeros(dim, dtype=np.int64)
    rest = idx.copy()
    for s in shifts:
        bit = (idx >> s) & 1
        sub = (sub << 1) | bit
        rest &= ~(1 << s)
    same_rest = rest[:, None] == rest[None, :]
    return np.where(same_rest, inst.gate.matrix[sub[:, None], sub[None, :]], 0)


def step_matrix(step: Step, n: int) -> np.ndarray:
    if isinstance(step, Oracle):
        step.check(n)
        return step.matrix()
    return embed_matrix(step, n)


def circuit_matrix(circuit: Circuit) -> np.ndarray:
    n = circuit.n_dubits
    if n > MATRIX_MAX_DUBITS:
        raise DimensionError(f"circuit_matrix limited to {MATRIX_MAX_DUBITS} dubits, got {n}")
    check_capacity(n)
    m = np.eye(2**n, dtype=np.complex128)
    for step in circuit.steps:
        m = step_matrix(step, n) @ m
    return m
