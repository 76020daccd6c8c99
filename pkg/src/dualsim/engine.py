"""Wave division, per-path evolution and coherent recombination.

A duality program is a sequence of circuit segments and dividers.  A divider
splits the current wave into weighted sub-waves, runs one sub-program per
path and recombines them, so a one-level program with paths ``U_i`` and
coefficients ``p_i`` maps ``psi`` to ``sum_i p_i U_i psi``.

Coherence tags stand in for orthogonal environment markers on a path.
Sub-waves sharing a tag interfere; distinct tags add as intensities and can
only be read out through :func:`detection_intensity`.
"""
from __future__ import annotations

import cmath
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import count
from typing import Sequence, Union

import numpy as np

from .amplitude import NORM_TOL, StateVector, as_state, check_capacity
from .errors import CoherenceError, DimensionError, NormalizationError
from .gates import MATRIX_MAX_DUBITS, Circuit, circuit_matrix, run_steps

TWO_PI = 2 * math.pi
DEFAULT_TAG = "coherent"

_fresh = count()


def fresh_tag() -> str:
    return f"class-{next(_fresh)}"


@dataclass(frozen=True)
class SubWave:
    coeff: float
    state: StateVector
    spatial_phase: float = 0.0
    tag: object = DEFAULT_TAG

    def __post_init__(self):
        if self.coeff < 0:
            raise ValueError(f"sub-wave coefficient {self.coeff} is negative")
        object.__setattr__(self, "spatial_phase", float(self.spatial_phase) % TWO_PI)
        object.__setattr__(self, "state", as_state(self.state))

    @property
    def factor(self) -> complex:
        return self.coeff * cmath.exp(1j * self.spatial_phase)


@dataclass(frozen=True)
class DividerSpec:
    """Branch coefficients and coherence tags of a wave divider.

    Normalization: with ``w_g = (sum of coefficients tagged g) ** 2``, the
    ``w_g`` sum to one.  In-phase recombination then reproduces the full
    intensity.
    """

    branches: tuple

    def __post_init__(self):
        branches = tuple((float(c), t) for c, t in self.branches)
        object.__setattr__(self, "branches", branches)
        if len(branches) < 2:
            raise ValueError("a divider needs at least two branches")
        if any(c < 0 or not math.isfinite(c) for c, _ in branches):
            raise ValueError("divider coefficients must be finite and non-negative")
        total = sum(self.class_weights().values())
        if abs(total - 1.0) > NORM_TOL:
            raise NormalizationError(
                f"divider normalization violated: sum over coherence classes of "
                f"(sum of coefficients)^2 is {total!r}, expected 1"
            )

    @property
    def coeffs(self) -> tuple:
        return tuple(c for c, _ in self.branches)

    @property
    def tags(self) -> tuple:
        return tuple(t for _, t in self.branches)

    def __len__(self):
        return len(self.branches)

    def class_weights(self) -> dict:
        sums: dict = {}
        for c, t in self.branches:
            sums[t] = sums.get(t, 0.0) + c
        return {t: s * s for t, s in sums.items()}

    @property
    def coherent(self) -> bool:
        return len(set(self.tags)) == 1


def symmetric_divider(d: int) -> DividerSpec:
    if d < 2:
        raise ValueError(f"symmetric divider needs d >= 2, got {d}")
    return DividerSpec(tuple((1.0 / d, DEFAULT_TAG) for _ in range(d)))


def weighted_divider(coeffs: Sequence[float]) -> DividerSpec:
    """Single coherence class with arbitrary non-negative coefficients."""
    return DividerSpec(tuple((c, DEFAULT_TAG) for c in coeffs))


def grouped_divider(groups: Sequence[tuple]) -> DividerSpec:
    """Divider made of mutually distinguishable path groups.

    ``groups`` holds ``(weight, path_count)`` pairs.  Group ``g`` gets
    ``k_g`` paths of coefficient ``sqrt(w_g) / k_g`` under a fresh tag, so in
    phase its paths deliver intensity ``w_g``.
    """
    groups = [(float(w), int(k)) for w, k in groups]
    if any(k < 1 for _, k in groups):
        raise ValueError("every group needs at least one path")
    if any(w < 0 for w, _ in groups):
        raise ValueError("group weights must be non-negative")
    total = sum(w for w, _ in groups)
    if abs(total - 1.0) > NORM_TOL:
        raise NormalizationError(f"group weights sum to {total!r}, expected 1")
    if len(groups) == 1:
        tags = [DEFAULT_TAG]
    else:
        tags = [fresh_tag() for _ in groups]
    branches = []
    for (w, k), tag in zip(groups, tags):
        branches.extend([(math.sqrt(w) / k, tag)] * k)
    return DividerSpec(tuple(branches))


def divide(state, spec: DividerSpec) -> list:
    state = as_state(state)
    return [SubWave(c, state, 0.0, t) for c, t in spec.branches]


def _check_dims(subwaves) -> int:
    if not subwaves:
        raise ValueError("no sub-waves given")
    n = subwaves[0].state.n_dubits
    if any(w.state.n_dubits != n for w in subwaves):
        raise DimensionError("sub-waves carry registers of different sizes")
    return n


def combine(subwaves: Sequence[SubWave]) -> StateVector:
    _check_dims(subwaves)
    tags = {w.tag for w in subwaves}
    if len(tags) > 1:
        raise CoherenceError(
            "sub-waves carry different coherence tags; distinguishable paths do "
            "not add as amplitudes, use detection_intensity instead"
        )
    amps = _ordered_sum([w.factor * w.state.amplitudes for w in subwaves])
    return StateVector(amps)


def _ordered_sum(arrays):
    total = arrays[0].copy()
    for a in arrays[1:]:
        total += a
    return total


def detection_intensity(subwaves: Sequence[SubWave], outcome: int) -> float:
    """Click intensity at basis ``outcome`` on a shared screen.

    Paths within a coherence class add as amplitudes; distinct classes add
    as intensities (their cross terms vanish).
    """
    n = _check_dims(subwaves)
    if not 0 <= outcome < 2**n:
        raise DimensionError(f"outcome {outcome} out of range for {n} dubits")
    per_class: dict = {}
    for w in subwaves:
        per_class[w.tag] = per_class.get(w.tag, 0j) + w.factor * complex(w.state[outcome])
    return float(sum(abs(a) ** 2 for a in per_class.values()))


# -- programs ---------------------------------------------------------------

@dataclass(frozen=True)
class Divider:
    spec: DividerSpec
    paths: tuple
    phases: tuple = ()

    def __post_init__(self):
        paths = tuple(_as_block(p) for p in self.paths)
        object.__setattr__(self, "paths", paths)
        phases = tuple(float(p) for p in self.phases) or (0.0,) * len(paths)
        object.__setattr__(self, "phases", phases)
        if len(paths) != len(self.spec) or len(phases) != len(paths):
            raise ValueError(
                f"divider has {len(self.spec)} branches but {len(paths)} paths "
                f"and {len(phases)} phases"
            )


Node = Union[Circuit, Divider]


def _as_block(p) -> "Block":
    if isinstance(p, Block):
        return p
    if isinstance(p, (Circuit, Divider)):
        return Block((p,))
    return Block(tuple(p))


@dataclass(frozen=True)
class Block:
    """Sequence of circuit segments and dividers, applied left to right."""

    items: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "items", tuple(self.items))


@dataclass(frozen=True)
class DualityProgram:
    n_dubits: int
    body: Block = field(default_factory=Block)

    def __post_init__(self):
        object.__setattr__(self, "body", _as_block(self.body))
        _validate(self.body, self.n_dubits)

    @classmethod
    def leaf(cls, circuit: Circuit) -> "DualityProgram":
        return cls(circuit.n_dubits, Block((circuit,)))

    def depth(self) -> int:
        return _depth(self.body)

    def count_queries(self) -> int:
        return _count_queries(self.body)


def _validate(block: Block, n: int) -> None:
    for item in block.items:
        if isinstance(item, Circuit):
            if item.n_dubits != n:
                raise DimensionError(f"{item.n_dubits}-dubit segment in a {n}-dubit program")
        elif isinstance(item, Divider):
            for p in item.paths:
                _validate(p, n)
        else:
            raise TypeError(f"unexpected program item {item!r}")


def _depth(block: Block) -> int:
    return max(
        (1 + max(_depth(p) for p in it.paths) for it in block.items if isinstance(it, Divider)),
        default=0,
    )


def _count_queries(block: Block) -> int:
    total = 0
    for it in block.items:
        if isinstance(it, Circuit):
            total += it.count_queries()
        else:
            total += sum(_count_queries(p) for p in it.paths)
    return total


class _Evaluator:
    def __init__(self, n: int, threads: int = 1):
        self.n = n
        self.pool = ThreadPoolExecutor(threads) if threads > 1 else None

    def block(self, amps: np.ndarray, block: Block, nested: bool = False) -> np.ndarray:
        for item in block.items:
            if isinstance(item, Circuit):
                amps = run_steps(amps, self.n, item)
            else:
                amps = self.divider(amps, item, nested)
        return amps

    def divider(self, amps: np.ndarray, node: Divider, nested: bool = False) -> np.ndarray:
        if not node.spec.coherent:
            raise CoherenceError(
                "program divider mixes coherence tags; its output is not a pure "
                "wave (use divide/detection_intensity directly)"
            )
        # only the outermost dividers fan out; a worker waiting on its own
        # pool would deadlock once every thread is blocked on a child
        if self.pool is not None and not nested and len(node.paths) > 1:
            outs = list(self.pool.map(lambda p: self.block(amps, p, True), node.paths))
        else:
            outs = [self.block(amps, p, nested) for p in node.paths]
        factors = [c * cmath.exp(1j * ph) for c, ph in zip(node.spec.coeffs, node.phases)]
        return _ordered_sum([f * o for f, o in zip(factors, outs)])

    def close(self):
        if self.pool is not None:
            self.pool.shutdown()


def run_program(state, prog: DualityProgram, threads: int = 1) -> StateVector:
    """Evaluate ``prog`` on ``state`` depth-first.

    With ``threads > 1`` sibling paths run concurrently; the recombination
    sum is still taken in path order, so the output does not depend on the
    thread count.
    """
    state = as_state(state)
    if state.n_dubits != prog.n_dubits:
        raise DimensionError(f"{prog.n_dubits}-dubit program on a {state.n_dubits}-dubit state")
    ev = _Evaluator(prog.n_dubits, threads)
    try:
        out = ev.block(state.amplitudes, prog.body)
    finally:
        ev.close()
    return StateVector(out)


def _block_matrix(block: Block, n: int) -> np.ndarray:
    m = np.eye(2**n, dtype=np.complex128)
    for item in block.items:
        if isinstance(item, Circuit):
            m = circuit_matrix(item) @ m
        else:
            if not item.spec.coherent:
                raise CoherenceError("effective operator undefined for mixed-tag dividers")
            acc = np.zeros_like(m)
            for c, ph, path in zip(item.spec.coeffs, item.phases, item.paths):
                acc += c * cmath.exp(1j * ph) * _block_matrix(path, n)
            m = acc @ m
    return m


def effective_operator(prog: DualityProgram) -> np.ndarray:
    """Matrix of the linear combination of unitaries that ``prog`` realizes."""
    if prog.n_dubits > MATRIX_MAX_DUBITS:
        raise DimensionError(
            f"effective_operator limited to {MATRIX_MAX_DUBITS} dubits, got {prog.n_dubits}"
        )
    check_capacity(prog.n_dubits)
    return _block_matrix(prog.body, prog.n_dubits)


def max_singular_value(op: np.ndarray) -> float:
    return float(np.linalg.norm(op, 2))


def two_path_program(upper: Circuit, lower: Circuit, prepare: Circuit | None = None) -> DualityProgram:
    """1-level 2-path program: optional preparation, then ``(U + L) / 2``."""
    n = upper.n_dubits
    items = [] if prepare is None else [prepare]
    items.append(Divider(symmetric_divider(2), (Block((upper,)), Block((lower,)))))
    return DualityProgram(n, Block(tuple(items)))
