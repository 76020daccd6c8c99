"""Read-out of sub-normalized waves under three efficiency models.

* ``MODEL_1``: Born rule on the raw amplitudes.  Outcome ``i`` clicks with
  probability ``|c_i|**2``; the missing weight ``1 - norm**2`` is a no-click.
* ``MODEL_2``: a click always comes, on the renormalized distribution, but
  the detector waits ``t0 / norm**2`` on average.
* ``MODEL_3``: amplitudes below ``epsilon`` in magnitude are invisible; if
  anything survives, a click on the renormalized survivors comes in ``t0``.

Sampling uses numpy's ``PCG64`` bit generator seeded through
``numpy.random.default_rng(seed)``, one fresh stream per call: a single
uniform draw is inverted against the cumulative distribution laid out in
ascending basis order with the no-click mass last.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .amplitude import NORM_TOL, as_state

DEFAULT_SEED = 20240229


class Model(enum.IntEnum):
    MODEL_1 = 1
    MODEL_2 = 2
    MODEL_3 = 3


@dataclass(frozen=True)
class MeasurementPolicy:
    model: Model = Model.MODEL_1
    epsilon: float = 0.0
    t0: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "model", Model(self.model))
        if not 0.0 <= self.epsilon < 1.0:
            raise ValueError(f"epsilon must lie in [0, 1), got {self.epsilon}")
        if not self.t0 > 0.0:
            raise ValueError(f"t0 must be positive, got {self.t0}")


@dataclass(frozen=True)
class MeasurementOutcome:
    clicked: bool
    outcome: int | None
    time_cost: float

    def __post_init__(self):
        if self.clicked != (self.outcome is not None):
            raise ValueError("an outcome index is present exactly when the detector clicked")


@dataclass(frozen=True)
class OutcomeDistribution:
    indices: np.ndarray
    probabilities: np.ndarray
    no_click_probability: float
    expected_time: float

    @property
    def click_probabilities(self) -> dict:
        return {int(i): float(p) for i, p in zip(self.indices, self.probabilities)}

    @property
    def click_probability(self) -> float:
        return float(np.sum(self.probabilities))


def _distribution(idx, weights, no_click, expected_time):
    keep = weights > 0
    return OutcomeDistribution(idx[keep], weights[keep], float(no_click), float(expected_time))


def outcome_distribution(state, policy: MeasurementPolicy) -> OutcomeDistribution:
    state = as_state(state)
    probs = state.probabilities()
    idx = np.arange(probs.size)
    nsq = float(np.sum(probs))
    if nsq > 1.0 + NORM_TOL:
        raise ValueError(f"squared norm {nsq} exceeds 1")

    if policy.model is Model.MODEL_1:
        return _distribution(idx, probs, max(0.0, 1.0 - nsq), policy.t0)

    if policy.model is Model.MODEL_2:
        if nsq == 0.0:
            return _distribution(idx, probs, 1.0, math.inf)
        return _distribution(idx, probs / nsq, 0.0, policy.t0 / nsq)

    mags = np.abs(state.amplitudes)
    survivors = np.where((mags >= policy.epsilon) & (mags > 0), probs, 0.0)
    total = float(np.sum(survivors))
    if total == 0.0:
        return _distribution(idx, survivors, 1.0, policy.t0)
    return _distribution(idx, survivors / total, 0.0, policy.t0)


def _draw(dist: OutcomeDistribution, u: np.ndarray) -> np.ndarray:
    """Map uniforms to outcome indices; -1 marks a no-click."""
    out = np.full(u.shape, -1, dtype=np.int64)
    if dist.indices.size == 0:
        return out
    cdf = np.cumsum(dist.probabilities)
    if dist.no_click_probability == 0.0:
        cdf[-1] = 1.0
    pos = np.searchsorted(cdf, u, side="right")
    hit = pos < cdf.size
    out[hit] = dist.indices[pos[hit]]
    return out


def measure(state, policy: MeasurementPolicy, seed: int = DEFAULT_SEED) -> MeasurementOutcome:
    dist = outcome_distribution(state, policy)
    u = np.random.default_rng(seed).random(1)
    k = int(_draw(dist, u)[0])
    if k < 0:
        return MeasurementOutcome(False, None, dist.expected_time)
    return MeasurementOutcome(True, k, dist.expected_time)


def sample(state, policy: MeasurementPolicy, shots: int, seed: int = DEFAULT_SEED) -> np.ndarray:
    """``shots`` independent read-outs from one seeded stream; -1 = no click."""
    dist = outcome_distribution(state, policy)
    u = np.random.default_rng(seed).random(shots)
    return _draw(dist, u)
