"""Exact linear maps for the photonic duality computer.

Photons are labelled by a symbolic frequency, a path and a polarization.
Distinct dubits use distinct frequencies, so photons are treated as
distinguishable and a ket is simply a sorted tuple of mode labels.  No
identical-particle statistics, no losses: every conversion is taken as
100% efficient.

Component conventions:

* ``BS(theta)`` with inputs ``a, b`` and outputs ``c, d``:
  ``|a> -> i cos(theta)|c> + sin(theta)|d>``,
  ``|b> -> sin(theta)|c> + i cos(theta)|d>``.
* ``PBS``: H leaves on the reflected port, V on the transmitted port.
* ``SFG1`` (type I): ``|H1 H2> -> |V12>``, ``|V1 V2> -> |H12>``.
* ``SFG2`` (type II): ``|H1 V2> -> |H12>``, ``|V1 H2> -> |V12>``.
* ``SPDC1``: ``|H12> -> |V1 V2>``, ``|V12> -> |H1 H2>``.
* ``SPDC2``: ``|H12> -> |H1 V2>``, ``|V12> -> |V1 H2>``.

"1" and "2" refer to the ordered frequency ports given when the component
is built, so swapping the port order models the crystal turned around.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

from .errors import OpticsError

H, V = "H", "V"
SQRT_HALF = math.sqrt(0.5)


@dataclass(frozen=True, order=True)
class Freq:
    """Symbolic frequency: a sum of base tokens omega_k."""

    parts: tuple

    def __post_init__(self):
        object.__setattr__(self, "parts", tuple(sorted(int(p) for p in self.parts)))
        if not self.parts:
            raise OpticsError("a frequency needs at least one base token")

    def __add__(self, other: "Freq") -> "Freq":
        return Freq(self.parts + other.parts)

    def __str__(self):
        return "+".join(f"w{p}" for p in self.parts)


def omega(*k: int) -> Freq:
    return Freq(k)


@dataclass(frozen=True, order=True)
class Mode:
    freq: Freq
    path: str
    pol: str

    def __post_init__(self):
        if self.pol not in (H, V):
            raise OpticsError(f"polarization must be H or V, got {self.pol!r}")

    def __str__(self):
        return f"{self.pol}[{self.freq}]@{self.path}"


def _cos_sin(theta: float) -> tuple:
    """cos and sin, exact at multiples of pi/4 so quarter turns leave no residue."""
    q = theta / (math.pi / 4)
    if abs(q - round(q)) < 1e-12:
        r = SQRT_HALF
        table = [(1.0, 0.0), (r, r), (0.0, 1.0), (-r, r), (-1.0, 0.0), (-r, -r), (0.0, -1.0), (r, -r)]
        return table[round(q) % 8]
    return math.cos(theta), math.sin(theta)


def _unit(theta: float) -> complex:
    c, s = _cos_sin(theta)
    return complex(c, s)


def ket(*modes: Mode) -> tuple:
    return tuple(sorted(modes))


def ket_str(k: tuple) -> str:
    return "|" + " ".join(map(str, k)) + ">"


class OpticalState:
    """Sparse superposition of kets; photon number may differ across kets."""

    def __init__(self, terms=None):
        self._terms: dict = {}
        for k, a in dict(terms or {}).items():
            if a != 0:
                self._terms[ket(*k)] = self._terms.get(ket(*k), 0j) + complex(a)

    @classmethod
    def single(cls, *modes: Mode, amplitude: complex = 1.0) -> "OpticalState":
        return cls({ket(*modes): amplitude})

    def items(self):
        return sorted(self._terms.items())

    def kets(self):
        return sorted(self._terms)

    def amplitude(self, k) -> complex:
        return self._terms.get(ket(*k), 0j)

    def norm_sq(self) -> float:
        return float(sum(abs(a) ** 2 for a in self._terms.values()))

    def filter(self, keep: Callable[[tuple], bool]) -> "OpticalState":
        return OpticalState({k: a for k, a in self._terms.items() if keep(k)})

    def on_path(self, path: str) -> "OpticalState":
        return self.filter(lambda k: all(m.path == path for m in k))

    def cleaned(self, atol: float = 0.0) -> "OpticalState":
        return OpticalState({k: a for k, a in self._terms.items() if abs(a) > atol})

    def __add__(self, other: "OpticalState") -> "OpticalState":
        out = dict(self._terms)
        for k, a in other._terms.items():
            out[k] = out.get(k, 0j) + a
        return OpticalState(out)

    def scaled(self, c: complex) -> "OpticalState":
        return OpticalState({k: c * a for k, a in self._terms.items()})

    def __len__(self):
        return len(self._terms)

    def __repr__(self):
        body = " + ".join(f"({a:.6g}){ket_str(k)}" for k, a in self.items())
        return f"OpticalState({body or '0'})"


Rule = Callable[[tuple], "dict | None"]


class OpticalMap:
    """Linear map defined ket by ket.

    ``rule(ket)`` returns ``{output_ket: amplitude}`` for kets in the map's
    domain and ``None`` for kets that pass through untouched.
    ``inputs``/``outputs`` name the paths the map reads and writes; they are
    only used to check stage wiring in :func:`compose`.
    """

    def __init__(self, name: str, rule: Rule, inputs: Iterable[str], outputs: Iterable[str]):
        self.name = name
        self._rule = rule
        self.inputs = frozenset(inputs)
        self.outputs = frozenset(outputs)

    def image(self, k: tuple) -> dict | None:
        return self._rule(ket(*k))

    def acts_on(self, k: tuple) -> bool:
        return self.image(k) is not None

    def apply(self, state: OpticalState) -> OpticalState:
        out: dict = {}
        for k, a in state.items():
            img = self._rule(k)
            if img is None:
                img = {k: 1.0}
            for k2, b in img.items():
                out[k2] = out.get(k2, 0j) + a * b
        return OpticalState(out)

    def __call__(self, state: OpticalState) -> OpticalState:
        return self.apply(state)

    def isometry_defect(self, kets: Sequence[tuple]) -> float:
        """Max deviation of the output Gram matrix from identity over ``kets``."""
        images = [self.apply(OpticalState({k: 1.0})) for k in kets]
        gram = np.array([[_overlap(x, y) for y in images] for x in images])
        return float(np.max(np.abs(gram - np.eye(len(kets))), initial=0.0))

    def __repr__(self):
        return f"OpticalMap({self.name})"


def _overlap(x: OpticalState, y: OpticalState) -> complex:
    return sum(np.conj(x.amplitude(k)) * a for k, a in y.items())


def compose(maps: Sequence[OpticalMap], sources: Iterable[str] = ()) -> OpticalMap:
    """Apply ``maps`` left to right.

    Every stage after the first must read only paths that the source, the
    first stage or some earlier stage can populate.
    """
    maps = list(maps)
    if not maps:
        raise OpticsError("nothing to compose")
    live = set(sources) | set(maps[0].inputs) | set(maps[0].outputs)
    for m in maps[1:]:
        missing = m.inputs - live
        if missing:
            raise OpticsError(
                f"stage {m.name} reads path(s) {sorted(missing)} that no earlier stage feeds"
            )
        live |= m.outputs

    def rule(k):
        state = OpticalState({k: 1.0})
        for m in maps:
            state = m.apply(state)
        if state.items() == [(k, 1.0)]:
            return None
        return dict(state.items())

    inputs = set().union(*(m.inputs for m in maps))
    outputs = set().union(*(m.outputs for m in maps))
    return OpticalMap(" -> ".join(m.name for m in maps), rule, inputs, outputs)


def _mode_map(name: str, f: Callable[[Mode], "list | None"], inputs, outputs) -> OpticalMap:
    """Lift a single-photon map to kets (product over photons)."""

    def rule(k):
        terms = [f(m) for m in k]
        if all(t is None for t in terms):
            return None
        out = {(): 1.0 + 0j}
        for m, t in zip(k, terms):
            t = t if t is not None else [(m, 1.0)]
            nxt: dict = {}
            for partial, a in out.items():
                for m2, b in t:
                    key = partial + (m2,)
                    nxt[key] = nxt.get(key, 0j) + a * b
            out = nxt
        return {ket(*p): a for p, a in out.items() if a != 0}

    return OpticalMap(name, rule, inputs, outputs)


# -- linear components -----------------------------------------------------

def beamsplitter(theta: float, a: str, b: str, c: str, d: str) -> OpticalMap:
    if len({a, b}) != 2 or len({c, d}) != 2:
        raise OpticsError("beamsplitter needs two distinct input and two distinct output paths")
    cos_t, sin_t = _cos_sin(theta)
    r, t = 1j * cos_t, sin_t

    def f(m):
        if m.path == a:
            return [(Mode(m.freq, c, m.pol), r), (Mode(m.freq, d, m.pol), t)]
        if m.path == b:
            return [(Mode(m.freq, c, m.pol), t), (Mode(m.freq, d, m.pol), r)]
        return None

    return _mode_map(f"BS({theta:g})", f, {a, b}, {c, d})


def polarizing_beamsplitter(inp: str, h_out: str, v_out: str) -> OpticalMap:
    if h_out == v_out:
        raise OpticsError("PBS output ports must differ")

    def f(m):
        if m.path != inp:
            return None
        return [(Mode(m.freq, h_out if m.pol == H else v_out, m.pol), 1.0)]

    return _mode_map(f"PBS({inp})", f, {inp}, {h_out, v_out})


def polarizing_combiner(h_in: str, v_in: str, out: str) -> OpticalMap:
    """PBS run backwards: H from ``h_in`` and V from ``v_in`` merge into ``out``."""

    def f(m):
        if (m.path, m.pol) in ((h_in, H), (v_in, V)):
            return [(Mode(m.freq, out, m.pol), 1.0)]
        return None

    return _mode_map(f"PBS^-1({out})", f, {h_in, v_in}, {out})


def dichroic(kind: str, long_band: Iterable[Freq], inp: str, transmitted: str, reflected: str) -> OpticalMap:
    """Wavelength splitter.  ``long_band`` lists the longer-wavelength tokens.

    LWP transmits the long band and reflects the rest; SWP does the opposite.
    """
    kind = kind.upper()
    if kind not in ("LWP", "SWP"):
        raise OpticsError(f"dichroic kind must be LWP or SWP, got {kind!r}")
    long_band = frozenset(long_band)

    def f(m):
        if m.path != inp:
            return None
        through = (m.freq in long_band) == (kind == "LWP")
        return [(Mode(m.freq, transmitted if through else reflected, m.pol), 1.0)]

    return _mode_map(f"DICHROIC-{kind}({inp})", f, {inp}, {transmitted, reflected})


def phase_shifter(lam: float, path: str, freq: Freq | None = None) -> OpticalMap:
    ph = _unit(lam)

    def f(m):
        if m.path == path and (freq is None or m.freq == freq):
            return [(m, ph)]
        return None

    return _mode_map(f"PHASE({lam:g})@{path}", f, {path}, {path})


def polarization_rotator(theta: float, path: str, freq: Freq | None = None) -> OpticalMap:
    c, s = _cos_sin(theta)

    def f(m):
        if m.path != path or (freq is not None and m.freq != freq):
            return None
        hm, vm = Mode(m.freq, m.path, H), Mode(m.freq, m.path, V)
        if m.pol == H:
            terms = [(hm, c), (vm, s)]
        else:
            terms = [(hm, -s), (vm, c)]
        return [(x, a) for x, a in terms if a != 0]

    return _mode_map(f"POLROT({theta:g})@{path}", f, {path}, {path})


def mirror(src: str, dst: str, freq: Freq | None = None) -> OpticalMap:
    def f(m):
        if m.path == src and (freq is None or m.freq == freq):
            return [(Mode(m.freq, dst, m.pol), 1.0)]
        return None

    return _mode_map(f"MIRROR({src}->{dst})", f, {src}, {dst})


# -- nonlinear conversions ---------------------------------------------------

_SFG = {
    1: {(H, H): V, (V, V): H},
    2: {(H, V): H, (V, H): V},
}
_SPDC = {
    1: {H: (V, V), V: (H, H)},
    2: {H: (H, V), V: (V, H)},
}


def sfg(kind: int, f1: Freq, f2: Freq, path_in: str, path_out: str) -> OpticalMap:
    """Sum-frequency generation merging photons (f1, f2) on ``path_in``."""
    if kind not in _SFG:
        raise OpticsError(f"SFG type must be 1 or 2, got {kind!r}")
    if f1 == f2:
        raise OpticsError("SFG needs two distinct input frequencies")
    table, f12 = _SFG[kind], f1 + f2

    def rule(k):
        p1 = [m for m in k if m.freq == f1 and m.path == path_in]
        p2 = [m for m in k if m.freq == f2 and m.path == path_in]
        if len(p1) != 1 or len(p2) != 1:
            return None
        pol = table.get((p1[0].pol, p2[0].pol))
        if pol is None:
            return None
        rest = [m for m in k if m is not p1[0] and m is not p2[0]]
        return {ket(*rest, Mode(f12, path_out, pol)): 1.0}

    return OpticalMap(f"SFG{kind}({f1},{f2})@{path_in}", rule, {path_in}, {path_out})


def spdc(
    kind: int, f_in: Freq, f1: Freq, f2: Freq, path_in: str, path_out1: str, path_out2: str | None = None
) -> OpticalMap:
    """Down-conversion of the ``f_in`` photon on ``path_in`` into (f1, f2)."""
    if kind not in _SPDC:
        raise OpticsError(f"SPDC type must be 1 or 2, got {kind!r}")
    if f1 + f2 != f_in:
        raise OpticsError(f"SPDC output {f1} + {f2} does not sum to input {f_in}")
    path_out2 = path_out1 if path_out2 is None else path_out2
    table = _SPDC[kind]

    def rule(k):
        hit = [m for m in k if m.freq == f_in and m.path == path_in]
        if len(hit) != 1:
            return None
        (m,) = hit
        q1, q2 = table[m.pol]
        rest = [x for x in k if x is not m]
        return {ket(*rest, Mode(f1, path_out1, q1), Mode(f2, path_out2, q2)): 1.0}

    return OpticalMap(
        f"SPDC{kind}({f_in})@{path_in}", rule, {path_in}, {path_out1, path_out2}
    )


def component_map(kind: str, *args, **kwargs) -> OpticalMap:
    """Build a component by name: BS, PBS, DICHROIC, PHASE, POLROT, MIRROR,
    SFG1, SFG2, SPDC1, SPDC2."""
    kind = kind.upper()
    builders = {
        "BS": beamsplitter,
        "PBS": polarizing_beamsplitter,
        "DICHROIC": dichroic,
        "PHASE": phase_shifter,
        "POLROT": polarization_rotator,
        "MIRROR": mirror,
        "SFG1": lambda *a, **k: sfg(1, *a, **k),
        "SFG2": lambda *a, **k: sfg(2, *a, **k),
        "SPDC1": lambda *a, **k: spdc(1, *a, **k),
        "SPDC2": lambda *a, **k: spdc(2, *a, **k),
    }
    if kind not in builders:
        raise OpticsError(f"unknown optical component {kind!r}")
    return builders[kind](*args, **kwargs)


# -- assembled devices -------------------------------------------------------

def mach_zehnder_maps(lam: float, freq: Freq = omega(1)) -> list:
    """BS1 -> mirrors -> phase on the reflected arm -> BS2.

    BS2 takes the transmitted arm on its ``a`` port; its ``c`` output is the
    detector f and its ``d`` output the detector e.
    """
    return [
        beamsplitter(math.pi / 4, "a", "b", "c", "d"),
        mirror("c", "c'"),
        mirror("d", "d'"),
        phase_shifter(lam, "c'"),
        beamsplitter(math.pi / 4, "d'", "c'", "f", "e"),
    ]


def mach_zehnder(lam: float) -> tuple:
    """Amplitudes (at detector f, at detector e) for one photon entering ``a``."""
    f1 = omega(1)
    out = compose(mach_zehnder_maps(lam, f1), sources={"a"})(
        OpticalState.single(Mode(f1, "a", H))
    )
    return out.amplitude((Mode(f1, "f", H),)), out.amplitude((Mode(f1, "e", H),))


_BASIS_POLS = [(H, H), (H, V), (V, H), (V, V)]


def cnot_maps(w1: Freq = omega(1), w2: Freq = omega(2)) -> list:
    """Four SFG routes, polarization sorting, four SPDC routes, recombination.

    Type-I SFG sends HH -> V and VV -> H; the type-II crystal is fed with the
    w2 photon first so HV -> V' and VH -> H'.  After PBS sorting each
    component sits on its own path and a down-conversion picks its output
    pair; the type-II SPDCs emit w2 on their first port.  Dichroics then
    separate w1 (long band) and w2, and mirrors merge every branch onto the
    two output paths.
    """
    w12 = w1 + w2
    stages = [
        sfg(1, w1, w2, "in", "s1"),
        sfg(2, w2, w1, "in", "s2"),
        polarizing_beamsplitter("s1", "s1h", "s1v"),
        polarizing_beamsplitter("s2", "s2h", "s2v"),
        spdc(1, w12, w1, w2, "s1v", "k00"),
        spdc(2, w12, w2, w1, "s1h", "k11"),
        spdc(1, w12, w1, w2, "s2h", "k10"),
        spdc(2, w12, w2, w1, "s2v", "k01"),
    ]
    for branch in ("k00", "k01", "k10", "k11"):
        stages.append(dichroic("LWP", {w1}, branch, branch + "_1", branch + "_2"))
        stages.append(mirror(branch + "_1", "out1"))
        stages.append(mirror(branch + "_2", "out2"))
    return stages


def cnot_construction() -> np.ndarray:
    """4x4 matrix of the optical pipeline on {HH, HV, VH, VV} (w1 = control)."""
    w1, w2 = omega(1), omega(2)
    pipeline = compose(cnot_maps(w1, w2), sources={"in"})
    outputs = {
        ket(Mode(w1, "out1", p1), Mode(w2, "out2", p2)): row
        for row, (p1, p2) in enumerate(_BASIS_POLS)
    }
    mat = np.zeros((4, 4), dtype=np.complex128)
    for col, (p1, p2) in enumerate(_BASIS_POLS):
        out = pipeline(OpticalState.single(Mode(w1, "in", p1), Mode(w2, "in", p2)))
        for k, a in out.items():
            if k not in outputs:
                raise OpticsError(f"CNOT assembly leaks amplitude into {ket_str(k)}")
            mat[outputs[k], col] = a
    return mat


def _span(lo: int, hi: int) -> Freq:
    return Freq(tuple(range(lo, hi + 1)))


def cascade_maps(n: int, path: str = "src") -> list:
    """Alternating SPDC chain turning one V photon at w1+...+wn into n photons.

    A V remainder goes through type I (V -> H_k H_rest), an H remainder
    through type II (H -> H_k V_rest), so every split-off photon is H.  If
    the last remainder is V a -90 degree rotator turns it to H.
    """
    if n < 1:
        raise OpticsError("cascade needs at least one photon")
    stages, pol = [], V
    for k in range(1, n):
        kind = 1 if pol == V else 2
        stages.append(spdc(kind, _span(k, n), omega(k), _span(k + 1, n), path, path))
        pol = H if kind == 1 else V
    if pol == V:
        stages.append(polarization_rotator(-math.pi / 2, path, omega(n)))
    return stages


def cascade_source(n: int, path: str = "src") -> OpticalState:
    maps = cascade_maps(n, path)
    return compose(maps, sources={path})(OpticalState.single(Mode(_span(1, n), path, V)))


def source_qwd(n: int) -> tuple:
    """Divide the pump photon on a beamsplitter, then cascade on each path.

    The reflected (upper) arm carries an extra ``i``; a half-wave plate
    (phase -pi/2) removes it.  Returns ``(upper, lower)`` optical states,
    each ``(1/sqrt 2)|H1 ... Hn>`` on path ``u`` resp. ``d``.
    """
    if n < 1:
        raise OpticsError("source division needs at least one dubit")
    pump = _span(1, n)
    stages = [
        beamsplitter(math.pi / 4, "src", "vac", "u", "d"),
        phase_shifter(-math.pi / 2, "u"),
        *cascade_maps(n, "u"),
        *cascade_maps(n, "d"),
    ]
    out = compose(stages, sources={"src"})(OpticalState.single(Mode(pump, "src", V)))
    return out.on_path("u"), out.on_path("d")


def wave_combiner(upper: str = "u", lower: str = "d", bright: str = "out", dark: str = "dark") -> OpticalMap:
    """Whole-register combiner: a 50-50 splitter acting on kets, not photons.

    A ket entirely on ``upper`` goes to ``(bright + dark)/sqrt 2``, one
    entirely on ``lower`` to ``(bright - dark)/sqrt 2``.
    """

    def relabel(k, path):
        return ket(*(Mode(m.freq, path, m.pol) for m in k))

    def rule(k):
        paths = {m.path for m in k}
        if paths == {upper}:
            return {relabel(k, bright): SQRT_HALF, relabel(k, dark): SQRT_HALF}
        if paths == {lower}:
            return {relabel(k, bright): SQRT_HALF, relabel(k, dark): -SQRT_HALF}
        return None

    return OpticalMap("QWC", rule, {upper, lower}, {bright, dark})


def polarization_index(k: tuple, freqs: Sequence[Freq]) -> int:
    """Dubit basis index of a ket (H = 0, V = 1, first frequency = MSB)."""
    by_freq = {m.freq: m.pol for m in k}
    index = 0
    for f in freqs:
        index = (index << 1) | (by_freq[f] == V)
    return index
