import itertools
import math

import numpy as np
import pytest

from dualsim.errors import OpticsError
from dualsim.optics import (
    H,
    SQRT_HALF,
    V,
    Mode,
    OpticalState,
    beamsplitter,
    cascade_source,
    cnot_construction,
    component_map,
    compose,
    dichroic,
    mach_zehnder,
    mirror,
    omega,
    phase_shifter,
    polarization_index,
    polarization_rotator,
    polarizing_beamsplitter,
    sfg,
    source_qwd,
    spdc,
    wave_combiner,
)

W1, W2 = omega(1), omega(2)
W12 = W1 + W2
CNOT = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]])


def one(freq, path, pol, amp=1.0):
    return OpticalState.single(Mode(freq, path, pol), amplitude=amp)


def pair_kets(path):
    return [(Mode(W1, path, p), Mode(W2, path, q)) for p, q in itertools.product((H, V), repeat=2)]


# -- components -----------------------------------------------------------------

def test_beamsplitter_quarter():
    bs = beamsplitter(math.pi / 4, "a", "b", "c", "d")
    out = bs(one(W1, "a", H))
    assert out.amplitude((Mode(W1, "c", H),)) == 1j * SQRT_HALF
    assert out.amplitude((Mode(W1, "d", H),)) == SQRT_HALF
    out = bs(one(W1, "b", V))
    assert out.amplitude((Mode(W1, "c", V),)) == SQRT_HALF
    assert out.amplitude((Mode(W1, "d", V),)) == 1j * SQRT_HALF


@pytest.mark.parametrize("theta", [0.0, 0.3, math.pi / 4, 1.2])
def test_beamsplitter_isometry(theta):
    bs = beamsplitter(theta, "a", "b", "c", "d")
    kets = [(Mode(f, p, q),) for f in (W1, W2) for p in "ab" for q in (H, V)]
    assert bs.isometry_defect(kets) < 1e-15


def test_pbs_routes_by_polarization():
    pbs = polarizing_beamsplitter("in", "r", "t")
    assert pbs(one(W1, "in", H)).kets() == [(Mode(W1, "r", H),)]
    assert pbs(one(W1, "in", V)).kets() == [(Mode(W1, "t", V),)]


def test_dichroic_bands():
    lwp = dichroic("LWP", {W1}, "x", "t", "r")
    swp = dichroic("SWP", {W1}, "x", "t", "r")
    assert lwp(one(W1, "x", H)).kets() == [(Mode(W1, "t", H),)]
    assert lwp(one(W2, "x", H)).kets() == [(Mode(W2, "r", H),)]
    assert swp(one(W1, "x", H)).kets() == [(Mode(W1, "r", H),)]
    with pytest.raises(OpticsError):
        dichroic("BAND", {W1}, "x", "t", "r")


def test_phase_and_rotator():
    out = phase_shifter(math.pi / 2, "p")(one(W1, "p", V))
    assert out.amplitude((Mode(W1, "p", V),)) == 1j
    out = polarization_rotator(math.pi / 2, "p")(one(W1, "p", H))
    assert out.items() == [((Mode(W1, "p", V),), 1.0)]
    out = polarization_rotator(-math.pi / 2, "p")(one(W1, "p", V))
    assert out.items() == [((Mode(W1, "p", H),), 1.0)]


def test_rotator_isometry():
    rot = polarization_rotator(0.37, "p")
    assert rot.isometry_defect([(Mode(W1, "p", H),), (Mode(W1, "p", V),)]) < 1e-15


def test_sfg_type1_examples():
    s = sfg(1, W1, W2, "in", "out")
    out = s(OpticalState.single(Mode(W1, "in", V), Mode(W2, "in", V)))
    assert out.items() == [((Mode(W12, "out", H),), 1.0)]
    out = s(OpticalState.single(Mode(W1, "in", H), Mode(W2, "in", H)))
    assert out.items() == [((Mode(W12, "out", V),), 1.0)]


def test_sfg_type2_examples():
    s = sfg(2, W1, W2, "in", "out")
    out = s(OpticalState.single(Mode(W1, "in", H), Mode(W2, "in", V)))
    assert out.items() == [((Mode(W12, "out", H),), 1.0)]
    # type II ignores parallel polarizations
    assert not s.acts_on((Mode(W1, "in", H), Mode(W2, "in", H)))


def test_spdc_examples():
    out = spdc(2, W12, W1, W2, "p", "q")(one(W12, "p", V))
    assert out.items() == [((Mode(W1, "q", V), Mode(W2, "q", H)), 1.0)]
    out = spdc(1, W12, W1, W2, "p", "q")(one(W12, "p", H))
    assert out.items() == [((Mode(W1, "q", V), Mode(W2, "q", V)), 1.0)]


def test_component_errors():
    with pytest.raises(OpticsError):
        sfg(1, W1, W1, "a", "b")
    with pytest.raises(OpticsError):
        spdc(1, W12, W1, W1, "a", "b")
    with pytest.raises(OpticsError):
        component_map("LENS")
    with pytest.raises(OpticsError):
        Mode(W1, "a", "D")


@pytest.mark.parametrize("kind", [1, 2])
def test_sfg_then_spdc_is_identity_on_domain(kind):
    """Up-converting then down-converting with the same type returns the pair."""
    up = sfg(kind, W1, W2, "x", "x")
    down = spdc(kind, W12, W1, W2, "x", "x")
    for k in pair_kets("x"):
        if up.acts_on(k):
            out = down(up(OpticalState({k: 1.0})))
            assert out.items() == [(tuple(sorted(k)), 1.0)]


def test_component_map_dispatch():
    m = component_map("MIRROR", "a", "b")
    assert m(one(W1, "a", H)).kets() == [(Mode(W1, "b", H),)]


# -- composition ----------------------------------------------------------------

def test_compose_examples():
    chain = compose([mirror("a", "b"), mirror("b", "c")], sources={"a"})
    assert chain(one(W1, "a", H)).kets() == [(Mode(W1, "c", H),)]
    with pytest.raises(OpticsError):
        compose([mirror("a", "b"), mirror("z", "c")], sources={"a"})
    with pytest.raises(OpticsError):
        compose([])


def test_two_beamsplitters_recombine():
    chain = compose(
        [beamsplitter(math.pi / 4, "a", "b", "c", "d"), beamsplitter(math.pi / 4, "d", "c", "e", "f")],
        sources={"a"},
    )
    out = chain(one(W1, "a", H))
    assert abs(out.norm_sq() - 1) < 1e-15


# -- Mach-Zehnder ---------------------------------------------------------------

@pytest.mark.parametrize("lam", np.linspace(0, 2 * math.pi, 100))
def test_mach_zehnder_fringes(lam):
    f, e = mach_zehnder(lam)
    assert abs(abs(f) ** 2 - math.cos(lam / 2) ** 2) < 1e-12
    assert abs(abs(e) ** 2 - math.sin(lam / 2) ** 2) < 1e-12


def test_mach_zehnder_balanced():
    f, e = mach_zehnder(0.0)
    assert abs(abs(f) - 1) < 1e-15 and abs(e) < 1e-15


# -- CNOT -------------------------------------------------------------------------

def test_cnot_construction_exact():
    m = cnot_construction()
    assert np.max(np.abs(m - CNOT)) < 1e-12


def test_cnot_construction_against_gate_catalog():
    from dualsim import standard_gate

    np.testing.assert_array_equal(cnot_construction(), standard_gate("CNOT").matrix)


# -- source-level division ----------------------------------------------------------

@pytest.mark.parametrize("n", [1, 2, 3, 4, 6])
def test_cascade_source_all_h(n):
    out = cascade_source(n)
    freqs = [omega(k) for k in range(1, n + 1)]
    assert len(out) == 1
    ((k, a),) = out.items()
    assert a == 1.0
    assert sorted(m.freq for m in k) == freqs
    assert polarization_index(k, freqs) == 0


@pytest.mark.parametrize("n", [1, 2, 4])
def test_source_qwd_halves(n):
    upper, lower = source_qwd(n)
    freqs = [omega(k) for k in range(1, n + 1)]
    for part, path in ((upper, "u"), (lower, "d")):
        ((k, a),) = part.items()
        assert abs(a - SQRT_HALF) < 1e-15
        assert all(m.path == path and m.pol == H for m in k)
        assert polarization_index(k, freqs) == 0


@pytest.mark.parametrize("n", [1, 3])
def test_source_qwd_recombines(n):
    upper, lower = source_qwd(n)
    out = wave_combiner()(upper + lower)
    assert abs(out.norm_sq() - 1) < 1e-12
    assert all(m.path == "out" for k in out.kets() for m in k)
