r"""
A CNOT from frequency conversion
================================

Two photons at frequencies w1 (control) and w2 (target) carry one dubit
each in their polarization.  Sum-frequency generation fuses the pair into
one photon at w1+w2 whose polarization and path remember the input
pattern; down-conversion then splits it back into the *permuted* pair.
"""
import numpy as np

from dualsim.optics import (
    Mode,
    OpticalState,
    cnot_construction,
    cnot_maps,
    compose,
    ket_str,
    omega,
)

w1, w2 = omega(1), omega(2)
pipeline = compose(cnot_maps(w1, w2), sources={"in"})
print("stages:", len(cnot_maps()))

######################################################################
# Trace each polarization pair through the pipeline.

for p1, p2 in [("H", "H"), ("H", "V"), ("V", "H"), ("V", "V")]:
    out = pipeline(OpticalState.single(Mode(w1, "in", p1), Mode(w2, "in", p2)))
    ((k, a),) = out.items()
    print(f"{p1}{p2} -> {ket_str(k)} amplitude {a.real:g}")

######################################################################
# As a matrix on {HH, HV, VH, VV} this is exactly the CNOT permutation.

m = cnot_construction()
print(m.real.astype(int))
print("squares to identity:", np.array_equal(m @ m, np.eye(4)))
