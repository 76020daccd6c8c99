r"""
Mach-Zehnder fringes from composed optical components
=====================================================

One photon meets a 50:50 beamsplitter, both arms are folded by mirrors,
one arm picks up a phase :math:`\lambda` and a second beamsplitter
recombines them.  The detector intensity traces :math:`\cos^2(\lambda/2)`.
"""
import math

import numpy as np

from dualsim.optics import Mode, OpticalState, compose, mach_zehnder_maps, omega

######################################################################
# Each component is an exact linear map on photon kets; ``compose`` also
# checks that every stage is fed by an earlier one.

w = omega(1)
chain = compose(mach_zehnder_maps(0.0), sources={"a"})
print(chain)
print(chain(OpticalState.single(Mode(w, "a", "H"))))

######################################################################
# Sweep the phase.

for lam in np.linspace(0, 2 * math.pi, 9):
    out = compose(mach_zehnder_maps(lam), sources={"a"})(OpticalState.single(Mode(w, "a", "H")))
    f = abs(out.amplitude((Mode(w, "f", "H"),))) ** 2
    e = abs(out.amplitude((Mode(w, "e", "H"),))) ** 2
    print(f"lambda={lam:5.3f}  I_f={f:.6f}  I_e={e:.6f}  cos^2={math.cos(lam / 2) ** 2:.6f}")
