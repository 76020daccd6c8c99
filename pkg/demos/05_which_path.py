r"""
Which-path marks and partial interference
=========================================

Three slits, one of them tagged so that its path is distinguishable.
Paths that share a tag add as amplitudes; differently tagged paths add as
intensities, whatever their relative phase.
"""
import math

import numpy as np

from dualsim import SubWave, basis_state, detection_intensity, divide, grouped_divider

######################################################################
# Group weights 1/3 (one path) and 2/3 (two paths).  Path coefficients
# follow sqrt(w)/k per group.

spec = grouped_divider([(1 / 3, 1), (2 / 3, 2)])
print("coefficients:", np.round(spec.coeffs, 6))
print("tags:", spec.tags)

screen = basis_state(0, 0)
waves = divide(screen, spec)
print("in phase:", detection_intensity(waves, 0))

######################################################################
# Shift the phase of one coherent path.  Only the coherent 2/3 fringes;
# the tagged 1/3 stays as a flat background.

for phi in np.linspace(0, 2 * math.pi, 7):
    shifted = waves[:2] + [SubWave(waves[2].coeff, screen, phi, waves[2].tag)]
    print(f"phi={phi:5.3f}  I={detection_intensity(shifted, 0):.6f}  "
          f"1/3 + (2/3)cos^2(phi/2)={1 / 3 + 2 / 3 * math.cos(phi / 2) ** 2:.6f}")
