r"""
Satisfiability by duality search, and enumerating every solution
================================================================

Replace the single marked item with "all assignments that satisfy a CNF
formula" and the same two-path program leaves amplitude :math:`1/\sqrt N`
on every solution and zero elsewhere.  An unsatisfiable formula gives
the zero wave: the detector never clicks.
"""
######################################################################
# Variable 1 is the most significant bit, so ``10`` means x1 = 1, x2 = 0.

from pathlib import Path

import numpy as np

from dualsim import (
    MeasurementPolicy,
    Model,
    brute_force_solutions,
    deletion_pass,
    duality_sat_state,
    enumerate_solutions,
    norm_sq,
    parse_dimacs,
)

data = Path(__file__).resolve().parent / "data"
f = parse_dimacs((data / "or2.cnf").read_text())
state = duality_sat_state(f)
print("x1 or x2 ->", np.round(state.amplitudes.real, 3), "norm^2 =", norm_sq(state))

g = parse_dimacs((data / "contradiction.cnf").read_text())
print("x1 and not x1 ->", duality_sat_state(g).amplitudes.real)

######################################################################
# A deletion pass is another 2-path program whose lower path flips the
# sign of one found solution.  That component cancels, the rest is kept.

after = deletion_pass(state, 3)
print("after deleting 11:", np.round(after.amplitudes.real, 3))

######################################################################
# Measure, delete, repeat.  Under MODEL_2 every click is certain, so the
# loop ends exactly when the wave is empty.

res = enumerate_solutions(f, MeasurementPolicy(Model.MODEL_2), seed=7)
print("found:", sorted(format(s, "02b") for s in res.solutions), "in", res.passes, "passes")
print("brute force:", sorted(format(s, "02b") for s in brute_force_solutions(f)))

######################################################################
# Under MODEL_1 each click only happens with probability norm^2, so the
# loop retries and may give up early; the result says so.

res1 = enumerate_solutions(f, MeasurementPolicy(Model.MODEL_1), seed=7, retry_cap=3)
print("MODEL_1 with retry cap 3: complete =", res1.complete, "found", len(res1.solutions))
