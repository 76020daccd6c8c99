r"""
Single-query search with two paths
==================================

A duality computer can send a register's wave down two paths at once,
run a different circuit on each and recombine the sub-waves.  Here the
upper path does nothing and the lower path applies an oracle that flips
the sign of every *unmarked* basis state.  Recombination cancels all
unmarked amplitudes and leaves the marked one.
"""
######################################################################
# Start from the uniform superposition over :math:`N = 2^n` items.

import numpy as np

from dualsim import (
    MeasurementPolicy,
    Model,
    Oracle,
    apply_circuit,
    basis_state,
    outcome_distribution,
    run_program,
    single_query_search,
    walsh_hadamard,
)
from dualsim.algorithms import search_program

n, tau = 3, 5
uniform = apply_circuit(basis_state(n, 0), walsh_hadamard(n))
print("uniform amplitudes:", np.round(uniform.amplitudes.real, 4))

######################################################################
# The program is a 2-path divider with coefficients 1/2 each.  The oracle
# is queried once, on the lower path only.

prog = search_program(n, Oracle.from_marked(n, {tau}))
print("oracle queries in program:", prog.count_queries())

final = run_program(basis_state(n, 0), prog)
print("final amplitudes:", np.round(final.amplitudes.real, 4))
print("expected marked amplitude 1/sqrt(N) =", 1 / np.sqrt(2**n))

######################################################################
# The output is not normalized: its squared norm is :math:`1/N`.  What a
# detector makes of that depends on the read-out model.

for model in Model:
    d = outcome_distribution(final, MeasurementPolicy(model, epsilon=0.1))
    print(f"{model.name}: clicks {d.click_probabilities}, "
          f"no click {d.no_click_probability:.3f}, time {d.expected_time:g} t0")

######################################################################
# The convenience wrapper checks exactness and draws one seeded outcome.

res = single_query_search(n, tau, MeasurementPolicy(Model.MODEL_2), seed=1)
print(res.measurement, "queries:", res.queries_used)
