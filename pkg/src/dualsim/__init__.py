"""dualsim: state-vector simulation of duality computing.

A register's wave is divided into weighted sub-waves, each path runs its own
unitary circuit, and coherent recombination applies the linear combination
of those unitaries to the input.
"""

__version__ = "0.1.0"

from .algorithms import (
    CnfFormula,
    EnumerationResult,
    SearchResult,
    brute_force_solutions,
    deletion_pass,
    duality_sat_state,
    enumerate_solutions,
    parse_dimacs,
    satisfying_mask,
    single_query_search,
    to_dimacs,
)
from .amplitude import (
    StateVector,
    basis_state,
    inner_product,
    norm_sq,
    set_max_dubits,
    tensor,
    uniform_state,
    zero_state,
)
from .engine import (
    Block,
    Divider,
    DividerSpec,
    DualityProgram,
    SubWave,
    combine,
    detection_intensity,
    divide,
    effective_operator,
    grouped_divider,
    run_program,
    symmetric_divider,
    two_path_program,
    weighted_divider,
)
from .errors import (
    CapacityError,
    CoherenceError,
    DimensionError,
    DualityError,
    NormalizationError,
    OpticsError,
    ParseError,
)
from .gates import (
    FLIP_MARKED,
    FLIP_UNMARKED,
    Circuit,
    Gate,
    GateInstance,
    Oracle,
    OracleSpec,
    apply_circuit,
    apply_gate,
    circuit_matrix,
    oracle_gate,
    standard_gate,
    walsh_hadamard,
)
from .measurement import (
    MeasurementOutcome,
    MeasurementPolicy,
    Model,
    OutcomeDistribution,
    measure,
    outcome_distribution,
    sample,
)
from .program import parse_program
