"""arbx: no-arbitrage exchange-rate ensembles on market graphs.

Model a market as a connected undirected graph of goods, verify that a rate
ensemble admits no profitable round trip, complete a full matrix from a
minimal set of quotes, extract price potentials, and propagate basis-rate
perturbations. All types are immutable after construction and all operations
are pure functions, safe to share across threads.
"""

from .basis import (
    BasisAssignment,
    BasisSpec,
    EpsilonBasis,
    PriceVector,
    canonical_basis,
    complete,
    decompose,
    dimension,
    dimension_by_rank,
    epsilon_matrices,
    is_basis,
    matrix_from_prices,
    price_vector,
    row_basis,
)
from .dynamics import (
    PerturbationOperator,
    PerturbationVector,
    apply_exact,
    build_operator,
    propagate_log,
    propagate_multiplicative_first_order,
)
from .errors import (
    ArbxError,
    BadParamsError,
    DuplicateEdgeError,
    GraphIndexError,
    GraphMismatchError,
    LengthMismatchError,
    NotABasisError,
    NotAnEdgeError,
    NotArbitrageFreeError,
    NotAWalkError,
    NotClosedError,
    NotCompleteError,
    NotConnectedError,
    OracleSizeError,
    ParseError,
    ReciprocalConflictError,
    SpecMismatchError,
    TreeMismatchError,
)
from .exchange import (
    DEFAULT_TOL,
    ArbitrageWitness,
    CheckResult,
    LogRateMatrix,
    PairViolation,
    RateMatrix,
    check_antisymmetry,
    check_no_arbitrage,
    check_no_arbitrage_oracle,
    cycle_gain,
    cycle_log_gain,
    exp_of,
    log_of,
)
from .graph import (
    ORACLE_MAX_VERTICES,
    FundamentalCycle,
    MarketGraph,
    SpanningTree,
    enumerate_simple_cycles,
    fundamental_cycles,
    generate_graph,
    is_connected,
    new_graph,
    spanning_tree,
)

__version__ = "0.1.0"

__all__ = [
    "ArbitrageWitness",
    "ArbxError",
    "BadParamsError",
    "BasisAssignment",
    "BasisSpec",
    "CheckResult",
    "DEFAULT_TOL",
    "DuplicateEdgeError",
    "EpsilonBasis",
    "FundamentalCycle",
    "GraphIndexError",
    "GraphMismatchError",
    "LengthMismatchError",
    "LogRateMatrix",
    "MarketGraph",
    "NotABasisError",
    "NotAnEdgeError",
    "NotArbitrageFreeError",
    "NotAWalkError",
    "NotClosedError",
    "NotCompleteError",
    "NotConnectedError",
    "ORACLE_MAX_VERTICES",
    "OracleSizeError",
    "PairViolation",
    "ParseError",
    "PerturbationOperator",
    "PerturbationVector",
    "PriceVector",
    "RateMatrix",
    "ReciprocalConflictError",
    "SpanningTree",
    "SpecMismatchError",
    "TreeMismatchError",
    "apply_exact",
    "build_operator",
    "canonical_basis",
    "check_antisymmetry",
    "check_no_arbitrage",
    "check_no_arbitrage_oracle",
    "complete",
    "cycle_gain",
    "cycle_log_gain",
    "decompose",
    "dimension",
    "dimension_by_rank",
    "enumerate_simple_cycles",
    "epsilon_matrices",
    "exp_of",
    "fundamental_cycles",
    "generate_graph",
    "is_basis",
    "is_connected",
    "log_of",
    "matrix_from_prices",
    "new_graph",
    "price_vector",
    "propagate_log",
    "propagate_multiplicative_first_order",
    "row_basis",
    "spanning_tree",
]
