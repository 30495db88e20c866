"""Worker-quasi-stable matchings under substitutable preferences.

The worker-quasi-stable set of a many-to-one market forms a lattice under
Blair's order; a proposal operator on that lattice converges to stable
matchings, which are exactly its fixed points.
"""

from .errors import (
    AxiomViolation,
    BudgetExceeded,
    LadViolation,
    MarketError,
    NotInLattice,
    NotWorkerQuasiStable,
    OverlapError,
    ParseError,
    SubstitutabilityViolation,
)
from .lattice import BlairComparison, WqsLattice, blair_compare, enumerate_wqs, export_hasse, join, meet
from .market import Market, Verdict, check_choice_consistency, is_substitutable, satisfies_lad
from .marketfile import load_market, parse_market, serialize_market
from .matchings import (
    BlockingPair,
    Matching,
    blocking_pairs,
    empty_matching,
    format_matching,
    is_individually_rational,
    is_stable,
    is_worker_quasi_stable,
    make_matching,
    parse_matching,
)
from .tarski import (
    apply_T,
    check_corollaries,
    check_fixed_point_formula,
    check_isotone,
    check_join_with_stable,
    fixed_points,
    stabilize,
    star_blocking_pairs,
    worker_optimal_stable,
)

__version__ = "0.1.0"
