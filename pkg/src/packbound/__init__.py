"""Adaptive lower-bound laboratory for online bin packing variants.

The package generates adversarial inputs against pluggable deterministic
online algorithms for three settings (packing with the optimal cost known in
advance, square packing, class-constrained packing), builds and validates the
matching offline packings with exact rational arithmetic, and re-derives the
associated bound programs with an exact simplex and certified bisection.
"""

from .exact import Exact, PrecisionError, decimal_str, fraction_str, power, rat
from .model import (
    Item,
    Packing,
    Placement,
    VariantRules,
    squares_disjoint,
    validate_packing,
)
from .oracle import AdaptiveOracle, OracleConfig, Separator
from .algorithms import algorithm_ids, fork_replay, make_session, register_algorithm
from .optoracle import OracleInstance, min_bins
from .mathprog import (
    bisect_min_r,
    builtin_program,
    builtin_program_ids,
    check_certificate,
    feasible_at,
    ko_certificate_suite,
    solve_min_r_exact,
)

__version__ = "0.1.0"

__all__ = [
    "Exact", "PrecisionError", "decimal_str", "fraction_str", "power", "rat",
    "Item", "Packing", "Placement", "VariantRules", "squares_disjoint",
    "validate_packing",
    "AdaptiveOracle", "OracleConfig", "Separator",
    "algorithm_ids", "fork_replay", "make_session", "register_algorithm",
    "OracleInstance", "min_bins",
    "bisect_min_r", "builtin_program", "builtin_program_ids",
    "check_certificate", "feasible_at", "ko_certificate_suite",
    "solve_min_r_exact",
    "__version__",
]
