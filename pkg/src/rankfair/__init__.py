"""Proportional rank aggregation toolkit.

Aggregates weighted rankings by minimizing the weighted average of a
power of the swap distance.  The linear cost reproduces the classic
median-style rule; the squared cost yields outputs that follow the
weight distribution proportionally.
"""

__version__ = "0.1.0"

from .core import (
    Profile,
    Subprofile,
    as_ranking,
    enumerate_rankings,
    mahonian,
    max_swap_distance,
    mix,
    reverse_ranking,
    round_set,
    swap_distance,
)
from .errors import DataError, DimensionError, GuardError, RankfairError
from .solver import (
    CostSpec,
    SolveResult,
    emit_ilp,
    local_search,
    solve,
    solve_bnb,
    solve_brute_force,
    solve_kemeny_dp,
)

__all__ = [
    "Profile",
    "Subprofile",
    "CostSpec",
    "SolveResult",
    "as_ranking",
    "enumerate_rankings",
    "mahonian",
    "max_swap_distance",
    "mix",
    "reverse_ranking",
    "round_set",
    "swap_distance",
    "solve",
    "solve_bnb",
    "solve_brute_force",
    "solve_kemeny_dp",
    "local_search",
    "emit_ilp",
    "DataError",
    "DimensionError",
    "GuardError",
    "RankfairError",
    "__version__",
]
