"""Exact and heuristic optimizers for power-of-swap-distance aggregation.

All exact solvers compare integer costs: profile weights are scaled by
their common denominator, so ties are decided exactly, never by float
rounding.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .core import (
    Profile,
    Ranking,
    as_ranking,
    max_swap_distance,
    positions,
    swap_distance,
)
from .errors import DataError, GuardError

BRUTE_FORCE_GUARD = 10
DP_GUARD = 20
BNB_GUARD = 40
TIE_ENUMERATION_CAP = 10_000


@dataclass(frozen=True)
class CostSpec:
    """Which power of the swap distance a solver should minimize."""

    exponent: int = 2

    def __post_init__(self):
        if not isinstance(self.exponent, int) or self.exponent < 1:
            raise DataError(f"exponent must be an integer >= 1, got {self.exponent}")


@dataclass(frozen=True)
class SolveResult:
    """Outcome of a solver run.

    winners is the full set of optimal rankings when status is "Exact"
    and ties were tracked, otherwise at least one best ranking found.
    """

    winners: tuple[Ranking, ...]
    cost: Fraction
    status: str
    method: str
    lower_bound: Fraction = None
    nodes: int = 0
    ties_complete: bool = True

    def __post_init__(self):
        if self.lower_bound is None:
            object.__setattr__(self, "lower_bound", self.cost)

    @property
    def winner(self) -> Ranking:
        return self.winners[0]


_SIGN_CACHE: dict[int, np.ndarray] = {}


def _pair_list(m: int) -> list[tuple[int, int]]:
    return [(i, j) for i in range(m) for j in range(i + 1, m)]


def _pair_sign_matrix(m: int) -> np.ndarray:
    """Row per ranking (lexicographic), column per pair (i<j): +1 iff i above j."""
    if m in _SIGN_CACHE:
        return _SIGN_CACHE[m]
    perms = np.array(list(itertools.permutations(range(m))), dtype=np.int8)
    pos = np.argsort(perms, axis=1).astype(np.int16)
    pairs = _pair_list(m)
    signs = np.empty((len(perms), len(pairs)), dtype=np.int8)
    for k, (i, j) in enumerate(pairs):
        signs[:, k] = np.where(pos[:, i] < pos[:, j], 1, -1)
    _SIGN_CACHE[m] = signs
    return signs


def _sign_vector(r: Ranking) -> np.ndarray:
    pos = positions(r)
    return np.array(
        [1 if pos[i] < pos[j] else -1 for i, j in _pair_list(len(r))],
        dtype=np.int8,
    )


def solve_brute_force(
    profile: Profile, cost: CostSpec = CostSpec(), allow_large: bool = False
) -> SolveResult:
    """Exact optimum by scoring every ranking; guarded at m=10 (override to 12)."""
    m = profile.m
    cap = 12 if allow_large else BRUTE_FORCE_GUARD
    if m > cap:
        raise GuardError(
            f"brute force over {m}! rankings exceeds the guard ({cap})"
        )
    p = cost.exponent
    supp, nums, denom = profile.scaled_int_weights()
    signs = _pair_sign_matrix(m)
    n_pairs = signs.shape[1]
    # integer overflow check for the int64 fast path
    worst = sum(nums) * max_swap_distance(m) ** p
    if worst < 2**62:
        total = np.zeros(signs.shape[0], dtype=np.int64)
        for r, w in zip(supp, nums):
            d = (n_pairs - signs @ _sign_vector(r).astype(np.int64)) // 2
            total += w * d**p
        best = int(total.min())
        idx = np.flatnonzero(total == best)
        perms = list(itertools.permutations(range(m)))
        winners = tuple(perms[i] for i in idx)
    else:
        dists = []
        for r in supp:
            d = (n_pairs - signs @ _sign_vector(r).astype(np.int64)) // 2
            dists.append(d)
        best = None
        winners_ix: list[int] = []
        for c in range(signs.shape[0]):
            val = sum(w * int(d[c]) ** p for w, d in zip(nums, dists))
            if best is None or val < best:
                best, winners_ix = val, [c]
            elif val == best:
                winners_ix.append(c)
        perms = list(itertools.permutations(range(m)))
        winners = tuple(perms[i] for i in winners_ix)
    return SolveResult(
        winners=winners,
        cost=Fraction(best, denom),
        status="Exact",
        method="brute_force",
    )


def _pair_weight_matrix(supp: list[Ranking], nums: list[int], m: int) -> list[list[int]]:
    """W[a][b] = scaled weight of voters ranking a above b."""
    W = [[0] * m for _ in range(m)]
    for r, w in zip(supp, nums):
        pos = positions(r)
        for a in range(m):
            for b in range(m):
                if a != b and pos[a] < pos[b]:
                    W[a][b] += w
    return W


def approx_best_input(profile: Profile, cost: CostSpec = CostSpec()) -> Ranking:
    """Best ranking among those appearing in the profile itself."""
    p = cost.exponent
    return min(profile.support(), key=lambda r: (profile.power_cost(r, p), r))


def approx_kemeny_seed(profile: Profile, cost: CostSpec = CostSpec()) -> Ranking:
    """Cheap starting candidate: positional-average order, locally improved."""
    m = profile.m
    avg = [Fraction(0)] * m
    for r, w in profile.entries.items():
        for i, a in enumerate(r):
            avg[a] += w * i
    seed = as_ranking(sorted(range(m), key=lambda a: (avg[a], a)))
    seed = local_search(profile, seed, cost)
    best_in = approx_best_input(profile, cost)
    p = cost.exponent
    if profile.power_cost(best_in, p) < profile.power_cost(seed, p):
        return best_in
    return seed


def local_search(
    profile: Profile, start: Ranking, cost: CostSpec = CostSpec()
) -> Ranking:
    """Greedy adjacent-swap descent from start, exact rational comparisons."""
    p = cost.exponent
    cand = list(as_ranking(start))
    supp = profile.support()
    weights = [profile.entries[r] for r in supp]
    poss = [positions(r) for r in supp]
    dists = [swap_distance(r, tuple(cand)) for r in supp]
    improved = True
    while improved:
        improved = False
        for i in range(len(cand) - 1):
            a, b = cand[i], cand[i + 1]
            delta = Fraction(0)
            steps = []
            for v, pos in enumerate(poss):
                step = -1 if pos[b] < pos[a] else 1
                steps.append(step)
                d = dists[v]
                delta += weights[v] * ((d + step) ** p - d**p)
            if delta < 0:
                cand[i], cand[i + 1] = b, a
                for v, step in enumerate(steps):
                    dists[v] += step
                improved = True
    return tuple(cand)


def solve_bnb(
    profile: Profile,
    cost: CostSpec = CostSpec(),
    node_budget: int | None = None,
    find_all_ties: bool | None = None,
    seed_candidate: Ranking | None = None,
) -> SolveResult:
    """Branch and bound over ranking prefixes.

    Exact when it runs to completion; with a node budget it may return an
    anytime result flagged "Heuristic" together with a certified global
    lower bound.  Tie tracking is on by default up to m=12.
    """
    m = profile.m
    if m > BNB_GUARD:
        raise GuardError(f"branch and bound guarded at m={BNB_GUARD}, got {m}")
    p = cost.exponent
    if find_all_ties is None:
        find_all_ties = m <= 12
    supp, nums, denom = profile.scaled_int_weights()
    poss = [positions(r) for r in supp]
    n_voters = len(supp)
    W = _pair_weight_matrix(supp, nums, m) if p == 1 else None

    seed = as_ranking(seed_candidate) if seed_candidate else approx_kemeny_seed(
        profile, cost
    )
    incumbent = int(profile.power_cost(seed, p) * denom)
    best: list[Ranking] = [seed]

    def kemeny_pair_bound(remaining: tuple[int, ...]) -> int:
        extra = 0
        for i, a in enumerate(remaining):
            for b in remaining[i + 1 :]:
                extra += min(W[a][b], W[b][a])
        return extra

    def node_lb(dvec: tuple[int, ...], remaining: tuple[int, ...]) -> int:
        lb = sum(w * d**p for w, d in zip(nums, dvec))
        if p == 1 and len(remaining) > 1:
            lb += kemeny_pair_bound(remaining)
        return lb

    root = ((), tuple(range(m)), (0,) * n_voters)
    stack = [(node_lb(root[2], root[1]), root)]
    nodes = 0
    exhausted = False
    while stack:
        if node_budget is not None and nodes >= node_budget:
            exhausted = True
            break
        lb, (prefix, remaining, dvec) = stack.pop()
        nodes += 1
        if lb > incumbent or (lb == incumbent and not find_all_ties):
            continue
        if len(remaining) == 1:
            cand = prefix + remaining
            val = sum(w * d**p for w, d in zip(nums, dvec))
            if val < incumbent:
                incumbent, best = val, [cand]
            elif val == incumbent and find_all_ties and cand not in best:
                best.append(cand)
            continue
        children = []
        for a in remaining:
            rest = tuple(b for b in remaining if b != a)
            new_d = tuple(
                d + sum(1 for b in rest if pos[b] < pos[a])
                for d, pos in zip(dvec, poss)
            )
            child = (prefix + (a,), rest, new_d)
            children.append((node_lb(new_d, rest), child))
        children.sort(key=lambda t: t[0], reverse=True)
        stack.extend(children)

    if exhausted:
        frontier = min((lb for lb, _ in stack), default=incumbent)
        global_lb = min(incumbent, frontier)
        return SolveResult(
            winners=tuple(sorted(best)),
            cost=Fraction(incumbent, denom),
            status="Heuristic",
            method="bnb",
            lower_bound=Fraction(global_lb, denom),
            nodes=nodes,
            ties_complete=False,
        )
    return SolveResult(
        winners=tuple(sorted(best)) if find_all_ties else (best[0],),
        cost=Fraction(incumbent, denom),
        status="Exact",
        method="bnb",
        nodes=nodes,
        ties_complete=find_all_ties,
    )


def solve_kemeny_dp(profile: Profile, find_all_ties: bool = True) -> SolveResult:
    """Exact linear-cost optimum via dynamic programming over subsets (m <= 20)."""
    m = profile.m
    if m > DP_GUARD:
        raise GuardError(f"subset DP guarded at m={DP_GUARD}, got {m}")
    supp, nums, denom = profile.scaled_int_weights()
    W = _pair_weight_matrix(supp, nums, m)
    full = (1 << m) - 1
    INF = float("inf")
    dp = [INF] * (full + 1)
    dp[0] = 0
    # add_cost[a][S]: here recomputed on the fly; S = alternatives already on top
    for S in range(full + 1):
        base = dp[S]
        if base is INF:
            continue
        for a in range(m):
            if S >> a & 1:
                continue
            add = 0
            for b in range(m):
                if b != a and not (S >> b & 1):
                    add += W[b][a]
            T = S | 1 << a
            if base + add < dp[T]:
                dp[T] = base + add
    best = dp[full]

    winners: list[Ranking] = []
    capped = False

    def backtrack(S: int, suffix: tuple[int, ...]):
        nonlocal capped
        if len(winners) >= TIE_ENUMERATION_CAP:
            capped = True
            return
        if S == 0:
            winners.append(suffix)
            return
        for a in range(m):
            if not (S >> a & 1):
                continue
            rest = S ^ 1 << a
            add = sum(W[b][a] for b in range(m) if b != a and not (rest >> b & 1))
            if dp[rest] + add == dp[S]:
                backtrack(rest, (a,) + suffix)
                if not find_all_ties:
                    return

    backtrack(full, ())
    return SolveResult(
        winners=tuple(sorted(winners)),
        cost=Fraction(best, denom),
        status="Exact",
        method="kemeny_dp",
        ties_complete=find_all_ties and not capped,
    )


def solve(
    profile: Profile, cost: CostSpec = CostSpec(), method: str = "auto", **kw
) -> SolveResult:
    """Dispatch: brute force for small m, DP for linear cost, else branch and bound."""
    if method == "auto":
        if profile.m <= 7:
            method = "brute_force"
        elif cost.exponent == 1 and profile.m <= 16:
            method = "kemeny_dp"
        else:
            method = "bnb"
    if method == "brute_force":
        return solve_brute_force(profile, cost, **kw)
    if method == "kemeny_dp":
        if cost.exponent != 1:
            raise DataError("the subset DP handles exponent 1 only")
        return solve_kemeny_dp(profile, **kw)
    if method == "bnb":
        return solve_bnb(profile, cost, **kw)
    raise DataError(f"unknown solve method: {method}")


def emit_ilp(profile: Profile, cost: CostSpec = CostSpec()) -> str:
    """Integer program for the aggregation problem, in CPLEX LP text format.

    Pairwise order binaries x_a_b with completeness and triangle
    constraints define the candidate ranking; each voter gets a distance
    variable, and for the squared objective a second variable bounded
    below by tangents of the square at every integer distance.
    """
    p = cost.exponent
    if p not in (1, 2):
        raise DataError("the integer program covers exponents 1 and 2 only")
    m = profile.m
    dmax = max_swap_distance(m)
    supp = profile.support()
    weights = [profile.entries[r] for r in supp]
    poss = [positions(r) for r in supp]

    obj_var = "sqdist" if p == 2 else "dist"
    obj_terms = " + ".join(
        f"{float(w):.12g} {obj_var}_{k}" for k, w in enumerate(weights)
    )
    lines = ["Minimize", f" obj: {obj_terms}", "Subject To"]

    for a in range(m):
        for b in range(a + 1, m):
            lines.append(f" comp_{a}_{b}: x_{a}_{b} + x_{b}_{a} = 1")
    for a, b, c in itertools.permutations(range(m), 3):
        lines.append(f" tri_{a}_{b}_{c}: x_{a}_{b} + x_{b}_{c} + x_{c}_{a} <= 2")
    for k, pos in enumerate(poss):
        terms = " - ".join(
            f"x_{j}_{i}"
            for i in range(m)
            for j in range(m)
            if i != j and pos[i] < pos[j]
        )
        lines.append(f" dist_def_{k}: dist_{k} - {terms} = 0")
        if p == 2:
            for t in range(dmax):
                rhs = -t * t - t
                lines.append(
                    f" tan_{k}_{t}: sqdist_{k} - {2 * t + 1} dist_{k} >= {rhs}"
                )
    lines.append("Bounds")
    for k in range(len(supp)):
        lines.append(f" 0 <= dist_{k} <= {dmax}")
        if p == 2:
            lines.append(f" 0 <= sqdist_{k} <= {dmax * dmax}")
    lines.append("Binaries")
    for a in range(m):
        for b in range(m):
            if a != b:
                lines.append(f" x_{a}_{b}")
    lines.append("End")
    return "\n".join(lines) + "\n"


def ranking_from_pair_vars(values: dict[str, float], m: int) -> Ranking:
    """Recover the ranking encoded by x_a_b binaries from a solver's assignment."""
    wins = [0] * m
    for a in range(m):
        for b in range(m):
            if a != b and values.get(f"x_{a}_{b}", 0) > 0.5:
                wins[a] += 1
    return as_ranking(sorted(range(m), key=lambda a: (-wins[a], a)))
