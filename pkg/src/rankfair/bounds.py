"""Proportionality guarantees: closed-form bounds, the worst-group
statistic, and the linear programs that map out worst-case profiles."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Sequence

import numpy as np

from .core import (
    Profile,
    Ranking,
    as_ranking,
    identity_ranking,
    max_swap_distance,
    reverse_ranking,
    swap_distance,
)
from .errors import DataError, GuardError
from .lp import LinearProgram, LpSolution, solve_lp, verify_solution
from .solver import _pair_sign_matrix, solve_brute_force

LP_GUARD_M = 5
SNAP_DENOMINATOR = 10**6


def single_ranking_bound(alpha: Fraction | float, m: int) -> float:
    """Worst distance any output can sit from a ranking holding weight alpha."""
    alpha = float(alpha)
    if not 0 < alpha <= 1:
        raise DataError(f"alpha must lie in (0, 1], got {alpha}")
    return min(1.0, math.sqrt((1 - alpha) / alpha)) * max_swap_distance(m)


def group_bound(alpha: Fraction | float, m: int) -> float:
    """Worst mean distance between a size-alpha group and any output, exact in m.

    The constant under the square root is the average squared distance
    between two rankings, tied to the Mahonian second moment.
    """
    alpha = float(alpha)
    if not 0 < alpha <= 1:
        raise DataError(f"alpha must lie in (0, 1], got {alpha}")
    dmax = max_swap_distance(m)
    second_moment = dmax * dmax / 4 + (2 * m**3 + 3 * m**2 - 5 * m) / 72
    return math.sqrt(second_moment / alpha)


def mu_alpha(profile: Profile, cand: Ranking, alpha: Fraction) -> Fraction:
    """Mean distance from cand to its unhappiest group of size alpha, exact.

    The maximizing group is found greedily: repeatedly take weight from
    the farthest remaining ranking, splitting the boundary one.
    """
    alpha = Fraction(alpha)
    if not 0 < alpha <= 1:
        raise DataError(f"alpha must lie in (0, 1], got {alpha}")
    cand = as_ranking(cand)
    ordered = sorted(
        profile.entries.items(),
        key=lambda kv: (-swap_distance(kv[0], cand), kv[0]),
    )
    left = alpha
    total = Fraction(0)
    for r, w in ordered:
        take = min(w, left)
        total += take * swap_distance(r, cand)
        left -= take
        if left == 0:
            break
    return total / alpha


@dataclass(frozen=True)
class AlphaCurve:
    """Staircase of (group weight alpha, normalized swap distance) points."""

    points: tuple[tuple[float, float], ...]
    m: int
    kind: str

    def __post_init__(self):
        for a, v in self.points:
            if not 0 < a <= 1 or not -1e-9 <= v <= 1 + 1e-9:
                raise DataError(f"curve point out of range: ({a}, {v})")
        alphas = [a for a, _ in self.points]
        if alphas != sorted(set(alphas)):
            raise DataError("alphas must be strictly increasing")

    def value_at(self, alpha: float) -> float:
        """Step interpolation: worst value attainable at group weight >= alpha."""
        vals = [v for a, v in self.points if a >= alpha - 1e-12]
        return max(vals) if vals else 0.0


def _distance_table(m: int) -> np.ndarray:
    """All-pairs swap distances over the m! rankings in lexicographic order."""
    signs = _pair_sign_matrix(m).astype(np.int32)
    agree = signs @ signs.T
    return (signs.shape[1] - agree) // 2


class WorstCaseResult(NamedTuple):
    alpha: float
    witness: Profile | None
    alpha_exact: Fraction | None


def _snap_profile(weights: np.ndarray, rankings: list[Ranking]) -> Profile | None:
    pairs = {}
    for r, w in zip(rankings, weights):
        if w > 1e-9:
            pairs[r] = Fraction(float(w)).limit_denominator(SNAP_DENOMINATOR)
    if not pairs or sum(pairs.values()) == 0:
        return None
    return Profile.from_weights(pairs, normalize=True)


def worst_profile_single_ranking(
    m: int,
    focal: Ranking | None = None,
    target: Ranking | None = None,
    allow_large: bool = False,
) -> WorstCaseResult:
    """Maximal weight a single ranking can hold while `target` stays optimal.

    Solves a program over all m! ranking weights with one optimality
    constraint per competitor, then snaps the witness to rationals and
    re-verifies it with the exact solver.
    """
    cap = 6 if allow_large else LP_GUARD_M
    if m > cap:
        raise GuardError(f"worst-case program guarded at m={cap}")
    focal = as_ranking(focal) if focal is not None else identity_ranking(m)
    target = as_ranking(target) if target is not None else reverse_ranking(focal)
    rankings = list(itertools.permutations(range(m)))
    idx = {r: i for i, r in enumerate(rankings)}
    D = _distance_table(m).astype(float)
    sq = D**2
    n = len(rankings)
    obj = np.zeros(n)
    obj[idx[focal]] = 1.0
    lp = LinearProgram(obj, sense="max")
    lp.add_row(np.ones(n), "=", 1.0)
    t = idx[target]
    for j in range(n):
        if j != t:
            lp.add_row(sq[:, j] - sq[:, t], ">=", 0.0)
    sol = solve_lp(lp)
    if sol.status != "Optimal":
        return WorstCaseResult(0.0, None, None)
    if not verify_solution(lp, sol, 1e-8):
        raise DataError("simplex output failed independent verification")
    witness = _snap_profile(sol.values, rankings)
    alpha_exact = None
    if witness is not None:
        check = solve_brute_force(witness)
        if target in check.winners:
            alpha_exact = witness.weight(focal)
        else:
            witness = None
    return WorstCaseResult(float(sol.objective_value), witness, alpha_exact)


def alpha_curve(m: int, allow_large: bool = False) -> AlphaCurve:
    """Worst normalized output distance from a weight-alpha ranking, by alpha.

    One program per target ranking with the focal ranking fixed to the
    identity; the staircase value at alpha is the farthest target still
    attainable with that focal weight.
    """
    cap = 6 if allow_large else LP_GUARD_M
    if m > cap:
        raise GuardError(f"alpha_curve guarded at m={cap}")
    focal = identity_ranking(m)
    dmax = max_swap_distance(m)
    attained: list[tuple[float, float]] = []  # (alpha_max, normalized distance)
    for target in itertools.permutations(range(m)):
        res = worst_profile_single_ranking(m, focal, target, allow_large=allow_large)
        attained.append((res.alpha, swap_distance(focal, target) / dmax))
    alphas = sorted({round(a, 9) for a, _ in attained if a > 1e-9})
    points = []
    for a in alphas:
        val = max((v for am, v in attained if am >= a - 1e-9), default=0.0)
        points.append((a, val))
    return AlphaCurve(tuple(points), m, "SingleRankingWorst")


def worst_group_curve(
    m: int, grid: Sequence[float] | None = None, allow_large: bool = False
) -> AlphaCurve:
    """Largest group that can sit at mean distance >= q from the optimum.

    For each q the program maximizes the group weight subject to the
    identity ranking being optimal and the group's mean distance to it
    being at least q (normalized); the result is flipped into a
    value-versus-alpha staircase.
    """
    cap = 6 if allow_large else LP_GUARD_M
    if m > cap:
        raise GuardError(f"worst_group_curve guarded at m={cap}")
    if grid is None:
        grid = [k / 200 for k in range(0, 201)]
    rankings = list(itertools.permutations(range(m)))
    n = len(rankings)
    D = _distance_table(m).astype(float)
    sq = D**2
    dmax = max_swap_distance(m)
    t = 0  # identity ranking is first in lexicographic order
    pts: list[tuple[float, float]] = []
    for q in grid:
        if not 0 <= q <= 1:
            raise DataError(f"grid value out of [0,1]: {q}")
        # variables: w_0..w_{n-1}, g_0..g_{n-1}
        obj = np.concatenate([np.zeros(n), np.ones(n)])
        lp = LinearProgram(obj, sense="max")
        lp.add_row(np.concatenate([np.ones(n), np.zeros(n)]), "=", 1.0)
        for j in range(n):
            if j != t:
                lp.add_row(
                    np.concatenate([sq[:, j] - sq[:, t], np.zeros(n)]), ">=", 0.0
                )
        for i in range(n):
            row = np.zeros(2 * n)
            row[i] = -1.0
            row[n + i] = 1.0
            lp.add_row(row, "<=", 0.0)
        lp.add_row(
            np.concatenate([np.zeros(n), D[:, t] - q * dmax]), ">=", 0.0
        )
        sol = solve_lp(lp)
        if sol.status == "Optimal" and sol.objective_value > 1e-9:
            pts.append((float(sol.objective_value), q))
    by_alpha: dict[float, float] = {}
    for a, q in pts:
        key = round(a, 9)
        by_alpha[key] = max(by_alpha.get(key, 0.0), q)
    alphas = sorted(by_alpha)
    points = tuple(
        (a, max(by_alpha[b] for b in alphas if b >= a - 1e-12)) for a in alphas
    )
    return AlphaCurve(points, m, "GroupWorst")


def lower_bound_curve(
    m: int, grid: Sequence[float] | None = None, allow_large: bool = False
) -> AlphaCurve:
    """Largest group weight that some profile makes unhappy under every output.

    A rule-independent floor: one group variable set per candidate
    output, all drawn from a single profile.  Quadratic in m!, so
    guarded at m=4 by default.
    """
    cap = 5 if allow_large else 4
    if m > cap:
        raise GuardError(f"lower_bound_curve guarded at m={cap}")
    if grid is None:
        grid = [k / 200 for k in range(0, 201)]
    rankings = list(itertools.permutations(range(m)))
    n = len(rankings)
    D = _distance_table(m).astype(float)
    dmax = max_swap_distance(m)
    # variables: w (n), g^cand (n per candidate), alpha (1)
    nv = n + n * n + 1
    a_ix = nv - 1

    pts: list[tuple[float, float]] = []
    for q in grid:
        if not 0 <= q <= 1:
            raise DataError(f"grid value out of [0,1]: {q}")
        obj = np.zeros(nv)
        obj[a_ix] = 1.0
        lp = LinearProgram(obj, sense="max")
        row = np.zeros(nv)
        row[:n] = 1.0
        lp.add_row(row, "=", 1.0)
        for c in range(n):
            base = n + c * n
            row = np.zeros(nv)
            row[base : base + n] = 1.0
            row[a_ix] = -1.0
            lp.add_row(row, "=", 0.0)
            for i in range(n):
                row = np.zeros(nv)
                row[i] = -1.0
                row[base + i] = 1.0
                lp.add_row(row, "<=", 0.0)
            row = np.zeros(nv)
            row[base : base + n] = D[:, c] - q * dmax
            lp.add_row(row, ">=", 0.0)
        sol = solve_lp(lp)
        if sol.status == "Optimal" and sol.objective_value > 1e-9:
            pts.append((float(sol.objective_value), q))
    by_alpha: dict[float, float] = {}
    for a, q in pts:
        key = round(a, 9)
        by_alpha[key] = max(by_alpha.get(key, 0.0), q)
    alphas = sorted(by_alpha)
    points = tuple(
        (a, max(by_alpha[b] for b in alphas if b >= a - 1e-12)) for a in alphas
    )
    return AlphaCurve(points, m, "GroupLowerBound")


def theoretical_upper_curve(m: int, n_points: int = 50) -> AlphaCurve:
    """The closed-form single-ranking cap as a plot-ready curve."""
    pts = []
    dmax = max_swap_distance(m)
    for k in range(1, n_points + 1):
        a = k / n_points
        pts.append((a, single_ranking_bound(a, m) / dmax))
    return AlphaCurve(tuple(pts), m, "TheoreticalUpper")
