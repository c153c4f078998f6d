"""Executable fairness properties: proportionality on two-ranking and
single-crossing profiles, swap paths, domination, and instance checks."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .core import (
    Profile,
    Ranking,
    as_ranking,
    enumerate_rankings,
    max_swap_distance,
    mix,
    positions,
    reverse_ranking,
    round_set,
    swap_distance,
)
from .errors import DataError, DimensionError, GuardError
from .solver import CostSpec, solve_brute_force


@dataclass(frozen=True)
class SingleCrossingSequence:
    """Rankings in which every alternative pair flips order at most once.

    A maximal sequence has consecutive swap distance 1 everywhere and
    mutually reverse endpoints, so its length is C(m,2)+1.
    """

    rankings: tuple[Ranking, ...]
    maximal: bool = False

    def __post_init__(self):
        rs = tuple(tuple(r) for r in self.rankings)
        object.__setattr__(self, "rankings", rs)
        if not rs:
            raise DataError("empty sequence")
        m = len(rs[0])
        if any(len(r) != m for r in rs):
            raise DimensionError("sequence mixes different m")
        if not is_single_crossing(rs):
            raise DataError("some alternative pair crosses more than once")
        if self.maximal:
            dmax = max_swap_distance(m)
            if len(rs) != dmax + 1:
                raise DataError(f"maximal sequence must have {dmax + 1} rankings")
            if any(swap_distance(a, b) != 1 for a, b in zip(rs, rs[1:])):
                raise DataError("maximal sequence needs consecutive distance 1")
            if rs[-1] != reverse_ranking(rs[0]):
                raise DataError("maximal sequence endpoints must be mutual reverses")

    def __len__(self):
        return len(self.rankings)

    def __getitem__(self, i):
        return self.rankings[i]

    def location(self, r: Ranking) -> int:
        return self.rankings.index(tuple(r))


def is_single_crossing(rankings: tuple[Ranking, ...]) -> bool:
    """Does every pair of alternatives flip relative order at most once?"""
    m = len(rankings[0])
    poss = [positions(r) for r in rankings]
    for a in range(m):
        for b in range(a + 1, m):
            flips = 0
            for p1, p2 in zip(poss, poss[1:]):
                if (p1[a] < p1[b]) != (p2[a] < p2[b]):
                    flips += 1
            if flips > 1:
                return False
    return True


def two_rankings_expected(profile: Profile) -> set[Ranking]:
    """Outputs a proportionality-respecting rule may pick on a 2-ranking profile.

    With inputs r1, r2 at distance d, the output must sit at distance
    round((1 - w_i) * d) from each r_i, both constraints simultaneously.
    """
    supp = profile.support()
    if len(supp) != 2:
        raise DataError(f"expected a 2-ranking support, got {len(supp)}")
    r1, r2 = supp
    w1, w2 = profile.weight(r1), profile.weight(r2)
    d = swap_distance(r1, r2)
    ok1 = round_set((1 - w1) * d)
    ok2 = round_set((1 - w2) * d)
    return {
        cand
        for cand in enumerate_rankings(profile.m)
        if swap_distance(r1, cand) in ok1 and swap_distance(r2, cand) in ok2
    }


def sqk_satisfies_2rp(profile: Profile, cost: CostSpec = CostSpec()) -> bool:
    """Do the exact optima equal the proportional expected set?"""
    if profile.m > 8:
        raise GuardError("2RP check guarded at m=8")
    expected = two_rankings_expected(profile)
    result = solve_brute_force(profile, cost)
    return set(result.winners) == expected


def build_swap_path(r1: Ranking, r2: Ranking) -> SingleCrossingSequence:
    """Shortest swap sequence from r1 to r2, one adjacent transposition per step.

    Repeatedly swaps the first adjacent pair that is inverted relative to
    the target, so each alternative pair crosses at most once and the
    path length is exactly swap(r1, r2) + 1.
    """
    r1, r2 = as_ranking(r1), as_ranking(r2)
    if len(r1) != len(r2):
        raise DimensionError("rankings over different m")
    target_pos = positions(r2)
    path = [r1]
    cur = list(r1)
    while tuple(cur) != r2:
        for i in range(len(cur) - 1):
            if target_pos[cur[i]] > target_pos[cur[i + 1]]:
                cur[i], cur[i + 1] = cur[i + 1], cur[i]
                path.append(tuple(cur))
                break
    maximal = len(path) == max_swap_distance(len(r1)) + 1
    return SingleCrossingSequence(tuple(path), maximal=maximal)


def _extend_to_maximal(order: list[Ranking]) -> SingleCrossingSequence:
    """Concatenate swap paths through `order` and on to the reverse of its start."""
    pieces = list(order) + [reverse_ranking(order[0])]
    seq: list[Ranking] = [pieces[0]]
    for a, b in zip(pieces, pieces[1:]):
        seq.extend(build_swap_path(a, b).rankings[1:])
    return SingleCrossingSequence(tuple(seq), maximal=True)


def find_single_crossing_order(profile: Profile) -> SingleCrossingSequence | None:
    """A maximal single-crossing sequence containing supp(R) in order, if any.

    Tries the distance-sorted order from each support ranking first, then
    falls back to exhaustive permutation of the support (8 rankings max).
    Returns None when no ordering is single-crossing.
    """
    if profile.m > 10:
        raise GuardError("single-crossing search guarded at m=10")
    supp = profile.support()
    if len(supp) > 64:
        raise GuardError("single-crossing search guarded at 64 support rankings")
    if len(supp) == 1:
        return _extend_to_maximal(list(supp))

    def works(order: list[Ranking]) -> bool:
        # distances must be additive along the line and no pair may re-cross
        base = order[0]
        dists = [swap_distance(base, r) for r in order]
        if any(d2 < d1 for d1, d2 in zip(dists, dists[1:])):
            return False
        for a, b, da, db in zip(order, order[1:], dists, dists[1:]):
            if swap_distance(a, b) != db - da:
                return False
        return is_single_crossing(tuple(order))

    for anchor in supp:
        order = sorted(supp, key=lambda r: (swap_distance(anchor, r), r))
        if works(order):
            return _extend_to_maximal(order)
    if len(supp) <= 8:
        import itertools

        for perm in itertools.permutations(supp):
            if works(list(perm)):
                return _extend_to_maximal(list(perm))
    return None


def sc_proportional_expected(
    profile: Profile, seq: SingleCrossingSequence
) -> set[Ranking]:
    """Rounded weighted-mean locations along a compatible maximal sequence."""
    if not seq.maximal:
        raise DataError("expected a maximal sequence")
    index = {r: i for i, r in enumerate(seq.rankings)}
    mu = Fraction(0)
    for r, w in profile.entries.items():
        if r not in index:
            raise DataError(f"support ranking {r} not on the sequence")
        mu += w * index[r]
    return {seq[i] for i in round_set(mu)}


def enumerate_compatible_maximal_sequences(
    profile: Profile, order: list[Ranking]
) -> list[SingleCrossingSequence]:
    """All maximal single-crossing sequences containing `order` as a subsequence.

    Exhaustive, guarded at m=5; intended for the union-over-sequences
    form of the proportionality check.
    """
    m = profile.m
    if m > 5:
        raise GuardError("maximal-sequence enumeration guarded at m=5")
    dmax = max_swap_distance(m)
    results: list[SingleCrossingSequence] = []

    def compatible_future(cur: Ranking, next_support: list[Ranking]) -> bool:
        # each pending support ranking must agree with cur on every pair
        # that has already crossed (a pair never crosses twice)
        pos_c = positions(cur)
        pos_0 = positions(start)
        for s in next_support:
            pos_s = positions(s)
            for a in range(m):
                for b in range(a + 1, m):
                    crossed = (pos_0[a] < pos_0[b]) != (pos_c[a] < pos_c[b])
                    if crossed and (pos_s[a] < pos_s[b]) != (pos_c[a] < pos_c[b]):
                        return False
        return True

    def grow(seq: list[Ranking], pending: list[Ranking]):
        cur = seq[-1]
        if len(seq) == dmax + 1:
            if not pending:
                results.append(SingleCrossingSequence(tuple(seq), maximal=True))
            return
        pos_0 = positions(start)
        pos_c = positions(cur)
        for i in range(m - 1):
            a, b = cur[i], cur[i + 1]
            # only swap pairs still in their original orientation
            if (pos_0[a] < pos_0[b]) == (pos_c[a] < pos_c[b]):
                nxt = list(cur)
                nxt[i], nxt[i + 1] = nxt[i + 1], nxt[i]
                nxt = tuple(nxt)
                still = pending[1:] if pending and nxt == pending[0] else pending
                while still and nxt == (still[0] if still else None):
                    still = still[1:]
                if compatible_future(nxt, still):
                    grow(seq + [nxt], still)

    for start in enumerate_rankings(m):
        pending = list(order)
        if pending and pending[0] == start:
            pending = pending[1:]
        if compatible_future(start, pending):
            grow([start], pending)
    return results


def sc_proportional_expected_exhaustive(profile: Profile) -> set[Ranking] | None:
    """Union of expected sets over every compatible maximal sequence (m <= 5)."""
    seq = find_single_crossing_order(profile)
    if seq is None:
        return None
    order = [r for r in seq.rankings if r in profile.entries]
    out: set[Ranking] = set()
    for s in enumerate_compatible_maximal_sequences(profile, order):
        out |= sc_proportional_expected(profile, s)
    return out


def dominates(r1: Ranking, r2: Ranking, profile: Profile) -> bool:
    """Is r1 weakly closer to every support ranking and strictly to some?"""
    strict = False
    for r in profile.entries:
        d1, d2 = swap_distance(r, r1), swap_distance(r, r2)
        if d1 > d2:
            return False
        if d1 < d2:
            strict = True
    return strict


def check_reinforcement_instance(
    r1: Profile, r2: Profile, lam: Fraction, cost: CostSpec = CostSpec()
) -> bool:
    """If two electorates agree on some optimum, their merge keeps exactly
    the shared optima.  Vacuously true when the optima sets are disjoint."""
    if r1.m > 6:
        raise GuardError("reinforcement instance check guarded at m=6")
    w1 = set(solve_brute_force(r1, cost).winners)
    w2 = set(solve_brute_force(r2, cost).winners)
    common = w1 & w2
    if not common:
        return True
    merged = set(solve_brute_force(mix(r1, r2, Fraction(lam)), cost).winners)
    return merged == common


def check_participation_instance(
    r1: Profile, r2: Profile, lam: Fraction, cost: CostSpec = CostSpec()
) -> bool:
    """Does joining never hurt the joining group on this instance?

    Compares the optima of R1 alone against the optima of the mixture
    lam*R1 + (1-lam)*R2; returns False when some pre-join output
    dominates some post-join output from the joiners' (R2) perspective.
    """
    if r1.m > 6:
        raise GuardError("participation instance check guarded at m=6")
    before = solve_brute_force(r1, cost).winners
    after = solve_brute_force(mix(r1, r2, Fraction(lam)), cost).winners
    for b in before:
        for a in after:
            if dominates(b, a, r2):
                return False
    return True
