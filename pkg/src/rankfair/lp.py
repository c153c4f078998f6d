"""Dense two-phase primal simplex, Bland's rule, double precision.

Small and deterministic on purpose: the worst-case programs it serves
have at most a few thousand dense variables, and they are degenerate
enough that anti-cycling matters more than speed.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DataError, DimensionError, GuardError

PIVOT_TOL = 1e-9
FEAS_TOL = 1e-7
SIZE_GUARD = 20_000


@dataclass
class LinearProgram:
    """min/max c'x subject to rows of (coeffs, relation, rhs) and box bounds.

    Bounds default to [0, inf); lo=None marks a free variable.
    """

    objective: np.ndarray
    sense: str = "max"
    rows: list = field(default_factory=list)
    bounds: list = field(default_factory=list)

    def __post_init__(self):
        self.objective = np.asarray(self.objective, dtype=float)
        if self.sense not in ("max", "min"):
            raise DataError(f"sense must be max or min, got {self.sense}")
        if not np.all(np.isfinite(self.objective)):
            raise DataError("objective has non-finite entries")
        if not self.bounds:
            self.bounds = [(0.0, None)] * self.n

    @property
    def n(self) -> int:
        return len(self.objective)

    def add_row(self, coeffs, rel: str, rhs: float):
        coeffs = np.asarray(coeffs, dtype=float)
        if len(coeffs) != self.n:
            raise DimensionError(f"row width {len(coeffs)} != {self.n} variables")
        if rel not in ("<=", "=", ">="):
            raise DataError(f"relation must be <=, = or >=, got {rel}")
        if not (np.all(np.isfinite(coeffs)) and np.isfinite(rhs)):
            raise DataError("non-finite constraint data")
        self.rows.append((coeffs, rel, float(rhs)))

    def dump(self) -> str:
        """The program in LP text format (continuous relaxation form)."""

        def expr(coeffs):
            terms = [
                f"{'+' if c >= 0 else '-'} {abs(c):.12g} v{j}"
                for j, c in enumerate(coeffs)
                if c != 0
            ]
            return " ".join(terms).lstrip("+ ") or "0 v0"

        lines = ["Maximize" if self.sense == "max" else "Minimize"]
        lines.append(f" obj: {expr(self.objective)}")
        lines.append("Subject To")
        for i, (coeffs, rel, rhs) in enumerate(self.rows):
            lines.append(f" c{i}: {expr(coeffs)} {rel.replace('=', '=')} {rhs:.12g}")
        lines.append("Bounds")
        for j, (lo, hi) in enumerate(self.bounds):
            lo_s = "-inf" if lo is None else f"{lo:.12g}"
            hi_s = "+inf" if hi is None else f"{hi:.12g}"
            lines.append(f" {lo_s} <= v{j} <= {hi_s}")
        lines.append("End")
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class LpSolution:
    status: str  # Optimal | Infeasible | Unbounded
    values: np.ndarray | None = None
    objective_value: float | None = None


def _pivot(T: np.ndarray, basis: list[int], row: int, col: int):
    T[row] /= T[row, col]
    piv = T[row]
    for r in range(T.shape[0]):
        if r != row and abs(T[r, col]) > 0:
            T[r] -= T[r, col] * piv
    basis[row] = col


DEGENERACY_STREAK = 40
REFRESH_EVERY = 150


def _refresh(T: np.ndarray, basis: list[int], A: np.ndarray, b: np.ndarray,
             cost: np.ndarray):
    """Rebuild the tableau from the original data to shed rounding drift."""
    m = len(basis)
    B = A[:, basis]
    try:
        T[:m, :-1] = np.linalg.solve(B, A)
        T[:m, -1] = np.linalg.solve(B, b)
    except np.linalg.LinAlgError:
        raise DataError("numerical breakdown: simplex basis became singular")
    cb = cost[basis]
    T[-1, :-1] = cost - cb @ T[:m, :-1]
    T[-1, -1] = -float(cb @ T[:m, -1])


def _simplex_phase(
    T: np.ndarray,
    basis: list[int],
    allowed: np.ndarray,
    A: np.ndarray,
    b: np.ndarray,
    cost_vec: np.ndarray,
) -> str:
    """Pivot the tableau (cost row last) to optimality.

    Entering variable: most negative reduced cost, switching to Bland's
    smallest-index rule after a streak of degenerate pivots so cycling
    cannot occur.  The tableau is refactorized from the original data at
    a fixed cadence, and before unboundedness is reported, so rounding
    drift over long degenerate runs cannot corrupt the outcome.
    """
    m = T.shape[0] - 1
    degenerate = 0
    since_refresh = 0
    while True:
        if since_refresh >= REFRESH_EVERY:
            _refresh(T, basis, A, b, cost_vec)
            since_refresh = 0
        cost = T[-1, :-1]
        masked = np.where(allowed, cost, 0.0)
        if degenerate < DEGENERACY_STREAK:
            enter = int(np.argmin(masked))
            if masked[enter] >= -PIVOT_TOL:
                return "Optimal"
        else:
            neg = np.flatnonzero(masked < -PIVOT_TOL)
            if len(neg) == 0:
                return "Optimal"
            enter = int(neg[0])
        col = T[:m, enter]
        pos = col > PIVOT_TOL
        if not pos.any():
            if since_refresh == 0:
                return "Unbounded"
            _refresh(T, basis, A, b, cost_vec)
            since_refresh = 0
            continue
        ratios = np.where(pos, T[:m, -1] / np.where(pos, col, 1.0), np.inf)
        best = ratios.min()
        tied = np.flatnonzero(ratios <= best + PIVOT_TOL)
        if degenerate < DEGENERACY_STREAK:
            # prefer the largest pivot element so the basis stays well
            # conditioned through long degenerate stretches
            leave = int(max(tied, key=lambda i: col[i]))
        else:
            leave = int(min(tied, key=lambda i: basis[i]))
        degenerate = degenerate + 1 if best <= PIVOT_TOL else 0
        _pivot(T, basis, leave, enter)
        since_refresh += 1


def solve_lp(lp: LinearProgram) -> LpSolution:
    n = lp.n
    if n > SIZE_GUARD or len(lp.rows) > SIZE_GUARD:
        raise GuardError(f"dense simplex guarded at {SIZE_GUARD} variables/rows")

    # standard form: every structural variable nonnegative after shifting
    # by its finite lower bound or splitting a free variable in two
    col_of: list[tuple[str, int, float]] = []  # (kind, source var, shift)
    for j, (lo, hi) in enumerate(lp.bounds):
        if lo is None:
            col_of.append(("pos", j, 0.0))
            col_of.append(("neg", j, 0.0))
        else:
            col_of.append(("shift", j, float(lo)))
    ns = len(col_of)

    def to_std(vec: np.ndarray) -> np.ndarray:
        out = np.zeros(ns)
        for k, (kind, j, _) in enumerate(col_of):
            out[k] = vec[j] if kind != "neg" else -vec[j]
        return out

    rows = []
    for coeffs, rel, rhs in lp.rows:
        shift = sum(
            c * s for c, (kind, _, s) in zip((coeffs[j] for _, j, _ in col_of), col_of)
        )
        rows.append((to_std(coeffs), rel, rhs - shift))
    for j, (lo, hi) in enumerate(lp.bounds):
        if hi is not None:
            e = np.zeros(lp.n)
            e[j] = 1.0
            shift = 0.0 if lo is None else lo
            rows.append((to_std(e), "<=", float(hi) - shift))

    c = to_std(lp.objective)
    if lp.sense == "max":
        c = -c

    # normalize to nonnegative rhs first so slack/artificial counts are right;
    # a >= row with zero rhs flips to <= form so its slack can start basic
    # and no artificial variable is needed
    normed = []
    for coeffs, rel, rhs in rows:
        if rhs < 0:
            coeffs = -coeffs
            rhs = -rhs
            rel = {"<=": ">=", ">=": "<=", "=": "="}[rel]
        if rel == ">=" and rhs == 0:
            coeffs = -coeffs
            rel = "<="
        normed.append((coeffs, rel, rhs))
    rows = normed
    m = len(rows)
    n_slack = sum(1 for _, rel, _ in rows if rel in ("<=", ">="))
    n_art = sum(1 for _, rel, _ in rows if rel in ("=", ">="))
    width = ns + n_slack + n_art + 1
    T = np.zeros((m + 1, width))
    basis = [-1] * m
    slack_at = ns
    art_at = ns + n_slack
    art_cols = []
    for i, (coeffs, rel, rhs) in enumerate(rows):
        row = np.zeros(width)
        row[:ns] = coeffs
        if rel == "<=":
            row[slack_at] = 1.0
            basis[i] = slack_at
            slack_at += 1
        elif rel == ">=":
            row[slack_at] = -1.0
            slack_at += 1
            row[art_at] = 1.0
            basis[i] = art_at
            art_cols.append(art_at)
            art_at += 1
        else:
            row[art_at] = 1.0
            basis[i] = art_at
            art_cols.append(art_at)
            art_at += 1
        row[-1] = rhs
        T[i] = row

    struct = np.zeros(width - 1, dtype=bool)
    struct[: ns + n_slack] = True
    A_full = T[:m, :-1].copy()
    b_full = T[:m, -1].copy()

    if art_cols:
        # phase 1: minimize the artificial total
        phase1_cost = np.zeros(width - 1)
        phase1_cost[art_cols] = 1.0
        T[-1, :-1] = phase1_cost
        for i, bi in enumerate(basis):
            if bi in art_cols:
                T[-1] -= T[i]
        allowed = np.ones(width - 1, dtype=bool)
        status = _simplex_phase(T, basis, allowed, A_full, b_full, phase1_cost)
        if status != "Optimal":
            raise DataError("numerical breakdown in feasibility phase")
        if T[-1, -1] < -FEAS_TOL:
            return LpSolution("Infeasible")
        # drive leftover artificials out of the basis or drop their rows
        keep = []
        for i in range(m):
            if basis[i] in art_cols:
                piv = next(
                    (j for j in np.flatnonzero(struct) if abs(T[i, j]) > PIVOT_TOL),
                    None,
                )
                if piv is None:
                    continue  # redundant row
                _pivot(T, basis, i, piv)
            keep.append(i)
        if len(keep) < m:
            T = np.vstack([T[keep], T[-1:]])
            basis = [basis[i] for i in keep]
            A_full = A_full[keep]
            b_full = b_full[keep]
            m = len(keep)

    # phase 2 cost row
    phase2_cost = np.zeros(width - 1)
    phase2_cost[:ns] = c
    T[-1, :-1] = phase2_cost
    T[-1, -1] = 0.0
    for i, bi in enumerate(basis):
        if T[-1, bi] != 0:
            T[-1] -= T[-1, bi] * T[i]
    status = _simplex_phase(T, basis, struct, A_full, b_full, phase2_cost)
    if status == "Unbounded":
        return LpSolution("Unbounded")

    x_std = np.zeros(width - 1)
    for i, b in enumerate(basis):
        x_std[b] = T[i, -1]
    x = np.zeros(lp.n)
    for k, (kind, j, shift) in enumerate(col_of):
        if kind == "shift":
            x[j] = x_std[k] + shift
        elif kind == "pos":
            x[j] += x_std[k]
        else:
            x[j] -= x_std[k]
    obj = float(lp.objective @ x)
    return LpSolution("Optimal", x, obj)


def verify_solution(lp: LinearProgram, sol: LpSolution, tol: float = 1e-8) -> bool:
    """Independent constraint-by-constraint recheck of an Optimal solution."""
    if sol.status != "Optimal":
        raise DataError("verify_solution expects an Optimal solution")
    x = sol.values
    if x is None or not np.all(np.isfinite(x)):
        return False
    for coeffs, rel, rhs in lp.rows:
        v = float(np.dot(coeffs, x))
        if rel == "<=" and v > rhs + tol:
            return False
        if rel == ">=" and v < rhs - tol:
            return False
        if rel == "=" and abs(v - rhs) > tol:
            return False
    for xi, (lo, hi) in zip(x, lp.bounds):
        if lo is not None and xi < lo - tol:
            return False
        if hi is not None and xi > hi + tol:
            return False
    return abs(float(lp.objective @ x) - sol.objective_value) <= tol
