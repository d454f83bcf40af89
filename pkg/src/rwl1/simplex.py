"""Two-phase revised simplex for standard-form LPs, plus the weighted-l1 front end.

Solves  min c'z  s.t.  E z = b,  z >= 0  with an explicit basis inverse that
is rebuilt from scratch every REFACTOR_EVERY pivots for numerical stability.
Pivot selection is fully deterministic: the entering variable takes the most
negative reduced cost (smallest index on ties) and the leaving row is chosen
by minimum ratio with lexicographic tie-breaking over the basis-inverse
rows, which resolves the heavily degenerate vertices that weighted-l1
programs produce without stalling or cycling.

The weighted-l1 subproblem  min sum_i w_i |x_i|  s.t.  A x = b  is reduced
to standard form by the split x = u - v with cost (w, w) and equality block
[A, -A].  The split structure admits a direct feasible starting basis (take
u_i or v_i per the sign of the basic solve), so those solves normally skip
phase I altogether.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .linalg import as_matrix, as_vector

__all__ = [
    "LPStatus",
    "LPProblem",
    "LPSolution",
    "SolverError",
    "SimplexStalledError",
    "LPInfeasibleError",
    "default_pivot_budget",
    "solve_standard_form",
    "weighted_l1_lp",
]

# Entries smaller than this are treated as zero in ratio tests and when
# deciding whether a column can pivot an artificial out of the basis.
PIVOT_TOL = 1e-10
# Full basis-inverse rebuild cadence; also triggered by small pivot elements.
REFACTOR_EVERY = 50
# Condition-number ceiling for accepting a crash basis in weighted_l1_lp.
CRASH_COND_LIMIT = 1e10


class SolverError(Exception):
    """Base class for LP/recovery failures that a benchmark should record."""


class SimplexStalledError(SolverError):
    """Pivot budget exhausted before reaching a certified terminal state."""

    def __init__(self, pivots: int):
        super().__init__(f"simplex stalled: pivot budget exhausted after {pivots} pivots")
        self.pivots = pivots


class LPInfeasibleError(SolverError):
    """Raised by callers that require a feasible system (e.g. weighted_l1_lp)."""


class LPStatus(enum.Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class LPProblem:
    """Standard-form LP: min c'z s.t. a_eq z = b_eq, z >= 0."""

    c: np.ndarray
    a_eq: np.ndarray
    b_eq: np.ndarray

    def __post_init__(self):
        a = as_matrix(self.a_eq)
        object.__setattr__(self, "a_eq", a)
        object.__setattr__(self, "c", as_vector(self.c, length=a.shape[1]))
        object.__setattr__(self, "b_eq", as_vector(self.b_eq, length=a.shape[0]))
        if a.shape[0] > a.shape[1]:
            raise ValueError(
                f"standard form requires rows <= cols, got {a.shape[0]}x{a.shape[1]}"
            )

    @property
    def m(self) -> int:
        return self.a_eq.shape[0]

    @property
    def n(self) -> int:
        return self.a_eq.shape[1]


@dataclass
class LPSolution:
    status: LPStatus
    z: np.ndarray | None
    objective: float
    pivots: int


def default_pivot_budget(m: int, n: int) -> int:
    return 50 * (m + n)


class _Basis:
    """Working state of one simplex phase: column indices and B^-1."""

    def __init__(self, e: np.ndarray, basis: np.ndarray):
        self.e = e
        self.basis = np.asarray(basis, dtype=int).copy()
        self.in_basis = np.zeros(e.shape[1], dtype=bool)
        self.in_basis[self.basis] = True
        self.binv = np.linalg.inv(e[:, self.basis])
        self.pivots_since_refactor = 0

    def refactor(self):
        self.binv = np.linalg.inv(self.e[:, self.basis])
        self.pivots_since_refactor = 0

    def pivot(self, row: int, col: int, direction: np.ndarray):
        """Replace basis[row] by col; update B^-1 by an elimination step."""
        leaving = self.basis[row]
        self.in_basis[leaving] = False
        self.in_basis[col] = True
        self.basis[row] = col
        piv = direction[row]
        self.binv[row, :] /= piv
        other = direction.copy()
        other[row] = 0.0
        self.binv -= np.outer(other, self.binv[row, :])
        self.pivots_since_refactor += 1
        if self.pivots_since_refactor >= REFACTOR_EVERY or abs(piv) < 1e-6:
            self.refactor()


def _leaving_row(state: _Basis, d: np.ndarray, xb: np.ndarray) -> int | None:
    """Minimum-ratio row, ties resolved lexicographically over B^-1 rows.

    Returns None when no component blocks (unbounded direction).  Because
    the rows of B^-1 are linearly independent, the lexicographic comparison
    always singles out one row; the final fallback to the smallest basic
    index is unreachable short of severe numerical degradation.
    """
    blocking = np.flatnonzero(d > PIVOT_TOL)
    if blocking.size == 0:
        return None
    ratios = xb[blocking] / d[blocking]
    best = ratios.min()
    rows = blocking[ratios <= best + 1e-9 * (1.0 + abs(best))]
    col = 0
    m = state.binv.shape[1]
    while rows.size > 1 and col < m:
        keys = state.binv[rows, col] / d[rows]
        kbest = keys.min()
        rows = rows[keys <= kbest + 1e-12 * (1.0 + abs(kbest))]
        col += 1
    if rows.size > 1:
        return int(rows[np.argmin(state.basis[rows])])
    return int(rows[0])


def _run_phase(state: _Basis, b: np.ndarray, c: np.ndarray, feas_tol: float,
               max_pivots: int, pivots_used: int) -> tuple[str, int]:
    """Pivot until optimal or unbounded; raises SimplexStalledError when the
    shared pivot budget runs out."""
    e = state.e
    while True:
        y = c[state.basis] @ state.binv
        reduced = c - y @ e
        eligible = (reduced < -feas_tol) & ~state.in_basis
        if not eligible.any():
            return "optimal", pivots_used
        entering = int(np.argmin(np.where(eligible, reduced, 0.0)))

        if pivots_used >= max_pivots:
            raise SimplexStalledError(pivots_used)

        d = state.binv @ e[:, entering]
        xb = state.binv @ b
        np.maximum(xb, 0.0, out=xb)  # degenerate drift below zero is noise
        row = _leaving_row(state, d, xb)
        if row is None:
            return "unbounded", pivots_used
        state.pivot(row, entering, d)
        pivots_used += 1


def solve_standard_form(problem: LPProblem, feas_tol: float = 1e-9,
                        max_pivots: int | None = None,
                        initial_basis: np.ndarray | None = None) -> LPSolution:
    """Two-phase revised simplex.

    OPTIMAL solutions are certified: reduced costs >= -feas_tol and
    ``||a_eq z - b_eq||_inf <= feas_tol``.  An exhausted pivot budget raises
    SimplexStalledError rather than returning an uncertified point.  When
    ``initial_basis`` names a primal-feasible basis, phase I is skipped.
    """
    if feas_tol <= 0:
        raise ValueError(f"feas_tol must be > 0, got {feas_tol}")
    m, n = problem.m, problem.n
    if max_pivots is None:
        max_pivots = default_pivot_budget(m, n)

    e = problem.a_eq.copy()
    b = problem.b_eq.copy()
    flip = b < 0
    e[flip] *= -1.0
    b[flip] *= -1.0

    pivots = 0
    state = None
    if initial_basis is not None:
        try:
            cand = _Basis(e, initial_basis)
        except np.linalg.LinAlgError:
            cand = None  # singular start: fall back to phase I
        if cand is not None and (cand.binv @ b).min() >= -feas_tol:
            state = cand

    if state is None:
        # Phase I: artificial basis, minimize the sum of artificials.
        e1 = np.hstack([e, np.eye(m)])
        c1 = np.concatenate([np.zeros(n), np.ones(m)])
        state = _Basis(e1, np.arange(n, n + m))
        status, pivots = _run_phase(state, b, c1, feas_tol, max_pivots, pivots)
        assert status == "optimal"  # phase I is bounded below by 0
        xb = np.maximum(state.binv @ b, 0.0)
        if float(c1[state.basis] @ xb) > feas_tol:
            return LPSolution(LPStatus.INFEASIBLE, None, 0.0, pivots)
        e, b, state, pivots = _drive_out_artificials(e, b, state, n, pivots, max_pivots)
        state = _Basis(e, state.basis)

    # Phase II on the structural columns only.
    status, pivots = _run_phase(state, b, problem.c, feas_tol, max_pivots, pivots)
    if status == "unbounded":
        return LPSolution(LPStatus.UNBOUNDED, None, float("-inf"), pivots)

    z = np.zeros(n)
    z[state.basis] = np.maximum(state.binv @ b, 0.0)
    residual = _residual(problem, z)
    if residual > feas_tol:
        # One fresh factorization before giving up on certification.
        state.refactor()
        z = np.zeros(n)
        z[state.basis] = np.maximum(state.binv @ b, 0.0)
        residual = _residual(problem, z)
    assert residual <= feas_tol, f"primal residual {residual} exceeds feas_tol"
    return LPSolution(LPStatus.OPTIMAL, z, float(problem.c @ z), pivots)


def _residual(problem: LPProblem, z: np.ndarray) -> float:
    if problem.m == 0:
        return 0.0
    return float(np.max(np.abs(problem.a_eq @ z - problem.b_eq)))


def _drive_out_artificials(e: np.ndarray, b: np.ndarray, state: _Basis, n: int,
                           pivots: int, max_pivots: int):
    """Pivot artificials out of the phase-I basis; drop rows proven redundant.

    Drive-out pivots are degenerate (the leaving artificial sits at zero), so
    a negative pivot element is acceptable.  When a basis position has no
    usable structural column, its tableau row certifies a linear dependence
    among the original constraints; the row with the largest basis-inverse
    weight is deleted, which keeps the remaining basis nonsingular.
    """
    while True:
        art_positions = np.flatnonzero(state.basis >= n)
        if art_positions.size == 0:
            break
        r = int(art_positions[0])
        row = state.binv[r, :] @ e
        row[state.in_basis[:n]] = 0.0
        usable = np.flatnonzero(np.abs(row) > PIVOT_TOL)
        if usable.size > 0:
            if pivots >= max_pivots:
                raise SimplexStalledError(pivots)
            entering = int(usable[0])
            d = state.binv @ state.e[:, entering]
            state.pivot(r, entering, d)
            pivots += 1
        else:
            drop = int(np.argmax(np.abs(state.binv[r, :])))
            keep = [i for i in range(e.shape[0]) if i != drop]
            e = e[keep, :]
            b = b[keep]
            basis = []
            for pos in range(len(state.basis)):
                if pos == r:
                    continue
                v = int(state.basis[pos])
                if v >= n:  # remaining artificial: unit column shifts with the row
                    i = v - n
                    v = n + (i if i < drop else i - 1)
                basis.append(v)
            state = _Basis(np.hstack([e, np.eye(e.shape[0])]), np.array(basis, dtype=int))
    return e, b, state, pivots


def _crash_basis(am: np.ndarray, bv: np.ndarray) -> np.ndarray | None:
    """Feasible starting basis for the split LP, if the leading columns allow.

    Uses the first m columns of A; for each, the u-copy or the v-copy is
    picked so the basic values come out nonnegative.  Returns None when the
    leading block is singular or too ill-conditioned to trust.
    """
    m, n = am.shape
    block = am[:, :m]
    try:
        if np.linalg.cond(block) > CRASH_COND_LIMIT:
            return None
        x = np.linalg.solve(block, bv)
    except np.linalg.LinAlgError:
        return None
    if not np.all(np.isfinite(x)):
        return None
    cols = np.arange(m)
    return np.where(x >= 0, cols, cols + n)


def weighted_l1_lp(w, a, b, feas_tol: float = 1e-9,
                   max_pivots: int | None = None) -> tuple[np.ndarray, float, int]:
    """Minimize sum_i w_i |x_i| subject to A x = b, via the split x = u - v.

    Requires strictly positive weights (which also guarantees a bounded LP).
    Returns (x, objective, pivots).  Raises LPInfeasibleError if the system
    has no solution and propagates SimplexStalledError from the simplex.
    """
    am = as_matrix(a)
    bv = as_vector(b, length=am.shape[0])
    wv = as_vector(w, length=am.shape[1])
    if np.any(wv <= 0):
        raise ValueError("weighted_l1_lp requires all weights > 0")

    split = LPProblem(
        c=np.concatenate([wv, wv]),
        a_eq=np.hstack([am, -am]),
        b_eq=bv,
    )
    if max_pivots is None:
        max_pivots = default_pivot_budget(split.m, split.n)
    sol = solve_standard_form(split, feas_tol=feas_tol, max_pivots=max_pivots,
                              initial_basis=_crash_basis(am, bv))
    if sol.status is LPStatus.INFEASIBLE:
        raise LPInfeasibleError("system A x = b is infeasible")
    assert sol.status is LPStatus.OPTIMAL  # positive weights rule out unboundedness
    ncols = am.shape[1]
    x = sol.z[:ncols] - sol.z[ncols:]
    return x, sol.objective, sol.pivots
