"""Iterative reweighted l1 recovery loop.

Starting from the plain l1 minimizer, each pass evaluates the scheme's
weights at the current iterate, solves the weighted-l1 LP, and updates eps
per the configured schedule (fixed / halving / the largest-entry rule).
Iterations are counted as LP solves: history[0] is the l1-min starting
point and max_iter caps the total number of LP solves, so a run never costs
more than max_iter subproblems.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .linalg import as_matrix, as_vector, count_nonzeros
from .merit import WeightClamp, WeightScheme, merit_value, weights
from .simplex import SolverError, weighted_l1_lp

__all__ = [
    "EpsilonSchedule",
    "SolverConfig",
    "IterationRecord",
    "ReweightedResult",
    "ReweightedSolveError",
    "epsilon_update",
    "reweighted_l1",
]

EPS_RULES = ("fixed", "halving", "cwb")
SUPPORT_TOL = 1e-6


class ReweightedSolveError(SolverError):
    """LP failure inside the recovery loop, tagged with the iteration index."""

    def __init__(self, iteration: int, cause: Exception | str):
        super().__init__(f"LP solve failed at iteration {iteration}: {cause}")
        self.iteration = iteration


@dataclass(frozen=True)
class EpsilonSchedule:
    """eps-update rule: fixed | halving | cwb (largest-entry rule, natural log)."""

    rule: str = "halving"
    eps0: float = 1.0
    cwb_floor: float = 0.001

    def __post_init__(self):
        if self.rule not in EPS_RULES:
            raise ValueError(f"unknown eps rule {self.rule!r}, expected one of {EPS_RULES}")
        if self.eps0 <= 0:
            raise ValueError(f"eps0 must be > 0, got {self.eps0}")
        if self.cwb_floor <= 0:
            raise ValueError(f"cwb_floor must be > 0, got {self.cwb_floor}")


@dataclass(frozen=True)
class SolverConfig:
    schedule: EpsilonSchedule = EpsilonSchedule()
    max_iter: int = 10
    x_change_tol: float = 1e-8
    clamp: WeightClamp = WeightClamp()
    feas_tol: float = 1e-9

    def __post_init__(self):
        if self.max_iter < 1:
            raise ValueError(f"max_iter must be >= 1, got {self.max_iter}")
        if self.x_change_tol <= 0:
            raise ValueError(f"x_change_tol must be > 0, got {self.x_change_tol}")
        if self.feas_tol <= 0:
            raise ValueError(f"feas_tol must be > 0, got {self.feas_tol}")


@dataclass(frozen=True)
class IterationRecord:
    """Diagnostics for one LP solve: the eps its weights used, the iterate's
    support size at tol 1e-6, its merit value (None if undefined), the LP
    objective, the pivot count, and the primal residual."""

    eps: float
    support_size: int
    merit: float | None
    lp_objective: float
    lp_pivots: int
    residual_inf: float


@dataclass
class ReweightedResult:
    x_hat: np.ndarray
    iterations_used: int
    history: list[IterationRecord] = field(default_factory=list)


def epsilon_update(schedule: EpsilonSchedule, eps_current: float, x_current,
                   m: int, n: int) -> float:
    """Next eps value.

    fixed   -> eps0
    halving -> eps_current / 2
    cwb     -> max(|x|_(i0), cwb_floor) with i0 = round(m / (4 ln(n/m)))
               clamped into [1, n]; |x|_(i0) is the i0-th largest magnitude.
    """
    if eps_current <= 0:
        raise ValueError(f"eps_current must be > 0, got {eps_current}")
    if schedule.rule == "fixed":
        return schedule.eps0
    if schedule.rule == "halving":
        return 0.5 * eps_current
    if m >= n:
        raise ValueError(f"cwb eps rule requires m < n, got m={m}, n={n}")
    xv = as_vector(x_current)
    if xv.shape[0] == 0:
        raise ValueError("cwb eps rule requires a nonempty iterate")
    i0 = int(math.floor(m / (4.0 * math.log(n / m)) + 0.5))
    i0 = min(max(i0, 1), n)
    mags = np.sort(np.abs(xv))[::-1]
    i0 = min(i0, mags.shape[0])
    return float(max(mags[i0 - 1], schedule.cwb_floor))


def _record(scheme: WeightScheme, x: np.ndarray, eps: float, objective: float,
            pivots: int, a: np.ndarray, b: np.ndarray) -> IterationRecord:
    residual = float(np.max(np.abs(a @ x - b)))
    return IterationRecord(
        eps=eps,
        support_size=count_nonzeros(x, SUPPORT_TOL),
        merit=merit_value(scheme, x, eps),
        lp_objective=objective,
        lp_pivots=pivots,
        residual_inf=residual,
    )


def reweighted_l1(a, b, scheme: WeightScheme,
                  config: SolverConfig = SolverConfig()) -> ReweightedResult:
    """Recover a sparse solution of A x = b by iterative reweighted l1.

    The l1 scheme performs exactly one LP solve.  Other schemes reweight
    until the iterate stops moving (inf-norm change below x_change_tol) or
    the LP budget of max_iter solves is spent.
    """
    am = as_matrix(a)
    bv = as_vector(b, length=am.shape[0])
    if am.shape[0] > am.shape[1]:
        raise ValueError(f"expected a wide system (m <= n), got {am.shape[0]}x{am.shape[1]}")
    m, n = am.shape

    eps = config.schedule.eps0
    try:
        x, objective, pivots = weighted_l1_lp(np.ones(n), am, bv, feas_tol=config.feas_tol)
    except SolverError as exc:
        raise ReweightedSolveError(1, exc) from exc
    history = [_record(scheme, x, eps, objective, pivots, am, bv)]
    assert history[-1].residual_inf <= config.feas_tol

    if scheme.kind == "l1":
        return ReweightedResult(x_hat=x, iterations_used=1, history=history)

    while len(history) < config.max_iter:
        w = weights(scheme, x, eps, config.clamp)
        if not np.all(np.isfinite(w)) or np.any(w <= 0):
            # reachable only with the "none" clamp: the raw weight formula
            # left its valid domain, making the LP subproblem unbounded
            raise ReweightedSolveError(
                len(history) + 1,
                f"weights left the positive domain (min {np.min(w):.3g}, eps {eps:g})",
            )
        try:
            x_new, objective, pivots = weighted_l1_lp(w, am, bv, feas_tol=config.feas_tol)
        except SolverError as exc:
            raise ReweightedSolveError(len(history) + 1, exc) from exc
        history.append(_record(scheme, x_new, eps, objective, pivots, am, bv))
        assert history[-1].residual_inf <= config.feas_tol
        change = float(np.max(np.abs(x_new - x)))
        x = x_new
        if change < config.x_change_tol:
            break
        eps = epsilon_update(config.schedule, eps, x_new, m, n)

    return ReweightedResult(x_hat=x, iterations_used=len(history), history=history)
