"""Recovery-probability benchmarking over grids of (scheme, sparsity, params).

Trials are pure functions of (spec, scheme index, k, trial index): each gets
its own instance seed derived by hashing the indices into the base seed, so
results are independent of execution order and of the worker count, and any
cell can be recomputed in isolation.  Failed solves (stalled LPs) count as
recovery failures and never abort a sweep.

Wall-clock time is measured per trial and reported in the in-memory results
and the CLI summary, but the CSV wall_ms column is written as 0 unless
timing is explicitly requested: emitted artifacts stay byte-reproducible.
"""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .instances import DistributionSpec, make_instance
from .linalg import as_vector
from .merit import WeightScheme
from .rng import mix64
from .simplex import SolverError
from .solver import ReweightedResult, SolverConfig, reweighted_l1

__all__ = [
    "SweepSpec",
    "TrialRecord",
    "CellResult",
    "SweepResult",
    "is_success",
    "trial_seed",
    "run_trial",
    "sweep",
    "CSV_HEADER",
]

CSV_HEADER = "distribution,scheme,p,q,eps_rule,k,trials,successes,success_rate,mean_iters,mean_pivots,wall_ms"


@dataclass(frozen=True)
class SweepSpec:
    dist: DistributionSpec
    m: int
    n: int
    k_values: tuple[int, ...]
    schemes: tuple[tuple[WeightScheme, SolverConfig], ...]
    trials: int
    seed_base: int
    success_tol: float = 1e-4

    def __post_init__(self):
        object.__setattr__(self, "k_values", tuple(int(k) for k in self.k_values))
        object.__setattr__(self, "schemes", tuple(self.schemes))
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")
        if not self.k_values or not self.schemes:
            raise ValueError("k_values and schemes must be nonempty")
        if any(k > self.m for k in self.k_values):
            raise ValueError(f"every k must be <= m = {self.m}, got {self.k_values}")
        if self.success_tol <= 0:
            raise ValueError(f"success_tol must be > 0, got {self.success_tol}")


@dataclass(frozen=True)
class TrialRecord:
    scheme_index: int
    k: int
    trial_index: int
    seed: int
    success: bool
    iterations: int
    pivots: int
    wall_ms: float = field(compare=False, default=0.0)
    fail_reason: str | None = None


@dataclass(frozen=True)
class CellResult:
    distribution: str
    scheme: str
    p: float | None
    q: float | None
    eps_rule: str
    k: int
    trials: int
    successes: int
    success_rate: float
    mean_iters: float
    mean_pivots: float
    wall_ms: float = field(compare=False, default=0.0)
    scheme_index: int = 0  # position in SweepSpec.schemes; not part of the CSV


@dataclass
class SweepResult:
    spec: SweepSpec
    cells: list[CellResult]

    def to_csv(self, include_timing: bool = False) -> str:
        lines = [CSV_HEADER]
        for c in self.cells:
            lines.append(",".join([
                c.distribution,
                c.scheme,
                _fmt(c.p),
                _fmt(c.q),
                c.eps_rule,
                str(c.k),
                str(c.trials),
                str(c.successes),
                _fmt(c.success_rate),
                _fmt(c.mean_iters),
                _fmt(c.mean_pivots),
                _fmt(round(c.wall_ms, 3)) if include_timing else "0",
            ]))
        return "\n".join(lines) + "\n"


def _fmt(v) -> str:
    if v is None:
        return ""
    return repr(float(v))


def is_success(x_hat, x_true, success_tol: float = 1e-4) -> bool:
    """Exact-recovery test: inf-norm deviation within success_tol."""
    if success_tol <= 0:
        raise ValueError(f"success_tol must be > 0, got {success_tol}")
    xh = as_vector(x_hat)
    xt = as_vector(x_true)
    if xh.shape[0] != xt.shape[0]:
        raise ValueError(f"length mismatch: {xh.shape[0]} vs {xt.shape[0]}")
    return bool(np.max(np.abs(xh - xt)) <= success_tol)


def trial_seed(seed_base: int, k: int, scheme_index: int, trial_index: int) -> int:
    """Instance seed for one trial: splitmix64 hash of the packed indices."""
    packed = (int(k) << 40) ^ (int(scheme_index) << 20) ^ int(trial_index)
    return (int(seed_base) ^ mix64(packed)) & ((1 << 64) - 1)


def run_trial(spec: SweepSpec, scheme_index: int, k: int, trial_index: int) -> TrialRecord:
    """One recovery attempt; solver failures are recorded, not raised."""
    scheme, config = spec.schemes[scheme_index]
    seed = trial_seed(spec.seed_base, k, scheme_index, trial_index)
    inst = make_instance(spec.dist, spec.m, spec.n, k, seed)
    start = time.perf_counter()
    try:
        result: ReweightedResult = reweighted_l1(inst.a, inst.b, scheme, config)
    except SolverError as exc:
        wall = (time.perf_counter() - start) * 1e3
        return TrialRecord(scheme_index, k, trial_index, seed, success=False,
                           iterations=0, pivots=0, wall_ms=wall, fail_reason=str(exc))
    wall = (time.perf_counter() - start) * 1e3
    pivots = sum(rec.lp_pivots for rec in result.history)
    ok = is_success(result.x_hat, inst.x_true, spec.success_tol)
    return TrialRecord(scheme_index, k, trial_index, seed, success=ok,
                       iterations=result.iterations_used, pivots=pivots, wall_ms=wall)


def _run_cell(args) -> list[TrialRecord]:
    spec, scheme_index, k = args
    return [run_trial(spec, scheme_index, k, t) for t in range(spec.trials)]


def sweep(spec: SweepSpec, workers: int = 1) -> SweepResult:
    """Run the full grid; identical results for any worker count."""
    if workers < 1:
        raise ValueError(f"workers must be >= 1, got {workers}")
    cells = [(spec, si, k) for si in range(len(spec.schemes)) for k in spec.k_values]
    if workers == 1:
        per_cell = [_run_cell(c) for c in cells]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            per_cell = list(pool.map(_run_cell, cells))

    results = []
    for (_, si, k), records in zip(cells, per_cell):
        scheme, config = spec.schemes[si]
        successes = sum(1 for r in records if r.success)
        results.append(CellResult(
            distribution=spec.dist.label,
            scheme=scheme.label,
            p=scheme.p if scheme.kind in ("zl", "w1", "w2") else None,
            q=scheme.q if scheme.kind == "w2" else None,
            eps_rule=config.schedule.rule if scheme.kind != "l1" else "",
            k=k,
            trials=spec.trials,
            successes=successes,
            success_rate=successes / spec.trials,
            mean_iters=sum(r.iterations for r in records) / spec.trials,
            mean_pivots=sum(r.pivots for r in records) / spec.trials,
            wall_ms=sum(r.wall_ms for r in records),
            scheme_index=si,
        ))
    results.sort(key=lambda c: (c.scheme, c.p if c.p is not None else -1.0,
                                c.q if c.q is not None else -1.0, c.k))
    return SweepResult(spec=spec, cells=results)
