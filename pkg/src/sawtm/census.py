"""Whole-series counts: rectangle decomposition, residue-class inclusion-exclusion, fan-out."""

from __future__ import annotations

import enum
import math
import time
from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations

from .core import CountSeries, LatticeMode, Rect
from .oracle import enumerate_polygons_oracle, enumerate_walks_oracle, inscribed_oracle
from .sweep import (
    DEFAULT_STATE_BUDGET,
    SweepPlan,
    SweepStats,
    chunks_for_stops,
    full_plan,
    make_plan,
    run_plan,
)


class Method(enum.Enum):
    ORACLE = "oracle"
    FULL_TM = "tm"
    SKIP = "skip"


def choose_k(nmax: int) -> int:
    """Residue modulus balancing filter strength against the 2^k - 1 subsets."""
    if nmax < 4:
        raise ValueError("choose_k needs nmax >= 4")
    k = math.floor(math.sqrt(nmax * math.log(nmax)) + 0.5)
    return max(2, min(k, nmax - 1))


def default_q(nmax: int, k: int) -> int:
    return nmax // k


def tightened_q(nmax: int, k: int, rect: Rect, mode: LatticeMode) -> int:
    """Smaller threshold using the vertical edges any inscribed object must spend.

    A polygon in a box of height h uses at least 2h vertical edges (a walk at
    least h), so at most ``nmax - 2h`` horizontal edges remain for the cuts.
    """
    vertical = 2 * rect.h if mode is LatticeMode.SAP else rect.h
    return max(nmax - vertical, 0) // k


@dataclass(frozen=True)
class CensusConfig:
    nmax: int
    mode: LatticeMode = LatticeMode.SAP
    method: Method = Method.FULL_TM
    k: int | None = None  # None: choose_k
    q: int | None = None  # None: nmax // k (or the tightened value)
    jobs: int = 1
    transpose_opt: bool = True
    tightened_q: bool = False
    prune: bool = True
    state_budget: int | None = DEFAULT_STATE_BUDGET
    allow_large: bool = False

    def __post_init__(self) -> None:
        if self.nmax < 1:
            raise ValueError("nmax must be >= 1")
        if self.jobs < 1:
            raise ValueError("jobs must be >= 1")
        if self.method is Method.SKIP:
            if self.k is not None and not 2 <= self.k < self.nmax:
                raise ValueError(f"need 2 <= k < n, got k={self.k}, n={self.nmax}")
            if self.k is None and self.nmax < 4:
                raise ValueError("automatic k needs n >= 4; pass k explicitly")
            if self.q is not None and self.q < default_q(self.nmax, self.resolved_k):
                raise ValueError(f"q={self.q} is below n // k; the class set could be empty")

    @property
    def resolved_k(self) -> int | None:
        if self.method is not Method.SKIP:
            return None
        return self.k if self.k is not None else choose_k(self.nmax)


@dataclass
class CensusResult:
    series: CountSeries
    mode: LatticeMode
    method: Method
    nmax: int
    k: int | None = None
    q: int | None = None
    rect_count: int = 0
    task_count: int = 0
    seconds: float = 0.0
    peak_states: int = 0
    per_rect: dict[Rect, CountSeries] = field(default_factory=dict, repr=False)


def rectangles(mode: LatticeMode, nmax: int, transpose_opt: bool) -> list[tuple[Rect, int]]:
    """Non-degenerate boxes that can hold an object of length <= nmax, with multiplicity.

    With ``transpose_opt`` only ``h <= w`` is kept and off-diagonal boxes
    count twice; sweeping the short side keeps the boundary small.
    """
    out = []
    for w in range(1, nmax + 1):
        for h in range(1, nmax + 1):
            if Rect(w, h).min_length(mode) > nmax:
                continue
            if transpose_opt:
                if h > w:
                    continue
                out.append((Rect(w, h), 1 if w == h else 2))
            else:
                out.append((Rect(w, h), 1))
    return out


def residue_terms(rect: Rect, k: int) -> dict[tuple[int, ...], int]:
    """Group the 2^k - 1 signed terms by the stop cuts they actually induce.

    Subsets selecting the same cuts give the same N_K, so their signs are
    summed; groups whose signs cancel are dropped.
    """
    terms: dict[tuple[int, ...], int] = defaultdict(int)
    for size in range(1, k + 1):
        sign = 1 if size % 2 else -1
        for K in combinations(range(k), size):
            Kset = set(K)
            stops = tuple(x for x in range(rect.w) if x % k in Kset)
            terms[stops] += sign
    return {s: c for s, c in terms.items() if c}


def nk_terms(rect: Rect, mode: LatticeMode, nmax: int, k: int, q: int | None = None,
             **kwargs) -> dict[frozenset[int], CountSeries]:
    """Every N_K for nonempty K, computing each distinct stop pattern once."""
    q = default_q(nmax, k) if q is None else q
    cache: dict[tuple[int, ...], CountSeries] = {}
    out = {}
    for size in range(1, k + 1):
        for K in combinations(range(k), size):
            plan = make_plan(rect, k, K, q)
            if plan.stops not in cache:
                cache[plan.stops] = run_plan(plan, mode, nmax, **kwargs)
            out[frozenset(K)] = cache[plan.stops]
    return out


def inscribed_incl_excl(rect: Rect, mode: LatticeMode, nmax: int, k: int,
                        q: int | None = None, **kwargs) -> CountSeries:
    """Signed sum of N_K over all nonempty residue subsets K."""
    total = CountSeries(nmax)
    for K, series in nk_terms(rect, mode, nmax, k, q, **kwargs).items():
        total.add_(series, 1 if len(K) % 2 else -1)
    return total


def _run_task(task: tuple) -> tuple[CountSeries, int]:
    plan, mode, nmax, prune, budget = task
    stats = SweepStats()
    series = run_plan(plan, mode, nmax, prune=prune, budget=budget, stats=stats)
    return series, stats.peak_states


def _oracle_series(config: CensusConfig) -> CountSeries:
    if config.mode is LatticeMode.SAP:
        return enumerate_polygons_oracle(config.nmax, config.allow_large)
    return enumerate_walks_oracle(config.nmax, config.allow_large)


def census(config: CensusConfig) -> CensusResult:
    start = time.perf_counter()
    nmax, mode = config.nmax, config.mode
    if config.method is Method.ORACLE:
        series = _oracle_series(config)
        return CensusResult(series, mode, config.method, nmax,
                            seconds=time.perf_counter() - start)

    k = config.resolved_k
    rects = rectangles(mode, nmax, config.transpose_opt)
    # (rect index, signed weight, plan)
    tasks: list[tuple[int, int, SweepPlan]] = []
    q_used = None
    for ri, (rect, _) in enumerate(rects):
        if config.method is Method.FULL_TM:
            tasks.append((ri, 1, full_plan(rect)))
            continue
        if config.q is not None:
            q = config.q
        elif config.tightened_q:
            q = tightened_q(nmax, k, rect, mode)
        else:
            q = default_q(nmax, k)
        q_used = q if q_used is None else max(q_used, q)
        for stops, coef in residue_terms(rect, k).items():
            plan = SweepPlan(rect, k, frozenset(s % k for s in stops) or frozenset(range(k)),
                             q, stops, chunks_for_stops(rect.w, stops))
            tasks.append((ri, coef, plan))

    payload = [(plan, mode, nmax, config.prune, config.state_budget) for _, _, plan in tasks]
    if config.jobs > 1 and len(payload) > 1:
        with ProcessPoolExecutor(max_workers=config.jobs) as pool:
            outcomes = list(pool.map(_run_task, payload))
    else:
        outcomes = [_run_task(t) for t in payload]

    per_rect = {rect: CountSeries(nmax) for rect, _ in rects}
    peak = 0
    for (ri, coef, _), (series, p) in zip(tasks, outcomes):
        per_rect[rects[ri][0]].add_(series, coef)
        peak = max(peak, p)

    total = CountSeries(nmax)
    for rect, mult in rects:
        total.add_(per_rect[rect].scaled(mult))
    if mode is LatticeMode.SAW:
        total = total.scaled(2)
        total.counts[0] = 1
        for n in range(1, nmax + 1):
            # straight segments: boxes n x 0 and 0 x n, two directions each
            total.counts[n] += 4
    if not total.is_nonnegative():
        raise ArithmeticError(f"negative coefficient in census result: {total}")
    return CensusResult(total, mode, config.method, nmax, k=k, q=q_used,
                        rect_count=len(rects), task_count=len(tasks),
                        seconds=time.perf_counter() - start, peak_states=peak,
                        per_rect=per_rect)


def inscribed(rect: Rect, mode: LatticeMode, nmax: int, method: Method = Method.FULL_TM,
              k: int | None = None, q: int | None = None, prune: bool = True,
              allow_large: bool = False) -> CountSeries:
    """Per-rectangle inscribed series by any method (degenerate SAW boxes included)."""
    if mode is LatticeMode.SAW and (rect.w == 0 or rect.h == 0):
        series = CountSeries(nmax)
        length = max(rect.w, rect.h)
        if 1 <= length <= nmax:
            series.counts[length] = 1
        return series
    rect.validate_for(mode)
    if method is Method.ORACLE:
        return inscribed_oracle(rect, mode, nmax, allow_large)
    if method is Method.FULL_TM:
        return run_plan(full_plan(rect), mode, nmax, prune=prune)
    k = k if k is not None else choose_k(nmax)
    return inscribed_incl_excl(rect, mode, nmax, k, q, prune=prune)
