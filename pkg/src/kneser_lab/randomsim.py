"""Random sparse Kneser graphs K_p(n, r) and Monte Carlo threshold scans.

Randomness is counter based: the uniform attached to edge ``i`` in a trial is
the ``i``-th output of a Philox stream keyed by the trial seed, and trial
seeds are derived from ``(seed, trial)``.  Nothing depends on the order in
which trials or edges are processed, so results do not change with the
number of worker processes.
"""

from __future__ import annotations

import csv
import io
import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from statistics import NormalDist
from typing import Sequence

import numpy as np

from . import _mis
from .combinat import LogReal, ResourceError
from .kneser import DEFAULT_SOLVER_CAP
from .setfam import KneserParams, all_rsets

MAX_SAMPLE_V = 2000
WILSON_Z = NormalDist().inv_cdf(0.975)


@lru_cache(maxsize=32)
def kneser_edges(n: int, r: int) -> tuple[np.ndarray, np.ndarray]:
    """Canonical edge list of K(n, r): pairs (i, j), i < j, of colex ranks,
    sorted lexicographically.  Edge index = position in this list."""
    masks = all_rsets(n, r)
    us, vs = [], []
    for i, a in enumerate(masks):
        for j in range(i + 1, len(masks)):
            if a & masks[j] == 0:
                us.append(i)
                vs.append(j)
    return np.array(us, dtype=np.int64), np.array(vs, dtype=np.int64)


@lru_cache(maxsize=32)
def _edge_lookup(n: int, r: int) -> dict[tuple[int, int], int]:
    us, vs = kneser_edges(n, r)
    return {(int(u), int(v)): i for i, (u, v) in enumerate(zip(us, vs))}


@lru_cache(maxsize=32)
def star_config_edges(n: int, r: int) -> np.ndarray:
    """Row per (centre x, r-set A outside the star at x): the indices of the
    M Kneser edges joining A to the star.  Shape (n (V - N), M)."""
    masks = all_rsets(n, r)
    lookup = _edge_lookup(n, r)
    rows = []
    for x in range(n):
        bit = 1 << x
        star = [i for i, m in enumerate(masks) if m & bit]
        for j, a in enumerate(masks):
            if a & bit:
                continue
            row = [lookup[(min(i, j), max(i, j))] for i in star if masks[i] & a == 0]
            rows.append(row)
    p = KneserParams(n, r)
    return np.array(rows, dtype=np.int64).reshape(len(rows), p.M)


def trial_seed(seed: int, trial: int) -> int:
    """128-bit Philox key for one trial, derived from (seed, trial)."""
    words = np.random.SeedSequence([seed, trial]).generate_state(2, np.uint64)
    return int(words[0]) << 64 | int(words[1])


def edge_uniforms(key: int, num_edges: int) -> np.ndarray:
    gen = np.random.Generator(np.random.Philox(key=key))
    return gen.random(num_edges)


@dataclass
class SparseKneser:
    params: KneserParams
    p: float
    seed: int
    retained: np.ndarray

    @property
    def num_edges(self) -> int:
        return int(self.retained.sum())

    @property
    def adj(self) -> list[int]:
        us, vs = kneser_edges(self.params.n, self.params.r)
        adj = [0] * self.params.V
        for u, v in zip(us[self.retained].tolist(), vs[self.retained].tolist()):
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        return adj


def _check_sample_size(params: KneserParams) -> None:
    if params.V > MAX_SAMPLE_V:
        raise ResourceError(f"V = {params.V} exceeds the sampling cap of {MAX_SAMPLE_V}")


def sample_kp(params: KneserParams, p: float, seed: int) -> SparseKneser:
    """K_p(n, r): each Kneser edge kept independently with probability p.

    ``seed`` is used directly as the Philox key, so the same (params, p, seed)
    always gives the same graph and, for fixed seed, the retained edge set
    only grows with p.
    """
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p = {p} outside [0, 1]")
    _check_sample_size(params)
    us, _ = kneser_edges(params.n, params.r)
    u = edge_uniforms(seed, len(us))
    return SparseKneser(params, p, seed, u < p)


def alpha_kp(g: SparseKneser, cap: int | None = None) -> int:
    cap = DEFAULT_SOLVER_CAP if cap is None else cap
    if g.params.V > cap:
        raise ResourceError(f"V = {g.params.V} exceeds solver cap {cap}")
    return _mis.max_independent_size(g.adj)


def alpha_equals_n(g: SparseKneser, cap: int | None = None) -> bool:
    """alpha(g) == N, decided as 'no independent set of size N + 1'.

    Stars stay independent in every subgraph, so alpha >= N always.
    """
    cap = DEFAULT_SOLVER_CAP if cap is None else cap
    if g.params.V > cap:
        raise ResourceError(f"V = {g.params.V} exceeds solver cap {cap}")
    return not _mis.has_independent_set(g.adj, g.params.N + 1)


def expected_y(params: KneserParams, p: float) -> LogReal:
    """E[Y] = n (V - N) (1 - p)^M, in log space."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p = {p} outside [0, 1]")
    count = params.n * (params.V - params.N)
    if p == 1.0 or count == 0:
        return LogReal()
    return LogReal.from_log(math.log(count) + params.M * math.log1p(-p))


def y_count(g: SparseKneser) -> int:
    """Number of (star, outside set) pairs with every edge between them missing."""
    _check_sample_size(g.params)
    cfg = star_config_edges(g.params.n, g.params.r)
    absent = ~g.retained
    return int(absent[cfg].all(axis=1).sum())


@dataclass(frozen=True)
class YStat:
    expected: LogReal
    mean: float
    trials: int
    stderr: float


def y_stats(params: KneserParams, p: float, trials: int, seed: int) -> YStat:
    us, _ = kneser_edges(params.n, params.r)
    cfg = star_config_edges(params.n, params.r)
    values = np.empty(trials)
    for t in range(trials):
        absent = edge_uniforms(trial_seed(seed, t), len(us)) >= p
        values[t] = absent[cfg].all(axis=1).sum()
    stderr = float(values.std(ddof=1) / math.sqrt(trials)) if trials > 1 else math.inf
    return YStat(expected_y(params, p), float(values.mean()), trials, stderr)


def wilson_interval(successes: int, trials: int, z: float = WILSON_Z) -> tuple[float, float]:
    if trials <= 0:
        raise ValueError("trials must be positive")
    phat = successes / trials
    denom = 1 + z * z / trials
    centre = (phat + z * z / (2 * trials)) / denom
    half = z * math.sqrt(phat * (1 - phat) / trials + z * z / (4 * trials * trials)) / denom
    return max(0.0, centre - half), min(1.0, centre + half)


@dataclass(frozen=True)
class ScanPoint:
    p: float
    trials: int
    successes: int
    phat: float
    wilson_lo: float
    wilson_hi: float
    expected_y_log: float
    mean_runtime: float = field(default=0.0, compare=False)


def _run_trials(n: int, r: int, p: float, seed: int, salt: int, start: int, stop: int, cap: int):
    params = KneserParams(n, r)
    out = []
    for t in range(start, stop):
        key = trial_seed(seed, t) if salt < 0 else trial_seed(seed, (salt << 32) | t)
        began = time.perf_counter()
        ok = alpha_equals_n(sample_kp(params, p, key), cap)
        out.append((t, ok, time.perf_counter() - began))
    return out


def _chunks(trials: int, workers: int) -> list[tuple[int, int]]:
    size = max(1, math.ceil(trials / (4 * workers)))
    return [(s, min(trials, s + size)) for s in range(0, trials, size)]


def _evaluate(params, p, trials, seed, salt, threads, cap, pool):
    if pool is None:
        results = _run_trials(params.n, params.r, p, seed, salt, 0, trials, cap)
    else:
        futures = [pool.submit(_run_trials, params.n, params.r, p, seed, salt, a, b, cap)
                   for a, b in _chunks(trials, threads)]
        results = [row for fut in futures for row in fut.result()]
    results.sort(key=lambda row: row[0])
    successes = sum(1 for _, ok, _ in results if ok)
    lo, hi = wilson_interval(successes, trials)
    ey = expected_y(params, p)
    return ScanPoint(
        p=p, trials=trials, successes=successes, phat=successes / trials,
        wilson_lo=lo, wilson_hi=hi,
        expected_y_log=-math.inf if ey.is_zero else ey.log_value,
        mean_runtime=sum(row[2] for row in results) / trials,
    )


def prob_alpha_equals_n(
    params: KneserParams, p: float, trials: int, seed: int,
    threads: int = 1, cap: int | None = None,
) -> ScanPoint:
    """Monte Carlo estimate of P(alpha(K_p(n, r)) = N) with a Wilson 95% interval."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    cap = DEFAULT_SOLVER_CAP if cap is None else cap
    _check_sample_size(params)
    if threads <= 1:
        return _evaluate(params, p, trials, seed, -1, 1, cap, None)
    with ProcessPoolExecutor(max_workers=threads) as pool:
        return _evaluate(params, p, trials, seed, -1, threads, cap, pool)


@dataclass
class ScanResult:
    params: KneserParams
    seed: int
    coupled: bool
    points: list[ScanPoint]
    inversions: list[tuple[float, float]] = field(default_factory=list)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["p", "trials", "successes", "phat", "wilson_lo", "wilson_hi", "expected_y_log"])
        for pt in self.points:
            w.writerow([repr(pt.p), pt.trials, pt.successes, repr(pt.phat),
                        repr(pt.wilson_lo), repr(pt.wilson_hi), repr(pt.expected_y_log)])
        return buf.getvalue()

    def to_json(self, version: str) -> str:
        def num(x):
            return x if math.isfinite(x) else None

        doc = {
            "metadata": {
                "n": self.params.n, "r": self.params.r, "seed": self.seed,
                "coupled": self.coupled, "version": version,
                "N": self.params.N, "M": self.params.M, "V": self.params.V,
            },
            "points": [
                {"p": pt.p, "trials": pt.trials, "successes": pt.successes, "phat": pt.phat,
                 "wilson_lo": pt.wilson_lo, "wilson_hi": pt.wilson_hi,
                 "expected_y_log": num(pt.expected_y_log)}
                for pt in self.points
            ],
            "inversions": [list(x) for x in self.inversions],
        }
        return json.dumps(doc, indent=2) + "\n"


def find_inversions(points: Sequence[ScanPoint]) -> list[tuple[float, float]]:
    """Pairs (p_i, p_j), p_i < p_j, whose phat drops by more than the Wilson
    intervals allow (hi at p_j below lo at p_i)."""
    pts = sorted(points, key=lambda pt: pt.p)
    out = []
    for i, a in enumerate(pts):
        for b in pts[i + 1:]:
            if b.wilson_hi < a.wilson_lo:
                out.append((a.p, b.p))
    return out


def threshold_scan(
    params: KneserParams, p_grid: Sequence[float], trials: int, seed: int,
    threads: int = 1, cap: int | None = None, coupled: bool = True,
) -> ScanResult:
    """P(alpha = N) over a grid of p.

    With ``coupled`` (the default) trial t uses the same edge uniforms at
    every p, so each sampled graph shrinks monotonically as p falls.  Without
    it every grid point gets its own independent trial seeds.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    cap = DEFAULT_SOLVER_CAP if cap is None else cap
    _check_sample_size(params)
    grid = list(p_grid)
    pool = ProcessPoolExecutor(max_workers=threads) if threads > 1 else None
    try:
        points = [
            _evaluate(params, p, trials, seed, -1 if coupled else i, threads, cap, pool)
            for i, p in enumerate(grid)
        ]
    finally:
        if pool is not None:
            pool.shutdown()
    return ScanResult(params, seed, coupled, points, find_inversions(points))


def crossing_point(result: ScanResult, level: float = 0.5) -> float | None:
    """Linear interpolation of the first p where phat reaches ``level``."""
    pts = sorted(result.points, key=lambda pt: pt.p)
    for a, b in zip(pts, pts[1:]):
        if a.phat < level <= b.phat:
            return a.p + (level - a.phat) * (b.p - a.p) / (b.phat - a.phat)
    return None
