"""Scan strategies and the Pr / MinPr(y) / Pr_min aggregation.

Two strategies are provided:

* ``full_scan`` evaluates RP for every outcome y and keeps those above a
  threshold (feasible up to n ~ 27);
* ``peak_scan`` tests only ``floor(N*k/r) - 1 .. + 2`` for each k < r, the
  four outcomes around each ideal peak.

``Pr`` is the total probability carried by the tested outcomes, including by
default the trivial k = 0 window (y = 0, 1, 2), whose mass is about 1/r.
``Pr(y)`` for one k is the sum of the *relative* probabilities RP over that
k's window, and ``MinPr(y)`` is its minimum over k = 1..r-1. ``Pr_min`` is the
minimum ``Pr`` over a set of random runs at fixed n.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _kernels as K
from .errors import InvalidArgument
from .numtheory import Convergent, best_approx, window_k
from .transform_spec import INTEGRAL, TransformSpec
from .transforms import (
    DEFAULT_CEILING,
    PeriodicState,
    check_ceiling,
    full_distribution,
    rp_many,
    transform_amplitudes_integral,
)

DEFAULT_SEED = 20021
DEFAULT_THRESHOLD = 0.05
FULL_SCAN_CEILING = 27
TABLE_CEILING = 27
PARITIES = ("odd", "even", "any")


def default_bound(n: int) -> int:
    """Recovery bound 2^ceil(n/2): above every admissible period r < 2^(n/2)."""
    return 1 << ((n + 1) // 2)


@dataclass
class Hit:
    y: int
    rp: float
    prob: float
    recovered: Convergent
    k: int | None
    window_hit: bool

    def to_dict(self) -> dict:
        return {"y": self.y, "rp": self.rp, "prob": self.prob,
                "recovered": str(self.recovered), "k": self.k, "window_hit": self.window_hit}


@dataclass
class ScanRow:
    k: int
    y_tested: list[int]
    rp_values: list[float]
    recovered: list[Convergent]
    window_hits: list[bool]

    @property
    def pr_y(self) -> float:
        return math.fsum(self.rp_values)

    @property
    def window_hit(self) -> bool:
        return any(self.window_hits)

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "y_tested": self.y_tested,
            "rp_values": self.rp_values,
            "pr_y": self.pr_y,
            "recovered": [str(c) for c in self.recovered],
            "window_hits": self.window_hits,
        }


@dataclass
class ScanReport:
    state: PeriodicState
    spec: TransformSpec
    mode: str
    bound: int
    rows: list[ScanRow]
    pr_total: float
    min_pr_y: float
    threshold: float | None = None
    threshold_hits: list[Hit] = field(default_factory=list)
    total_mass: float | None = None
    include_k0: bool = False

    def to_dict(self, rows: bool = True) -> dict:
        d = {
            "mode": self.mode,
            "state": self.state.to_dict(),
            "spec": self.spec.to_dict(),
            "bound": self.bound,
            "pr_total": self.pr_total,
            "min_pr_y": self.min_pr_y,
            "include_k0": self.include_k0,
        }
        if self.mode == "full":
            d["threshold"] = self.threshold
            d["total_mass"] = self.total_mass
            d["threshold_hits"] = [h.to_dict() for h in self.threshold_hits]
        if rows:
            d["rows"] = [row.to_dict() for row in self.rows]
        return d


def peak_windows(state: PeriodicState, include_k0: bool = True) -> list[tuple[int, list[int]]]:
    """Outcomes tested for each k (0 or 1 through r-1), clamped to [0, N) and never repeated."""
    N, r = state.N, state.r
    if r < 2:
        raise InvalidArgument("peak scan needs r >= 2")
    out = []
    last = -1
    for k in range(0 if include_k0 else 1, r):
        base = N * k // r
        ys = [y for y in range(base - 1, base + 3) if last < y < N]
        if ys:
            last = ys[-1]
        out.append((k, ys))
    return out


def peak_scan(state: PeriodicState, spec: TransformSpec, threads: int | None = None,
              bound: int | None = None, ceiling: int = DEFAULT_CEILING,
              force: bool = False, include_k0: bool = True) -> ScanReport:
    """Test ``floor(N*k/r) - 1 .. + 2`` around every peak.

    ``include_k0=False`` drops the trivial k = 0 window from ``Pr``; it never
    enters ``MinPr(y)``.
    """
    spec.validate(state.n)
    check_ceiling(state.n, ceiling, force, "peak scan")
    bound = bound or default_bound(state.n)
    windows = peak_windows(state, include_k0)
    ys = np.fromiter((y for _, w in windows for y in w), dtype=np.int64)
    batch = rp_many(state, ys, spec, threads)
    values = batch.values.tolist()
    N, r = state.N, state.r
    rows = []
    pos = 0
    for k, w in windows:
        vals = values[pos:pos + len(w)]
        pos += len(w)
        rows.append(ScanRow(
            k=k,
            y_tested=w,
            rp_values=vals,
            recovered=[best_approx(y, N, bound) for y in w],
            window_hits=[window_k(y, N, r) == k for y in w],
        ))
    pr_total = state.A / N * math.fsum(values)
    min_pr_y = min(row.pr_y for row in rows if row.k > 0)
    return ScanReport(state, spec, "peak", bound, rows, pr_total, min_pr_y,
                      include_k0=include_k0)


def _matched_k(conv: Convergent, r: int) -> int | None:
    # reduced k'/r' equals k/r for some k iff r' divides r
    if r % conv.r:
        return None
    return conv.k * (r // conv.r)


def full_scan(state: PeriodicState, spec: TransformSpec, threshold: float = DEFAULT_THRESHOLD,
              bound: int | None = None, ceiling: int = FULL_SCAN_CEILING,
              force: bool = False) -> ScanReport:
    """Evaluate every outcome and collect those with RP above ``threshold``.

    y = 0 (the trivial k = 0 peak) is never reported. ``pr_total`` sums the
    probability of the threshold-passing outcomes whose continued fraction
    recovers some k/r.
    """
    if not 0 < threshold < 1:
        raise InvalidArgument("threshold must lie in (0, 1)")
    spec.validate(state.n)
    check_ceiling(state.n, ceiling, force, "full scan")
    bound = bound or default_bound(state.n)
    N, A, r = state.N, state.A, state.r
    if spec.kind == INTEGRAL:
        re, im = transform_amplitudes_integral(state)
        ys, norms, total = K.gaussian_threshold_scan(re, im, state.n, threshold * A * A,
                                                     K.rev16_table())
        del re, im
        ys = np.asarray(ys, dtype=np.int64)
        rps = np.asarray(norms, dtype=np.int64) / (A * A)
        total_mass = int(total) / (A * N)
    else:
        dist = full_distribution(state, spec, ceiling=ceiling, force=force)
        rel = dist.probs * (N / A)
        ys = np.nonzero(rel > threshold)[0]
        rps = rel[ys]
        total_mass = dist.total
    order = np.argsort(ys, kind="stable")
    hits = []
    for y, v in zip(ys[order].tolist(), rps[order].tolist()):
        if y == 0:
            continue
        conv = best_approx(y, N, bound)
        hits.append(Hit(y, v, A / N * v, conv, _matched_k(conv, r), window_k(y, N, r) is not None))

    by_k: dict[int, list[Hit]] = {}
    for h in hits:
        if h.k is not None:
            by_k.setdefault(h.k, []).append(h)
    rows = [ScanRow(k, [h.y for h in hs], [h.rp for h in hs], [h.recovered for h in hs],
                    [h.window_hit for h in hs]) for k, hs in sorted(by_k.items())]
    pr_total = math.fsum(h.prob for h in hits if h.k is not None)
    per_k = {row.k: row.pr_y for row in rows}
    min_pr_y = min((per_k.get(k, 0.0) for k in range(1, r)), default=0.0)
    return ScanReport(state, spec, "full", bound, rows, pr_total, min_pr_y,
                      threshold=threshold, threshold_hits=hits, total_mass=total_mass)


@dataclass
class RunConfig:
    """Seeded batch of random (x0, r) runs at fixed n.

    r is drawn uniformly from integers of the requested parity in
    ``[r_min, r_max]`` where ``r_max`` is the largest r with ``r^2 < 2^n`` and
    ``r_min`` defaults to ``floor(2^(n/2) / 4)``; x0 is then uniform in
    ``[0, r)``. ``r_choices`` replaces the r draw by a uniform pick from an
    explicit list.
    """

    n: int
    spec: TransformSpec
    mode: str = "peak"
    threshold: float = DEFAULT_THRESHOLD
    seed: int = DEFAULT_SEED
    r_parity: str = "odd"
    run_count: int = 3
    r_min: int | None = None
    r_choices: list[int] | None = None
    threads: int | None = None
    force: bool = False

    def __post_init__(self):
        if self.mode not in ("peak", "full"):
            raise InvalidArgument(f"mode must be peak or full, got {self.mode!r}")
        if not 0 < self.threshold < 1:
            raise InvalidArgument("threshold must lie in (0, 1)")
        if self.r_parity not in PARITIES:
            raise InvalidArgument(f"r_parity must be one of {PARITIES}")
        if self.run_count < 1:
            raise InvalidArgument("run_count must be positive")
        if not 0 <= self.seed < 1 << 64:
            raise InvalidArgument("seed must be a 64-bit unsigned integer")

    def r_range(self) -> tuple[int, int]:
        N = 1 << self.n
        hi = math.isqrt(N - 1)
        lo = self.r_min if self.r_min is not None else max(2, math.isqrt(N >> 4))
        return max(2, lo), hi


def draw_state(cfg: RunConfig, rng: np.random.Generator) -> PeriodicState:
    if cfg.r_choices:
        r = int(cfg.r_choices[int(rng.integers(len(cfg.r_choices)))])
    else:
        lo, hi = cfg.r_range()
        if cfg.r_parity == "any":
            first, stride = lo, 1
        else:
            want = 1 if cfg.r_parity == "odd" else 0
            first, stride = lo + ((lo & 1) ^ want), 2
        if first > hi:
            raise InvalidArgument(f"no {cfg.r_parity} period in [{lo}, {hi}]")
        count = (hi - first) // stride + 1
        r = first + stride * int(rng.integers(count))
    x0 = int(rng.integers(r))
    return PeriodicState(cfg.n, x0, r)


@dataclass
class RunsResult:
    config: RunConfig
    reports: list[ScanReport]

    @property
    def pr_min(self) -> float:
        return min(rep.pr_total for rep in self.reports)

    @property
    def pr_max(self) -> float:
        return max(rep.pr_total for rep in self.reports)

    @property
    def min_of_min_pr_y(self) -> float:
        return min(rep.min_pr_y for rep in self.reports)

    def to_dict(self, rows: bool = False) -> dict:
        return {
            "n": self.config.n,
            "spec": self.config.spec.to_dict(),
            "seed": self.config.seed,
            "r_parity": self.config.r_parity,
            "runs": [rep.to_dict(rows=rows) for rep in self.reports],
            "pr_min": self.pr_min,
            "min_of_min_pr_y": self.min_of_min_pr_y,
        }


def random_runs(cfg: RunConfig) -> RunsResult:
    """Run ``cfg.run_count`` scans on seeded random states (PCG64 generator)."""
    rng = np.random.default_rng(cfg.seed)
    reports = []
    for _ in range(cfg.run_count):
        state = draw_state(cfg, rng)
        if cfg.mode == "peak":
            reports.append(peak_scan(state, cfg.spec, threads=cfg.threads, force=cfg.force))
        else:
            reports.append(full_scan(state, cfg.spec, cfg.threshold, force=cfg.force))
    return RunsResult(cfg, reports)


def derive_seed(seed: int, n: int) -> int:
    """Per-n seed for table sweeps, so each row is reproducible on its own."""
    return int(np.random.SeedSequence([seed, n]).generate_state(1, np.uint64)[0])


def fit_power_law(ns, values) -> tuple[float, float]:
    """Least-squares fit of ``log v = log C - c log n``; returns ``(C, c)``."""
    ns = np.asarray(ns, dtype=np.float64)
    values = np.asarray(values, dtype=np.float64)
    if len(ns) < 2:
        raise InvalidArgument("need at least two points to fit")
    slope, intercept = np.polyfit(np.log(ns), np.log(values), 1)
    return float(np.exp(intercept)), float(-slope)


@dataclass
class TableRow:
    n: int
    spec: str
    runs: int
    pr_min: float
    min_min_pr_y: float
    seed: int
    pr_max: float
    states: list[tuple[int, int]]

    def to_dict(self) -> dict:
        return {"n": self.n, "spec": self.spec, "runs": self.runs, "pr_min": self.pr_min,
                "min_min_pr_y": self.min_min_pr_y, "seed": self.seed, "pr_max": self.pr_max,
                "states": [list(s) for s in self.states]}


CSV_HEADER = ["n", "spec", "runs", "pr_min", "min_min_pr_y", "seed"]


@dataclass
class Table:
    rows: list[TableRow]
    fit: tuple[float, float] | None = None

    def to_dict(self) -> dict:
        d = {"rows": [row.to_dict() for row in self.rows]}
        if self.fit is not None:
            d["fit"] = {"const": self.fit[0], "exponent": self.fit[1]}
        return d

    def csv_rows(self) -> list[list]:
        return [[row.n, row.spec, row.runs, row.pr_min, row.min_min_pr_y, row.seed]
                for row in self.rows]


def table_reproduce(ns, spec: TransformSpec, runs_per_n: int = 3, seed: int = DEFAULT_SEED,
                    r_parity: str = "odd", threads: int | None = None, force: bool = False,
                    fit: bool = True) -> Table:
    """Pr_min per n from seeded odd-r peak-scan runs.

    Row n uses ``derive_seed(seed, n)``; the table records the base seed.
    Sizes above ``TABLE_CEILING`` are long-running and need ``force``.
    """
    rows = []
    for n in ns:
        check_ceiling(n, TABLE_CEILING, force, "table sweep")
        cfg = RunConfig(n=n, spec=spec, seed=derive_seed(seed, n), r_parity=r_parity,
                        run_count=runs_per_n, threads=threads, force=force)
        res = random_runs(cfg)
        rows.append(TableRow(n, spec.label, runs_per_n, res.pr_min, res.min_of_min_pr_y, seed,
                             res.pr_max, [(rep.state.x0, rep.state.r) for rep in res.reports]))
    fitted = None
    if fit and len(rows) >= 2:
        fitted = fit_power_law([row.n for row in rows], [row.pr_min for row in rows])
    return Table(rows, fitted)
