"""Toy end-to-end factoring: simulated measurement, period recovery, gcd step."""

from __future__ import annotations

import math
from collections import OrderedDict
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidArgument, ResourceLimitError
from .experiment import DEFAULT_SEED
from .numtheory import best_approx, multiplicative_order, window_k
from .transform_spec import TransformSpec
from .transforms import Distribution, PeriodicState, full_distribution

MAX_TARGET = 1024
MAX_QUBITS = 30
MULTIPLE_CAP = 8


def choose_n(target: int, c_min: int = 2) -> tuple[int, float]:
    """Smallest n with ``2^n >= c_min * target^2``, and the effective ``c = 2^n / target^2``."""
    if target < 3:
        raise InvalidArgument("target must be at least 3")
    if c_min < 1:
        raise InvalidArgument("c_min must be positive")
    need = c_min * target * target
    n = (need - 1).bit_length()
    if n > MAX_QUBITS:
        raise ResourceLimitError(f"n={n} exceeds the {MAX_QUBITS}-qubit cap")
    return n, (1 << n) / (target * target)


def _perfect_power_root(N: int) -> int | None:
    for k in range(2, N.bit_length() + 1):
        root = round(N ** (1.0 / k))
        for cand in (root - 1, root, root + 1):
            if cand > 1 and cand ** k == N:
                return cand
    return None


def _is_prime(N: int) -> bool:
    if N < 2:
        return False
    return all(N % d for d in range(2, math.isqrt(N) + 1))


@dataclass
class FactorJob:
    target: int
    a: int | None = None
    c_min: int = 2
    max_attempts: int = 20
    seed: int = DEFAULT_SEED

    def __post_init__(self):
        if not 3 <= self.target <= MAX_TARGET:
            raise InvalidArgument(f"target must lie in 3..{MAX_TARGET}")
        if self.target % 2 == 0 or _is_prime(self.target):
            raise InvalidArgument(f"target {self.target} must be an odd composite")
        if self.a is not None and not 2 <= self.a < self.target:
            raise InvalidArgument("base a must satisfy 2 <= a < target")
        if self.max_attempts < 1:
            raise InvalidArgument("max_attempts must be positive")


@dataclass
class FactorResult:
    target: int
    spec: TransformSpec
    n: int
    c: float
    success: bool
    factors: list[int] | None
    attempts: int
    transcript: list[dict] = field(default_factory=list)
    reason: str = ""

    def to_dict(self) -> dict:
        return {
            "target": self.target,
            "spec": self.spec.to_dict(),
            "n": self.n,
            "c": self.c,
            "success": self.success,
            "factors": self.factors,
            "attempts": self.attempts,
            "reason": self.reason,
            "transcript": self.transcript,
        }


def sample_outcome(dist: Distribution, rng: np.random.Generator) -> int:
    """Inverse-CDF draw of one measurement outcome."""
    cdf = np.cumsum(dist.probs)
    u = rng.random() * cdf[-1]
    return int(min(np.searchsorted(cdf, u, side="right"), len(cdf) - 1))


class _Distributions:
    # small LRU of full distributions keyed by (x0, r); each costs 8*2^n bytes
    def __init__(self, n: int, spec: TransformSpec, size: int = 8):
        self.n, self.spec, self.size = n, spec, size
        self.cache: OrderedDict[tuple[int, int], Distribution] = OrderedDict()

    def get(self, x0: int, r: int) -> Distribution:
        key = (x0, r)
        if key in self.cache:
            self.cache.move_to_end(key)
        else:
            self.cache[key] = full_distribution(PeriodicState(self.n, x0, r), self.spec)
            if len(self.cache) > self.size:
                self.cache.popitem(last=False)
        return self.cache[key]


def run_factor(job: FactorJob, spec: TransformSpec) -> FactorResult:
    """Try to split ``job.target``, one simulated measurement per attempt.

    Each attempt prepares the periodic state for the current base (period
    from classical order finding, offset x0 uniform in [0, r)), draws y from
    the exact outcome distribution, recovers ``k1/r1`` by continued fractions
    with the target as denominator bound and tests ``r1, 2*r1, ..`` up to
    ``MULTIPLE_CAP * r1`` as the period. Odd periods and ``a^(r/2) = -1`` are
    the known bad-base cases and trigger a fresh random base.
    """
    N_t = job.target
    n, c = choose_n(N_t, job.c_min)
    spec.validate(n)
    N = 1 << n
    rng = np.random.default_rng(job.seed)
    dists = _Distributions(n, spec)
    transcript: list[dict] = []

    def result(success, factors, attempts, reason):
        return FactorResult(N_t, spec, n, c, success, factors, attempts, transcript, reason)

    root = _perfect_power_root(N_t)
    if root is not None:
        transcript.append({"event": "perfect-power", "root": root})
        return result(True, sorted([root, N_t // root]), 0, "perfect power")

    def fresh_base():
        return int(rng.integers(2, N_t - 1))

    a = job.a if job.a is not None else fresh_base()
    for attempt in range(1, job.max_attempts + 1):
        entry: dict = {"attempt": attempt, "a": a}
        transcript.append(entry)
        d = math.gcd(a, N_t)
        if d != 1:
            entry["event"] = "gcd-factor"
            return result(True, sorted([d, N_t // d]), attempt, "base shares a factor with target")
        r = multiplicative_order(a, N_t)
        x0 = int(rng.integers(r))
        y = sample_outcome(dists.get(x0, r), rng)
        conv = best_approx(y, N, N_t)
        k_win = window_k(y, N, r)
        entry.update({"r": r, "x0": x0, "y": y, "convergent": str(conv),
                      "window_k": k_win, "window_hit": k_win is not None})
        period = None
        tried = []
        for t in range(1, MULTIPLE_CAP + 1):
            cand = t * conv.r
            tried.append(cand)
            if pow(a, cand, N_t) == 1:
                period = cand
                break
        entry["candidates"] = tried
        entry["period"] = period
        if period is None:
            entry["event"] = "no-period"
            continue
        if period % 2:
            entry["event"] = "bad-base-odd-period"
            a = fresh_base()
            continue
        half = pow(a, period // 2, N_t)
        if half == N_t - 1:
            entry["event"] = "bad-base-minus-one"
            a = fresh_base()
            continue
        f1, f2 = math.gcd(half - 1, N_t), math.gcd(half + 1, N_t)
        entry["gcds"] = [f1, f2]
        for f in (f1, f2):
            if 1 < f < N_t:
                entry["event"] = "factor"
                return result(True, sorted([f, N_t // f]), attempt, "period found")
        entry["event"] = "trivial-gcd"
        a = fresh_base()
    return result(False, None, job.max_attempts, "attempts exhausted")


def window_frequency(target: int, spec: TransformSpec, attempts: int, seed: int = DEFAULT_SEED,
                     c_min: int = 2) -> float:
    """Fraction of simulated measurements that land inside some success window.

    Each trial draws a random base coprime to the target, a uniform offset and
    one outcome y from the exact distribution.
    """
    n, _ = choose_n(target, c_min)
    N = 1 << n
    rng = np.random.default_rng(seed)
    dists = _Distributions(n, spec)
    hits = 0
    for _ in range(attempts):
        while True:
            a = int(rng.integers(2, target - 1))
            if math.gcd(a, target) == 1:
                break
        r = multiplicative_order(a, target)
        x0 = int(rng.integers(r))
        y = sample_outcome(dists.get(x0, r), rng)
        hits += window_k(y, N, r) is not None
    return hits / attempts
