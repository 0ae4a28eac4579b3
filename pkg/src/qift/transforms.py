"""Relative probabilities and outcome distributions for periodic input states.

A periodic state is the equal superposition over ``x(j) = x0 + j*r`` for
``j = 0..A-1``. Under any supported transform the (unnormalised) amplitude of
outcome y is ``S(y) = sum_j omega^{q_j}`` with ``omega = exp(2*pi*i / 2^order)``
and ``q_j`` the phase index of ``(x(j), y)``. Everything downstream is built on

    RP(y)   = |S(y) / A|^2
    Prob(y) = (A / N) * RP(y)

Phase indices are exact integers, so each ``S(y)`` is carried as an integer
histogram over the ``2^order`` phase classes. Only the final combination with
the fixed grid of cosines and sines is floating point, and for the integral
transform even that is exact (``S`` is a Gaussian integer).
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

import numpy as np

from . import _kernels as K
from .bits import MAX_WIDTH, check_word
from .errors import InvalidArgument, ResourceLimitError
from .transform_spec import EXACT, INTEGRAL, TransformSpec

DEFAULT_CEILING = 30
UNITARY_MAX_N = 12


def default_threads() -> int:
    env = os.environ.get("QIFT_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise InvalidArgument(f"QIFT_THREADS={env!r} is not an integer") from None
    return os.cpu_count() or 1


@dataclass(frozen=True)
class PeriodicState:
    n: int
    x0: int
    r: int

    def __post_init__(self):
        if not 1 <= self.n <= MAX_WIDTH:
            raise InvalidArgument(f"n={self.n} outside 1..{MAX_WIDTH}")
        if self.r < 1:
            raise InvalidArgument("period r must be positive")
        if self.n > 1 and self.r > 1 << (self.n - 1):
            raise InvalidArgument(f"period r={self.r} exceeds 2^(n-1)")
        if not 0 <= self.x0 < self.r:
            raise InvalidArgument(f"offset x0={self.x0} must satisfy 0 <= x0 < r={self.r}")

    @property
    def N(self) -> int:
        return 1 << self.n

    @property
    def A(self) -> int:
        """Number of terms: ``x0 + (A-1)*r < N <= x0 + A*r``."""
        return -(-(self.N - self.x0) // self.r)

    def support(self) -> np.ndarray:
        return np.arange(self.x0, self.N, self.r, dtype=np.uint64)

    def to_dict(self) -> dict:
        return {"n": self.n, "x0": self.x0, "r": self.r, "A": self.A}


@dataclass(frozen=True)
class GaussianInt:
    re: int
    im: int

    def __add__(self, other):
        return GaussianInt(self.re + other.re, self.im + other.im)

    def __sub__(self, other):
        return GaussianInt(self.re - other.re, self.im - other.im)

    def __mul__(self, other):
        if isinstance(other, int):
            return GaussianInt(self.re * other, self.im * other)
        return GaussianInt(self.re * other.re - self.im * other.im,
                           self.re * other.im + self.im * other.re)

    __rmul__ = __mul__

    def conjugate(self):
        return GaussianInt(self.re, -self.im)

    def norm(self) -> int:
        return self.re * self.re + self.im * self.im

    def __complex__(self):
        return complex(self.re, self.im)


# i^q for q = 0..3
_UNIT_POWERS = (GaussianInt(1, 0), GaussianInt(0, 1), GaussianInt(-1, 0), GaussianInt(0, -1))


def unit_power(q: int) -> GaussianInt:
    return _UNIT_POWERS[q & 3]


def grid_tables(order: int) -> tuple[np.ndarray, np.ndarray]:
    """cos and sin at the angles ``2*pi*q / 2^order``, exact at multiples of a quarter turn."""
    size = 1 << order
    ang = 2.0 * np.pi * np.arange(size) / size
    cos, sin = np.cos(ang), np.sin(ang)
    quarter = size // 4
    if quarter:
        for i, (c, s) in enumerate(((1.0, 0.0), (0.0, 1.0), (-1.0, 0.0), (0.0, -1.0))):
            cos[i * quarter], sin[i * quarter] = c, s
    elif size == 2:
        cos[:], sin[:] = (1.0, -1.0), (0.0, 0.0)
    return cos, sin


@dataclass
class PhaseHistogram:
    counts: np.ndarray
    order: int

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    def gaussian(self) -> GaussianInt:
        if self.order != 2:
            raise InvalidArgument("Gaussian-integer sum needs order 2")
        c0, c1, c2, c3 = (int(c) for c in self.counts)
        return GaussianInt(c0 - c2, c1 - c3)

    def amplitude(self) -> complex:
        cos, sin = grid_tables(self.order)
        return complex(float(self.counts @ cos), float(self.counts @ sin))


@dataclass(frozen=True)
class RelProb:
    value: float
    exact: Fraction | None = None

    @property
    def rounded(self) -> float:
        return float(f"{self.value:.6g}")

    def to_dict(self) -> dict:
        d = {"value": self.value, "rounded": self.rounded}
        if self.exact is not None:
            d["numerator"] = self.exact.numerator
            d["denominator"] = self.exact.denominator
        return d


def _check_y(state: PeriodicState, y: int) -> None:
    check_word(y, state.n)


def phase_histogram(state: PeriodicState, y: int, spec: TransformSpec) -> PhaseHistogram:
    _check_y(state, y)
    spec.validate(state.n)
    order = spec.order(state.n)
    if spec.kind == EXACT:
        if order > K.MAX_HIST_ORDER:
            raise ResourceLimitError(f"exact-QFT histogram needs 2^{order} bins")
        q = (state.support() * np.uint64(y)) & np.uint64(state.N - 1)
        counts = np.bincount(q.astype(np.int64), minlength=state.N).astype(np.int64)
        return PhaseHistogram(counts, order)
    if order > K.MAX_HIST_ORDER:
        raise ResourceLimitError(f"histogram over 2^{order} phase classes is too wide")
    counts = K.phase_histograms(np.array([y], dtype=np.int64), state.n, state.x0, state.r,
                                state.A, order, spec.modified, K.rev16_table())
    return PhaseHistogram(counts[0], order)


def qft_closed_form(state: PeriodicState, y: int) -> float:
    """Geometric-series value ``|sin(pi*A*theta) / (A*sin(pi*theta))|^2``, theta = frac(r*y/N)."""
    N, A = state.N, state.A
    t = (state.r * y) % N
    if t == 0:
        return 1.0
    # reduce A*theta mod 1 in integers before the sine
    ta = (A * t) % N
    val = math.sin(math.pi * ta / N) / (A * math.sin(math.pi * t / N))
    return val * val


def _resolve_method(spec: TransformSpec, n: int, method: str) -> str:
    order = spec.order(n)
    if method == "auto":
        if spec.kind == EXACT:
            return "closed"
        return "histogram" if order <= K.MAX_SCRATCH_ORDER else "direct"
    if method == "closed" and spec.kind != EXACT:
        raise InvalidArgument("closed form exists only for the exact QFT")
    if method == "histogram" and order > K.MAX_SCRATCH_ORDER:
        raise ResourceLimitError(f"histogram over 2^{order} phase classes is too wide")
    if method not in ("closed", "histogram", "direct"):
        raise InvalidArgument(f"unknown method {method!r}")
    return method


def rp(state: PeriodicState, y: int, spec: TransformSpec, method: str = "auto") -> RelProb:
    """Relative probability ``|S(y)/A|^2``.

    ``method``: ``auto`` (histogram, or closed form for the exact QFT),
    ``histogram``, ``closed`` (exact QFT only) or ``direct`` (per-term
    complex sum, no binning). The integral transform also carries the exact
    rational value.
    """
    _check_y(state, y)
    batch = rp_many(state, [y], spec, threads=1, method=method)
    if batch.norms is not None:
        exact = Fraction(int(batch.norms[0]), state.A * state.A)
        return RelProb(float(exact), exact)
    return RelProb(float(batch.values[0]))


def prob(state: PeriodicState, y: int, spec: TransformSpec, method: str = "auto") -> float:
    return state.A / state.N * rp(state, y, spec, method).value


def _split(items: np.ndarray, parts: int) -> list[np.ndarray]:
    parts = max(1, min(parts, len(items)))
    return [c for c in np.array_split(items, parts) if len(c)]


@dataclass
class BatchRP:
    """Relative probabilities for many y at once.

    ``norms`` holds the exact ``|S(y)|^2`` for the integral transform.
    """

    ys: np.ndarray
    values: np.ndarray
    norms: np.ndarray | None


def rp_many(state: PeriodicState, ys, spec: TransformSpec, threads: int | None = None,
            method: str = "auto") -> BatchRP:
    """Vectorised ``rp`` over an array of outcomes.

    The work is split into contiguous chunks across threads. Each y is
    computed independently and chunks are concatenated in input order, so the
    output does not depend on the thread count.
    """
    ys = np.asarray(ys, dtype=np.int64)
    spec.validate(state.n)
    if len(ys) and (ys.min() < 0 or ys.max() >= state.N):
        raise InvalidArgument("outcome out of range")
    method = _resolve_method(spec, state.n, method)
    A = state.A
    order = spec.order(state.n)
    exact = spec.kind == EXACT
    if method == "closed":
        values = np.array([qft_closed_form(state, int(y)) for y in ys], dtype=np.float64)
        return BatchRP(ys, values, None)

    tab = K.rev16_table()
    args = (state.n, state.x0, state.r, A, order, spec.modified)
    if method == "direct":
        def work(chunk):
            s = K.amplitude_sums(chunk, *args, exact, tab)
            return s.real ** 2 + s.imag ** 2
    elif spec.kind == INTEGRAL:
        def work(chunk):
            c = K.phase_histograms(chunk, *args, tab)
            a = c[:, 0] - c[:, 2]
            b = c[:, 1] - c[:, 3]
            return a * a + b * b
    else:
        cos, sin = grid_tables(order)

        def work(chunk):
            return K.histogram_norms(chunk, *args, exact, tab, cos, sin)

    chunks = _split(ys, threads or default_threads())
    if len(chunks) <= 1:
        parts = [work(c) for c in chunks]
    else:
        with ThreadPoolExecutor(max_workers=len(chunks)) as pool:
            parts = list(pool.map(work, chunks))
    if not parts:
        return BatchRP(ys, np.zeros(0), None)
    norms = np.concatenate(parts)
    if norms.dtype.kind == "i":
        return BatchRP(ys, norms / (A * A), norms)
    return BatchRP(ys, norms / A / A, None)


@dataclass
class Distribution:
    state: PeriodicState
    spec: TransformSpec
    probs: np.ndarray
    norms: np.ndarray | None = None

    @property
    def total(self) -> float:
        return float(math.fsum(self.probs))

    @property
    def exact_total(self) -> Fraction | None:
        """Exact sum of probabilities (integral transform only)."""
        if self.norms is None:
            return None
        return Fraction(int(self.norms.sum(dtype=np.int64)), self.state.A * self.state.N)


def check_ceiling(n: int, ceiling: int, force: bool, what: str) -> None:
    if n > ceiling and not force:
        raise ResourceLimitError(f"{what} at n={n} exceeds the ceiling n<={ceiling}; pass force to override")


def transform_amplitudes_integral(state: PeriodicState) -> tuple[np.ndarray, np.ndarray]:
    """Gaussian-integer amplitudes ``S(y)`` for all y, stored at bit-reversed index."""
    re = np.zeros(state.N, dtype=np.int32)
    im = np.zeros(state.N, dtype=np.int32)
    K.load_indicator_int(re, state.x0, state.r)
    K.butterfly_integral(re, im, state.n)
    return re, im


def full_distribution(state: PeriodicState, spec: TransformSpec, method: str = "auto",
                      ceiling: int = DEFAULT_CEILING, force: bool = False,
                      threads: int | None = None) -> Distribution:
    """Probability of every outcome y.

    ``auto`` uses a fast transform (O(n*N)): an exact Gaussian-integer
    butterfly for the integral transform, a complex butterfly for AQFT
    kinds and an FFT for the exact QFT. ``direct`` evaluates ``prob`` for
    every y through the per-y histograms (O(N*A)); it is the reference route.
    """
    spec.validate(state.n)
    check_ceiling(state.n, ceiling, force, "full distribution")
    N, A = state.N, state.A
    tab = K.rev16_table()
    if method == "direct":
        route = "histogram" if spec.order(state.n) <= K.MAX_SCRATCH_ORDER else "direct"
        batch = rp_many(state, np.arange(N, dtype=np.int64), spec, threads, route)
        return Distribution(state, spec, batch.values * (A / N), batch.norms)
    if method != "auto":
        raise InvalidArgument(f"unknown method {method!r}")
    if spec.kind == INTEGRAL:
        re, im = transform_amplitudes_integral(state)
        norms = K.gaussian_norms_in_order(re, im, state.n, tab)
        del re, im
        return Distribution(state, spec, norms / (A * N), norms)
    if spec.kind == EXACT:
        psi = np.zeros(N, dtype=np.complex128)
        psi[state.x0::state.r] = 1.0
        amp = np.fft.ifft(psi) * N
        return Distribution(state, spec, (amp.real ** 2 + amp.imag ** 2) / (A * N))
    amp = np.zeros(N, dtype=np.complex128)
    amp[state.x0::state.r] = 1.0
    K.butterfly_truncated(amp, state.n, spec.order(state.n), spec.modified)
    return Distribution(state, spec, K.complex_norms_in_order(amp, state.n, tab) / (A * N))


def phase_matrix(n: int, spec: TransformSpec) -> np.ndarray:
    """``Q[x, y]`` = phase index for all pairs (small n only)."""
    spec.validate(n)
    if n > UNITARY_MAX_N:
        raise ResourceLimitError(f"phase matrix limited to n<={UNITARY_MAX_N}")
    return K.phase_grid(n, spec.order(n), spec.modified, spec.kind == EXACT, K.rev16_table())


class UnitaryResult(NamedTuple):
    ok: bool
    deviation: float


def unitary_check(n: int, spec: TransformSpec) -> UnitaryResult:
    """Check ``sum_y omega^{q(x,y)} conj(omega^{q(x',y)}) = N * delta(x, x')``.

    The integral transform is checked in exact integer arithmetic and reports
    the largest integer deviation; other kinds report the largest deviation of
    the Gram matrix divided by N from the identity.
    """
    if n > UNITARY_MAX_N:
        raise ResourceLimitError(f"unitary check limited to n<={UNITARY_MAX_N}")
    N = 1 << n
    q = phase_matrix(n, spec)
    if spec.kind == INTEGRAL:
        # entries are 0/+-1 and every partial sum is an integer far below 2^53,
        # so the float products are exact whatever order BLAS sums in
        re = np.array([1.0, 0.0, -1.0, 0.0])[q]
        im = np.array([0.0, 1.0, 0.0, -1.0])[q]
        g_re = (re @ re.T + im @ im.T).astype(np.int64)
        g_im = (im @ re.T - re @ im.T).astype(np.int64)
        g_re -= N * np.eye(N, dtype=np.int64)
        dev = int(max(np.abs(g_re).max(), np.abs(g_im).max()))
        return UnitaryResult(dev == 0, float(dev))
    order = spec.order(n)
    mat = np.exp(2j * np.pi * q / (1 << order))
    gram = mat @ mat.conj().T / N
    dev = float(np.abs(gram - np.eye(N)).max())
    return UnitaryResult(dev <= 1e-9, dev)


class BoundResult(NamedTuple):
    value: float
    guaranteed: bool


def barenco_bound(n: int, m: int) -> BoundResult:
    """Worst-case success bound ``(8/pi^2) sin^2(pi*m / (4n))`` for a plain AQFT(m).

    ``guaranteed`` is False when ``m <= log2(n) + 2``, where the bound is not
    established.
    """
    if n < 1 or m < 0:
        raise InvalidArgument("need n >= 1 and m >= 0")
    value = 8.0 / math.pi ** 2 * math.sin(math.pi * m / (4 * n)) ** 2
    return BoundResult(value, m > math.log2(n) + 2)
