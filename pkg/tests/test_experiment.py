import json
import math

import numpy as np
import pytest

from qift import (
    InvalidArgument,
    PeriodicState,
    ResourceLimitError,
    RunConfig,
    TransformSpec,
    fit_power_law,
    full_scan,
    peak_scan,
    random_runs,
    table_reproduce,
)
from qift.experiment import default_bound, derive_seed, draw_state, peak_windows


def test_default_bound():
    assert default_bound(25) == 2 ** 13
    assert default_bound(26) == 2 ** 13
    assert default_bound(27) == 2 ** 14


def test_windows_are_clamped_and_disjoint():
    state = PeriodicState(6, 0, 7)
    windows = peak_windows(state)
    flat = [y for _, w in windows for y in w]
    assert flat == sorted(set(flat))
    assert all(0 <= y < 64 for y in flat)
    assert windows[0] == (0, [0, 1, 2])
    assert [k for k, _ in peak_windows(state, include_k0=False)] == list(range(1, 7))


def test_windows_overlap_near_limit():
    # r close to 2^(n/2): adjacent windows would overlap without dedup
    state = PeriodicState(8, 3, 15)
    flat = [y for _, w in peak_windows(state) for y in w]
    assert len(flat) == len(set(flat))


@pytest.mark.parametrize("n, x0, r", [(12, 5, 61), (16, 100, 255), (20, 17, 1023), (20, 3, 687)])
def test_every_window_outcome_is_scanned(n, x0, r):
    N = 1 << n
    ys = np.arange(N, dtype=np.int64)
    k = (2 * ys * r + N) // (2 * N)
    inside = np.abs(2 * (ys * r - k * N)) <= r
    scanned = np.zeros(N, dtype=bool)
    for kk, w in peak_windows(PeriodicState(n, x0, r)):
        scanned[w] = True
        assert all(abs(2 * (y * r - kk * N)) > r or (y * r * 2 + N) // (2 * N) == kk for y in w)
    assert not np.any(inside & ~scanned)


def test_peak_scan_exact_divisor(integral):
    rep = peak_scan(PeriodicState(20, 5, 512), integral)
    assert rep.pr_total == 1.0
    assert rep.min_pr_y == 1.0
    assert all(row.window_hit for row in rep.rows)


def test_peak_scan_k0_toggle(integral):
    state = PeriodicState(16, 7, 201)
    with_k0 = peak_scan(state, integral)
    without = peak_scan(state, integral, include_k0=False)
    assert without.pr_total < with_k0.pr_total <= 1.0
    assert with_k0.min_pr_y == without.min_pr_y
    assert with_k0.rows[0].k == 0 and without.rows[0].k == 1


def test_peak_scan_thread_independence(integral):
    state = PeriodicState(22, 1000, 1501)
    a = peak_scan(state, integral, threads=1).to_dict()
    b = peak_scan(state, integral, threads=4).to_dict()
    assert json.dumps(a) == json.dumps(b)


def test_peak_scan_ceiling(integral):
    with pytest.raises(ResourceLimitError):
        peak_scan(PeriodicState(31, 0, 3), integral)


def test_full_scan_small_divisor(integral):
    rep = full_scan(PeriodicState(8, 0, 4), integral, threshold=0.5)
    assert [h.y for h in rep.threshold_hits] == [64, 128, 192]
    assert all(h.rp == 1.0 and h.window_hit for h in rep.threshold_hits)
    assert rep.total_mass == 1.0
    assert rep.pr_total == 0.75


@pytest.mark.parametrize("text", ["integral", "maqft:3", "qft"])
def test_full_scan_consistent_with_peak_scan(text):
    spec = TransformSpec.parse(text)
    state = PeriodicState(14, 9, 77)
    full = full_scan(state, spec, threshold=0.05)
    peaks = peak_scan(state, spec)
    peak_rp = {y: v for row in peaks.rows for y, v in zip(row.y_tested, row.rp_values)}
    assert full.total_mass == pytest.approx(1.0, abs=1e-10)
    for h in full.threshold_hits:
        if h.y in peak_rp:
            assert h.rp == pytest.approx(peak_rp[h.y], abs=1e-9)
        if h.window_hit:
            assert h.k is not None


def test_full_scan_rejects_bad_threshold(integral):
    with pytest.raises(InvalidArgument):
        full_scan(PeriodicState(8, 0, 4), integral, threshold=1.5)


def test_draw_state_ranges(integral):
    rng = np.random.default_rng(5)
    cfg = RunConfig(n=20, spec=integral)
    lo, hi = cfg.r_range()
    assert (lo, hi) == (256, 1023)
    for _ in range(200):
        s = draw_state(cfg, rng)
        assert s.r % 2 == 1 and lo <= s.r <= hi and s.r * s.r < 2 ** 20 and 0 <= s.x0 < s.r
    even = RunConfig(n=20, spec=integral, r_parity="even")
    assert all(draw_state(even, rng).r % 2 == 0 for _ in range(50))


def test_power_of_two_choices(integral):
    cfg = RunConfig(n=20, spec=integral, r_choices=[256, 512], run_count=4)
    res = random_runs(cfg)
    assert all(rep.state.r in (256, 512) for rep in res.reports)
    assert all(rep.pr_total == pytest.approx(1.0, abs=1e-12) for rep in res.reports)


def test_config_validation(integral):
    with pytest.raises(InvalidArgument):
        RunConfig(n=20, spec=integral, r_parity="prime")
    with pytest.raises(InvalidArgument):
        RunConfig(n=20, spec=integral, run_count=0)
    with pytest.raises(InvalidArgument):
        RunConfig(n=20, spec=integral, mode="sideways")


def test_random_runs_reproducible(integral):
    cfg = RunConfig(n=18, spec=integral, seed=99, run_count=3)
    a, b = random_runs(cfg), random_runs(cfg)
    assert json.dumps(a.to_dict(rows=True)) == json.dumps(b.to_dict(rows=True))
    other = random_runs(RunConfig(n=18, spec=integral, seed=100, run_count=3))
    assert [r.state for r in a.reports] != [r.state for r in other.reports]


def test_derive_seed_is_stable():
    assert derive_seed(20021, 20) == derive_seed(20021, 20)
    assert derive_seed(20021, 20) != derive_seed(20021, 21)
    assert 0 <= derive_seed(1, 2) < 2 ** 64


def test_fit_recovers_synthetic_exponent():
    ns = np.arange(20, 35)
    C, c = fit_power_law(ns, 3.7 / ns ** 1.42)
    assert C == pytest.approx(3.7) and c == pytest.approx(1.42)
    with pytest.raises(InvalidArgument):
        fit_power_law([20], [0.3])


def test_table_needs_force_above_ceiling(integral):
    with pytest.raises(ResourceLimitError):
        table_reproduce([28], integral)


def test_table_rows_decrease(integral):
    table = table_reproduce(range(16, 20), integral, runs_per_n=2)
    values = [row.pr_min for row in table.rows]
    assert values == sorted(values, reverse=True)
    assert table.fit is not None and table.fit[1] > 0


def test_odd_period_spread_is_tight(integral):
    res = random_runs(RunConfig(n=20, spec=integral, seed=7, run_count=12))
    spread = res.pr_max - res.pr_min
    assert spread < 0.01


def test_periods_divisible_by_four_do_better(integral):
    odd = random_runs(RunConfig(n=20, spec=integral, seed=11, run_count=6))
    fours = [r for r in range(256, 1024) if r % 4 == 0]
    mult4 = random_runs(RunConfig(n=20, spec=integral, seed=11, run_count=6, r_choices=fours))
    assert all(rep.pr_total > odd.pr_min for rep in mult4.reports)
    assert math.isfinite(mult4.min_of_min_pr_y)
