import numpy as np
import pytest
from pydantic import ValidationError

from coexist_sim.rng import Xoshiro256StarStar, splitmix64
from coexist_sim.schemas import ClockState, LinkDelays, TwoWayExchange
from coexist_sim.timesync import (
    ROUNDS_CSV_HEADER,
    TimesyncError,
    asymmetry_error,
    chromatic_asymmetry,
    estimate,
    half_toward_zero,
    quantize,
    rounds_csv,
    run_exchange,
    simulate_session,
)

SYMMETRIC = LinkDelays(forward_ps=250_000_000, backward_ps=250_000_000)


# ----------------------
# Generator
# ----------------------


def test_splitmix64_reference_output() -> None:
    _, out = splitmix64(0)
    assert out == 0xE220A8397B1DCDAF


def test_xoshiro_reference_stream() -> None:
    rng = Xoshiro256StarStar(0)
    assert [rng.next_u64() for _ in range(3)] == [
        0x99EC5F36CB75F2B4,
        0xBF6E1F784956452A,
        0x1A5F849D4933E6E0,
    ]
    rng = Xoshiro256StarStar(7)
    assert rng.next_u64() == 0xB358FAF74EF9765A


def test_uniform_and_gauss_ranges() -> None:
    rng = Xoshiro256StarStar(123)
    u = [rng.random() for _ in range(2000)]
    assert all(0.0 <= x < 1.0 for x in u)
    g = np.array([rng.gauss(0.0, 1.0) for _ in range(20000)])
    assert abs(g.mean()) < 0.05
    assert g.std() == pytest.approx(1.0, abs=0.03)


def test_seed_must_fit_64_bits() -> None:
    with pytest.raises(ValueError):
        Xoshiro256StarStar(1 << 64)
    with pytest.raises(ValueError):
        Xoshiro256StarStar(-1)


# ----------------------
# Single exchange
# ----------------------


def test_rounding_helpers() -> None:
    assert half_toward_zero(7) == 3
    assert half_toward_zero(-7) == -3
    assert half_toward_zero(-8) == -4
    assert quantize(1005, 8) == 1000
    assert quantize(-3, 8) == -8


def test_symmetric_link_recovers_offset() -> None:
    for offset in (0, 1, -1, 123_456, -987_654_321):
        clock = ClockState(offset_ps=offset)
        x = run_exchange(clock, SYMMETRIC, t1=0, seed=1)
        est = estimate(x)
        assert est.offset_est_ps == offset
        assert est.round_trip_ps == 500_000_000
        assert est.one_way_delay_est_ps == 250_000_000


def test_asymmetry_bias_is_half_the_difference() -> None:
    """Zero jitter, even forward-backward differences: the bias is exact."""
    rng = np.random.default_rng(42)
    for _ in range(1000):
        forward = int(rng.integers(1_000, 10**9))
        half_diff = int(rng.integers(-(10**6), forward // 2))
        backward = forward - 2 * half_diff
        offset = int(rng.integers(-10**9, 10**9))
        delays = LinkDelays(forward_ps=forward, backward_ps=backward)
        x = run_exchange(ClockState(offset_ps=offset), delays, t1=int(rng.integers(0, 10**12)), seed=0)
        assert estimate(x).offset_est_ps - offset == (forward - backward) // 2
        assert asymmetry_error(delays) == half_diff


def test_granularity_bounds_the_error() -> None:
    clock = ClockState(offset_ps=5_003, granularity_ps=8)
    x = run_exchange(clock, SYMMETRIC, t1=0, seed=0)
    assert x.t2 % 8 == 0 and x.t4 % 8 == 0
    assert abs(estimate(x).offset_est_ps - 5_003) <= 8


def test_granularity_bound_over_random_draws() -> None:
    rng = np.random.default_rng(8)
    for _ in range(500):
        g = int(rng.integers(1, 1_000))
        offset = int(rng.integers(-10**9, 10**9))
        clock = ClockState(offset_ps=offset, granularity_ps=g)
        x = run_exchange(clock, SYMMETRIC, t1=int(rng.integers(0, 10**12)), seed=0)
        assert abs(estimate(x).offset_est_ps - offset) <= g


def test_offset_estimate_ignores_a_common_time_shift() -> None:
    rng = np.random.default_rng(9)
    for _ in range(200):
        t1, t2 = sorted(int(v) for v in rng.integers(0, 10**9, 2))
        t3 = t2 + int(rng.integers(0, 10**6))
        t4 = max(t1 + 1, t3 + int(rng.integers(-(10**6), 10**6)))
        shift = int(rng.integers(-(10**12), 10**12))
        base = estimate(TwoWayExchange(t1=t1, t2=t2, t3=t3, t4=t4))
        moved = estimate(TwoWayExchange(t1=t1 + shift, t2=t2 + shift, t3=t3 + shift, t4=t4 + shift))
        assert moved == base


def test_large_jitter_keeps_exchanges_causal() -> None:
    delays = LinkDelays(forward_ps=1_000, backward_ps=1_000, jitter_sigma_ps=600_000.0)
    result = simulate_session(ClockState(), delays, rounds=2_000, seed=1)
    assert len(result.rounds) == 2_000
    for rec in result.rounds:
        x = rec.exchange
        assert x.t4 > x.t1
        assert x.t3 >= x.t2


def test_coarse_granularity_keeps_t4_after_t1() -> None:
    clock = ClockState(offset_ps=-5_000, granularity_ps=10_000)
    delays = LinkDelays(forward_ps=1, backward_ps=1)
    x = run_exchange(clock, delays, t1=3, seed=0, turnaround_ps=0)
    assert x.t4 > x.t1


def test_exchange_order_invariants() -> None:
    with pytest.raises(ValidationError):
        TwoWayExchange(t1=10, t2=20, t3=30, t4=10)
    with pytest.raises(ValidationError):
        TwoWayExchange(t1=10, t2=20, t3=19, t4=40)


def test_negative_t1_rejected() -> None:
    with pytest.raises(TimesyncError):
        run_exchange(ClockState(), SYMMETRIC, t1=-1, seed=0)


def test_chromatic_asymmetry() -> None:
    assert chromatic_asymmetry(1550, 1310, 17.0, 50.0) == 204_000
    assert chromatic_asymmetry(1310, 1550, 17.0, 50.0) == -204_000
    with pytest.raises(TimesyncError):
        chromatic_asymmetry(1550, 1310, 17.0, 0.0)


# ----------------------
# Sessions
# ----------------------


def test_session_std_tracks_jitter() -> None:
    delays = LinkDelays(forward_ps=250_000_000, backward_ps=250_000_000, jitter_sigma_ps=100.0)
    result = simulate_session(ClockState(offset_ps=1_234), delays, rounds=10_000, seed=2024)
    # sigma / sqrt(2) is about 70.7 ps
    assert 60.0 <= result.std_offset_error_ps <= 80.0
    assert abs(result.mean_offset_error_ps) < 5.0


def test_zero_jitter_session_error_is_asymmetry() -> None:
    delays = LinkDelays(forward_ps=250_000_400, backward_ps=250_000_000)
    result = simulate_session(ClockState(offset_ps=77), delays, rounds=5, seed=3)
    assert result.mean_offset_error_ps == 200.0
    assert result.std_offset_error_ps == 0.0


def test_drift_moves_true_offset() -> None:
    clock = ClockState(offset_ps=0, drift_ppb=1_000.0)
    result = simulate_session(clock, SYMMETRIC, rounds=4, seed=0)
    assert [r.true_offset_ps for r in result.rounds] == [0, 1_000_000, 2_000_000, 3_000_000]
    assert all(r.error_ps == 0 for r in result.rounds)


def test_session_is_reproducible() -> None:
    delays = LinkDelays(forward_ps=250_000_000, backward_ps=250_000_000, jitter_sigma_ps=100.0)
    a = rounds_csv(simulate_session(ClockState(), delays, rounds=50, seed=7))
    b = rounds_csv(simulate_session(ClockState(), delays, rounds=50, seed=7))
    c = rounds_csv(simulate_session(ClockState(), delays, rounds=50, seed=8))
    assert a == b
    assert a != c
    assert a.splitlines()[0] == ROUNDS_CSV_HEADER
    assert len(a.splitlines()) == 51


def test_session_needs_rounds() -> None:
    with pytest.raises(TimesyncError):
        simulate_session(ClockState(), SYMMETRIC, rounds=0, seed=0)
