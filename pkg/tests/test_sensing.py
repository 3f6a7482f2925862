import numpy as np
import pytest

from coexist_sim.schemas import DisturbanceEvent, FiberSpan, GaussianPulse, Sinusoid
from coexist_sim.sensing import (
    PhaseTrace,
    SensingError,
    detect_events,
    detection_snr,
    event_path_um,
    read_trace_bin,
    read_trace_csv,
    round_trip_phase,
    synthesize_trace,
    windowed_sigma,
    write_trace_bin,
    write_trace_csv,
)

FIBER = FiberSpan(length_km=50.0)


def _pulse(amplitude_um, start_s=2.0, duration_s=0.05):
    return DisturbanceEvent(
        position_km=10.0,
        start_s=start_s,
        duration_s=duration_s,
        amplitude_um=amplitude_um,
        shape=GaussianPulse(),
    )


def _trace(events, seed, noise=0.01, duration=10.0, rate=1000.0):
    return synthesize_trace(events, duration, rate, noise, FIBER, 1550.0, seed, group_index=1.468)


def test_round_trip_phase_per_micron() -> None:
    assert round_trip_phase(1.0, 1550.0, 1.468) == pytest.approx(11.90157, rel=1e-6)
    assert round_trip_phase(0.0, 1550.0, 1.468) == 0.0


def test_quiet_trace_is_all_zeros() -> None:
    trace = _trace([], seed=0, noise=0.0)
    assert len(trace) == 10_000
    assert not trace.samples.any()
    assert detect_events(trace, 100, 5.0) == []


def test_events_superpose_linearly() -> None:
    ev = _pulse(0.5)
    one = _trace([ev], seed=0, noise=0.0)
    two = _trace([ev, ev], seed=0, noise=0.0)
    np.testing.assert_array_equal(two.samples, 2 * one.samples)


def test_one_micron_pulse_peak_phase() -> None:
    trace = _trace([_pulse(1.0)], seed=0, noise=0.0)
    assert trace.samples.max() == pytest.approx(11.90, rel=0.01)


def test_trace_samples_are_read_only() -> None:
    trace = _trace([], seed=0)
    with pytest.raises(ValueError):
        trace.samples[0] = 1.0


def test_pulse_shape_peaks_mid_event() -> None:
    ev = _pulse(0.5)
    t = np.array([2.0, 2.025, 2.05, 3.0])
    path = event_path_um(ev, t)
    assert path[1] == pytest.approx(0.5)
    assert path[0] == pytest.approx(path[2])
    assert path[3] == pytest.approx(0.0, abs=1e-12)


def test_sinusoid_is_gated_to_event() -> None:
    ev = DisturbanceEvent(start_s=1.0, duration_s=1.0, amplitude_um=0.2, shape=Sinusoid(frequency_hz=5))
    t = np.array([0.5, 1.05, 2.5])
    path = event_path_um(ev, t)
    assert path[0] == 0.0 and path[2] == 0.0
    assert path[1] == pytest.approx(0.2)


def test_sample_limit() -> None:
    with pytest.raises(SensingError):
        synthesize_trace([], 1e6, 1000.0, 0.01, FIBER, 1550.0, 0)


def test_event_outside_window_rejected() -> None:
    with pytest.raises(SensingError):
        _trace([_pulse(0.5, start_s=9.99)], seed=0)
    far = DisturbanceEvent(position_km=80.0, start_s=1.0, duration_s=0.1, amplitude_um=0.1)
    with pytest.raises(SensingError):
        _trace([far], seed=0)


def test_same_seed_same_trace() -> None:
    a = _trace([_pulse(0.5)], seed=11)
    b = _trace([_pulse(0.5)], seed=11)
    c = _trace([_pulse(0.5)], seed=12)
    assert np.array_equal(a.samples, b.samples)
    assert not np.array_equal(a.samples, c.samples)


# ----------------------
# Detection
# ----------------------


def test_windowed_sigma_matches_direct_computation() -> None:
    rng = np.random.default_rng(5)
    x = rng.normal(0.0, 1.0, 3_001)
    sigma = windowed_sigma(x, 50)
    d = np.diff(x)
    direct = np.array([d[k : k + 50].std() for k in range(len(d) - 49)])
    np.testing.assert_allclose(sigma, direct, rtol=1e-9, atol=1e-12)


def test_parallel_blocks_match_serial() -> None:
    rng = np.random.default_rng(6)
    x = rng.normal(0.0, 0.01, 20_000)
    serial = windowed_sigma(x, 100, block_windows=1_000, workers=1)
    parallel = windowed_sigma(x, 100, block_windows=1_000, workers=4)
    np.testing.assert_array_equal(serial, parallel)
    np.testing.assert_allclose(serial, windowed_sigma(x, 100), rtol=1e-9)


def test_window_longer_than_trace() -> None:
    trace = PhaseTrace(1000.0, np.zeros(50), 50.0, 1550.0)
    with pytest.raises(SensingError):
        detect_events(trace, 100, 5.0)


def test_detection_snr_of_reference_pulse() -> None:
    snr = detection_snr(_pulse(0.5), 100, 1000.0, 0.01, 1550.0, 1.468)
    assert snr == pytest.approx(13.7098, rel=1e-3)
    assert detection_snr(_pulse(0.4), 100, 1000.0, 0.01, 1550.0, 1.468) >= 10.0


def test_strong_pulses_always_detected() -> None:
    ev = _pulse(0.4)
    for seed in range(50):
        events = detect_events(_trace([ev], seed), 100, 5.0)
        assert len(events) == 1, seed
        assert abs(events[0].time_s - 2.025) <= 0.1
        assert events[0].score > 5.0


def test_noise_only_rarely_alarms() -> None:
    alarms = 0
    for seed in range(50):
        trace = _trace([_pulse(0.0)], seed)
        alarms += bool(detect_events(trace, 100, 8.0))
    assert alarms <= 2


def test_noise_only_rarely_alarms_on_long_traces() -> None:
    alarms = 0
    for seed in range(100):
        trace = _trace([], seed, duration=1000.0)
        assert len(trace) == 1_000_000
        alarms += len(detect_events(trace, 100, 8.0))
    assert alarms <= 1


def test_steady_drift_is_not_an_event() -> None:
    trace = PhaseTrace(1000.0, 1e-3 * np.arange(200_000), 50.0, 1550.0)
    assert detect_events(trace, 100, 8.0) == []


def test_pulse_found_on_top_of_drift() -> None:
    trace = _trace([_pulse(0.5)], seed=4)
    drifting = trace.with_samples(trace.samples + 1e-3 * np.arange(len(trace)))
    events = detect_events(drifting, 100, 5.0)
    assert len(events) == 1
    assert abs(events[0].time_s - 2.025) <= 0.1


def test_constant_phase_offset_changes_nothing() -> None:
    trace = _trace([_pulse(0.5), _pulse(0.5, start_s=6.0)], seed=2)
    shifted = trace.with_samples(trace.samples + 5.0)
    base, moved = detect_events(trace, 100, 5.0), detect_events(shifted, 100, 5.0)
    assert len(base) == len(moved) == 2
    for a, b in zip(base, moved):
        assert b.time_s == pytest.approx(a.time_s, abs=0.01)
        assert b.score == pytest.approx(a.score, rel=1e-6)


def test_events_come_back_in_time_order() -> None:
    events = [_pulse(0.5, start_s=7.0), _pulse(0.5, start_s=3.0)]
    found = detect_events(_trace(events, seed=3), 100, 5.0)
    assert [round(e.time_s) for e in found] == [3, 7]


def test_detection_does_not_depend_on_workers() -> None:
    trace = _trace([_pulse(0.5)], seed=9)
    assert detect_events(trace, 100, 5.0, workers=1) == detect_events(trace, 100, 5.0, workers=4)


# ----------------------
# Trace files
# ----------------------


def test_csv_trace_file(tmp_path) -> None:
    trace = _trace([_pulse(0.5)], seed=1)
    path = tmp_path / "trace.csv"
    write_trace_csv(trace, path)
    back = read_trace_csv(path, 50.0, 1550.0, 1.468)
    assert back.sample_rate_hz == 1000.0
    assert np.array_equal(back.samples, trace.samples)
    assert path.read_text().splitlines()[0] == "time_s,phase_rad"


def test_binary_trace_file(tmp_path) -> None:
    trace = _trace([_pulse(0.5)], seed=1)
    path = tmp_path / "trace.bin"
    write_trace_bin(trace, path)
    raw = path.read_bytes()
    assert raw[:8] == b"CXSTRACE"
    assert len(raw) == 16 + 8 * len(trace)
    back = read_trace_bin(path, 50.0, 1550.0)
    assert back.sample_rate_hz == 1000.0
    assert np.array_equal(back.samples, trace.samples)


def test_bad_trace_files(tmp_path) -> None:
    bad = tmp_path / "bad.bin"
    bad.write_bytes(b"NOTATRACE_______")
    with pytest.raises(SensingError):
        read_trace_bin(bad, 50.0, 1550.0)
    short = tmp_path / "short.bin"
    short.write_bytes(b"CXSTRACE" + b"\x00" * 8 + b"\x01\x02\x03")
    with pytest.raises(SensingError):
        read_trace_bin(short, 50.0, 1550.0)
    csv = tmp_path / "bad.csv"
    csv.write_text("t,phase\n0,0\n")
    with pytest.raises(SensingError):
        read_trace_csv(csv, 50.0, 1550.0)
