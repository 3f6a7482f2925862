"""Round-trip phase traces of a coherent frequency link and disturbance detection.

The in-loop error signal of Doppler noise cancellation is modeled as direct access
to the round-trip optical phase. Events are not localized along the fiber.
"""

from __future__ import annotations

import logging
import math
import struct
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from .config import settings
from .schemas import DetectedEvent, DisturbanceEvent, FiberSpan, GaussianPulse, Sinusoid
from .spectral import wl_to_freq
from .util import CoexistError

logger = logging.getLogger(__name__)

MAX_SAMPLES = 100_000_000
TRACE_MAGIC = b"CXSTRACE"
TRACE_CSV_HEADER = "time_s,phase_rad"
# windowed sigma below this many float64 ulps of the trace magnitude is rounding residue
RESOLUTION_ULPS = 64


class SensingError(CoexistError):
    code = "SENSING_ERROR"


@dataclass(frozen=True, eq=False)
class PhaseTrace:
    sample_rate_hz: float
    samples: np.ndarray = field(repr=False)
    fiber_length_km: float
    lambda_nm: float
    group_index: float = 1.468

    def __post_init__(self):
        if not self.sample_rate_hz > 0:
            raise SensingError(f"sample rate must be positive, got {self.sample_rate_hz}")
        samples = np.array(self.samples, dtype=np.float64)
        if samples.ndim != 1:
            raise SensingError("samples must be one-dimensional")
        if not np.all(np.isfinite(samples)):
            raise SensingError("samples must be finite")
        samples.setflags(write=False)
        object.__setattr__(self, "samples", samples)

    def __len__(self) -> int:
        return len(self.samples)

    @property
    def times(self) -> np.ndarray:
        return np.arange(len(self.samples)) / self.sample_rate_hz

    def with_samples(self, samples: np.ndarray) -> "PhaseTrace":
        return PhaseTrace(
            self.sample_rate_hz, samples, self.fiber_length_km, self.lambda_nm, self.group_index
        )


def round_trip_phase(delta_path_um: float, lambda_nm: float, group_index: float | None = None) -> float:
    """4 pi n dL / lambda, radians, for a round trip through a path change dL."""
    wl_to_freq(lambda_nm)  # range check
    n = settings.GROUP_INDEX if group_index is None else group_index
    return 4.0 * math.pi * n * delta_path_um / (lambda_nm * 1e-3)


def event_path_um(event: DisturbanceEvent, t: np.ndarray) -> np.ndarray:
    """Optical path change of one event sampled at times ``t``."""
    shape = event.shape
    if isinstance(shape, GaussianPulse):
        center = event.start_s + event.duration_s / 2
        sigma = event.duration_s / 6
        return event.amplitude_um * np.exp(-0.5 * ((t - center) / sigma) ** 2)
    if isinstance(shape, Sinusoid):
        active = (t >= event.start_s) & (t < event.start_s + event.duration_s)
        wave = np.sin(2.0 * math.pi * shape.frequency_hz * (t - event.start_s))
        return np.where(active, event.amplitude_um * wave, 0.0)
    raise SensingError(f"unknown event shape {shape!r}")


def synthesize_trace(
    events: Sequence[DisturbanceEvent],
    duration_s: float,
    sample_rate_hz: float,
    noise_sigma_rad: float,
    fiber: FiberSpan,
    lambda_nm: float,
    seed: int,
    group_index: float | None = None,
) -> PhaseTrace:
    n_samples = int(round(duration_s * sample_rate_hz))
    if n_samples > MAX_SAMPLES:
        raise SensingError(f"{n_samples} samples exceeds the {MAX_SAMPLES} sample limit")
    if n_samples < 2:
        raise SensingError("trace needs at least two samples")
    for ev in events:
        if ev.start_s + ev.duration_s > duration_s:
            raise SensingError(
                f"event at {ev.start_s} s lasting {ev.duration_s} s leaves the {duration_s} s window"
            )
        if ev.position_km > fiber.length_km:
            raise SensingError(
                f"event position {ev.position_km} km beyond fiber length {fiber.length_km} km"
            )

    n_group = settings.GROUP_INDEX if group_index is None else group_index
    rad_per_um = round_trip_phase(1.0, lambda_nm, n_group)
    t = np.arange(n_samples) / sample_rate_hz
    phase = np.zeros(n_samples)
    for ev in events:
        phase += rad_per_um * event_path_um(ev, t)
    if noise_sigma_rad > 0:
        rng = np.random.Generator(np.random.SFC64(seed))
        phase += rng.normal(0.0, noise_sigma_rad, n_samples)

    logger.debug("synthesized %d samples with %d events", n_samples, len(events))
    return PhaseTrace(sample_rate_hz, phase, fiber.length_km, lambda_nm, n_group)


# ----------------------
# Detection
# ----------------------


def _block_sigma(d: np.ndarray, start: int, stop: int, window: int) -> np.ndarray:
    seg = d[start : stop + window - 1]
    cs = np.concatenate(([0.0], np.cumsum(seg)))
    cs2 = np.concatenate(([0.0], np.cumsum(seg * seg)))
    s1 = cs[window:] - cs[:-window]
    s2 = cs2[window:] - cs2[:-window]
    var = s2 / window - (s1 / window) ** 2
    return np.sqrt(np.clip(var, 0.0, None))


def windowed_sigma(
    samples: np.ndarray,
    window: int,
    block_windows: int | None = None,
    workers: int = 1,
) -> np.ndarray:
    """Std of the first difference over every ``window``-long run of differences.

    Work is split into fixed blocks with ``window - 1`` overlap, so the result does
    not depend on ``workers``.
    """
    d = np.diff(np.asarray(samples, dtype=np.float64))
    if d.size:
        # a steady drift rate only shifts d; removing it keeps the running sums small
        d = d - np.median(d)
    n_windows = len(d) - window + 1
    if n_windows < 1:
        raise SensingError(f"trace of {len(samples)} samples is shorter than window {window}")
    block = block_windows or settings.SENSING_BLOCK_WINDOWS
    bounds = [(a, min(a + block, n_windows)) for a in range(0, n_windows, block)]

    if workers > 1 and len(bounds) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda b: _block_sigma(d, b[0], b[1], window), bounds))
    else:
        parts = [_block_sigma(d, a, b, window) for a, b in bounds]
    return np.concatenate(parts)


def phase_resolution(samples: np.ndarray) -> float:
    """Smallest windowed sigma that is not float64 rounding of the phase values."""
    scale = max(1.0, float(np.max(np.abs(samples)))) if len(samples) else 1.0
    return RESOLUTION_ULPS * float(np.finfo(np.float64).eps) * scale


def detect_events(
    trace: PhaseTrace,
    window: int,
    threshold_sigma: float,
    workers: int = 1,
) -> list[DetectedEvent]:
    if window < 2:
        raise SensingError(f"window must be at least 2 samples, got {window}")
    if threshold_sigma <= 0:
        raise SensingError(f"threshold must be positive, got {threshold_sigma}")

    sigma = windowed_sigma(trace.samples, window, workers=workers)
    floor = phase_resolution(trace.samples)
    if not np.any(sigma > floor):
        return []
    baseline = max(float(np.median(sigma)), floor)
    score = sigma / baseline

    above = np.flatnonzero(score > threshold_sigma)
    if above.size == 0:
        return []
    groups = np.split(above, np.flatnonzero(np.diff(above) > window) + 1)

    events = []
    for g in groups:
        k = int(g[np.argmax(score[g])])
        events.append(
            DetectedEvent(time_s=(k + window / 2) / trace.sample_rate_hz, score=float(score[k]))
        )
    logger.debug("detected %d events (baseline %.3g rad)", len(events), baseline)
    return sorted(events, key=lambda e: e.time_s)


def detection_snr(
    event: DisturbanceEvent,
    window: int,
    sample_rate_hz: float,
    noise_sigma_rad: float,
    lambda_nm: float,
    group_index: float | None = None,
) -> float:
    """Peak windowed derivative RMS of the event over the white-noise derivative RMS."""
    pad = (window + 1) / sample_rate_hz
    t0 = max(0.0, event.start_s - pad)
    n = int(math.ceil((event.start_s + event.duration_s + pad - t0) * sample_rate_hz)) + 1
    t = t0 + np.arange(max(n, window + 2)) / sample_rate_hz
    phase = round_trip_phase(1.0, lambda_nm, group_index) * event_path_um(event, t)
    peak = float(windowed_sigma(phase, window).max())
    if noise_sigma_rad == 0:
        return math.inf if peak > 0 else 0.0
    return peak / (math.sqrt(2.0) * noise_sigma_rad)


# ----------------------
# Trace files
# ----------------------


def write_trace_csv(trace: PhaseTrace, path: str | Path) -> None:
    data = np.column_stack((trace.times, trace.samples))
    with open(path, "w", newline="") as fh:
        np.savetxt(fh, data, fmt=("%.9f", "%.17g"), delimiter=",", header=TRACE_CSV_HEADER, comments="")


def read_trace_csv(
    path: str | Path,
    fiber_length_km: float,
    lambda_nm: float,
    group_index: float | None = None,
) -> PhaseTrace:
    path = Path(path)
    with open(path) as fh:
        header = fh.readline().strip()
        if header != TRACE_CSV_HEADER:
            raise SensingError(f"{path}: expected header {TRACE_CSV_HEADER}")
        try:
            data = np.loadtxt(fh, delimiter=",", ndmin=2)
        except ValueError as exc:
            raise SensingError(f"{path}: {exc}")
    if data.shape[0] < 2 or data.shape[1] != 2:
        raise SensingError(f"{path}: need at least two time_s,phase_rad rows")
    t = data[:, 0]
    sample_rate = round((len(t) - 1) / (t[-1] - t[0]), 6)
    n = settings.GROUP_INDEX if group_index is None else group_index
    return PhaseTrace(sample_rate, data[:, 1], fiber_length_km, lambda_nm, n)


def write_trace_bin(trace: PhaseTrace, path: str | Path) -> None:
    with open(path, "wb") as fh:
        fh.write(TRACE_MAGIC)
        fh.write(struct.pack("<d", trace.sample_rate_hz))
        fh.write(trace.samples.astype("<f8").tobytes())


def read_trace_bin(
    path: str | Path,
    fiber_length_km: float,
    lambda_nm: float,
    group_index: float | None = None,
) -> PhaseTrace:
    path = Path(path)
    raw = path.read_bytes()
    if len(raw) < 16 or raw[:8] != TRACE_MAGIC:
        raise SensingError(f"{path}: not a binary phase trace")
    if (len(raw) - 16) % 8:
        raise SensingError(f"{path}: truncated sample data")
    (sample_rate,) = struct.unpack("<d", raw[8:16])
    samples = np.frombuffer(raw[16:], dtype="<f8").astype(np.float64)
    n = settings.GROUP_INDEX if group_index is None else group_index
    return PhaseTrace(sample_rate, samples, fiber_length_km, lambda_nm, n)
