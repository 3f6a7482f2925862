"""Two-way time transfer in integer picoseconds.

Master timestamps t1/t4, slave timestamps t2/t3. The estimator cannot see
forward/backward delay asymmetry; it biases the offset by half the difference.
"""

from __future__ import annotations

import logging

import numpy as np

from .config import settings
from .rng import Xoshiro256StarStar
from .schemas import ClockState, LinkDelays, RoundRecord, SessionResult, SyncEstimate, TwoWayExchange
from .util import CoexistError

logger = logging.getLogger(__name__)

ROUNDS_CSV_HEADER = "round,t1,t2,t3,t4,offset_est_ps,true_offset_ps,error_ps"
MIN_LEG_PS = 1


class TimesyncError(CoexistError):
    code = "TIMESYNC_ERROR"


def quantize(t_ps: int, granularity_ps: int) -> int:
    """Floor to the timestamp granularity."""
    return (t_ps // granularity_ps) * granularity_ps


def half_toward_zero(n: int) -> int:
    q = abs(n) // 2
    return q if n >= 0 else -q


def _jitter(rng: Xoshiro256StarStar, sigma_ps: float) -> int:
    if sigma_ps == 0:
        return 0
    return round(rng.gauss(0.0, sigma_ps))


def _exchange(
    clock: ClockState,
    delays: LinkDelays,
    t1: int,
    rng: Xoshiro256StarStar,
    turnaround_ps: int,
) -> TwoWayExchange:
    g = clock.granularity_ps
    # a jittered leg still takes at least 1 ps
    forward = max(MIN_LEG_PS, delays.forward_ps + _jitter(rng, delays.jitter_sigma_ps))
    backward = max(MIN_LEG_PS, delays.backward_ps + _jitter(rng, delays.jitter_sigma_ps))
    t2 = quantize(t1 + forward + clock.offset_ps, g)
    t3 = t2 + turnaround_ps
    t4 = quantize(t3 - clock.offset_ps + backward, g)
    if t4 <= t1:
        # coarse granularity can floor the return below t1; take the next tick
        t4 = quantize(t1, g) + g
    return TwoWayExchange(t1=t1, t2=t2, t3=t3, t4=t4)


def run_exchange(
    clock: ClockState,
    delays: LinkDelays,
    t1: int,
    seed: int,
    turnaround_ps: int | None = None,
) -> TwoWayExchange:
    if t1 < 0:
        raise TimesyncError(f"t1 must be non-negative, got {t1}")
    turnaround = settings.TURNAROUND_PS if turnaround_ps is None else turnaround_ps
    return _exchange(clock, delays, t1, Xoshiro256StarStar(seed), turnaround)


def estimate(x: TwoWayExchange) -> SyncEstimate:
    ms = x.t2 - x.t1
    sm = x.t4 - x.t3
    return SyncEstimate(
        offset_est_ps=half_toward_zero(ms - sm),
        round_trip_ps=ms + sm,
        one_way_delay_est_ps=half_toward_zero(ms + sm),
    )


def asymmetry_error(delays: LinkDelays) -> int:
    return half_toward_zero(delays.forward_ps - delays.backward_ps)


def chromatic_asymmetry(
    lambda_fwd_nm: float,
    lambda_bwd_nm: float,
    dispersion_ps_nm_km: float,
    length_km: float,
) -> int:
    """Forward minus backward group delay from dispersion, rounded to 1 ps."""
    if length_km <= 0:
        raise TimesyncError(f"length must be positive, got {length_km} km")
    return round(dispersion_ps_nm_km * length_km * (lambda_fwd_nm - lambda_bwd_nm))


def simulate_session(
    clock: ClockState,
    delays: LinkDelays,
    rounds: int,
    seed: int,
    spacing_ps: int | None = None,
    turnaround_ps: int | None = None,
) -> SessionResult:
    if rounds < 1:
        raise TimesyncError(f"rounds must be at least 1, got {rounds}")
    spacing = settings.EXCHANGE_SPACING_PS if spacing_ps is None else spacing_ps
    turnaround = settings.TURNAROUND_PS if turnaround_ps is None else turnaround_ps
    rng = Xoshiro256StarStar(seed)

    records = []
    for r in range(rounds):
        t1 = r * spacing
        # slave clock walks off by drift * elapsed master time
        true_offset = clock.offset_ps + round(clock.drift_ppb * t1 / 1e9)
        state = clock.model_copy(update={"offset_ps": true_offset})
        x = _exchange(state, delays, t1, rng, turnaround)
        records.append(
            RoundRecord(
                round=r,
                exchange=x,
                offset_est_ps=estimate(x).offset_est_ps,
                true_offset_ps=true_offset,
            )
        )

    errors = np.array([rec.error_ps for rec in records], dtype=np.float64)
    result = SessionResult(
        mean_offset_error_ps=float(errors.mean()),
        std_offset_error_ps=float(errors.std()),
        rounds=records,
    )
    logger.debug(
        "session seed=%d rounds=%d mean=%.3f std=%.3f",
        seed, rounds, result.mean_offset_error_ps, result.std_offset_error_ps,
    )
    return result


def rounds_csv(result: SessionResult) -> str:
    lines = [ROUNDS_CSV_HEADER]
    for rec in result.rounds:
        x = rec.exchange
        lines.append(
            f"{rec.round},{x.t1},{x.t2},{x.t3},{x.t4},"
            f"{rec.offset_est_ps},{rec.true_offset_ps},{rec.error_ps}"
        )
    return "\n".join(lines) + "\n"
