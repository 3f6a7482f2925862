"""Wavelength/frequency plumbing, band presets, channel grids and plan validation."""

from __future__ import annotations

import itertools
import logging
import math
from typing import Iterable, Literal

from .config import settings
from .schemas import Band, Channel, ChannelPlan, Role, Violation
from .units import (
    FREQ_MAX_THZ,
    FREQ_MIN_THZ,
    WAVELENGTH_MAX_NM,
    WAVELENGTH_MIN_NM,
    nm_to_thz,
    thz_to_nm,
)
from .util import CoexistError

logger = logging.getLogger(__name__)

ITU_ANCHOR_THZ = 193.1
QUANTUM_CEILING_NM = 1290.0

RULE_OVERLAP = "overlap"
RULE_GUARD_BAND = "guard-band"
RULE_QUANTUM_CEILING = "quantum-above-1290-with-amplified-classical"

BANDS: dict[str, Band] = {
    b.name: b
    for b in (
        Band(name="O", lambda_min_nm=1260, lambda_max_nm=1360),
        Band(name="E", lambda_min_nm=1360, lambda_max_nm=1460),
        Band(name="S", lambda_min_nm=1460, lambda_max_nm=1530),
        Band(name="C", lambda_min_nm=1530, lambda_max_nm=1565),
        Band(name="L", lambda_min_nm=1565, lambda_max_nm=1625),
        # reserved time/frequency windows
        Band(name="TF-C", lambda_min_nm=1540, lambda_max_nm=1546),
        Band(name="TF-CL", lambda_min_nm=1570, lambda_max_nm=1572),
    )
}


class SpectralRangeError(CoexistError):
    code = "OUT_OF_RANGE"


class GridError(CoexistError):
    code = "BAD_GRID"


def _check_wavelength(lambda_nm: float) -> None:
    if not WAVELENGTH_MIN_NM <= lambda_nm <= WAVELENGTH_MAX_NM:
        raise SpectralRangeError(
            f"wavelength {lambda_nm} nm outside [{WAVELENGTH_MIN_NM}, {WAVELENGTH_MAX_NM}] nm",
            value=lambda_nm,
        )


def _check_frequency(nu_thz: float) -> None:
    if not FREQ_MIN_THZ <= nu_thz <= FREQ_MAX_THZ:
        raise SpectralRangeError(
            f"frequency {nu_thz} THz outside [{FREQ_MIN_THZ:.6f}, {FREQ_MAX_THZ:.6f}] THz",
            value=nu_thz,
        )


def wl_to_freq(lambda_nm: float) -> float:
    _check_wavelength(lambda_nm)
    return nm_to_thz(lambda_nm)


def freq_to_wl(nu_thz: float) -> float:
    _check_frequency(nu_thz)
    return thz_to_nm(nu_thz)


def shift_between(pump_nm: float, target_nm: float) -> float:
    """nu(target) - nu(pump) in THz; positive means anti-Stokes."""
    return wl_to_freq(target_nm) - wl_to_freq(pump_nm)


# ----------------------
# Grids
# ----------------------


def _check_grid(band: Band, spacing_ghz: float, channel_width_ghz: float) -> None:
    if spacing_ghz <= 0:
        raise GridError(f"spacing must be positive, got {spacing_ghz} GHz")
    if channel_width_ghz < 0:
        raise GridError(f"channel width must be non-negative, got {channel_width_ghz} GHz")
    if channel_width_ghz > band.span_ghz:
        raise GridError(
            f"channel width {channel_width_ghz} GHz exceeds band span {band.span_ghz:.3f} GHz"
        )


def grid_centers(
    band: Band,
    spacing_ghz: float,
    channel_width_ghz: float,
    anchor: Literal["edge", "itu"] = "edge",
) -> list[float]:
    """Center frequencies (THz, ascending) whose passbands fit in the band."""
    _check_grid(band, spacing_ghz, channel_width_ghz)
    half = channel_width_ghz * 1e-3 / 2
    step = spacing_ghz * 1e-3

    if anchor == "edge":
        n = math.floor((band.span_ghz - channel_width_ghz) / spacing_ghz) + 1
        first = band.nu_min_thz + half
        return [first + k * step for k in range(n)]

    if anchor == "itu":
        k_lo = math.ceil((band.nu_min_thz + half - ITU_ANCHOR_THZ) / step)
        k_hi = math.floor((band.nu_max_thz - half - ITU_ANCHOR_THZ) / step)
        return [ITU_ANCHOR_THZ + k * step for k in range(k_lo, k_hi + 1)]

    raise GridError(f"unknown anchor {anchor!r}")


def grid_capacity(
    band: Band,
    spacing_ghz: float,
    channel_width_ghz: float,
    anchor: Literal["edge", "itu"] = "edge",
) -> int:
    if anchor == "edge":
        _check_grid(band, spacing_ghz, channel_width_ghz)
        return math.floor((band.span_ghz - channel_width_ghz) / spacing_ghz) + 1
    return len(grid_centers(band, spacing_ghz, channel_width_ghz, anchor))


def plan_from_grid(
    band: Band,
    spacing_ghz: float,
    channel_width_ghz: float,
    role: Role = Role.CLASSICAL,
    launch_power_dbm: float = 0.0,
    amplified: bool = False,
    guard_band_ghz: float = 0.0,
    anchor: Literal["edge", "itu"] = "edge",
) -> ChannelPlan:
    centers = grid_centers(band, spacing_ghz, channel_width_ghz, anchor)
    channels = [
        Channel(
            name=f"{band.name}-{k}",
            center_thz=nu,
            width_ghz=channel_width_ghz,
            role=role,
            launch_power_dbm=launch_power_dbm,
            amplified=amplified,
        )
        for k, nu in enumerate(centers)
    ]
    return ChannelPlan(channels=channels, guard_band_ghz=guard_band_ghz)


# ----------------------
# Plan validation
# ----------------------


def _gap_ghz(a: Channel, b: Channel) -> float:
    """Spectral gap between passbands; negative when they overlap."""
    return (max(a.lo_thz, b.lo_thz) - min(a.hi_thz, b.hi_thz)) * 1e3


def _passband_between(chans: list[Channel], i: int, j: int, tol_ghz: float) -> bool:
    """True when some third passband sits entirely inside the gap between channels i and j."""
    low, high = sorted((chans[i], chans[j]), key=lambda c: c.lo_thz)
    tol = tol_ghz / 1e3
    return any(
        c.lo_thz >= low.hi_thz - tol and c.hi_thz <= high.lo_thz + tol
        for k, c in enumerate(chans)
        if k not in (i, j)
    )


def _violation(rule: str, plan: ChannelPlan, idx: Iterable[int], message: str) -> Violation:
    idx = sorted(idx, key=lambda i: (plan.channels[i].center_thz, i))
    return Violation(
        rule=rule,
        channels=idx,
        centers_thz=[plan.channels[i].center_thz for i in idx],
        message=message,
    )


def validate_plan(plan: ChannelPlan, tolerance_ghz: float | None = None) -> list[Violation]:
    """All rule violations of a plan, ordered by lowest involved center then rule name."""
    tol = settings.PLAN_TOLERANCE_GHZ if tolerance_ghz is None else tolerance_ghz
    chans = plan.channels
    out: list[Violation] = []
    overlapping: set[tuple[int, int]] = set()

    for i, j in itertools.combinations(range(len(chans)), 2):
        gap = _gap_ghz(chans[i], chans[j])
        if gap < -tol:
            overlapping.add((i, j))
            out.append(
                _violation(
                    RULE_OVERLAP,
                    plan,
                    (i, j),
                    f"{chans[i].label(i)} and {chans[j].label(j)} overlap by {-gap:.3f} GHz",
                )
            )

    for i, j in itertools.combinations(range(len(chans)), 2):
        if (i, j) in overlapping or _passband_between(chans, i, j, tol):
            continue
        a, b = sorted((i, j), key=lambda k: (chans[k].center_thz, k))
        gap = _gap_ghz(chans[a], chans[b])
        if gap < plan.guard_band_ghz - tol:
            out.append(
                _violation(
                    RULE_GUARD_BAND,
                    plan,
                    (a, b),
                    f"{chans[a].label(a)} and {chans[b].label(b)} separated by {gap:.3f} GHz "
                    f"< guard band {plan.guard_band_ghz} GHz",
                )
            )

    if any(ch.amplified for ch in chans):
        for i, ch in enumerate(chans):
            if ch.role is Role.QUANTUM and not ch.wavelength_nm < QUANTUM_CEILING_NM:
                out.append(
                    _violation(
                        RULE_QUANTUM_CEILING,
                        plan,
                        (i,),
                        f"{ch.label(i)} at {ch.wavelength_nm:.3f} nm shares the fiber with "
                        f"amplified channels and must sit below {QUANTUM_CEILING_NM:.0f} nm",
                    )
                )

    out.sort(key=lambda v: (min(v.centers_thz), v.rule, v.centers_thz, v.channels))
    logger.debug("plan with %d channels: %d violations", len(chans), len(out))
    return out
