"""Spontaneous Raman scattering from classical pumps into a quantum channel."""

from __future__ import annotations

import logging
import math
from typing import Literal

import numpy as np

from .config import settings
from .schemas import (
    Channel,
    RamanGainProfile,
    Role,
    ScatterDirection,
    ScatterGeometry,
    ThermalEnvironment,
)
from .spectral import shift_between, wl_to_freq
from .units import BOLTZMANN, PLANCK, nm_to_thz, photon_energy_j
from .util import CoexistError

logger = logging.getLogger(__name__)


class RamanError(CoexistError):
    code = "RAMAN_ERROR"


def thermal_occupation(shift_thz: float, env: ThermalEnvironment) -> float:
    """Bose-Einstein phonon occupation at a frequency shift."""
    if shift_thz <= 0:
        raise RamanError(f"shift must be positive, got {shift_thz} THz", shift_thz=shift_thz)
    x = PLANCK * shift_thz * 1e12 / (BOLTZMANN * env.temperature_k)
    if x > 700.0:
        # expm1 overflows; 1/(e^x - 1) == e^-x to double precision here
        return math.exp(-x)
    return 1.0 / math.expm1(x)


def stokes_weight(n_bar: float) -> float:
    return n_bar + 1.0


def antistokes_weight(n_bar: float) -> float:
    return n_bar


def scattering_side(shift_thz: float) -> Literal["stokes", "anti_stokes", "none"]:
    if shift_thz > 0:
        return "anti_stokes"
    if shift_thz < 0:
        return "stokes"
    return "none"


def gain_at_shift(
    profile: RamanGainProfile,
    shift_thz: float,
    pump_thz: float | None = None,
    scale_with_pump: bool | None = None,
) -> float:
    """Linear interpolation of the gain table at |shift|, zero past the last point.

    With pump scaling on, the gain is multiplied by nu_pump / nu_reference_pump.
    """
    s = abs(shift_thz)
    shifts = [p[0] for p in profile.points]
    gains = [p[1] for p in profile.points]
    g = float(np.interp(s, shifts, gains, right=0.0))

    scale = settings.RAMAN_PUMP_SCALING if scale_with_pump is None else scale_with_pump
    if scale and pump_thz is not None:
        g *= pump_thz / nm_to_thz(profile.reference_pump_nm)
    return g


def attenuation_per_km(attenuation_db_km: float) -> float:
    return attenuation_db_km * math.log(10.0) / 10.0


def effective_length(attenuation_db_km: float, length_km: float) -> float:
    alpha = attenuation_per_km(attenuation_db_km)
    if alpha == 0.0:
        return length_km
    return -math.expm1(-alpha * length_km) / alpha


def co_propagating_length(pump_db_km: float, probe_db_km: float, length_km: float) -> float:
    """Integral of exp(-a_p z) exp(-a_q (L - z)) over the fiber, in km."""
    a_p = attenuation_per_km(pump_db_km)
    a_q = attenuation_per_km(probe_db_km)
    d = a_p - a_q
    tail = math.exp(-a_q * length_km)
    if d == 0.0:
        return length_km * tail
    return tail * -math.expm1(-d * length_km) / d


def counter_propagating_length(pump_db_km: float, probe_db_km: float, length_km: float) -> float:
    """Integral of exp(-(a_p + a_q) z) over the fiber, in km."""
    return effective_length(pump_db_km + probe_db_km, length_km)


def spectral_coefficient(
    profile: RamanGainProfile,
    shift_thz: float,
    env: ThermalEnvironment,
    k_spont: float | None = None,
    pump_thz: float | None = None,
    scale_with_pump: bool | None = None,
) -> float:
    """rho: scattered fraction per km per GHz of detection window."""
    g = gain_at_shift(profile, shift_thz, pump_thz, scale_with_pump)
    if g == 0.0:
        return 0.0
    n_bar = thermal_occupation(abs(shift_thz), env)
    w = antistokes_weight(n_bar) if shift_thz > 0 else stokes_weight(n_bar)
    k = settings.K_SPONT if k_spont is None else k_spont
    return k * g * w


def spontaneous_rate(
    pump: Channel,
    quantum_center_nm: float,
    filter_width_ghz: float,
    profile: RamanGainProfile,
    geometry: ScatterGeometry,
    env: ThermalEnvironment,
    k_spont: float | None = None,
    pump_power_w: float | None = None,
    scale_with_pump: bool | None = None,
) -> float:
    """Raman photons/s reaching the end of the fiber inside the quantum filter.

    ``pump_power_w`` overrides the channel's launch power (used when a span sits
    behind other spans or amplifiers).
    """
    if pump.role is Role.QUANTUM:
        raise RamanError("a quantum channel cannot act as a Raman pump")
    if filter_width_ghz <= 0:
        raise RamanError(f"filter width must be positive, got {filter_width_ghz} GHz")

    nu_q = wl_to_freq(quantum_center_nm)
    shift = shift_between(pump.wavelength_nm, quantum_center_nm)
    rho = spectral_coefficient(profile, shift, env, k_spont, pump.center_thz, scale_with_pump)
    p_pump = pump.launch_power_w if pump_power_w is None else pump_power_w
    if rho == 0.0 or p_pump == 0.0:
        return 0.0

    L = geometry.fiber_length_km
    if geometry.direction is ScatterDirection.CO_PROPAGATING:
        length = co_propagating_length(
            geometry.pump_attenuation_db_km, geometry.probe_attenuation_db_km, L
        )
    else:
        length = counter_propagating_length(
            geometry.pump_attenuation_db_km, geometry.probe_attenuation_db_km, L
        )

    power_w = p_pump * rho * filter_width_ghz * length
    rate = power_w / photon_energy_j(nu_q)
    logger.debug(
        "raman %s shift=%.4f THz side=%s rate=%.6g /s",
        pump.name or "pump",
        shift,
        scattering_side(shift),
        rate,
    )
    return rate
