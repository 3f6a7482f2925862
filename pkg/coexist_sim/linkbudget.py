"""Route composition and the noise budget of a quantum channel."""

from __future__ import annotations

import logging
from typing import Sequence

import numpy as np

from .config import settings
from .profiles import default_attenuation_profile
from .raman import scattering_side, spontaneous_rate
from .schemas import (
    Amplifier,
    AttenuationProfile,
    Channel,
    ChannelPlan,
    DetectorModel,
    FiberSpan,
    LinkModel,
    NoiseBudget,
    OpticalFilter,
    RamanContribution,
    RamanGainProfile,
    Role,
    ScatterDirection,
    ScatterGeometry,
    ThermalEnvironment,
)
from .spectral import shift_between, validate_plan, wl_to_freq
from .units import PLANCK, photon_energy_j, thz_to_nm
from .util import CoexistError, db_to_lin, round_sig

logger = logging.getLogger(__name__)

BUDGET_FIELDS = ("raman_rate", "ase_rate", "leakage_rate", "dark_rate", "total_rate", "qber_estimate")
# report precision of the budget; the total is the exact sum of the rounded parts
RATE_DIGITS = 7
QBER_DECIMALS = 6


class BudgetError(CoexistError):
    code = "BUDGET_ERROR"


def attenuation_db(profile: AttenuationProfile, lambda_nm: float, length_km: float) -> float:
    lams = [p[0] for p in profile.points]
    if not lams[0] <= lambda_nm <= lams[-1]:
        raise BudgetError(
            f"{lambda_nm:.3f} nm outside attenuation table [{lams[0]}, {lams[-1]}] nm",
            lambda_nm=lambda_nm,
        )
    loss = float(np.interp(lambda_nm, lams, [p[1] for p in profile.points]))
    return loss * length_km


def _span_db_km(span: FiberSpan, lambda_nm: float, fallback: AttenuationProfile) -> float:
    return attenuation_db(span.attenuation or fallback, lambda_nm, 1.0)


def ase_power(amp: Amplifier, at_thz: float, bandwidth_ghz: float) -> float:
    """Two-polarization ASE power in watts; zero outside the amplifier band."""
    if bandwidth_ghz <= 0:
        raise BudgetError(f"bandwidth must be positive, got {bandwidth_ghz} GHz")
    if not amp.band.contains(at_thz):
        return 0.0
    g_lin = db_to_lin(amp.gain_db)
    return 2.0 * amp.noise_factor * PLANCK * at_thz * 1e12 * (g_lin - 1.0) * bandwidth_ghz * 1e9


def filter_loss_db(flt: OpticalFilter, nu_thz: float, cap_db: float | None = None) -> float:
    if flt.passes(nu_thz):
        return flt.insertion_loss_db
    cap = settings.ISOLATION_CAP_DB if cap_db is None else cap_db
    return min(flt.out_of_band_isolation_db, cap)


def leakage_rate(
    classical: Sequence[Channel],
    flt: OpticalFilter | None,
    quantum_center_nm: float,
    link_loss_db: float,
) -> float:
    """Photons/s of classical light that survive the link and the receiver filter."""
    if flt is not None and not flt.passes(wl_to_freq(quantum_center_nm)):
        logger.warning("receiver filter at %.6f THz does not pass the quantum channel", flt.center_thz)
    rate = 0.0
    for ch in classical:
        residual_db = link_loss_db + (filter_loss_db(flt, ch.center_thz) if flt else 0.0)
        residual_w = ch.launch_power_w * db_to_lin(-residual_db)
        rate += residual_w / photon_energy_j(ch.center_thz)
    return rate


# ----------------------
# Route walking
# ----------------------


def _noise_path(link: LinkModel, index: int) -> list:
    """Elements that light created at ``index`` crosses on its way to the receiver."""
    if link.direction is ScatterDirection.CO_PROPAGATING:
        return list(link.elements[index + 1 :])
    return list(reversed(link.elements[:index]))


def path_gain_db(elements, nu_thz: float, fallback: AttenuationProfile) -> float:
    """Net gain (dB) across spans and amplifiers; filters are handled at the receiver."""
    lam = thz_to_nm(nu_thz)
    total = 0.0
    for el in elements:
        if isinstance(el, FiberSpan):
            total -= attenuation_db(el.attenuation or fallback, lam, el.length_km)
        elif isinstance(el, Amplifier):
            total += el.gain_at(nu_thz)
    return total


def receiver_loss_db(link: LinkModel, nu_thz: float) -> float:
    return sum(filter_loss_db(f, nu_thz) for f in link.filters)


def raman_contributions(
    link: LinkModel,
    plan: ChannelPlan,
    quantum: Channel,
    profile: RamanGainProfile,
    env: ThermalEnvironment,
    attenuation: AttenuationProfile | None = None,
    k_spont: float | None = None,
    scale_with_pump: bool | None = None,
) -> list[RamanContribution]:
    """Raman photons/s at the detector from each non-quantum channel, summed over spans."""
    fallback = attenuation or default_attenuation_profile()
    term = link.terminal_filter
    window_ghz = term.passband_width_ghz if term else quantum.width_ghz
    q_nm = quantum.wavelength_nm
    rx_db = receiver_loss_db(link, quantum.center_thz)

    out = []
    for i, ch in enumerate(plan.channels):
        if ch.role is Role.QUANTUM:
            continue
        pump_w = ch.launch_power_w
        rate = 0.0
        for idx, el in enumerate(link.elements):
            if isinstance(el, FiberSpan):
                geometry = ScatterGeometry(
                    direction=link.direction,
                    fiber_length_km=el.length_km,
                    pump_attenuation_db_km=_span_db_km(el, ch.wavelength_nm, fallback),
                    probe_attenuation_db_km=_span_db_km(el, q_nm, fallback),
                )
                r = spontaneous_rate(
                    ch, q_nm, window_ghz, profile, geometry, env,
                    k_spont=k_spont, pump_power_w=pump_w, scale_with_pump=scale_with_pump,
                )
                rate += r * db_to_lin(path_gain_db(_noise_path(link, idx), quantum.center_thz, fallback))
                pump_w *= db_to_lin(-attenuation_db(el.attenuation or fallback, ch.wavelength_nm, el.length_km))
            elif isinstance(el, Amplifier):
                pump_w *= db_to_lin(el.gain_at(ch.center_thz))
        rate *= db_to_lin(-rx_db)
        shift = shift_between(ch.wavelength_nm, q_nm)
        out.append(
            RamanContribution(channel=ch.label(i), shift_thz=shift, side=scattering_side(shift), rate=rate)
        )
        logger.debug("raman from %s: %.6g /s", ch.label(i), rate)
    return out


def ase_rate(link: LinkModel, attenuation: AttenuationProfile | None = None) -> float:
    """ASE photons/s at the detector, each amplifier evaluated over its whole band."""
    fallback = attenuation or default_attenuation_profile()
    rate = 0.0
    for idx, el in enumerate(link.elements):
        if not isinstance(el, Amplifier):
            continue
        nu_c = el.band.center_thz
        p_w = ase_power(el, nu_c, el.band.span_ghz)
        gain_db = path_gain_db(_noise_path(link, idx), nu_c, fallback) - receiver_loss_db(link, nu_c)
        rate += p_w * db_to_lin(gain_db) / photon_energy_j(nu_c)
    return rate


def link_leakage_rate(
    link: LinkModel,
    plan: ChannelPlan,
    quantum: Channel,
    attenuation: AttenuationProfile | None = None,
) -> float:
    fallback = attenuation or default_attenuation_profile()
    term = link.terminal_filter
    rate = 0.0
    for ch in plan.channels:
        if ch.role is Role.QUANTUM:
            continue
        if link.direction is ScatterDirection.CO_PROPAGATING:
            loss_db = -path_gain_db(link.elements, ch.center_thz, fallback)
        else:
            # transmitters sit beside the receiver; only reflected light gets in
            loss_db = term.return_loss_db if term else settings.ISOLATION_CAP_DB
        rate += leakage_rate([ch], term, quantum.wavelength_nm, loss_db)
    return rate


def qber_estimate(total_rate: float, signal_rate: float, det: DetectorModel) -> float:
    p_noise = total_rate * det.gate_width_s
    p_signal = signal_rate * det.efficiency / det.gate_rate_hz
    if p_noise + p_signal == 0.0:
        return 0.0
    return min(0.5, 0.5 * p_noise / (p_signal + p_noise))


def budget_breakdown(
    link: LinkModel,
    plan: ChannelPlan,
    quantum: Channel,
    det: DetectorModel,
    profile: RamanGainProfile,
    env: ThermalEnvironment,
    signal_rate: float,
    attenuation: AttenuationProfile | None = None,
    k_spont: float | None = None,
    scale_with_pump: bool | None = None,
) -> tuple[NoiseBudget, list[RamanContribution]]:
    if quantum.role is not Role.QUANTUM:
        raise BudgetError("budget target is not a quantum channel")
    if quantum not in plan.channels:
        raise BudgetError("quantum channel is not part of the plan")
    violations = validate_plan(plan)
    if violations:
        raise BudgetError(
            f"plan has {len(violations)} violation(s)",
            violations=[v.rule for v in violations],
        )

    contributions = raman_contributions(
        link, plan, quantum, profile, env, attenuation, k_spont, scale_with_pump
    )
    raman = 0.0
    for c in contributions:
        raman += c.rate
    raman = round_sig(raman, RATE_DIGITS)
    ase = round_sig(ase_rate(link, attenuation), RATE_DIGITS)
    leak = round_sig(link_leakage_rate(link, plan, quantum, attenuation), RATE_DIGITS)
    dark = round_sig(det.dark_rate_cps, RATE_DIGITS)
    total = raman + ase + leak + dark
    budget = NoiseBudget(
        raman_rate=raman,
        ase_rate=ase,
        leakage_rate=leak,
        dark_rate=dark,
        total_rate=total,
        qber_estimate=round(qber_estimate(total, signal_rate, det), QBER_DECIMALS),
    )
    return budget, contributions


def total_budget(
    link: LinkModel,
    plan: ChannelPlan,
    quantum: Channel,
    det: DetectorModel,
    profile: RamanGainProfile,
    env: ThermalEnvironment,
    signal_rate: float,
    attenuation: AttenuationProfile | None = None,
    k_spont: float | None = None,
    scale_with_pump: bool | None = None,
) -> NoiseBudget:
    budget, _ = budget_breakdown(
        link, plan, quantum, det, profile, env, signal_rate, attenuation, k_spont, scale_with_pump
    )
    return budget


def budget_csv_header() -> str:
    return ",".join(BUDGET_FIELDS)


def budget_csv_row(budget: NoiseBudget) -> str:
    # repr round-trips, so the text re-sums to the same total
    return ",".join(repr(float(getattr(budget, f))) for f in BUDGET_FIELDS)
