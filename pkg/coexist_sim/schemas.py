from __future__ import annotations

import math
from enum import Enum
from typing import Annotated, List, Literal, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, field_serializer, field_validator, model_validator

from .units import (
    FREQ_MAX_THZ,
    FREQ_MIN_THZ,
    WAVELENGTH_MAX_NM,
    WAVELENGTH_MIN_NM,
    nm_to_thz,
    thz_to_nm,
)
from .util import dbm_to_w

WavelengthNm = Annotated[float, Field(ge=WAVELENGTH_MIN_NM, le=WAVELENGTH_MAX_NM)]
FrequencyThz = Annotated[float, Field(ge=FREQ_MIN_THZ, le=FREQ_MAX_THZ)]


class Frozen(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")


# ----------------------
# Spectrum
# ----------------------


class Role(str, Enum):
    CLASSICAL = "classical"
    TIME_FREQUENCY = "time_frequency"
    QUANTUM = "quantum"


class Band(Frozen):
    name: str
    lambda_min_nm: WavelengthNm
    lambda_max_nm: WavelengthNm

    @model_validator(mode="after")
    def _ordered(self):
        if not self.lambda_min_nm < self.lambda_max_nm:
            raise ValueError("lambda_min_nm must be below lambda_max_nm")
        return self

    @property
    def nu_min_thz(self) -> float:
        return nm_to_thz(self.lambda_max_nm)

    @property
    def nu_max_thz(self) -> float:
        return nm_to_thz(self.lambda_min_nm)

    @property
    def span_ghz(self) -> float:
        return (self.nu_max_thz - self.nu_min_thz) * 1e3

    @property
    def center_thz(self) -> float:
        return 0.5 * (self.nu_min_thz + self.nu_max_thz)

    def contains(self, nu_thz: float) -> bool:
        return self.nu_min_thz <= nu_thz <= self.nu_max_thz


class Channel(Frozen):
    name: str | None = None
    center_thz: FrequencyThz
    width_ghz: float = Field(..., gt=0)
    role: Role
    launch_power_dbm: float | None = None
    amplified: bool = False

    @model_validator(mode="before")
    @classmethod
    def _quantum_has_no_dbm(cls, data):
        # photon-counting channels: the dBm figure is not applicable
        if isinstance(data, dict) and data.get("role") in (Role.QUANTUM, Role.QUANTUM.value):
            data = {**data, "launch_power_dbm": None}
        return data

    @model_validator(mode="after")
    def _check(self):
        if self.lo_thz < FREQ_MIN_THZ or self.hi_thz > FREQ_MAX_THZ:
            raise ValueError("channel passband leaves the valid frequency range")
        if self.role is Role.QUANTUM:
            if self.amplified:
                raise ValueError("quantum channels cannot be amplified")
        elif self.launch_power_dbm is None:
            raise ValueError("non-quantum channels need launch_power_dbm")
        return self

    @property
    def lo_thz(self) -> float:
        return self.center_thz - self.width_ghz * 1e-3 / 2

    @property
    def hi_thz(self) -> float:
        return self.center_thz + self.width_ghz * 1e-3 / 2

    @property
    def wavelength_nm(self) -> float:
        return thz_to_nm(self.center_thz)

    @property
    def launch_power_w(self) -> float:
        if self.launch_power_dbm is None:
            return 0.0
        return dbm_to_w(self.launch_power_dbm)

    def label(self, index: int) -> str:
        return self.name or f"ch{index}"

    @field_serializer("center_thz", when_used="json")
    def _six_decimals(self, v: float) -> float:
        return round(v, 6)


class ChannelPlan(Frozen):
    channels: List[Channel]
    guard_band_ghz: float = Field(0.0, ge=0)

    def find(self, name: str) -> tuple[int, Channel] | None:
        for i, ch in enumerate(self.channels):
            if ch.name == name:
                return i, ch
        return None


class Violation(Frozen):
    rule: str
    channels: List[int]
    centers_thz: List[float]
    message: str


# ----------------------
# Raman
# ----------------------


class RamanGainProfile(Frozen):
    reference_pump_nm: WavelengthNm = 1550.0
    points: List[Tuple[float, float]] = Field(..., description="(shift THz, gain 1/(W km))")

    @field_validator("points")
    @classmethod
    def _shape(cls, pts):
        if len(pts) < 4:
            raise ValueError("a gain profile needs at least 4 points")
        if pts[0] != (0.0, 0.0):
            raise ValueError("a gain profile starts at shift 0 with gain 0")
        for (s0, _), (s1, _) in zip(pts, pts[1:]):
            if not s1 > s0:
                raise ValueError("shifts must be strictly increasing")
        for _, g in pts:
            if not math.isfinite(g) or g < 0:
                raise ValueError("gains must be finite and non-negative")
        return pts

    @property
    def max_shift_thz(self) -> float:
        return self.points[-1][0]


class ThermalEnvironment(Frozen):
    temperature_k: float = Field(293.0, ge=4.0, le=400.0)


class ScatterDirection(str, Enum):
    CO_PROPAGATING = "co_propagating"
    COUNTER_PROPAGATING = "counter_propagating"


class ScatterGeometry(Frozen):
    direction: ScatterDirection = ScatterDirection.CO_PROPAGATING
    fiber_length_km: float = Field(..., gt=0)
    pump_attenuation_db_km: float = Field(..., ge=0)
    probe_attenuation_db_km: float = Field(..., ge=0)


# ----------------------
# Link budget
# ----------------------


class AttenuationProfile(Frozen):
    points: List[Tuple[float, float]] = Field(..., description="(wavelength nm, loss dB/km)")

    @field_validator("points")
    @classmethod
    def _shape(cls, pts):
        if len(pts) < 3:
            raise ValueError("an attenuation profile needs at least 3 points")
        for (l0, _), (l1, _) in zip(pts, pts[1:]):
            if not l1 > l0:
                raise ValueError("wavelengths must be strictly increasing")
        if pts[0][0] > 1260.0 or pts[-1][0] < 1620.0:
            raise ValueError("attenuation profile must span 1260-1620 nm")
        for lam, loss in pts:
            if not WAVELENGTH_MIN_NM <= lam <= WAVELENGTH_MAX_NM:
                raise ValueError(f"wavelength {lam} nm out of range")
            if not math.isfinite(loss) or loss < 0:
                raise ValueError("losses must be finite and non-negative")
        return pts


class FiberSpan(Frozen):
    kind: Literal["span"] = "span"
    length_km: float = Field(..., gt=0)
    attenuation: AttenuationProfile | None = None


class Amplifier(Frozen):
    kind: Literal["amplifier"] = "amplifier"
    gain_db: float = Field(..., ge=0, le=40)
    noise_factor: float = Field(..., ge=1)
    band: Band

    def gain_at(self, nu_thz: float) -> float:
        """Gain in dB at a frequency; unity outside the band."""
        return self.gain_db if self.band.contains(nu_thz) else 0.0


class OpticalFilter(Frozen):
    kind: Literal["filter"] = "filter"
    center_thz: FrequencyThz
    passband_width_ghz: float = Field(..., gt=0)
    insertion_loss_db: float = Field(0.0, ge=0)
    out_of_band_isolation_db: float = Field(..., ge=0)
    return_loss_db: float = Field(0.0, ge=0)

    @model_validator(mode="after")
    def _check(self):
        half = self.passband_width_ghz * 1e-3 / 2
        if self.center_thz - half < FREQ_MIN_THZ or self.center_thz + half > FREQ_MAX_THZ:
            raise ValueError("filter passband leaves the valid frequency range")
        if self.out_of_band_isolation_db < self.insertion_loss_db:
            raise ValueError("isolation must be at least the insertion loss")
        return self

    def passes(self, nu_thz: float) -> bool:
        return abs(nu_thz - self.center_thz) <= self.passband_width_ghz * 1e-3 / 2

    @field_serializer("center_thz", when_used="json")
    def _six_decimals(self, v: float) -> float:
        return round(v, 6)


LinkElement = Annotated[Union[FiberSpan, Amplifier, OpticalFilter], Field(discriminator="kind")]


class LinkModel(Frozen):
    elements: List[LinkElement]
    direction: ScatterDirection = ScatterDirection.CO_PROPAGATING

    @model_validator(mode="after")
    def _check(self):
        spans = self.spans
        if not spans:
            raise ValueError("a link needs at least one fiber span")
        if sum(s.length_km for s in spans) > 2000.0:
            raise ValueError("total span length exceeds 2000 km")
        return self

    @property
    def spans(self) -> list[FiberSpan]:
        return [e for e in self.elements if isinstance(e, FiberSpan)]

    @property
    def filters(self) -> list[OpticalFilter]:
        return [e for e in self.elements if isinstance(e, OpticalFilter)]

    @property
    def amplifiers(self) -> list[Amplifier]:
        return [e for e in self.elements if isinstance(e, Amplifier)]

    @property
    def terminal_filter(self) -> OpticalFilter | None:
        filters = self.filters
        return filters[-1] if filters else None


class DetectorModel(Frozen):
    gate_rate_hz: float = Field(..., gt=0)
    gate_width_s: float = Field(..., gt=0)
    efficiency: float = Field(..., ge=0, le=1)
    dark_rate_cps: float = Field(0.0, ge=0)

    @model_validator(mode="after")
    def _duty(self):
        if self.gate_width_s * self.gate_rate_hz > 1.0:
            raise ValueError("gate_width_s * gate_rate_hz must not exceed 1")
        return self


class NoiseBudget(Frozen):
    raman_rate: float = Field(..., ge=0)
    ase_rate: float = Field(..., ge=0)
    leakage_rate: float = Field(..., ge=0)
    dark_rate: float = Field(..., ge=0)
    total_rate: float = Field(..., ge=0)
    qber_estimate: float = Field(..., ge=0, le=0.5)

    @model_validator(mode="after")
    def _sum(self):
        if self.total_rate != self.raman_rate + self.ase_rate + self.leakage_rate + self.dark_rate:
            raise ValueError("total_rate must equal the component sum")
        return self


class RamanContribution(Frozen):
    channel: str
    shift_thz: float
    side: Literal["stokes", "anti_stokes", "none"]
    rate: float


# ----------------------
# Time transfer
# ----------------------


class ClockState(Frozen):
    offset_ps: int = 0
    drift_ppb: float = 0.0
    granularity_ps: int = Field(1, ge=1)


class LinkDelays(Frozen):
    forward_ps: int = Field(..., gt=0)
    backward_ps: int = Field(..., gt=0)
    jitter_sigma_ps: float = Field(0.0, ge=0)


class TwoWayExchange(Frozen):
    t1: int
    t2: int
    t3: int
    t4: int

    @model_validator(mode="after")
    def _order(self):
        if not self.t4 > self.t1:
            raise ValueError("t4 must be after t1")
        if not self.t3 >= self.t2:
            raise ValueError("t3 must not precede t2")
        return self


class SyncEstimate(Frozen):
    offset_est_ps: int
    round_trip_ps: int
    one_way_delay_est_ps: int


class RoundRecord(Frozen):
    round: int
    exchange: TwoWayExchange
    offset_est_ps: int
    true_offset_ps: int

    @property
    def error_ps(self) -> int:
        return self.offset_est_ps - self.true_offset_ps


class SessionResult(Frozen):
    mean_offset_error_ps: float
    std_offset_error_ps: float
    rounds: List[RoundRecord]


# ----------------------
# Sensing
# ----------------------


class GaussianPulse(Frozen):
    kind: Literal["gaussian_pulse"] = "gaussian_pulse"


class Sinusoid(Frozen):
    kind: Literal["sinusoid"] = "sinusoid"
    frequency_hz: float = Field(..., gt=0)


EventShape = Annotated[Union[GaussianPulse, Sinusoid], Field(discriminator="kind")]


class DisturbanceEvent(Frozen):
    position_km: float = Field(0.0, ge=0)
    start_s: float = Field(..., ge=0)
    duration_s: float = Field(..., gt=0)
    amplitude_um: float = Field(..., ge=0)
    shape: EventShape = Field(default_factory=GaussianPulse)


class DetectedEvent(Frozen):
    time_s: float
    score: float


# ----------------------
# Scenario document
# ----------------------


class ProfileOverrides(Frozen):
    raman_gain: RamanGainProfile | None = None
    attenuation: AttenuationProfile | None = None
    raman_pump_scaling: bool | None = None


class BudgetRequest(Frozen):
    quantum_channel: str
    signal_rate: float = Field(..., ge=0)


class TimesyncSection(Frozen):
    clock: ClockState = Field(default_factory=ClockState)
    delays: LinkDelays = Field(
        default_factory=lambda: LinkDelays(forward_ps=250_000_000, backward_ps=250_000_000)
    )
    rounds: int = Field(1000, ge=1)
    seed: int = Field(0, ge=0, lt=2**64)


class SensingSection(Frozen):
    events: List[DisturbanceEvent] = Field(default_factory=list)
    duration_s: float = Field(10.0, gt=0)
    sample_rate_hz: float = Field(1000.0, gt=0)
    noise_sigma_rad: float = Field(0.01, ge=0)
    seed: int = Field(0, ge=0)
    fiber_length_km: float = Field(50.0, gt=0)
    lambda_nm: WavelengthNm = 1550.0
    group_index: float | None = Field(None, gt=1)
    window: int = Field(100, ge=2)
    threshold_sigma: float = Field(5.0, gt=0)


class Scenario(Frozen):
    plan: ChannelPlan
    link: LinkModel
    detector: DetectorModel
    environment: ThermalEnvironment = Field(default_factory=ThermalEnvironment)
    profiles: ProfileOverrides = Field(default_factory=ProfileOverrides)
    budget: BudgetRequest | None = None
    timesync: TimesyncSection | None = None
    sensing: SensingSection | None = None

    @model_validator(mode="after")
    def _budget_channel(self):
        if self.budget is not None:
            found = self.plan.find(self.budget.quantum_channel)
            if found is None:
                raise ValueError(f"quantum channel {self.budget.quantum_channel!r} not in plan")
            if found[1].role is not Role.QUANTUM:
                raise ValueError(f"channel {self.budget.quantum_channel!r} is not a quantum channel")
        return self
