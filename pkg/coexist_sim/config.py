from pydantic_settings import BaseSettings


class Settings(BaseSettings):
    # Profile tables
    COEXIST_SIM_PROFILE_DIR: str | None = None

    # Run ledger (disabled unless set)
    DATABASE_URL: str | None = None

    # Raman
    K_SPONT: float = 7.0e-9  # calibration knob, see README
    RAMAN_PUMP_SCALING: bool = False

    # Plan validation
    PLAN_TOLERANCE_GHZ: float = 1e-3
    ISOLATION_CAP_DB: float = 200.0

    # Time transfer
    TURNAROUND_PS: int = 1_000_000
    EXCHANGE_SPACING_PS: int = 1_000_000_000_000
    RNG_ALGORITHM: str = "xoshiro256**/splitmix64/box-muller-cos"

    # Sensing
    GROUP_INDEX: float = 1.468
    SENSING_BLOCK_WINDOWS: int = 65536

    # CLI
    SWEEP_WORKERS: int = 4
    LOG_LEVEL: str = "WARNING"

    class Config:
        env_file = ".env"


settings = Settings()


def params_snapshot() -> dict:
    return {
        "k_spont": settings.K_SPONT,
        "raman_pump_scaling": settings.RAMAN_PUMP_SCALING,
        "plan_tolerance_ghz": settings.PLAN_TOLERANCE_GHZ,
        "isolation_cap_db": settings.ISOLATION_CAP_DB,
        "turnaround_ps": settings.TURNAROUND_PS,
        "exchange_spacing_ps": settings.EXCHANGE_SPACING_PS,
        "rng": settings.RNG_ALGORITHM,
        "group_index": settings.GROUP_INDEX,
        "profile_dir": settings.COEXIST_SIM_PROFILE_DIR,
    }
