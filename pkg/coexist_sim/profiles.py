"""Tabulated Raman gain and fiber attenuation profiles.

Lookup order for the defaults: ``COEXIST_SIM_PROFILE_DIR`` when it holds the file,
otherwise the tables shipped in ``coexist_sim/data``.
"""

from __future__ import annotations

import csv
import io
import logging
from pathlib import Path

from pydantic import ValidationError

from .config import settings
from .schemas import AttenuationProfile, RamanGainProfile
from .util import CoexistError

logger = logging.getLogger(__name__)

DATA_DIR = Path(__file__).parent / "data"

RAMAN_FILE = "raman_gain.csv"
RAMAN_HEADER = ("shift_thz", "gain_per_w_km")
ATTENUATION_FILE = "attenuation.csv"
ATTENUATION_HEADER = ("lambda_nm", "loss_db_per_km")


class ProfileError(CoexistError):
    code = "BAD_PROFILE"


def parse_table(text: str, header: tuple[str, str], source: str = "<table>") -> list[tuple[float, float]]:
    reader = csv.reader(io.StringIO(text))
    rows = [r for r in reader if r and any(cell.strip() for cell in r)]
    if not rows or tuple(c.strip() for c in rows[0]) != header:
        raise ProfileError(f"{source}: expected header {','.join(header)}", source=source)
    out = []
    for lineno, row in enumerate(rows[1:], start=2):
        if len(row) != 2:
            raise ProfileError(f"{source}:{lineno}: expected 2 columns", source=source, line=lineno)
        try:
            out.append((float(row[0]), float(row[1])))
        except ValueError:
            raise ProfileError(f"{source}:{lineno}: not a number", source=source, line=lineno)
    return out


def format_table(points, header: tuple[str, str]) -> str:
    lines = [",".join(header)]
    lines += [f"{a:.10g},{b:.10g}" for a, b in points]
    return "\n".join(lines) + "\n"


def resolve_profile_path(filename: str, profile_dir: str | None = None) -> Path:
    profile_dir = profile_dir if profile_dir is not None else settings.COEXIST_SIM_PROFILE_DIR
    if profile_dir:
        candidate = Path(profile_dir) / filename
        if candidate.is_file():
            logger.debug("using profile override %s", candidate)
            return candidate
    return DATA_DIR / filename


def load_raman_profile(path: str | Path, reference_pump_nm: float = 1550.0) -> RamanGainProfile:
    path = Path(path)
    points = parse_table(path.read_text(), RAMAN_HEADER, str(path))
    try:
        return RamanGainProfile(reference_pump_nm=reference_pump_nm, points=points)
    except ValidationError as exc:
        raise ProfileError(f"{path}: {exc.errors()[0]['msg']}", source=str(path))


def load_attenuation_profile(path: str | Path) -> AttenuationProfile:
    path = Path(path)
    points = parse_table(path.read_text(), ATTENUATION_HEADER, str(path))
    try:
        return AttenuationProfile(points=points)
    except ValidationError as exc:
        raise ProfileError(f"{path}: {exc.errors()[0]['msg']}", source=str(path))


def default_raman_profile(profile_dir: str | None = None) -> RamanGainProfile:
    return load_raman_profile(resolve_profile_path(RAMAN_FILE, profile_dir))


def default_attenuation_profile(profile_dir: str | None = None) -> AttenuationProfile:
    return load_attenuation_profile(resolve_profile_path(ATTENUATION_FILE, profile_dir))


def dump_raman_profile(profile: RamanGainProfile) -> str:
    return format_table(profile.points, RAMAN_HEADER)


def dump_attenuation_profile(profile: AttenuationProfile) -> str:
    return format_table(profile.points, ATTENUATION_HEADER)
