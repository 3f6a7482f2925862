"""Report documents.

Every JSON report starts from ``report_header``: tool version, scenario digest,
settings snapshot and the effective scenario. Nothing time-dependent goes in, so
repeated runs produce the same bytes.
"""

from __future__ import annotations

import json
import logging
import math
from pathlib import Path
from typing import Iterable

from . import __version__
from .config import params_snapshot
from .util import round_sig, sha256_hex

logger = logging.getLogger(__name__)

FORMATS = ("json", "csv", "both")

# Report precision by field name: ("sig", n) keeps n significant digits, ("dec", n)
# keeps n decimals, None writes the value unrounded. Floats under any other key get
# DEFAULT_PRECISION. Values are written in shortest round-trip form after rounding.
RATE_PRECISION = ("sig", 7)
FIELD_PRECISION: dict[str, tuple[str, int] | None] = {
    "raman_rate": RATE_PRECISION,
    "ase_rate": RATE_PRECISION,
    "leakage_rate": RATE_PRECISION,
    "dark_rate": RATE_PRECISION,
    "rate": RATE_PRECISION,
    # exact sum of the rounded components
    "total_rate": None,
    "qber_estimate": ("dec", 6),
    "center_thz": ("dec", 6),
    "centers_thz": ("dec", 6),
    "shift_thz": ("dec", 6),
    "mean_offset_error_ps": ("dec", 3),
    "std_offset_error_ps": ("dec", 3),
    "sample_rate_hz": ("dec", 6),
    "time_s": ("dec", 6),
    "score": ("dec", 3),
    "detection_snr": ("dec", 4),
}
DEFAULT_PRECISION = ("sig", 9)
# echoed inputs are written as given
VERBATIM_KEYS = frozenset({"scenario", "settings"})


def fixed(value: float, key: str | None = None) -> float:
    rule = FIELD_PRECISION.get(key, DEFAULT_PRECISION)
    if rule is None or not math.isfinite(value):
        return value
    kind, n = rule
    return round_sig(value, n) if kind == "sig" else round(value, n)


def apply_precision(obj, key: str | None = None):
    """Round every float in a report document by the field it sits under."""
    if isinstance(obj, dict):
        return {k: v if k in VERBATIM_KEYS else apply_precision(v, k) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [apply_precision(v, key) for v in obj]
    if isinstance(obj, float):
        return fixed(obj, key)
    return obj


def canonical_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, allow_nan=False) + "\n"


def scenario_digest(raw: bytes | None, effective: dict) -> str:
    """sha256 of the scenario bytes, or of the compact effective document when there is no file."""
    if raw is not None:
        return sha256_hex(raw)
    compact = json.dumps(effective, sort_keys=True, separators=(",", ":"), allow_nan=False)
    return sha256_hex(compact.encode("utf-8"))


def report_header(subcommand: str, digest: str, effective: dict) -> dict:
    return {
        "tool": "coexist-sim",
        "tool_version": __version__,
        "subcommand": subcommand,
        "scenario_digest": digest,
        "settings": params_snapshot(),
        "scenario": effective,
    }


def csv_text(header: Iterable[str], rows: Iterable[Iterable]) -> str:
    header = tuple(header)
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(format_cell(v, name) for name, v in zip(header, row)))
    return "\n".join(lines) + "\n"


def format_cell(v, key: str | None = None) -> str:
    if isinstance(v, float):
        return repr(fixed(v, key))
    if v is None:
        return ""
    return str(v)


class ReportWriter:
    """Writes report files under ``out_dir`` honoring ``--format``; remembers what it wrote."""

    def __init__(self, out_dir: str | Path, fmt: str = "both"):
        if fmt not in FORMATS:
            raise ValueError(f"unknown format {fmt!r}")
        self.out_dir = Path(out_dir)
        self.fmt = fmt
        self.written: list[Path] = []

    def path_for(self, name: str) -> Path:
        self.out_dir.mkdir(parents=True, exist_ok=True)
        return self.out_dir / name

    def adopt(self, path: Path) -> Path:
        """Track a file written by another module."""
        self.written.append(path)
        logger.info("wrote %s", path)
        return path

    def text(self, name: str, text: str) -> Path:
        path = self.path_for(name)
        with open(path, "w", newline="", encoding="utf-8") as fh:
            fh.write(text)
        self.written.append(path)
        logger.info("wrote %s", path)
        return path

    def json(self, name: str, doc: dict) -> Path | None:
        if self.fmt in ("json", "both"):
            return self.text(name, canonical_json(apply_precision(doc)))
        return None

    def csv(self, name: str, text: str) -> Path | None:
        if self.fmt in ("csv", "both"):
            return self.text(name, text)
        return None
