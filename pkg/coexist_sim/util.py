import hashlib
import math
import uuid

__all__ = [
    "CoexistError",
    "gen_id",
    "dbm_to_w",
    "round_sig",
    "db_to_lin",
    "sha256_hex",
]


class CoexistError(Exception):
    """Base error; renders as the ``{"error": CODE, "message": ...}`` detail shape."""

    code = "COEXIST_ERROR"

    def __init__(self, message: str, **extra):
        super().__init__(message)
        self.message = message
        self.extra = extra

    def detail(self) -> dict:
        return {"error": self.code, "message": self.message, **self.extra}


def gen_id(prefix: str) -> str:
    return f"{prefix}_{uuid.uuid4().hex[:10]}"


def db_to_lin(x_db: float) -> float:
    return 10.0 ** (x_db / 10.0)


def dbm_to_w(p_dbm: float) -> float:
    # -inf dBm is an unlit channel
    if math.isinf(p_dbm) and p_dbm < 0:
        return 0.0
    return 1e-3 * db_to_lin(p_dbm)


def round_sig(x: float, digits: int) -> float:
    """Nearest float to x written with ``digits`` significant digits."""
    return float(f"{x:.{digits - 1}e}")


def sha256_hex(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()
