from datetime import datetime, timezone

from sqlalchemy import JSON, DateTime, Integer, String
from sqlalchemy.orm import DeclarativeBase, Mapped, mapped_column

from .util import gen_id


class Base(DeclarativeBase): pass


class RunRecord(Base):
    __tablename__ = "runs"

    id: Mapped[str] = mapped_column(String, primary_key=True, default=lambda: gen_id("run"))
    subcommand: Mapped[str] = mapped_column(String)
    tool_version: Mapped[str] = mapped_column(String)
    scenario_digest: Mapped[str] = mapped_column(String, index=True)
    exit_code: Mapped[int] = mapped_column(Integer)
    reports: Mapped[dict] = mapped_column(JSON)  # file name -> sha256
    # ledger only; never copied into reports
    created_at: Mapped[datetime] = mapped_column(
        DateTime, default=lambda: datetime.now(timezone.utc)
    )
