"""Run ledger: one row per CLI invocation when a database URL is configured."""

import logging
from pathlib import Path

from sqlalchemy import select

from . import __version__
from .db import create_schema, db_session
from .models import RunRecord
from .util import sha256_hex

logger = logging.getLogger(__name__)


def record_run(
    url: str,
    subcommand: str,
    scenario_digest: str,
    exit_code: int,
    report_paths: list[Path],
) -> str:
    create_schema(url)
    digests = {p.name: sha256_hex(p.read_bytes()) for p in report_paths}
    with db_session(url) as db:
        rec = RunRecord(
            subcommand=subcommand,
            tool_version=__version__,
            scenario_digest=scenario_digest,
            exit_code=exit_code,
            reports=digests,
        )
        db.add(rec)
        db.flush()
        run_id = rec.id
    logger.info("recorded run %s (%s)", run_id, subcommand)
    return run_id


def list_runs(url: str, scenario_digest: str | None = None) -> list[dict]:
    create_schema(url)
    with db_session(url) as db:
        stmt = select(RunRecord).order_by(RunRecord.created_at)
        if scenario_digest:
            stmt = stmt.where(RunRecord.scenario_digest == scenario_digest)
        return [
            {
                "id": r.id,
                "subcommand": r.subcommand,
                "tool_version": r.tool_version,
                "scenario_digest": r.scenario_digest,
                "exit_code": r.exit_code,
                "reports": r.reports,
            }
            for r in db.execute(stmt).scalars()
        ]
