"""Command-line front end.

    python -m coexist_sim <group> <action> [scenario] [flags]

Exit codes: 0 success, 1 plan violations, 2 usage, parse or input errors.
Errors are written to stderr as one JSON object in the ``{"error", "message"}`` shape.
"""

from __future__ import annotations

import argparse
import copy
import json
import logging
import math
import re
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

import numpy as np
from pydantic import ValidationError

from . import __version__
from .config import settings
from .linkbudget import BUDGET_FIELDS, budget_breakdown, budget_csv_header, budget_csv_row, raman_contributions
from .profiles import (
    ATTENUATION_FILE,
    RAMAN_FILE,
    default_attenuation_profile,
    default_raman_profile,
    dump_attenuation_profile,
    dump_raman_profile,
)
from .reports import FORMATS, ReportWriter, csv_text, format_cell, report_header, scenario_digest
from .schemas import (
    Band,
    Channel,
    FiberSpan,
    ProfileOverrides,
    Role,
    Scenario,
    SensingSection,
    TimesyncSection,
)
from .sensing import (
    detect_events,
    detection_snr,
    read_trace_bin,
    read_trace_csv,
    synthesize_trace,
    write_trace_bin,
    write_trace_csv,
)
from .spectral import BANDS, grid_centers, validate_plan
from .storage import list_runs, record_run
from .timesync import asymmetry_error, rounds_csv, simulate_session
from .units import thz_to_nm
from .util import CoexistError, sha256_hex

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VIOLATIONS = 1
EXIT_USAGE = 2

LOG_FORMAT = "%(levelname)s %(name)s: %(message)s"
LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR")


class ScenarioError(CoexistError):
    code = "SCENARIO_ERROR"


class ScenarioParseError(ScenarioError):
    code = "PARSE_ERROR"


class ScenarioSchemaError(ScenarioError):
    code = "SCHEMA_ERROR"


class PlanViolationError(ScenarioError):
    code = "PLAN_VIOLATIONS"

    def __init__(self, violations):
        super().__init__(
            f"plan has {len(violations)} violation(s)",
            violations=[v.model_dump(mode="json") for v in violations],
        )
        self.violations = violations


class UsageError(CoexistError):
    code = "USAGE"


# ----------------------
# Scenario loading
# ----------------------


def _schema_error(exc: ValidationError, source: str) -> ScenarioSchemaError:
    errors = [
        {"loc": ".".join(str(p) for p in e["loc"]), "msg": e["msg"]}
        for e in exc.errors(include_url=False)
    ]
    first = errors[0] if errors else {"loc": "", "msg": str(exc)}
    return ScenarioSchemaError(f"{source}: {first['loc']}: {first['msg']}", errors=errors)


def read_document(path: str | Path) -> tuple[bytes, dict]:
    path = Path(path)
    try:
        raw = path.read_bytes()
    except OSError as exc:
        raise ScenarioError(f"{path}: {exc.strerror or exc}", path=str(path))
    try:
        doc = json.loads(raw.decode("utf-8"))
    except UnicodeDecodeError as exc:
        raise ScenarioParseError(f"{path}: not UTF-8 text at byte {exc.start}", line=None, column=None)
    except json.JSONDecodeError as exc:
        raise ScenarioParseError(
            f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}", line=exc.lineno, column=exc.colno
        )
    return raw, doc


def resolve_defaults(scn: Scenario) -> Scenario:
    """Fill profile tables and span attenuation so the echoed scenario is complete."""
    raman = scn.profiles.raman_gain or default_raman_profile()
    atten = scn.profiles.attenuation or default_attenuation_profile()
    scaling = scn.profiles.raman_pump_scaling
    if scaling is None:
        scaling = settings.RAMAN_PUMP_SCALING
    elements = [
        el.model_copy(update={"attenuation": atten})
        if isinstance(el, FiberSpan) and el.attenuation is None
        else el
        for el in scn.link.elements
    ]
    return scn.model_copy(
        update={
            "profiles": ProfileOverrides(raman_gain=raman, attenuation=atten, raman_pump_scaling=scaling),
            "link": scn.link.model_copy(update={"elements": elements}),
        }
    )


def scenario_from_document(doc, source: str = "<scenario>", check_plan: bool = True) -> Scenario:
    try:
        scn = Scenario.model_validate(doc)
    except ValidationError as exc:
        raise _schema_error(exc, source)
    if check_plan:
        violations = validate_plan(scn.plan)
        if violations:
            raise PlanViolationError(violations)
    return resolve_defaults(scn)


def load_scenario(path: str | Path, check_plan: bool = True) -> Scenario:
    _, doc = read_document(path)
    return scenario_from_document(doc, str(path), check_plan)


def quantum_channel(scn: Scenario) -> Channel:
    if scn.budget is not None:
        return scn.plan.find(scn.budget.quantum_channel)[1]
    quantum = [ch for ch in scn.plan.channels if ch.role is Role.QUANTUM]
    if len(quantum) != 1:
        raise ScenarioError(
            f"plan has {len(quantum)} quantum channels; name one in budget.quantum_channel"
        )
    return quantum[0]


# ----------------------
# Sweeps
# ----------------------

_SWEEP_RE = re.compile(r"^([A-Za-z_][\w.]*)=([^:]+):([^:]+):(\d+)$")


@dataclass(frozen=True)
class Sweep:
    key: str
    values: tuple[float, ...]


def parse_sweep(text: str) -> Sweep:
    m = _SWEEP_RE.match(text)
    if not m:
        raise UsageError(f"sweep must look like KEY=START:STOP:STEPS, got {text!r}")
    key, start, stop, steps = m.groups()
    try:
        a, b = float(start), float(stop)
    except ValueError:
        raise UsageError(f"sweep bounds must be numbers, got {start!r}:{stop!r}")
    n = int(steps)
    if n < 1 or not (math.isfinite(a) and math.isfinite(b)):
        raise UsageError("sweep needs at least one step and finite bounds")
    return Sweep(key, tuple(float(v) for v in np.linspace(a, b, n)))


def set_path(doc, dotted: str, value):
    """Copy of ``doc`` with the dotted path set; numeric segments index lists."""
    out = copy.deepcopy(doc)
    parts = dotted.split(".")
    node = out
    try:
        for part in parts[:-1]:
            node = node[int(part)] if isinstance(node, list) else node[part]
        last = parts[-1]
        if isinstance(node, list):
            node[int(last)] = value
        elif isinstance(node, dict):
            if last not in node:
                raise KeyError(last)
            node[last] = value
        else:
            raise TypeError(type(node).__name__)
    except (KeyError, IndexError, ValueError, TypeError):
        raise UsageError(f"sweep key {dotted!r} does not name a value in the scenario", key=dotted)
    return out


def run_sweep(doc, sweep: Sweep, source: str, fn: Callable[[Scenario], dict]) -> list[dict]:
    """Evaluate ``fn`` on each scenario variant; results keep sweep-index order."""

    def one(item):
        idx, value = item
        variant = scenario_from_document(set_path(doc, sweep.key, value), f"{source}[{idx}]")
        logger.debug("sweep %s[%d] = %r", sweep.key, idx, value)
        return {"index": idx, "value": value, **fn(variant)}

    with ThreadPoolExecutor(max_workers=max(1, settings.SWEEP_WORKERS)) as pool:
        return list(pool.map(one, enumerate(sweep.values)))


# ----------------------
# Subcommands
# ----------------------


@dataclass
class Context:
    subcommand: str
    args: argparse.Namespace
    writer: ReportWriter
    digest: str | None = None

    def header(self, raw: bytes | None, effective: dict) -> dict:
        self.digest = scenario_digest(raw, effective)
        return report_header(self.subcommand, self.digest, effective)


def _echo(scn: Scenario) -> dict:
    return scn.model_dump(mode="json")


def _violation_rows(violations):
    for v in violations:
        yield (v.rule, ";".join(str(i) for i in v.channels), ";".join(f"{c:.6f}" for c in v.centers_thz), v.message)


def cmd_plan_validate(ctx: Context) -> int:
    raw, doc = read_document(ctx.args.scenario)
    scn = scenario_from_document(doc, ctx.args.scenario, check_plan=False)
    violations = validate_plan(scn.plan)
    header = ctx.header(raw, _echo(scn))
    ctx.writer.json(
        "plan_validate.json",
        {
            **header,
            "violation_count": len(violations),
            "violations": [v.model_dump(mode="json") for v in violations],
        },
    )
    ctx.writer.csv(
        "plan_validate.csv",
        csv_text(("rule", "channels", "centers_thz", "message"), _violation_rows(violations)),
    )
    print(f"{len(violations)} violations")
    for v in violations:
        print(f"  {v.rule}: {v.message}")
    return EXIT_VIOLATIONS if violations else EXIT_OK


def _capacity_band(args) -> Band:
    if args.band:
        if args.band not in BANDS:
            raise UsageError(f"unknown band {args.band!r}; choose from {', '.join(BANDS)}")
        return BANDS[args.band]
    if args.lambda_min is None or args.lambda_max is None:
        raise UsageError("give --band or both --lambda-min and --lambda-max")
    try:
        return Band(name="custom", lambda_min_nm=args.lambda_min, lambda_max_nm=args.lambda_max)
    except ValidationError as exc:
        raise _schema_error(exc, "band")


def cmd_plan_capacity(ctx: Context) -> int:
    args = ctx.args
    band = _capacity_band(args)
    centers = grid_centers(band, args.spacing, args.width, args.anchor)
    effective = {
        "band": band.model_dump(mode="json"),
        "spacing_ghz": args.spacing,
        "width_ghz": args.width,
        "anchor": args.anchor,
    }
    header = ctx.header(None, effective)
    ctx.writer.json(
        "plan_capacity.json",
        {**header, "capacity": len(centers), "centers_thz": [round(c, 6) for c in centers]},
    )
    ctx.writer.csv(
        "plan_capacity.csv",
        csv_text(
            ("index", "center_thz", "lambda_nm"),
            ((k, f"{c:.6f}", f"{thz_to_nm(c):.3f}") for k, c in enumerate(centers)),
        ),
    )
    print(f"capacity {len(centers)} ({band.name}, {args.spacing} GHz spacing, {args.width} GHz channels)")
    return EXIT_OK


def _raman_result(scn: Scenario) -> dict:
    q = quantum_channel(scn)
    contributions = raman_contributions(
        scn.link,
        scn.plan,
        q,
        scn.profiles.raman_gain,
        scn.environment,
        scn.profiles.attenuation,
        scale_with_pump=scn.profiles.raman_pump_scaling,
    )
    total = 0.0
    for c in contributions:
        total += c.rate
    return {
        "quantum_channel": q.name or "quantum",
        "raman_rate": total,
        "contributions": [c.model_dump(mode="json") for c in contributions],
    }


def _budget_result(scn: Scenario) -> dict:
    if scn.budget is None:
        raise ScenarioError("noise budget needs a budget section with quantum_channel and signal_rate")
    q = quantum_channel(scn)
    budget, contributions = budget_breakdown(
        scn.link,
        scn.plan,
        q,
        scn.detector,
        scn.profiles.raman_gain,
        scn.environment,
        scn.budget.signal_rate,
        scn.profiles.attenuation,
        scale_with_pump=scn.profiles.raman_pump_scaling,
    )
    return {
        "quantum_channel": scn.budget.quantum_channel,
        "budget": budget.model_dump(mode="json"),
        "budget_row": budget_csv_row(budget),
        "contributions": [c.model_dump(mode="json") for c in contributions],
    }


def _sweep_doc(results: list[dict], sweep: Sweep) -> dict:
    return {"sweep": {"key": sweep.key, "values": list(sweep.values)}, "results": results}


def cmd_noise_raman(ctx: Context) -> int:
    args = ctx.args
    raw, doc = read_document(args.scenario)
    base = scenario_from_document(doc, args.scenario)
    header = ctx.header(raw, _echo(base))

    if args.sweep:
        sweep = parse_sweep(args.sweep)
        results = run_sweep(doc, sweep, args.scenario, _raman_result)
        ctx.writer.json("noise_raman_sweep.json", {**header, **_sweep_doc(results, sweep)})
        ctx.writer.csv(
            "noise_raman_sweep.csv",
            csv_text(("index", sweep.key, "raman_rate"), ((r["index"], r["value"], r["raman_rate"]) for r in results)),
        )
        print(f"{len(results)} sweep points over {sweep.key}")
        return EXIT_OK

    result = _raman_result(base)
    ctx.writer.json("noise_raman.json", {**header, **result})
    ctx.writer.csv(
        "noise_raman.csv",
        csv_text(
            ("channel", "shift_thz", "side", "rate"),
            ((c["channel"], c["shift_thz"], c["side"], c["rate"]) for c in result["contributions"]),
        ),
    )
    print(f"raman_rate {result['raman_rate']:.6g} /s at {result['quantum_channel']}")
    return EXIT_OK


def cmd_noise_budget(ctx: Context) -> int:
    args = ctx.args
    raw, doc = read_document(args.scenario)
    base = scenario_from_document(doc, args.scenario)
    header = ctx.header(raw, _echo(base))

    if args.sweep:
        sweep = parse_sweep(args.sweep)
        results = run_sweep(doc, sweep, args.scenario, _budget_result)
        rows = [f"{r['index']},{format_cell(r['value'])},{r.pop('budget_row')}" for r in results]
        ctx.writer.json("noise_budget_sweep.json", {**header, **_sweep_doc(results, sweep)})
        ctx.writer.csv(
            "noise_budget_sweep.csv",
            "\n".join([f"index,{sweep.key},{budget_csv_header()}", *rows]) + "\n",
        )
        print(f"{len(results)} sweep points over {sweep.key}")
        return EXIT_OK

    result = _budget_result(base)
    row = result.pop("budget_row")
    ctx.writer.json("noise_budget.json", {**header, **result})
    ctx.writer.csv("noise_budget.csv", f"{budget_csv_header()}\n{row}\n")
    for field in BUDGET_FIELDS:
        print(f"{field:>14} {result['budget'][field]:.6g}")
    return EXIT_OK


def _optional_scenario(args) -> tuple[bytes | None, Scenario | None]:
    if not args.scenario:
        return None, None
    raw, doc = read_document(args.scenario)
    return raw, scenario_from_document(doc, args.scenario)


def _override(model, **changes):
    """Re-validate a section with flag overrides applied."""
    changes = {k: v for k, v in changes.items() if v is not None}
    if not changes:
        return model
    try:
        return type(model).model_validate({**model.model_dump(), **changes})
    except ValidationError as exc:
        raise _schema_error(exc, "flags")


def _effective(scn: Scenario | None, key: str, section) -> dict:
    if scn is None:
        return {key: section.model_dump(mode="json")}
    return _echo(scn.model_copy(update={key: section}))


def cmd_timesync_simulate(ctx: Context) -> int:
    args = ctx.args
    raw, scn = _optional_scenario(args)
    section = scn.timesync if scn is not None and scn.timesync is not None else TimesyncSection()
    section = _override(section, rounds=args.rounds, seed=args.seed)
    header = ctx.header(raw, _effective(scn, "timesync", section))

    result = simulate_session(section.clock, section.delays, section.rounds, section.seed)
    ctx.writer.json(
        "timesync.json",
        {
            **header,
            "rounds": section.rounds,
            "seed": section.seed,
            "mean_offset_error_ps": result.mean_offset_error_ps,
            "std_offset_error_ps": result.std_offset_error_ps,
            "asymmetry_error_ps": asymmetry_error(section.delays),
        },
    )
    ctx.writer.csv("timesync_rounds.csv", rounds_csv(result))
    print(
        f"{section.rounds} rounds: mean error {result.mean_offset_error_ps:.3f} ps, "
        f"std {result.std_offset_error_ps:.3f} ps"
    )
    return EXIT_OK


def _sensing_section(args, scn: Scenario | None) -> SensingSection:
    section = scn.sensing if scn is not None and scn.sensing is not None else SensingSection()
    return _override(
        section,
        seed=args.seed,
        window=getattr(args, "window", None),
        threshold_sigma=getattr(args, "threshold", None),
    )


def cmd_sense_synth(ctx: Context) -> int:
    args = ctx.args
    raw, scn = _optional_scenario(args)
    section = _sensing_section(args, scn)
    header = ctx.header(raw, _effective(scn, "sensing", section))

    trace = synthesize_trace(
        section.events,
        section.duration_s,
        section.sample_rate_hz,
        section.noise_sigma_rad,
        FiberSpan(length_km=section.fiber_length_km),
        section.lambda_nm,
        section.seed,
        section.group_index,
    )
    name = f"trace.{args.trace_format}"
    path = ctx.writer.path_for(name)
    if args.trace_format == "bin":
        write_trace_bin(trace, path)
    else:
        write_trace_csv(trace, path)
    ctx.writer.adopt(path)

    snrs = []
    for ev in section.events:
        snr = detection_snr(
            ev, section.window, section.sample_rate_hz, section.noise_sigma_rad,
            section.lambda_nm, section.group_index,
        )
        snrs.append(snr if math.isfinite(snr) else None)
    ctx.writer.json(
        "sense_synth.json",
        {
            **header,
            "samples": len(trace),
            "sample_rate_hz": trace.sample_rate_hz,
            "trace_file": name,
            "trace_sha256": sha256_hex(path.read_bytes()),
            "detection_snr": snrs,
        },
    )
    print(f"{len(trace)} samples written to {path}")
    return EXIT_OK


def cmd_sense_detect(ctx: Context) -> int:
    args = ctx.args
    raw, scn = _optional_scenario(args)
    section = _sensing_section(args, scn)
    header = ctx.header(raw, _effective(scn, "sensing", section))

    trace_path = Path(args.trace)
    if not trace_path.is_file():
        raise UsageError(f"trace file {trace_path} not found")
    reader = read_trace_bin if trace_path.suffix == ".bin" else read_trace_csv
    trace = reader(trace_path, section.fiber_length_km, section.lambda_nm, section.group_index)
    events = detect_events(
        trace, section.window, section.threshold_sigma, workers=max(1, settings.SWEEP_WORKERS)
    )
    ctx.writer.json(
        "sense_detect.json",
        {
            **header,
            "trace_sha256": sha256_hex(trace_path.read_bytes()),
            "window": section.window,
            "threshold_sigma": section.threshold_sigma,
            "events": [e.model_dump(mode="json") for e in events],
        },
    )
    ctx.writer.csv(
        "sense_detect.csv",
        csv_text(("time_s", "score"), ((e.time_s, e.score) for e in events)),
    )
    print(f"{len(events)} events detected")
    return EXIT_OK


def cmd_profile_dump(ctx: Context) -> int:
    args = ctx.args
    raw, scn = _optional_scenario(args)
    if scn is not None:
        raman, atten = scn.profiles.raman_gain, scn.profiles.attenuation
    else:
        raman, atten = default_raman_profile(), default_attenuation_profile()
    effective = {
        "raman_gain": raman.model_dump(mode="json"),
        "attenuation": atten.model_dump(mode="json"),
    }
    header = ctx.header(raw, effective)
    raman_text = dump_raman_profile(raman)
    ctx.writer.text(RAMAN_FILE, raman_text)
    ctx.writer.text(ATTENUATION_FILE, dump_attenuation_profile(atten))
    ctx.writer.json("profile_dump.json", header)
    sys.stdout.write(raman_text)
    return EXIT_OK


def cmd_ledger_list(ctx: Context) -> int:
    url = ctx.args.ledger or settings.DATABASE_URL
    if not url:
        raise UsageError("give --ledger or set DATABASE_URL")
    runs = list_runs(url, ctx.args.scenario_digest)
    print(json.dumps(runs, indent=2, sort_keys=True))
    return EXIT_OK


HANDLERS: dict[str, Callable[[Context], int]] = {
    "plan validate": cmd_plan_validate,
    "plan capacity": cmd_plan_capacity,
    "noise raman": cmd_noise_raman,
    "noise budget": cmd_noise_budget,
    "timesync simulate": cmd_timesync_simulate,
    "sense synth": cmd_sense_synth,
    "sense detect": cmd_sense_detect,
    "profile dump": cmd_profile_dump,
    "ledger list": cmd_ledger_list,
}


# ----------------------
# Entry points
# ----------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", default="reports", help="report directory (default: reports)")
    common.add_argument("--format", choices=FORMATS, default="both")
    common.add_argument("--seed", type=int, default=None)
    common.add_argument("--log-level", type=str.upper, choices=LOG_LEVELS, default=None)
    common.add_argument("--ledger", default=None, help="database URL for the run ledger")

    parser = argparse.ArgumentParser(
        prog="coexist-sim",
        description="Plan and simulate a fiber shared by classical, time/frequency and quantum channels.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    groups = parser.add_subparsers(dest="group", required=True)

    plan = groups.add_parser("plan").add_subparsers(dest="action", required=True)
    p = plan.add_parser("validate", parents=[common])
    p.add_argument("scenario")
    p = plan.add_parser("capacity", parents=[common])
    p.add_argument("--band", default=None)
    p.add_argument("--lambda-min", type=float, default=None)
    p.add_argument("--lambda-max", type=float, default=None)
    p.add_argument("--spacing", type=float, required=True, help="GHz")
    p.add_argument("--width", type=float, required=True, help="GHz")
    p.add_argument("--anchor", choices=("edge", "itu"), default="edge")

    noise = groups.add_parser("noise").add_subparsers(dest="action", required=True)
    for action in ("raman", "budget"):
        p = noise.add_parser(action, parents=[common])
        p.add_argument("scenario")
        p.add_argument("--sweep", default=None, metavar="KEY=START:STOP:STEPS")

    ts = groups.add_parser("timesync").add_subparsers(dest="action", required=True)
    p = ts.add_parser("simulate", parents=[common])
    p.add_argument("scenario", nargs="?")
    p.add_argument("--rounds", type=int, default=None)

    sense = groups.add_parser("sense").add_subparsers(dest="action", required=True)
    p = sense.add_parser("synth", parents=[common])
    p.add_argument("scenario", nargs="?")
    p.add_argument("--trace-format", choices=("csv", "bin"), default="csv")
    p = sense.add_parser("detect", parents=[common])
    p.add_argument("scenario", nargs="?")
    p.add_argument("--trace", required=True)
    p.add_argument("--window", type=int, default=None)
    p.add_argument("--threshold", type=float, default=None)

    prof = groups.add_parser("profile").add_subparsers(dest="action", required=True)
    p = prof.add_parser("dump", parents=[common])
    p.add_argument("scenario", nargs="?")

    ledger = groups.add_parser("ledger").add_subparsers(dest="action", required=True)
    p = ledger.add_parser("list")
    p.add_argument("--ledger", default=None, help="database URL for the run ledger")
    p.add_argument("--scenario-digest", default=None)
    p.add_argument("--log-level", type=str.upper, choices=LOG_LEVELS, default=None)

    return parser


def configure_logging(level: str | None) -> None:
    logging.basicConfig(stream=sys.stderr, format=LOG_FORMAT)
    logging.getLogger("coexist_sim").setLevel((level or settings.LOG_LEVEL).upper())


def _fail(exc: CoexistError, code: int) -> int:
    print(json.dumps(exc.detail(), sort_keys=True), file=sys.stderr)
    return code


def run(subcommand: str, scenario: str | None, args: argparse.Namespace) -> int:
    if subcommand not in HANDLERS:
        return _fail(UsageError(f"unknown subcommand {subcommand!r}"), EXIT_USAGE)
    args.scenario = scenario
    ctx = Context(subcommand, args, ReportWriter(getattr(args, "out", "reports"), getattr(args, "format", "both")))
    try:
        code = HANDLERS[subcommand](ctx)
    except PlanViolationError as exc:
        code = _fail(exc, EXIT_VIOLATIONS)
    except CoexistError as exc:
        return _fail(exc, EXIT_USAGE)
    except ValidationError as exc:
        return _fail(_schema_error(exc, subcommand), EXIT_USAGE)
    except OSError as exc:
        return _fail(CoexistError(str(exc)), EXIT_USAGE)

    url = args.ledger or settings.DATABASE_URL
    if url and ctx.digest is not None:
        record_run(url, subcommand, ctx.digest, code, ctx.writer.written)
    return code


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    configure_logging(args.log_level)
    subcommand = f"{args.group} {args.action}"
    logger.info("coexist-sim %s: %s", __version__, subcommand)
    return run(subcommand, getattr(args, "scenario", None), args)
