"""Running the verifier over a catalog and writing reports."""

from __future__ import annotations

import json
import logging
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Sequence

from .catalog import CatalogEntry
from .verify import RunConfig, VerificationReport, run_all

log = logging.getLogger(__name__)


def _run_one(args) -> VerificationReport:
    entry, config = args
    log.info("verifying %s", entry.name)
    return run_all(entry, config)


def run_suite(entries: Sequence[CatalogEntry], config: RunConfig | None = None,
              jobs: int = 1) -> list[VerificationReport]:
    """One report per entry, in input order.  Fatal errors stay inside their report."""
    config = config or RunConfig()
    work = [(e, config) for e in entries]
    if jobs <= 1 or len(work) <= 1:
        return [_run_one(w) for w in work]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_run_one, work))


def exit_status(reports: Sequence[VerificationReport]) -> int:
    """0 when no check failed, 1 otherwise; skips never fail a run."""
    return 1 if any(r.failed for r in reports) else 0


def reports_to_json(reports: Sequence[VerificationReport]) -> str:
    return json.dumps([r.to_dict() for r in reports], indent=2)


def reports_from_json(text: str) -> list[VerificationReport]:
    return [VerificationReport.from_dict(d) for d in json.loads(text)]


def _fmt_witnesses(w: dict, width: int = 70) -> str:
    text = ", ".join(f"{k}={v}" for k, v in w.items())
    return text if len(text) <= width else text[: width - 3] + "..."


def reports_to_text(reports: Sequence[VerificationReport]) -> str:
    lines = []
    for r in reports:
        lines.append(f"== {r.group}  |chi| = {r.chi_order}  seed = {r.seed}")
        if r.subgroup_orders:
            lines.append("   orders:    " + "  ".join(f"{k}={v}" for k, v in r.subgroup_orders.items()))
        if r.exponents:
            lines.append("   exponents: " + "  ".join(f"{k}={v}" for k, v in r.exponents.items()))
        lines.append(f"   {'check':22s} {'status':15s} {'ms':>10s}  witnesses")
        for c in r.checks:
            detail = _fmt_witnesses(c.witnesses)
            if c.note and c.status != "pass":
                detail = f"{detail}  ({c.note})" if detail else c.note
            lines.append(f"   {c.id:22s} {c.status:15s} {c.elapsed_ms:10.1f}  {detail}")
        counts = {}
        for c in r.checks:
            counts[c.status] = counts.get(c.status, 0) + 1
        lines.append("   " + ", ".join(f"{v} {k}" for k, v in sorted(counts.items())))
        lines.append("")
    return "\n".join(lines) + ("\n" if lines else "")


def emit_report(reports: Sequence[VerificationReport], path, fmt: str = "json") -> None:
    if fmt == "json":
        text = reports_to_json(reports) + "\n"
    elif fmt == "text":
        text = reports_to_text(reports)
    else:
        raise ValueError(f"unknown report format {fmt!r}")
    if path in (None, "-"):
        print(text, end="")
    else:
        Path(path).write_text(text)
