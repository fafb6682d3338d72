"""Command line: ``weakcomm verify | catalog list | catalog check | realize``."""

from __future__ import annotations

import argparse
import logging
import sys

from .catalog import default_catalog_dir, load_catalog
from .chi import realize_chi
from .errors import ParseError, PreconditionError, ResourceLimitError, WeakCommError
from .report import emit_report, exit_status, run_suite
from .verify import SUITES, RunConfig

EXIT_OK, EXIT_FAILED, EXIT_USAGE = 0, 1, 2


def _suites(text: str) -> tuple:
    if text == "all":
        return SUITES
    return tuple(s.strip() for s in text.split(",") if s.strip())


def _select(entries, names):
    if not names:
        return entries
    by_name = {e.name: e for e in entries}
    missing = [n for n in names if n not in by_name]
    if missing:
        raise PreconditionError(f"unknown group(s): {', '.join(missing)}")
    return [by_name[n] for n in names]


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="weakcomm", description=__doc__)
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run the check suites on catalog groups")
    v.add_argument("--catalog", default=None, help="directory of .grp files (default: bundled)")
    v.add_argument("--group", action="append", default=[], help="restrict to this group (repeatable)")
    v.add_argument("--suites", default="all", help=f"comma list from {','.join(SUITES)} or 'all'")
    v.add_argument("--max-cosets", type=int, default=RunConfig.max_cosets)
    v.add_argument("--enumeration-cap", type=int, default=RunConfig.enumeration_cap)
    v.add_argument("--samples", type=int, default=RunConfig.samples)
    v.add_argument("--seed", type=int, default=RunConfig.seed)
    v.add_argument("--nu-scope", choices=("generators", "all_elements"), default=None)
    v.add_argument("--report", default="-", help="output path, '-' for stdout")
    v.add_argument("--format", choices=("json", "text"), default="json")
    v.add_argument("--jobs", type=int, default=1, help="worker processes")

    c = sub.add_parser("catalog", help="inspect a catalog")
    c.add_argument("action", choices=("list", "check"))
    c.add_argument("dir", nargs="?", default=None)

    r = sub.add_parser("realize", help="realize chi(G) and print subgroup orders")
    r.add_argument("--group", required=True)
    r.add_argument("--catalog", default=None)
    r.add_argument("--max-cosets", type=int, default=RunConfig.max_cosets)
    return p


def _cmd_verify(args) -> int:
    config = RunConfig(max_cosets=args.max_cosets, enumeration_cap=args.enumeration_cap,
                       samples=args.samples, seed=args.seed, suites=_suites(args.suites),
                       nu_triple_scope=args.nu_scope)
    entries = _select(load_catalog(args.catalog or default_catalog_dir()), args.group)
    reports = run_suite(entries, config, jobs=args.jobs)
    emit_report(reports, args.report, args.format)
    return exit_status(reports)


def _cmd_catalog(args) -> int:
    entries = load_catalog(args.dir or default_catalog_dir())
    if args.action == "check":
        print(f"{len(entries)} entries ok")
        return EXIT_OK
    for e in entries:
        d = e.declared
        extra = f"  [{d['library_id']}]" if "library_id" in d else ""
        print(f"{e.name:12s} order {e.group.order():5d}  generators {e.presentation.ngens}{extra}")
    return EXIT_OK


def _cmd_realize(args) -> int:
    entries = _select(load_catalog(args.catalog or default_catalog_dir()), [args.group])
    c = realize_chi(entries[0], max_cosets=args.max_cosets)
    print(f"group {c.name}: |G| = {c.base.order}, |chi| = {c.order}")
    for name in ("L", "D", "W", "R", "L1", "L2", "L12"):
        print(f"  |{name}| = {c.subgroup(name).order()}")
    print(f"  |T| = {c.T.order()}")
    return EXIT_OK if c.all_invariants_hold() else EXIT_FAILED


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.command == "verify":
            return _cmd_verify(args)
        if args.command == "catalog":
            return _cmd_catalog(args)
        return _cmd_realize(args)
    except (ParseError, PreconditionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ResourceLimitError as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return EXIT_FAILED
    except WeakCommError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAILED
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
