"""Command-line front end.

    supercong verify --checks all --primes 200 --format json
    supercong identities --bound 300
    supercong sequence P 0..10
    supercong cache build --max-index 1000 --cache tables.json

Exit status: 0 when everything checked passed, 1 on any failure, 2 on usage
errors (including unknown check ids and unreadable cache files).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys
from dataclasses import dataclass
from typing import Sequence

from .arith import format_rational, is_prime
from .congruences import REGISTRY, RangeReport, UnknownCheck, resolve_checks, verify_range
from .identities import IdentitySummary, run_identities
from .sequences import (
    CacheValidationError,
    SequenceCache,
    load_tables,
    set_default_cache,
    zagier_s,
)

CACHE_ENV = "SUPERCONG_CACHE"
FORMATS = ("text", "json", "csv")
ROW_FIELDS = ("check", "p", "exponent", "lhs", "rhs", "valuation", "pass", "error")
SEQUENCE_NAMES = ("P", "S", "B", "E", "H")

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    checks: tuple[str, ...] | str = "all"
    primes: int | tuple[int, ...] = 50
    identity_bound: int | None = None
    output_format: str = "text"
    cache_path: str | None = None
    workers: int = 1

    def __post_init__(self):
        if self.output_format not in FORMATS:
            raise UsageError(f"unknown format {self.output_format!r}")
        if isinstance(self.primes, int):
            if self.primes < 3:
                raise UsageError("prime bound must be at least 3")
        else:
            if not self.primes:
                raise UsageError("empty prime list")
            bad = [p for p in self.primes if not is_prime(p)]
            if bad:
                raise UsageError(f"not prime: {', '.join(map(str, bad))}")
        if self.identity_bound is not None and self.identity_bound < 1:
            raise UsageError("identity bound must be at least 1")
        if self.workers < 1:
            raise UsageError("worker count must be positive")
        try:
            resolve_checks(self.checks)
        except UnknownCheck as exc:
            raise UsageError(f"unknown check id {exc.args[0]!r}") from None


def _parse_checks(text: str) -> tuple[str, ...] | str:
    if text.strip().lower() == "all":
        return "all"
    ids = tuple(s.strip() for s in text.split(",") if s.strip())
    if not ids:
        raise UsageError("no checks selected")
    return ids


def _parse_primes(text: str) -> int | tuple[int, ...]:
    try:
        if "," in text:
            return tuple(int(s) for s in text.split(",") if s.strip())
        return int(text)
    except ValueError:
        raise UsageError(f"bad --primes value {text!r}") from None


def _parse_range(text: str) -> range:
    lo, sep, hi = text.partition("..")
    try:
        start = int(lo)
        stop = int(hi) if sep else start
    except ValueError:
        raise UsageError(f"bad range {text!r}; expected A..B") from None
    if start < 0 or stop < start:
        raise UsageError(f"bad range {text!r}")
    return range(start, stop + 1)


# -- report rendering --------------------------------------------------------


def report_rows(report: RangeReport) -> list[dict]:
    rows = []
    for r in report.rows:
        rows.append(
            {
                "check": r.check,
                "p": r.p,
                "exponent": r.exponent,
                "lhs": None if r.lhs is None else str(r.lhs),
                "rhs": None if r.rhs is None else str(r.rhs),
                "valuation": r.valuation_text or None,
                "pass": r.passed,
                "error": r.error,
            }
        )
    return rows


def identity_payload(summary: IdentitySummary) -> dict:
    out = []
    for o in summary.outcomes:
        entry = {"identity": o.id, "tested": o.tested, "pass": o.passed}
        if o.counterexample is not None:
            ce = o.counterexample
            entry["counterexample"] = {
                "params": list(ce.params),
                "lhs": format_rational(ce.lhs),
                "rhs": format_rational(ce.rhs),
            }
        out.append(entry)
    return {"bound": summary.bound, "hockey_bound": summary.hockey_bound, "results": out}


def render_json(report: RangeReport, identities: IdentitySummary | None = None) -> str:
    payload = {
        "checks": report.checks,
        "primes": report.primes,
        "rows": report_rows(report),
        "summary": report.summary(),
        "stronger_than_claimed": [
            {"check": r.check, "p": r.p, "valuation": r.valuation_text}
            for r in report.stronger_than_claimed()
        ],
    }
    if identities is not None:
        payload["identities"] = identity_payload(identities)
    return json.dumps(payload, indent=2) + "\n"


def render_csv(report: RangeReport) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(ROW_FIELDS)
    for row in report_rows(report):
        writer.writerow(
            ["" if row[k] is None else ("true" if row[k] is True else "false" if row[k] is False else row[k])
             for k in ROW_FIELDS]
        )
    return buf.getvalue()


def render_text(report: RangeReport) -> str:
    header = ("check", "p", "e", "lhs", "rhs", "v", "result")
    table = [header]
    for row in report_rows(report):
        result = "ok" if row["pass"] else ("ERROR " + row["error"] if row["error"] else "FAIL")
        table.append(
            (row["check"], str(row["p"]), str(row["exponent"]), row["lhs"] or "-",
             row["rhs"] or "-", row["valuation"] or "-", result)
        )
    widths = [max(len(r[i]) for r in table) for i in range(len(header) - 1)]
    lines = ["  ".join(c.rjust(w) if i in (1, 2, 3, 4, 5) else c.ljust(w)
                       for i, (c, w) in enumerate(zip(r, widths))) + "  " + r[-1] for r in table]
    s = report.summary()
    lines.append(f"{s['passed']}/{s['total']} passed, {s['failed']} failed, {s['errors']} errors")
    return "\n".join(lines) + "\n"


def render_identities_text(summary: IdentitySummary) -> str:
    lines = []
    for o in summary.outcomes:
        line = f"{o.id:<13} {o.tested:>6} cases  {'ok' if o.passed else 'FAIL'}"
        if o.counterexample is not None:
            ce = o.counterexample
            line += f"  at {ce.params}: {format_rational(ce.lhs)} != {format_rational(ce.rhs)}"
        lines.append(line)
    lines.append(f"identities up to {summary.bound}: {'all pass' if summary.passed else 'FAILURES'}")
    return "\n".join(lines) + "\n"


# -- commands -----------------------------------------------------------------


def _install_cache(path: str | None) -> None:
    # without a file the current in-memory tables are kept
    if path is not None:
        set_default_cache(SequenceCache(path))


def cmd_verify(config: RunConfig, out=None) -> int:
    out = out or sys.stdout
    _install_cache(config.cache_path)
    report = verify_range(
        config.checks, config.primes, workers=config.workers, cache_path=config.cache_path
    )
    identities = run_identities(config.identity_bound) if config.identity_bound else None
    if config.output_format == "json":
        out.write(render_json(report, identities))
    elif config.output_format == "csv":
        out.write(render_csv(report))
        if identities is not None:
            sys.stderr.write(render_identities_text(identities))
    else:
        out.write(render_text(report))
        if identities is not None:
            out.write(render_identities_text(identities))
    ok = report.passed and (identities is None or identities.passed)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_identities(bound: int, output_format: str = "text", out=None) -> int:
    out = out or sys.stdout
    if bound < 1:
        raise UsageError("bound must be at least 1")
    summary = run_identities(bound)
    if output_format == "json":
        out.write(json.dumps(identity_payload(summary), indent=2) + "\n")
    elif output_format == "csv":
        w = csv.writer(out, lineterminator="\n")
        w.writerow(("identity", "tested", "pass"))
        for o in summary.outcomes:
            w.writerow((o.id, o.tested, "true" if o.passed else "false"))
    else:
        out.write(render_identities_text(summary))
    return EXIT_OK if summary.passed else EXIT_FAIL


def sequence_values(name: str, indices: range) -> list[str]:
    from . import sequences as seq

    funcs = {
        "P": seq.clf,
        "S": zagier_s,
        "B": seq.bernoulli,
        "E": seq.euler_number,
        "H": seq.harmonic,
    }
    if name not in funcs:
        raise UsageError(f"unknown sequence {name!r}; choose from {', '.join(SEQUENCE_NAMES)}")
    return [format_rational(funcs[name](n)) for n in indices]


def cmd_sequence(name: str, indices: range, output_format: str = "text", cache_path=None, out=None) -> int:
    out = out or sys.stdout
    _install_cache(cache_path)
    values = sequence_values(name, indices)
    if output_format == "json":
        payload = {"name": name, "values": [{"n": n, "value": v} for n, v in zip(indices, values)]}
        out.write(json.dumps(payload, indent=2) + "\n")
    elif output_format == "csv":
        w = csv.writer(out, lineterminator="\n")
        w.writerow(("n", name))
        w.writerows(zip(indices, values))
    else:
        width = len(str(indices[-1])) if indices else 1
        for n, v in zip(indices, values):
            out.write(f"{name}({n:>{width}}) = {v}\n")
    return EXIT_OK


def cmd_cache_build(path: str, max_index: int, out=None) -> int:
    out = out or sys.stdout
    if max_index < 0:
        raise UsageError("max index must be non-negative")
    cache = SequenceCache(path)
    cache.bernoulli(max_index)
    cache.euler(max_index)
    cache.save(path)
    out.write(f"wrote B_0..B_{len(cache.bernoulli_table) - 1} and "
              f"E_0..E_{len(cache.euler_table) - 1} to {path}\n")
    return EXIT_OK


def cmd_cache_check(path: str, full: bool = False, out=None) -> int:
    out = out or sys.stdout
    bern, eul = load_tables(path, spot_checks=None if full else 5)
    out.write(f"{path}: {len(bern)} Bernoulli and {len(eul)} Euler entries valid\n")
    return EXIT_OK


def cmd_list(out=None) -> int:
    out = out or sys.stdout
    for c in REGISTRY:
        out.write(f"{c.id:<14} mod p^{c.exponent}  {c.description}\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="supercong", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_cache(p):
        p.add_argument("--cache", default=os.environ.get(CACHE_ENV),
                       help=f"Bernoulli/Euler cache file (default: ${CACHE_ENV})")

    v = sub.add_parser("verify", help="verify congruences over a range of primes")
    v.add_argument("--checks", default="all", help="comma-separated check ids, or 'all'")
    v.add_argument("--primes", default="50", help="prime bound, or comma-separated primes")
    v.add_argument("--identities", type=int, default=None, metavar="BOUND",
                   help="also run the identity sweep up to BOUND")
    v.add_argument("--format", choices=FORMATS, default="text")
    v.add_argument("--workers", type=int, default=1)
    add_cache(v)

    i = sub.add_parser("identities", help="verify the exact identities")
    i.add_argument("--bound", type=int, default=100)
    i.add_argument("--format", choices=FORMATS, default="text")

    s = sub.add_parser("sequence", help="print exact sequence values")
    s.add_argument("name", choices=SEQUENCE_NAMES)
    s.add_argument("range", help="index range A..B (inclusive) or a single index")
    s.add_argument("--format", choices=FORMATS, default="text")
    add_cache(s)

    c = sub.add_parser("cache", help="build or validate the Bernoulli/Euler cache")
    csub = c.add_subparsers(dest="action", required=True)
    b = csub.add_parser("build")
    b.add_argument("--max-index", type=int, required=True)
    add_cache(b)
    k = csub.add_parser("check")
    k.add_argument("--full", action="store_true", help="validate every entry")
    add_cache(k)

    sub.add_parser("list", help="list registered congruence checks")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.command == "verify":
            config = RunConfig(
                checks=_parse_checks(args.checks),
                primes=_parse_primes(args.primes),
                identity_bound=args.identities,
                output_format=args.format,
                cache_path=args.cache,
                workers=args.workers,
            )
            return cmd_verify(config)
        if args.command == "identities":
            return cmd_identities(args.bound, args.format)
        if args.command == "sequence":
            return cmd_sequence(args.name, _parse_range(args.range), args.format, args.cache)
        if args.command == "cache":
            if not args.cache:
                raise UsageError(f"--cache or ${CACHE_ENV} is required")
            if args.action == "build":
                return cmd_cache_build(args.cache, args.max_index)
            return cmd_cache_check(args.cache, args.full)
        return cmd_list()
    except (UsageError, CacheValidationError) as exc:
        print(f"supercong: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
