"""Command-line front end: claim verification, M_p searches, and reports.

Output discipline: stdout carries only the result document (text, JSON, or
CSV); progress and file-path notes go to stderr. For a fixed subcommand and
flags the stdout bytes are identical across runs and thread counts, so the
config echo embedded in documents excludes execution-only knobs (threads,
cache locations).

Exit codes: 0 success / all passed; 1 verification failure; 2 insufficient
precision; 3 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from .errors import (
    CorruptFile,
    FrontierOverflow,
    HarmonicaError,
    Mismatch,
    PrecisionExhausted,
    SchemaMismatch,
    UsageError,
)
from .harmonic import DEFAULT_ORACLE_CAP, harmonic_padic
from .lemmas import (
    LemmaReport,
    check_antilemma,
    check_block,
    check_levine,
    check_qr_sum,
    check_translation,
    check_wilson,
    check_wolstenholme,
    multiples_members,
    multiples_scan,
    residue_census,
)
from .mpsearch import (
    MpSet,
    SearchConfig,
    TreeSearch,
    cache_path,
    enumerate_tree,
    load_checkpoint,
    load_set,
    reconcile,
    save_checkpoint,
    save_set,
    scan_bruteforce,
)
from .padic import PrimeContext
from .primes import is_prime, primes_in_range
from .version import __version__

DEFAULT_CACHE_DIR = "~/.cache/harmonica"
DEFAULT_SCAN_LIMIT = 100_000
VERIFY_CLAIMS = ("wilson", "qr", "wolstenholme", "levine", "block", "antilemma")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="harmonica", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"harmonica {__version__}")
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("text", "json", "csv"), default="text")
    common.add_argument("--cache-dir", default=DEFAULT_CACHE_DIR)
    common.add_argument("--threads", type=int, default=1)
    common.add_argument("--strict", action="store_true", help="exit 2 on precision downgrade")
    common.add_argument("--oracle-cap", type=int, default=DEFAULT_ORACLE_CAP)

    sub = parser.add_subparsers(dest="command", required=True)

    p_verify = sub.add_parser("verify", parents=[common], help="run claim checks over primes")
    p_verify.add_argument("--claims", default=",".join(VERIFY_CLAIMS))
    p_verify.add_argument("--p", type=int)
    p_verify.add_argument("--pmin", type=int, default=5)
    p_verify.add_argument("--pmax", type=int)

    p_scan = sub.add_parser("scan", parents=[common], help="brute-force membership to a bound")
    p_scan.add_argument("--p", type=int, required=True)
    p_scan.add_argument("--limit", type=int, required=True)
    p_scan.add_argument("--precision", "-k", type=int)

    p_enum = sub.add_parser("enumerate", parents=[common], help="base-p tree search")
    p_enum.add_argument("--p", type=int, required=True)
    p_enum.add_argument("--max-depth", type=int, default=SearchConfig.max_depth)
    p_enum.add_argument("--direct-cap", type=int, default=SearchConfig.direct_cap)
    p_enum.add_argument("--precision", "-k", type=int)
    p_enum.add_argument("--frontier-limit", type=int, default=SearchConfig.frontier_limit)
    p_enum.add_argument("--checkpoint", help="checkpoint file to write (and resume from)")
    p_enum.add_argument("--resume", action="store_true")
    p_enum.add_argument("--max-nodes", type=int, help="pause after this many expansions")

    p_rec = sub.add_parser("reconcile", parents=[common], help="cross-check scan against tree")
    p_rec.add_argument("--p", type=int, required=True)
    p_rec.add_argument("--limit", type=int, default=DEFAULT_SCAN_LIMIT)
    p_rec.add_argument("--max-depth", type=int, default=SearchConfig.max_depth)
    p_rec.add_argument("--direct-cap", type=int, default=SearchConfig.direct_cap)
    p_rec.add_argument("--precision", "-k", type=int)

    p_harm = sub.add_parser("harmonic", parents=[common], help="v_p(H_n) and its unit")
    p_harm.add_argument("--n", type=int, required=True)
    p_harm.add_argument("--p", type=int, required=True)
    p_harm.add_argument("--precision", "-k", type=int, default=3)

    p_tr = sub.add_parser("translation", parents=[common], help="member-triple translation check")
    p_tr.add_argument("--p", type=int, required=True)
    p_tr.add_argument("--limit", type=int, default=DEFAULT_SCAN_LIMIT)
    p_tr.add_argument("--domain-cap", type=int)

    p_mult = sub.add_parser("multiples", parents=[common], help="which k(p^2-p) are members")
    p_mult.add_argument("--p", type=int, required=True)
    p_mult.add_argument("--k-max", type=int, default=5)

    p_cen = sub.add_parser("census", parents=[common], help="members by residue mod p^2-p")
    p_cen.add_argument("--p", type=int, required=True)
    p_cen.add_argument("--limit", type=int, default=DEFAULT_SCAN_LIMIT)

    p_rep = sub.add_parser("report", parents=[common], help="consolidated document for one prime")
    p_rep.add_argument("--p", type=int, required=True)
    p_rep.add_argument("--limit", type=int, default=DEFAULT_SCAN_LIMIT)
    p_rep.add_argument("--k-max", type=int, default=5)
    p_rep.add_argument("--domain-cap", type=int)
    return parser


def _require_cli_prime(p: int) -> int:
    if p is None or p < 5 or not is_prime(p):
        raise UsageError(f"--p must be a prime >= 5, got {p}")
    return p


def _selected_primes(args) -> list[int]:
    if args.p is not None:
        return [_require_cli_prime(args.p)]
    if args.pmax is None:
        raise UsageError("give --p or a --pmin/--pmax range")
    lo = max(args.pmin, 5)
    if args.pmax < lo:
        raise UsageError(f"empty prime range [{lo}, {args.pmax}]")
    return list(primes_in_range(lo, args.pmax))


def _cache_dir(args) -> Path:
    return Path(os.environ.get("HARMONICA_CACHE_DIR") or args.cache_dir).expanduser()


def _document(args, config: dict, payload: dict) -> dict:
    return {
        "tool": "harmonica",
        "version": __version__,
        "command": args.command,
        "config": config,
        **payload,
    }


def _emit(args, document: dict, text_lines: list[str], csv_rows: list[list]) -> None:
    if args.format == "json":
        print(json.dumps(document, sort_keys=True, indent=2))
    elif args.format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerows(csv_rows)
        sys.stdout.write(buf.getvalue())
    else:
        for line in text_lines:
            print(line)


def _report_rows(reports: list[LemmaReport]) -> list[list]:
    rows: list[list] = [["claim", "p", "passed", "witness", "value"]]
    for r in reports:
        if r.witnesses:
            rows.extend([r.claim, r.p, r.passed, label, value] for label, value in r.witnesses)
        else:
            rows.append([r.claim, r.p, r.passed, "", ""])
    return rows


def _report_lines(reports: list[LemmaReport]) -> list[str]:
    lines = []
    for r in reports:
        verdict = "PASS" if r.passed else "FAIL"
        suffix = f" ({r.notes})" if r.notes and not r.passed else ""
        lines.append(f"{r.claim} p={r.p}: {verdict}{suffix}")
    return lines


def _mpset_lines(mp_set: MpSet, heading: str) -> list[str]:
    members = "{" + ", ".join(str(m) for m in mp_set.members) + "}"
    bound = "all n" if mp_set.limit is None else f"n <= {mp_set.limit}"
    return [
        f"{heading}, {len(mp_set.members)} members {members} "
        f"status={mp_set.status} ({bound}, k={mp_set.precision})"
    ]


def _mpset_rows(mp_set: MpSet) -> list[list]:
    return [
        ["p", "members", "status", "method", "limit", "precision"],
        [
            mp_set.p,
            ";".join(str(m) for m in mp_set.members),
            mp_set.status,
            mp_set.method,
            "" if mp_set.limit is None else mp_set.limit,
            mp_set.precision,
        ],
    ]


def _write_cache(args, mp_set: MpSet) -> None:
    path = cache_path(_cache_dir(args), mp_set.p)
    save_set(path, mp_set)
    print(f"wrote {path}", file=sys.stderr)


def _strict_exit(args, mp_set: MpSet) -> int:
    if args.strict and mp_set.status == "precision_limited":
        return 2
    return 0


def _clip(mp_set: MpSet, cap: int) -> MpSet:
    """View of a member set restricted to [1, cap], so downstream output
    depends only on the requested window, not on cache history."""
    if mp_set.status == "complete":
        return mp_set
    return MpSet(
        mp_set.p,
        mp_set.members_below(cap),
        "truncated",
        mp_set.method,
        min(mp_set.limit, cap),
        mp_set.precision,
        version=mp_set.version,
    )


def _obtain_members(args, p: int, limit: int) -> MpSet:
    """Cached reconciled member set covering [1, limit], recomputed on miss."""
    path = cache_path(_cache_dir(args), p)
    if path.exists():
        try:
            cached = load_set(path, expect_p=p)
            if cached.covers(limit):
                return _clip(cached, limit)
        except (SchemaMismatch, CorruptFile) as exc:
            print(f"ignoring cache {path}: {exc}", file=sys.stderr)
    tree = enumerate_tree(p)
    scan = scan_bruteforce(p, limit)
    merged = reconcile(scan, tree)
    save_set(path, merged)
    print(f"wrote {path}", file=sys.stderr)
    return _clip(merged, limit)


def cmd_verify(args) -> int:
    primes = _selected_primes(args)
    checks = {
        "wilson": lambda p: check_wilson(p),
        "qr": lambda p: check_qr_sum(p),
        "wolstenholme": lambda p: check_wolstenholme(p, args.oracle_cap),
        "levine": lambda p: check_levine(p),
        "block": lambda p: check_block(p, args.oracle_cap),
        "antilemma": lambda p: check_antilemma(p, args.oracle_cap),
    }
    names = []
    for raw in args.claims.split(","):
        name = raw.strip().lower().replace("qr_sum", "qr")
        if not name:
            continue
        if name not in checks:
            raise UsageError(f"unknown claim {raw!r}; choose from {', '.join(VERIFY_CLAIMS)}")
        names.append(name)
    if not names:
        raise UsageError("no claims selected")
    tasks = [(name, p) for name in names for p in primes]
    if args.threads > 1:
        with ThreadPoolExecutor(max_workers=args.threads) as pool:
            reports = list(pool.map(lambda t: checks[t[0]](t[1]), tasks))
    else:
        reports = [checks[name](p) for name, p in tasks]
    reports.sort(key=lambda r: (r.claim, r.p))
    config = {
        "claims": names,
        "primes": primes,
        "oracle_cap": args.oracle_cap,
    }
    document = _document(args, config, {"reports": [r.to_json() for r in reports]})
    _emit(args, document, _report_lines(reports), _report_rows(reports))
    return 0 if all(r.passed for r in reports) else 1


def cmd_scan(args) -> int:
    p = _require_cli_prime(args.p)
    if args.limit < 1:
        raise UsageError("--limit must be >= 1")
    ctx = PrimeContext(p, args.precision) if args.precision else None
    mp_set = scan_bruteforce(p, args.limit, ctx)
    _write_cache(args, mp_set)
    config = {"p": p, "limit": args.limit, "precision": mp_set.precision}
    document = _document(args, config, {"mp_set": mp_set.to_json()})
    _emit(args, document, _mpset_lines(mp_set, f"scan p={p}"), _mpset_rows(mp_set))
    return _strict_exit(args, mp_set)


def _tree_config(args) -> SearchConfig:
    return SearchConfig(
        max_depth=args.max_depth,
        direct_cap=args.direct_cap,
        precision=args.precision,
        frontier_limit=getattr(args, "frontier_limit", SearchConfig.frontier_limit),
    )


def cmd_enumerate(args) -> int:
    p = _require_cli_prime(args.p)
    config = _tree_config(args)
    if args.resume and not args.checkpoint:
        raise UsageError("--resume needs --checkpoint")
    if args.max_nodes is not None and not args.checkpoint:
        raise UsageError("--max-nodes needs --checkpoint to save progress")
    if args.resume and Path(args.checkpoint).exists():
        search = load_checkpoint(args.checkpoint, config)
        if search.p != p:
            raise SchemaMismatch(f"checkpoint holds p={search.p}, expected {p}")
    else:
        search = TreeSearch(p, config)
    done = search.run(args.max_nodes)
    if not done:
        save_checkpoint(args.checkpoint, search)
        print(f"paused, checkpoint at {args.checkpoint}", file=sys.stderr)
        config_echo = {"p": p, "max_depth": config.max_depth, "direct_cap": config.direct_cap}
        document = _document(
            args,
            config_echo,
            {
                "paused": True,
                "expanded": search.nodes_expanded,
                "frontier_size": len(search.frontier),
                "members_so_far": sorted(search.members),
            },
        )
        lines = [f"paused after {search.nodes_expanded} nodes, frontier {len(search.frontier)}"]
        _emit(args, document, lines, [["paused", search.nodes_expanded, len(search.frontier)]])
        return 0
    mp_set = search.result()
    if args.checkpoint:
        save_checkpoint(args.checkpoint, search)
    _write_cache(args, mp_set)
    config_echo = {
        "p": p,
        "max_depth": config.max_depth,
        "direct_cap": config.direct_cap,
        "precision": config.precision,
        "frontier_limit": config.frontier_limit,
    }
    document = _document(args, config_echo, {"mp_set": mp_set.to_json()})
    _emit(args, document, _mpset_lines(mp_set, f"enumerate p={p}"), _mpset_rows(mp_set))
    return _strict_exit(args, mp_set)


def cmd_reconcile(args) -> int:
    p = _require_cli_prime(args.p)
    if args.limit < 1:
        raise UsageError("--limit must be >= 1")
    args.frontier_limit = SearchConfig.frontier_limit
    tree = enumerate_tree(p, _tree_config(args))
    scan = scan_bruteforce(p, args.limit)
    mp_set = reconcile(scan, tree)
    _write_cache(args, mp_set)
    config = {"p": p, "limit": args.limit, "max_depth": args.max_depth, "direct_cap": args.direct_cap}
    document = _document(args, config, {"mp_set": mp_set.to_json()})
    _emit(args, document, _mpset_lines(mp_set, "reconciled"), _mpset_rows(mp_set))
    return _strict_exit(args, mp_set)


def cmd_harmonic(args) -> int:
    p = _require_cli_prime(args.p)
    if args.n < 0:
        raise UsageError("--n must be >= 0")
    if args.precision < 1:
        raise UsageError("--precision must be >= 1")
    result = harmonic_padic(args.n, PrimeContext(p, args.precision))
    value = result.value
    if value.is_zero:
        line = "zero"
    else:
        line = (
            f"v={value.valuation} unit={value.unit} mod {p}^{value.rel_precision}"
            f" audit={result.precision_audit}"
        )
    config = {"n": args.n, "p": p, "precision": args.precision}
    payload = {
        "n": args.n,
        "p": p,
        "value": value.to_json(),
        "method": result.method,
        "audit": result.precision_audit,
    }
    document = _document(args, config, payload)
    rows = [
        ["n", "p", "v", "unit", "prec", "audit", "method"],
        [
            args.n,
            p,
            "inf" if value.is_zero else value.valuation,
            "" if value.unit is None else value.unit,
            value.rel_precision,
            "" if result.precision_audit is None else result.precision_audit,
            result.method,
        ],
    ]
    _emit(args, document, [line], rows)
    return 0


def cmd_translation(args) -> int:
    p = _require_cli_prime(args.p)
    members = _obtain_members(args, p, args.limit)
    cap = args.domain_cap
    if cap is None:
        cap = max(members.members) if members.members else p * p
    report = check_translation(p, members, cap)
    config = {"p": p, "limit": args.limit, "domain_cap": cap}
    document = _document(args, config, {"report": report.to_json()})
    lines = _report_lines([report]) + [f"  {label}: {value}" for label, value in report.witnesses]
    _emit(args, document, lines, _report_rows([report]))
    return 0 if report.passed else 1


def cmd_multiples(args) -> int:
    p = _require_cli_prime(args.p)
    if args.k_max < 2:
        raise UsageError("--k-max must be >= 2")
    report = multiples_scan(p, args.k_max)
    ks = sorted(multiples_members(report))
    config = {"p": p, "k_max": args.k_max}
    document = _document(args, config, {"report": report.to_json(), "member_ks": ks})
    line = f"multiples p={p}: member k set {{{', '.join(map(str, ks))}}}"
    lines = _report_lines([report]) + [line]
    _emit(args, document, lines, _report_rows([report]))
    return 0 if report.passed else 1


def cmd_census(args) -> int:
    p = _require_cli_prime(args.p)
    members = _obtain_members(args, p, args.limit)
    census = residue_census(p, members)
    config = {"p": p, "limit": args.limit}
    document = _document(args, config, {"census": census.to_json()})
    lines = [f"census p={p} mod {census.modulus}:"]
    rows: list[list] = [["p", "modulus", "residue", "min", "members"]]
    for r in sorted(census.classes):
        ms = census.classes[r]
        lines.append(f"  class {r}: min={census.min_per_class[r]} members={list(ms)}")
        rows.append([p, census.modulus, r, census.min_per_class[r], ";".join(map(str, ms))])
    _emit(args, document, lines, rows)
    return 0


def cmd_report(args) -> int:
    p = _require_cli_prime(args.p)
    payload: dict = {}
    lines: list[str] = [f"report p={p}"]
    rows: list[list] = []
    checks = [
        check_wilson(p),
        check_qr_sum(p),
        check_wolstenholme(p, args.oracle_cap),
        check_levine(p),
        check_block(p, args.oracle_cap),
        check_antilemma(p, args.oracle_cap),
    ]
    payload["lemmas"] = [r.to_json() for r in checks]
    lines += _report_lines(checks)
    rows += [["# lemmas"]] + _report_rows(checks)
    try:
        members = _obtain_members(args, p, args.limit)
        payload["mp_set"] = members.to_json()
        lines += _mpset_lines(members, "members")
        rows += [["# members"]] + _mpset_rows(members)
    except HarmonicaError as exc:
        members = None
        payload["mp_set"] = {"error": str(exc)}
        lines.append(f"members: unavailable ({exc})")
    for name, build in (
        ("census", lambda: residue_census(p, members)),
        (
            "translation",
            lambda: check_translation(
                p,
                members,
                args.domain_cap
                or (max(members.members) if members.members else p * p),
            ),
        ),
    ):
        if members is None or not members.members:
            payload[name] = {"error": "no members available"}
            lines.append(f"{name}: skipped (no members)")
            continue
        try:
            piece = build()
        except HarmonicaError as exc:
            payload[name] = {"error": str(exc)}
            lines.append(f"{name}: unavailable ({exc})")
            continue
        payload[name] = piece.to_json()
        if isinstance(piece, LemmaReport):
            lines += _report_lines([piece])
            rows += [["# translation"]] + _report_rows([piece])
        else:
            lines.append(
                "census: "
                + "; ".join(f"{r}: {list(ms)}" for r, ms in sorted(piece.classes.items()))
            )
            rows += [["# census"]] + [
                [p, piece.modulus, r, piece.min_per_class[r], ";".join(map(str, ms))]
                for r, ms in sorted(piece.classes.items())
            ]
    mult = multiples_scan(p, args.k_max)
    payload["multiples"] = mult.to_json()
    lines += _report_lines([mult])
    rows += [["# multiples"]] + _report_rows([mult])
    config = {
        "p": p,
        "limit": args.limit,
        "k_max": args.k_max,
        "oracle_cap": args.oracle_cap,
        "domain_cap": args.domain_cap,
    }
    document = _document(args, config, payload)
    _emit(args, document, lines, rows)
    return 0


_COMMANDS = {
    "verify": cmd_verify,
    "scan": cmd_scan,
    "enumerate": cmd_enumerate,
    "reconcile": cmd_reconcile,
    "harmonic": cmd_harmonic,
    "translation": cmd_translation,
    "multiples": cmd_multiples,
    "census": cmd_census,
    "report": cmd_report,
}


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return _COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 3
    except (PrecisionExhausted, FrontierOverflow) as exc:
        print(f"precision: {exc}", file=sys.stderr)
        return 2
    except Mismatch as exc:
        print(f"mismatch: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 3
    except HarmonicaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
