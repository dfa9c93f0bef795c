"""Command-line driver.

Verbs::

    narralog query <domain.e> "<query>"     answer a query
    narralog check <domain.e>               consistency verdict
    narralog models <domain.e>              dump the oracle's models
    narralog translate <domain.e>           clause-style dump of the domain
    narralog corpus                         run the bundled benchmark suite

Exit codes: 0 the query succeeds / everything passes, 1 it fails or the
domain is inconsistent, 2 usage, parse or validation errors, 3 a
resource cap was hit.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

from . import corpus as corpus_tables
from .argprog import ResourceLimitError
from .core import DEFAULT_INSTANCE_CAP, GroundingError, validate_domain
from .engine import DomainError, Engine
from .oracle import (
    Horizon,
    OracleCapacityError,
    default_horizon,
    dump_models,
    enumerate_models,
)
from .parser import (
    CREDULOUS,
    CREDULOUS_EXPLAIN,
    SCEPTICAL,
    ParseError,
    UnknownSymbolError,
    dump_translation,
    parse_domain,
    parse_query,
    print_domain,
    resolve_query,
)

EXIT_SUCCEEDS = 0
EXIT_FAILS = 1
EXIT_USAGE = 2
EXIT_RESOURCE = 3

CAP_ENV_VAR = "ERES_CAP_INSTANCES"


def _instance_cap(args) -> int:
    if args.cap_instances is not None:
        return args.cap_instances
    env = os.environ.get(CAP_ENV_VAR)
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise SystemExit("invalid %s value %r" % (CAP_ENV_VAR, env))
    return DEFAULT_INSTANCE_CAP


def _load_domain(path: str, cap: int):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        print("cannot read %s: %s" % (path, exc), file=sys.stderr)
        raise SystemExit(EXIT_USAGE)
    try:
        domain = parse_domain(text)
    except ParseError as exc:
        print("%s: %s" % (path, exc), file=sys.stderr)
        raise SystemExit(EXIT_USAGE)
    report = validate_domain(domain)
    if not report.ok:
        for violation in report.violations:
            print("%s: %s" % (path, violation), file=sys.stderr)
        raise SystemExit(EXIT_USAGE)
    return domain


def _emit(args, record: dict, text: str) -> None:
    if args.format == "structured":
        print(json.dumps(record, sort_keys=True))
    else:
        print(text)


def cmd_query(args) -> int:
    cap = _instance_cap(args)
    domain = _load_domain(args.domain, cap)
    try:
        query = parse_query(args.query)
        query = resolve_query(query, domain)
    except ParseError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except UnknownSymbolError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    mode = query.mode
    if args.mode:
        mode = {
            "sceptical": SCEPTICAL,
            "credulous": CREDULOUS,
            "credulous-x": CREDULOUS_EXPLAIN,
        }[args.mode]
    started = time.perf_counter()
    try:
        engine = Engine(domain, instance_cap=cap)
        if mode == SCEPTICAL:
            verdict = engine.sceptical(query.literals)
        else:
            verdict = engine.credulous(query.literals, explain=mode == CREDULOUS_EXPLAIN)
    except (GroundingError, ResourceLimitError) as exc:
        print(exc, file=sys.stderr)
        return EXIT_RESOURCE
    except DomainError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    elapsed = time.perf_counter() - started
    lines = ["succeeds" if verdict.succeeds else "fails"]
    for explanation in verdict.explanations:
        lines.append("X = %s" % explanation.render())
    record = {
        "mode": mode,
        "query": args.query,
        "verdict": "succeeds" if verdict.succeeds else "fails",
        "explanations": [e.render() for e in verdict.explanations],
        "seconds": round(elapsed, 6),
    }
    _emit(args, record, "\n".join(lines))
    return EXIT_SUCCEEDS if verdict.succeeds else EXIT_FAILS


def cmd_check(args) -> int:
    cap = _instance_cap(args)
    domain = _load_domain(args.domain, cap)
    started = time.perf_counter()
    try:
        ok = Engine(domain, instance_cap=cap).consistent()
    except (GroundingError, ResourceLimitError) as exc:
        print(exc, file=sys.stderr)
        return EXIT_RESOURCE
    except DomainError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    elapsed = time.perf_counter() - started
    record = {
        "check": "consistent" if ok else "inconsistent",
        "seconds": round(elapsed, 6),
    }
    _emit(args, record, "consistent" if ok else "inconsistent")
    return EXIT_SUCCEEDS if ok else EXIT_FAILS


def cmd_models(args) -> int:
    cap = _instance_cap(args)
    domain = _load_domain(args.domain, cap)
    try:
        from .core import ground_domain

        ground = ground_domain(domain, cap=cap)
        horizon = (
            Horizon(args.horizon) if args.horizon is not None else default_horizon(ground)
        )
        models = enumerate_models(ground, horizon)
    except (GroundingError, OracleCapacityError) as exc:
        print(exc, file=sys.stderr)
        return EXIT_RESOURCE
    record = {
        "models": len(models),
        "horizon": horizon.max_time,
        "dump": dump_models(models).splitlines(),
    }
    text = dump_models(models)
    header = "%d model(s) at horizon %d" % (len(models), horizon.max_time)
    _emit(args, record, header + ("\n" + text if text else ""))
    return EXIT_SUCCEEDS if models else EXIT_FAILS


def cmd_translate(args) -> int:
    cap = _instance_cap(args)
    domain = _load_domain(args.domain, cap)
    try:
        from .core import ground_domain

        ground = ground_domain(domain, cap=cap)
    except GroundingError as exc:
        print(exc, file=sys.stderr)
        return EXIT_RESOURCE
    sys.stdout.write(dump_translation(ground))
    return EXIT_SUCCEEDS


def cmd_corpus(args) -> int:
    cap = _instance_cap(args)
    engines: dict[str, Engine] = {}

    def engine_for(name: str) -> Engine:
        if name not in engines:
            engines[name] = Engine(corpus_tables.load(name), instance_cap=cap)
        return engines[name]

    failures = 0
    rows = []

    def note(domain, what, expected, actual):
        nonlocal failures
        ok = expected == actual
        if not ok:
            failures += 1
        rows.append(
            {
                "domain": domain,
                "query": what,
                "expected": expected,
                "actual": actual,
                "ok": ok,
            }
        )

    for golden in corpus_tables.QUERY_GOLDENS:
        query = resolve_query(parse_query(golden.query), corpus_tables.load(golden.domain))
        engine = engine_for(golden.domain)
        if query.mode == SCEPTICAL:
            verdict = engine.sceptical(query.literals)
        else:
            verdict = engine.credulous(query.literals)
        note(golden.domain, golden.query, golden.expected, verdict.succeeds)
    for golden in corpus_tables.EXPLANATION_GOLDENS:
        query = resolve_query(parse_query(golden.query), corpus_tables.load(golden.domain))
        verdict = engine_for(golden.domain).credulous(query.literals, explain=True)
        note(
            golden.domain,
            golden.query,
            sorted(golden.expected),
            sorted(e.render() for e in verdict.explanations),
        )
    for golden in corpus_tables.CONSISTENCY_GOLDENS:
        note(
            golden.domain,
            "consistent?",
            golden.expected,
            engine_for(golden.domain).consistent(),
        )
    for golden in corpus_tables.TRANSLATION_GOLDENS:
        from .core import ground_domain

        actual = dump_translation(ground_domain(corpus_tables.load(golden.domain)))
        note(golden.domain, "translate", golden.expected, actual)

    if args.format == "structured":
        for row in rows:
            print(json.dumps(row, sort_keys=True, default=str))
    else:
        for row in rows:
            status = "pass" if row["ok"] else "FAIL"
            print(
                "%-4s %-24s %-44s expected=%s actual=%s"
                % (
                    status,
                    row["domain"],
                    str(row["query"])[:44],
                    row["expected"],
                    row["actual"],
                )
            )
        print(
            "%d golden(s), %d failure(s)" % (len(rows), failures)
        )
    return EXIT_SUCCEEDS if failures == 0 else EXIT_FAILS


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(prog="narralog", description=__doc__)
    top.add_argument(
        "--format",
        choices=("text", "structured"),
        default="text",
        help="text output or one JSON record per result",
    )
    top.add_argument(
        "--cap-instances",
        type=int,
        default=None,
        help="grounding instance cap (falls back to $%s)" % CAP_ENV_VAR,
    )
    sub = top.add_subparsers(dest="command", required=True)

    q = sub.add_parser("query", help="answer a sceptical/credulous query")
    q.add_argument("domain")
    q.add_argument("query")
    q.add_argument(
        "--mode",
        choices=("sceptical", "credulous", "credulous-x"),
        default=None,
        help="override the mode implied by the query string",
    )
    q.set_defaults(func=cmd_query)

    c = sub.add_parser("check", help="consistency verdict for a domain")
    c.add_argument("domain")
    c.set_defaults(func=cmd_check)

    m = sub.add_parser("models", help="enumerate and dump the oracle's models")
    m.add_argument("domain")
    m.add_argument("--horizon", type=int, default=None)
    m.set_defaults(func=cmd_models)

    t = sub.add_parser("translate", help="clause-style dump of a ground domain")
    t.add_argument("domain")
    t.set_defaults(func=cmd_translate)

    r = sub.add_parser("corpus", help="run the bundled golden suite")
    r.set_defaults(func=cmd_corpus)
    return top


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SystemExit as exc:
        code = exc.code
        return code if isinstance(code, int) else EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
