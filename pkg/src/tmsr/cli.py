"""Command line interface.

Subcommands: ``check`` (parse and classify), ``verify`` (decide a
property, optionally tick-bounded), ``gen`` (write a scenario spec file)
and ``replay`` (re-validate a report's trace against its spec).

Exit codes: 0 the property holds (or the input is valid), 1 it fails,
2 undecided within the search budget, 3 input error.
"""

from __future__ import annotations

import argparse
import json
import sys

from .delta import count_bound
from .reports import (
    ReportError,
    VerdictReport,
    emit_report,
    input_digest,
    parse_report,
)
from .rules import check_balanced, check_progressive, compute_dmax
from .scenarios import Cnf3, DroneParams, TmSpec, gen_3sat, gen_drone, gen_tm
from .search import (
    FAILS,
    HOLDS,
    REALIZABILITY,
    SURVIVABILITY,
    SearchBudget,
    UNKNOWN,
    VerifierInputError,
    bounded_realizability,
    bounded_survivability,
    realizability,
    survivability,
    validate_lasso,
    validate_trace,
)
from .specfile import SpecFile, SpecParseError, parse_spec, print_spec
from .terms import TmsrError

EXIT_HOLDS = 0
EXIT_FAILS = 1
EXIT_UNKNOWN = 2
EXIT_INPUT = 3

OUTCOME_EXIT = {HOLDS: EXIT_HOLDS, FAILS: EXIT_FAILS, UNKNOWN: EXIT_UNKNOWN}


def _load_spec(path: str) -> tuple[SpecFile, str]:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise TmsrError(f"cannot read {path}: {exc}") from None
    return parse_spec(text), text


def _cmd_check(args) -> int:
    spec, _ = _load_spec(args.spec)
    sys_ = spec.system
    balance = check_balanced(sys_)
    print(f"rules: {len(sys_.rules)}")
    print(f"balanced: {'yes' if balance.ok else 'no: ' + ', '.join(balance.offenders())}")
    progressive_ok = False
    if balance.ok:
        progress = check_progressive(sys_)
        progressive_ok = progress.ok
        print(
            "progressive: "
            + ("yes" if progress.ok else "no: " + ", ".join(progress.offenders()))
        )
    else:
        print("progressive: not checked (unbalanced)")
    dmax = compute_dmax(sys_, spec.init, spec.critical)
    print(f"dmax: {dmax}")
    print(f"fact size bound k: {sys_.max_fact_size}")
    print(
        f"alphabet: {sys_.signature.predicate_count} predicates, "
        f"{sys_.signature.symbol_count} constant/function symbols"
    )
    print(
        "delta configurations at most: "
        + str(
            count_bound(
                len(spec.init),
                sys_.max_fact_size,
                dmax,
                sys_.signature.predicate_count,
                sys_.signature.symbol_count,
            )
        )
    )
    return EXIT_HOLDS if balance.ok and progressive_ok else EXIT_FAILS


def _cmd_verify(args) -> int:
    spec, text = _load_spec(args.spec)
    budget = SearchBudget(
        max_states=args.max_states,
        max_seconds=args.timeout,
        workers=args.workers,
    )
    ticks = None
    if args.ticks is not None:
        if args.ticks == "default":
            if spec.ticks is None:
                raise TmsrError("spec declares no default tick budget")
            ticks = spec.ticks
        else:
            ticks = int(args.ticks)

    if args.mode == REALIZABILITY:
        if ticks is None:
            verdict = realizability(spec.system, spec.init, spec.critical, budget)
        else:
            verdict = bounded_realizability(
                spec.system, spec.init, spec.critical, ticks, budget
            )
    else:
        if ticks is None:
            verdict = survivability(spec.system, spec.init, spec.critical, budget)
        else:
            verdict = bounded_survivability(
                spec.system, spec.init, spec.critical, ticks, budget
            )

    report = VerdictReport(verdict, ticks=ticks, digest=input_digest(text))
    payload = emit_report(report)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(payload)
        print(f"{verdict.mode}: {verdict.outcome} (report written to {args.out})")
    else:
        sys.stdout.write(payload)
    return OUTCOME_EXIT[verdict.outcome]


def _parse_pairs(text: str) -> tuple[tuple[int, int], ...]:
    out = []
    for chunk in text.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        x, y = chunk.split(",")
        out.append((int(x), int(y)))
    return tuple(out)


def _cmd_gen(args) -> int:
    if args.kind == "drone":
        x_max, y_max = (int(v) for v in args.grid.split("x"))
        spec = gen_drone(
            DroneParams(
                drones=args.drones,
                points=_parse_pairs(args.points),
                x_max=x_max,
                y_max=y_max,
                base=_parse_pairs(args.base)[0],
                recency=args.recency,
                energy_cap=args.energy,
                wind=tuple(
                    (int(x), int(y), d)
                    for x, y, d in (
                        w.split(",") for w in args.wind.split(";") if w.strip()
                    )
                ),
                strategy=args.strategy,
                single_slot_station=args.station,
                station_bound=args.station_bound,
            )
        )
    elif args.kind == "3sat":
        clauses = []
        for chunk in args.clauses.split(";"):
            chunk = chunk.strip()
            if not chunk:
                continue
            lits = tuple(int(v) for v in chunk.split(","))
            clauses.append(lits)
        variables = args.vars or max(abs(l) for c in clauses for l in c)
        spec = gen_3sat(Cnf3(variables, tuple(clauses)))
    else:
        with open(args.machine, encoding="utf-8") as fh:
            m = json.load(fh)
        word = m.get("input", [])
        if isinstance(word, str):
            word = list(word)
        spec = gen_tm(
            TmSpec(
                states=tuple(m["states"]),
                final_states=frozenset(m.get("final", [])),
                alphabet=tuple(m["alphabet"]),
                instructions={
                    (q, sym): (q2, sym2, move)
                    for q, sym, q2, sym2, move in m["instructions"]
                },
                space=int(m["space"]),
                input_word=tuple(word),
                start_state=m.get("start"),
                head=int(m.get("head", 1)),
            )
        )
    text = print_spec(spec)
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write(text)
    print(f"wrote {args.out} ({len(spec.system.rules)} rules)")
    return EXIT_HOLDS


def _cmd_replay(args) -> int:
    spec, _ = _load_spec(args.spec)
    try:
        with open(args.report, encoding="utf-8") as fh:
            parsed = parse_report(fh.read(), spec)
    except OSError as exc:
        raise TmsrError(f"cannot read {args.report}: {exc}") from None

    if parsed.lasso is not None:
        dmax = compute_dmax(spec.system, spec.init, spec.critical)
        result = validate_lasso(spec.system, spec.critical, parsed.lasso, dmax)
    elif parsed.trace is not None:
        expect_critical = parsed.outcome == FAILS
        expected_ticks = None
        if parsed.ticks is not None and parsed.outcome == HOLDS:
            expected_ticks = parsed.ticks
        result = validate_trace(
            spec.system,
            spec.critical,
            parsed.trace,
            expected_ticks=expected_ticks,
            expect_critical_end=expect_critical,
        )
    else:
        print("report carries no trace to validate")
        return EXIT_HOLDS
    if result.ok:
        print("trace validates")
        return EXIT_HOLDS
    where = "" if result.failed_index is None else f" at step {result.failed_index}"
    print(f"trace INVALID{where}: {result.message}")
    return EXIT_FAILS


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tmsr",
        description="Timed multiset rewriting verifier",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_check = sub.add_parser("check", help="parse and classify a spec file")
    p_check.add_argument("spec")
    p_check.set_defaults(func=_cmd_check)

    p_verify = sub.add_parser("verify", help="decide a property")
    p_verify.add_argument("spec")
    p_verify.add_argument(
        "--mode",
        choices=[REALIZABILITY, SURVIVABILITY],
        required=True,
    )
    p_verify.add_argument(
        "--ticks",
        nargs="?",
        const="default",
        default=None,
        help="tick budget for bounded checking; bare --ticks uses the spec default",
    )
    p_verify.add_argument("--max-states", type=int, default=1_000_000)
    p_verify.add_argument("--timeout", type=float, default=600.0)
    p_verify.add_argument("--workers", type=int, default=1)
    p_verify.add_argument("--out", default=None, help="write the JSON report here")
    p_verify.set_defaults(func=_cmd_verify)

    p_gen = sub.add_parser("gen", help="generate a scenario spec file")
    gen_sub = p_gen.add_subparsers(dest="kind", required=True)

    g_drone = gen_sub.add_parser("drone")
    g_drone.add_argument("--drones", type=int, default=1)
    g_drone.add_argument("--grid", default="2x2", help="x_max x y_max, e.g. 2x2")
    g_drone.add_argument("--points", default="0,1")
    g_drone.add_argument("--base", default="1,1")
    g_drone.add_argument("--recency", type=int, default=6)
    g_drone.add_argument("--energy", type=int, default=4)
    g_drone.add_argument("--wind", default="")
    g_drone.add_argument("--strategy", choices=["greedy", "free"], default="greedy")
    g_drone.add_argument("--station", action="store_true")
    g_drone.add_argument("--station-bound", type=int, default=None)
    g_drone.add_argument("--out", required=True)
    g_drone.set_defaults(func=_cmd_gen)

    g_sat = gen_sub.add_parser("3sat")
    g_sat.add_argument("--clauses", required=True, help='e.g. "1,-2,3;2,2,-1"')
    g_sat.add_argument("--vars", type=int, default=None)
    g_sat.add_argument("--out", required=True)
    g_sat.set_defaults(func=_cmd_gen)

    g_tm = gen_sub.add_parser("tm")
    g_tm.add_argument("--machine", required=True, help="machine description (JSON)")
    g_tm.add_argument("--out", required=True)
    g_tm.set_defaults(func=_cmd_gen)

    p_replay = sub.add_parser("replay", help="validate a report against its spec")
    p_replay.add_argument("spec")
    p_replay.add_argument("report")
    p_replay.set_defaults(func=_cmd_replay)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (SpecParseError, ReportError, VerifierInputError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except TmsrError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
