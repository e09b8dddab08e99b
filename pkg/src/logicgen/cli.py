"""Command line interface: solve, check, generate, split, summarize, score.

Every run is deterministic given its flags; randomness enters only through
`--seed` and deadlines are measured in solver steps (derived from
`--timeout-ms`), never in wall-clock time. Runs that write an output file
also write a `<out>.manifest.json` sidecar echoing the full configuration.

Exit codes: 0 success, 1 domain failure (UNSAT or VIOLATED in single-input
mode), 2 usage or parse errors.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
import time
from pathlib import Path

from . import __version__
from .automata import (
    SOLVER_STEPS_PER_SECOND,
    DeadlineExceeded,
    check_containment,
    solve_ltl,
)
from .datagen import (
    DEFAULT_CNF_PROPS,
    DEFAULT_GEN_PROPS,
    DEFAULT_PATTERN_PROPS,
    LTL_TRACE,
    PATTERN_CATALOGS,
    PROP_ASSIGNMENT,
    READ_PROPS,
    GenConfig,
    dataset_stats,
    histogram_csv,
    load_patterns,
    read_dataset,
    run_sharded,
    split_dataset,
    write_dataset,
)
from .evaluation import emit_report, evaluate, load_predictions
from .formulas import parse_ltl, parse_prop, props_of
from .sat import (
    derive_partial_assignment,
    falsifying_completion,
    parse_assignment,
    satisfying_letters,
)
from .semantics import eval_concrete
from .traces import ConcreteTrace, parse_trace, print_trace

TASKS = {"ltl": LTL_TRACE, "prop": PROP_ASSIGNMENT}


def _steps(timeout_ms: int | None) -> int | None:
    """Deterministic solver-step budget for a requested deadline; 0 or a
    missing flag disables the deadline."""
    if timeout_ms is None or timeout_ms <= 0:
        return None
    return max(1, timeout_ms * SOLVER_STEPS_PER_SECOND // 1000)


def _timeout_s(timeout_ms: int | None) -> float | None:
    if timeout_ms is None or timeout_ms <= 0:
        return None
    return timeout_ms / 1000.0


def _parse_props(text: str) -> tuple[str, ...]:
    props = tuple(p for p in (part.strip() for part in text.split(",")) if p)
    if not props:
        raise ValueError(f"no propositions in {text!r}")
    return props


def _write_manifest(
    out: Path, subcommand: str, config: dict, counts: dict, started: float
) -> None:
    manifest = {
        "tool": "logicgen",
        "version": __version__,
        "subcommand": subcommand,
        "config": config,
        "seed": config.get("seed"),
        "wall_clock_s": round(time.perf_counter() - started, 3),
        "counts": counts,
    }
    path = Path(str(out) + ".manifest.json")
    path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def _emit(out: Path | None, text: str) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        out.write_text(text, encoding="utf-8")


# --------------------------------------------------------------------------
# solve


def _solve_one(task: str, formula, step_limit: int | None) -> str:
    if task == LTL_TRACE:
        try:
            trace = solve_ltl(formula, step_limit=step_limit)
        except DeadlineExceeded:
            return "TIMEOUT"
        return "UNSAT" if trace is None else print_trace(trace)
    try:
        return str(derive_partial_assignment(formula))
    except ValueError:
        return "UNSAT"


def _cmd_solve(args: argparse.Namespace) -> int:
    task = TASKS[args.task]
    step_limit = _steps(args.timeout_ms)
    started = time.perf_counter()
    parse = parse_ltl if task == LTL_TRACE else parse_prop

    if args.file is None:
        if args.formula is None:
            print("error: need a FORMULA argument or --file", file=sys.stderr)
            return 2
        try:
            formula = parse(args.formula, props=READ_PROPS)
        except ValueError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 2
        answer = _solve_one(task, formula, step_limit)
        print(answer)
        return 0 if answer not in ("UNSAT", "TIMEOUT") else 1

    counts = {"solved": 0, "unsat": 0, "timeout": 0, "parse_errors": 0}
    rows = []
    for lineno, line in enumerate(args.file.read_text(encoding="utf-8").splitlines(), 1):
        if not line.strip():
            continue
        try:
            formula = parse(line, props=READ_PROPS)
        except ValueError as exc:
            print(f"line {lineno}: {exc}", file=sys.stderr)
            counts["parse_errors"] += 1
            continue
        answer = _solve_one(task, formula, step_limit)
        key = answer.lower() if answer in ("UNSAT", "TIMEOUT") else "solved"
        counts[key] += 1
        rows.append(f"{line}\t{answer}\n")
    _emit(args.out, "".join(rows))
    if args.out is not None:
        _write_manifest(
            args.out,
            "solve",
            {"task": args.task, "file": str(args.file), "timeout_ms": args.timeout_ms},
            counts,
            started,
        )
    return 2 if counts["parse_errors"] else 0


# --------------------------------------------------------------------------
# check


def _check_ltl_concrete(formula, trace) -> tuple[str, str | None]:
    names = set(props_of(formula))
    for constraint in trace.prefix + trace.period:
        names.update(props_of(constraint))
    props = tuple(sorted(names))
    letters = []
    for i, constraint in enumerate(trace.prefix + trace.period):
        options = satisfying_letters(constraint, props)
        if len(options) != 1:
            return "INVALID", f"position {i} admits {len(options)} letters, not 1"
        letters.append(options[0])
    m = len(trace.prefix)
    concrete = ConcreteTrace(tuple(letters[:m]), tuple(letters[m:]), props)
    if eval_concrete(formula, concrete):
        return "HOLDS", None
    return "VIOLATED", str(concrete)


def _check_pair(
    task: str, formula, candidate: str, step_limit: int | None, concrete: bool
) -> tuple[str, str | None]:
    """Verdict plus a witness (violation) or reason (invalid candidate)."""
    try:
        if task == LTL_TRACE:
            answer = parse_trace(candidate, props=READ_PROPS)
        else:
            answer = parse_assignment(candidate, props=READ_PROPS)
    except ValueError as exc:
        return "INVALID", str(exc)
    if task == LTL_TRACE:
        if concrete:
            return _check_ltl_concrete(formula, answer)
        result = check_containment(answer, formula, step_limit=step_limit)
        if result.holds:
            return "HOLDS", None
        return "VIOLATED", str(result.witness)
    witness = falsifying_completion(formula, answer)
    if witness is None:
        return "HOLDS", None
    return "VIOLATED", str(witness)


def _cmd_check(args: argparse.Namespace) -> int:
    task = TASKS[args.task]
    step_limit = _steps(args.timeout_ms)
    started = time.perf_counter()
    parse = parse_ltl if task == LTL_TRACE else parse_prop
    if args.concrete and task != LTL_TRACE:
        print("error: --concrete only applies to the ltl task", file=sys.stderr)
        return 2

    if args.file is None:
        if args.formula is None or args.candidate is None:
            print("error: need FORMULA and CANDIDATE (or --file)", file=sys.stderr)
            return 2
        try:
            formula = parse(args.formula, props=READ_PROPS)
        except ValueError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 2
        try:
            verdict, detail = _check_pair(task, formula, args.candidate, step_limit, args.concrete)
        except DeadlineExceeded:
            print("TIMEOUT")
            return 1
        print(verdict if detail is None else f"{verdict} {detail}")
        return 0 if verdict == "HOLDS" else 1

    counts = {"holds": 0, "violated": 0, "invalid": 0, "timeout": 0, "parse_errors": 0}
    rows = []
    for lineno, line in enumerate(args.file.read_text(encoding="utf-8").splitlines(), 1):
        if not line.strip():
            continue
        fields = line.split("\t")
        if len(fields) != 2:
            print(f"line {lineno}: expected formula<TAB>candidate", file=sys.stderr)
            counts["parse_errors"] += 1
            continue
        try:
            formula = parse(fields[0], props=READ_PROPS)
        except ValueError as exc:
            print(f"line {lineno}: {exc}", file=sys.stderr)
            counts["parse_errors"] += 1
            continue
        try:
            verdict, detail = _check_pair(task, formula, fields[1], step_limit, args.concrete)
        except DeadlineExceeded:
            verdict, detail = "TIMEOUT", None
        counts[verdict.lower()] += 1
        rows.append(f"{fields[0]}\t{verdict}\n" if detail is None
                    else f"{fields[0]}\t{verdict}\t{detail}\n")
    _emit(args.out, "".join(rows))
    if args.out is not None:
        _write_manifest(
            args.out,
            "check",
            {"task": args.task, "file": str(args.file), "timeout_ms": args.timeout_ms,
             "concrete": args.concrete},
            counts,
            started,
        )
    return 2 if counts["parse_errors"] else 0


# --------------------------------------------------------------------------
# generation


def _cmd_gen(args: argparse.Namespace) -> int:
    started = time.perf_counter()
    kwargs = {
        "props": _parse_props(args.props),
        "count": args.count,
        "seed": args.seed,
        "max_size": args.max_size,
    }
    if args.kind in ("ltl", "prop"):
        kwargs["min_size"] = args.min_size
    if args.kind == "ltl":
        kwargs["timeout_s"] = _timeout_s(args.timeout_ms)
        kwargs["trace_token_cap"] = args.trace_cap
    if args.kind in ("pattern", "unsolved"):
        kwargs["timeout_s"] = _timeout_s(args.timeout_ms)
    if args.kind == "pattern":
        kwargs["max_conjuncts"] = args.max_conjuncts
    if args.kind == "cnf":
        kwargs["max_vars"] = args.max_vars
        kwargs["p_k2"] = args.p_k2
        kwargs["p_geo"] = args.p_geo
    cfg = GenConfig(**kwargs)

    patterns = None
    if args.kind in ("pattern", "unsolved"):
        patterns = []
        for source in args.catalog:
            patterns.extend(load_patterns(source))

    records, stats = run_sharded(args.kind, cfg, jobs=args.jobs, patterns=patterns)
    write_dataset(args.out, records)
    config = dataclasses.asdict(cfg)
    config["jobs"] = args.jobs
    if args.kind in ("pattern", "unsolved"):
        config["catalogs"] = list(args.catalog)
    _write_manifest(args.out, args.command, config, stats.as_dict(), started)
    print(f"{len(records)} records -> {args.out}", file=sys.stderr)
    if stats.budget_exhausted or stats.starved:
        print(f"warning: generation starved: {stats.as_dict()}", file=sys.stderr)
    return 0


# --------------------------------------------------------------------------
# split / stats / eval


def _cmd_split(args: argparse.Namespace) -> int:
    started = time.perf_counter()
    task = TASKS[args.task]
    ratios = tuple(float(part) for part in args.ratios.split(","))
    records = read_dataset(args.input, task)
    parts = split_dataset(records, ratios=ratios, seed=args.seed)
    counts = {"input": len(records)}
    for name, part in zip(("train", "val", "test"), parts):
        path = Path(f"{args.out}.{name}.tsv")
        write_dataset(path, part)
        counts[name] = len(part)
        print(f"{len(part)} records -> {path}", file=sys.stderr)
    config = {
        "task": args.task,
        "input": str(args.input),
        "ratios": list(ratios),
        "seed": args.seed,
    }
    _write_manifest(Path(str(args.out)), "split", config, counts, started)
    return 0


def _cmd_stats(args: argparse.Namespace) -> int:
    started = time.perf_counter()
    task = TASKS[args.task]
    records = read_dataset(args.input, task)
    formula_hist, answer_hist = dataset_stats(records)
    text = histogram_csv(answer_hist if args.answer_tokens else formula_hist)
    _emit(args.out, text)
    if args.out is not None:
        config = {
            "task": args.task,
            "input": str(args.input),
            "answer_tokens": args.answer_tokens,
        }
        _write_manifest(args.out, "stats", config, {"records": len(records)}, started)
    return 0


def _cmd_eval(args: argparse.Namespace) -> int:
    started = time.perf_counter()
    task = TASKS[args.task]
    records, rejected = load_predictions(args.predictions, task)
    report = evaluate(
        records,
        task,
        bucket_width=args.bucket_width,
        any_beam=args.any_beam,
        rejected=rejected,
        step_limit=_steps(args.timeout_ms),
    )
    text = emit_report(report, args.format)
    _emit(args.out, text)
    if args.out is not None:
        config = {
            "task": args.task,
            "predictions": str(args.predictions),
            "bucket_width": args.bucket_width,
            "any_beam": args.any_beam,
            "format": args.format,
            "timeout_ms": args.timeout_ms,
        }
        counts = dict(report.totals)
        counts["rejected"] = report.rejected
        counts["errors"] = report.errors
        _write_manifest(args.out, "eval", config, counts, started)
    return 0


# --------------------------------------------------------------------------
# parser


def _add_task_flag(parser: argparse.ArgumentParser) -> None:
    group = parser.add_mutually_exclusive_group(required=True)
    group.add_argument(
        "--ltl", dest="task", action="store_const", const="ltl",
        help="temporal formulas answered by lasso traces",
    )
    group.add_argument(
        "--prop", dest="task", action="store_const", const="prop",
        help="propositional formulas answered by partial assignments",
    )


def _add_common_gen_flags(parser: argparse.ArgumentParser, props: str) -> None:
    parser.add_argument("--count", type=int, default=1000, help="records to emit")
    parser.add_argument("--seed", type=int, default=0, help="generator seed")
    parser.add_argument("--props", default=props, help="comma-separated proposition names")
    parser.add_argument("--jobs", type=int, default=1, help="parallel shards with a deterministic merge")
    parser.add_argument("-o", "--out", type=Path, required=True, help="output dataset path")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="logicgen",
        description="Generate, solve and check temporal/propositional logic datasets.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    solve = sub.add_parser("solve", help="derive a satisfying trace or forcing assignment")
    _add_task_flag(solve)
    solve.add_argument("formula", nargs="?", help="formula in prefix notation")
    solve.add_argument("--file", type=Path, help="solve one formula per line instead")
    solve.add_argument("--timeout-ms", type=int, help="per-formula deadline (solver steps; 0 disables)")
    solve.add_argument("-o", "--out", type=Path, help="write formula<TAB>answer lines here")
    solve.set_defaults(func=_cmd_solve)

    check = sub.add_parser("check", help="verdict on a candidate answer: HOLDS, VIOLATED or INVALID")
    _add_task_flag(check)
    check.add_argument("formula", nargs="?")
    check.add_argument("candidate", nargs="?")
    check.add_argument("--file", type=Path, help="check formula<TAB>candidate lines instead")
    check.add_argument(
        "--concrete", action="store_true",
        help="evaluate by the direct lasso semantics; every trace position must pin exactly one letter",
    )
    check.add_argument("--timeout-ms", type=int, help="deadline (solver steps; 0 disables)")
    check.add_argument("-o", "--out", type=Path, help="write verdict lines here")
    check.set_defaults(func=_cmd_check)

    gen_ltl = sub.add_parser("gen-random-ltl", help="random temporal formulas with solved traces")
    _add_common_gen_flags(gen_ltl, ",".join(DEFAULT_GEN_PROPS))
    gen_ltl.add_argument("--min-size", type=int, default=1)
    gen_ltl.add_argument("--max-size", type=int, default=35)
    gen_ltl.add_argument("--timeout-ms", type=int, default=1000)
    gen_ltl.add_argument("--trace-cap", type=int, default=62, help="answer token limit")
    gen_ltl.set_defaults(func=_cmd_gen, kind="ltl")

    gen_prop = sub.add_parser("gen-prop", help="random propositional formulas with minimal assignments")
    _add_common_gen_flags(gen_prop, ",".join(DEFAULT_GEN_PROPS))
    gen_prop.add_argument("--min-size", type=int, default=1)
    gen_prop.add_argument("--max-size", type=int, default=35)
    gen_prop.set_defaults(func=_cmd_gen, kind="prop")

    gen_pattern = sub.add_parser("gen-pattern", help="conjunctions of specification patterns with traces")
    _add_common_gen_flags(gen_pattern, ",".join(DEFAULT_PATTERN_PROPS))
    gen_pattern.add_argument(
        "--catalog", action="append", default=None,
        help=f"pattern catalog name ({', '.join(PATTERN_CATALOGS)}) or file; repeatable",
    )
    gen_pattern.add_argument("--max-size", type=int, default=126)
    gen_pattern.add_argument("--max-conjuncts", type=int, default=8)
    gen_pattern.add_argument("--timeout-ms", type=int, default=1000)
    gen_pattern.set_defaults(func=_cmd_gen, kind="pattern")

    gen_unsolved = sub.add_parser("gen-unsolved", help="pattern conjunctions our solver times out on")
    _add_common_gen_flags(gen_unsolved, ",".join(DEFAULT_PATTERN_PROPS))
    gen_unsolved.add_argument("--catalog", action="append", default=None)
    gen_unsolved.add_argument("--max-size", type=int, default=254)
    gen_unsolved.add_argument("--timeout-ms", type=int, default=60_000)
    gen_unsolved.set_defaults(func=_cmd_gen, kind="unsolved")

    gen_cnf = sub.add_parser("gen-cnf", help="random satisfiable CNF with minimal assignments")
    _add_common_gen_flags(gen_cnf, ",".join(DEFAULT_CNF_PROPS))
    gen_cnf.add_argument("--max-size", type=int, default=250)
    gen_cnf.add_argument("--max-vars", type=int, default=15)
    gen_cnf.add_argument("--p-k2", type=float, default=0.75, help="chance of a third literal")
    gen_cnf.add_argument("--p-geo", type=float, default=0.9, help="geometric stop chance for longer clauses")
    gen_cnf.set_defaults(func=_cmd_gen, kind="cnf")

    split = sub.add_parser("split", help="shuffle and split a dataset into train/val/test")
    _add_task_flag(split)
    split.add_argument("input", type=Path)
    split.add_argument("--ratios", default="0.8,0.1,0.1")
    split.add_argument("--seed", type=int, default=0)
    split.add_argument("-o", "--out", required=True, help="output path prefix")
    split.set_defaults(func=_cmd_split)

    stats = sub.add_parser("stats", help="CSV histogram of formula sizes (or answer tokens)")
    _add_task_flag(stats)
    stats.add_argument("input", type=Path)
    stats.add_argument("--answer-tokens", action="store_true", help="histogram answers instead of formulas")
    stats.add_argument("-o", "--out", type=Path)
    stats.set_defaults(func=_cmd_stats)

    eval_cmd = sub.add_parser("eval", help="score a prediction file against the semantic checkers")
    _add_task_flag(eval_cmd)
    eval_cmd.add_argument("predictions", type=Path, help="formula<TAB>prediction[<TAB>reference] lines")
    eval_cmd.add_argument("--bucket-width", type=int, default=1)
    eval_cmd.add_argument("--any-beam", action="store_true",
                          help="score the best beam candidate instead of rank 1")
    eval_cmd.add_argument("--format", choices=("csv", "json"), default="csv")
    eval_cmd.add_argument("--timeout-ms", type=int, help="per-record check deadline (solver steps)")
    eval_cmd.add_argument("-o", "--out", type=Path)
    eval_cmd.set_defaults(func=_cmd_eval)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "kind", None) in ("pattern", "unsolved") and args.catalog is None:
        args.catalog = list(PATTERN_CATALOGS)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
