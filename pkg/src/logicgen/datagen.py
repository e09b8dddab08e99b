"""Dataset generators for the trace- and assignment-prediction tasks."""

from __future__ import annotations

import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from importlib import resources
from pathlib import Path
from typing import Mapping, Sequence

from .automata import SOLVER_STEPS_PER_SECOND, DeadlineExceeded, solve_ltl
from .formulas import (
    FALSE,
    TRUE,
    And,
    Eventually,
    FalseConst,
    Formula,
    Globally,
    Iff,
    Implies,
    Next,
    Not,
    Or,
    Prop,
    TrueConst,
    Until,
    WeakUntil,
    Xor,
    parse_ltl,
    parse_prop,
    print_ltl,
    print_prop,
    props_of,
    size,
)
from .sat import derive_partial_assignment, solve_clauses
from .traces import parse_trace, print_trace, trace_token_count

LTL_TRACE = "ltl-trace"
PROP_ASSIGNMENT = "prop-assignment"

LTL_WEIGHTS: Mapping[str, float] = {"!": 1.0, "&": 1.0, "X": 1.0, "U": 1.0}
PROP_WEIGHTS: Mapping[str, float] = {"!": 1.0, "&": 1.0, "|": 1.0, "<->": 0.5, "xor": 0.5}

DEFAULT_GEN_PROPS = ("a", "b", "c", "d", "e")
DEFAULT_PATTERN_PROPS = ("a", "b", "c", "d", "e", "f")
DEFAULT_CNF_PROPS = tuple("abcdefghijklmno")

PATTERN_CATALOGS = ("dac", "eh", "hkrss", "p")
PATTERN_PLACEHOLDERS = tuple(f"p{i}" for i in range(10))

_UNARY = {"!": Not, "X": Next, "F": Eventually, "G": Globally}
_BINARY = {"&": And, "|": Or, ">": Implies, "<->": Iff, "xor": Xor, "U": Until, "W": WeakUntil}

# Datasets written by the generators only ever use single-letter propositions,
# at most a..o (CNF pool); parsing back accepts the same supply.
READ_PROPS = DEFAULT_CNF_PROPS


@dataclass(frozen=True)
class GenConfig:
    """Shared knob set for all generators; each one reads the fields it needs.

    `timeout_s` is approximate desk time: it is converted into a
    deterministic solver step budget so that identical configs give
    byte-identical datasets regardless of machine load.
    """

    props: tuple[str, ...] = DEFAULT_GEN_PROPS
    min_size: int = 1
    max_size: int = 35
    count: int = 1000
    seed: int = 0
    weights: Mapping[str, float] | None = None
    const_factor: float = 2.5
    timeout_s: float | None = 1.0
    trace_token_cap: int = 62
    max_conjuncts: int = 8
    p_geo: float = 0.9
    p_k2: float = 0.75
    max_vars: int = 15
    ratios: tuple[float, float, float] = (0.8, 0.1, 0.1)

    def __post_init__(self) -> None:
        if not self.props:
            raise ValueError("empty proposition supply")
        if self.min_size < 1 or self.max_size < self.min_size:
            raise ValueError(f"bad size bounds [{self.min_size}, {self.max_size}]")
        if self.count < 0:
            raise ValueError("negative count")
        if self.const_factor <= 0:
            raise ValueError("const_factor must be positive")
        if not 0.0 < self.p_geo <= 1.0 or not 0.0 <= self.p_k2 <= 1.0:
            raise ValueError("clause-length probabilities out of range")
        if self.max_vars < 1:
            raise ValueError("max_vars must be positive")
        if self.max_conjuncts < 1:
            raise ValueError("max_conjuncts must be positive")
        if abs(sum(self.ratios) - 1.0) > 1e-9:
            raise ValueError(f"split ratios {self.ratios} do not sum to 1")


@dataclass(frozen=True)
class DatasetRecord:
    task: str
    formula: str
    answer: str | None
    size: int
    seed: int | None = None
    tag: str | None = None


@dataclass
class GenStats:
    """Counters describing one generator run (or a merge of sharded runs)."""

    requested: int = 0
    emitted: int = 0
    attempts: int = 0
    duplicates: int = 0
    unsat: int = 0
    timeouts: int = 0
    trace_dropped: int = 0
    starved: dict[int, int] = field(default_factory=dict)
    conditions: dict[str, int] = field(default_factory=dict)
    budget_exhausted: bool = False

    @property
    def trace_drop_rate(self) -> float:
        total = self.emitted + self.trace_dropped
        return self.trace_dropped / total if total else 0.0

    def merge(self, other: "GenStats") -> None:
        self.requested += other.requested
        self.emitted += other.emitted
        self.attempts += other.attempts
        self.duplicates += other.duplicates
        self.unsat += other.unsat
        self.timeouts += other.timeouts
        self.trace_dropped += other.trace_dropped
        for key, val in other.starved.items():
            self.starved[key] = self.starved.get(key, 0) + val
        for key, val in other.conditions.items():
            self.conditions[key] = self.conditions.get(key, 0) + val
        self.budget_exhausted = self.budget_exhausted or other.budget_exhausted

    def as_dict(self) -> dict:
        return {
            "requested": self.requested,
            "emitted": self.emitted,
            "attempts": self.attempts,
            "duplicates": self.duplicates,
            "unsat": self.unsat,
            "timeouts": self.timeouts,
            "trace_dropped": self.trace_dropped,
            "starved": {str(k): v for k, v in sorted(self.starved.items())},
            "conditions": dict(sorted(self.conditions.items())),
            "budget_exhausted": self.budget_exhausted,
        }




def _step_budget(timeout_s: float | None) -> int | None:
    """Deterministic solver budget approximating `timeout_s` of desk time."""
    if timeout_s is None:
        return None
    return max(1, int(timeout_s * SOLVER_STEPS_PER_SECOND))


def _sample_formula(
    rng: random.Random,
    target: int,
    props: Sequence[str],
    weights: Mapping[str, float],
    const_factor: float,
) -> Formula:
    """Draw a random formula of exactly `target` nodes.

    Node kinds come from the weight table; near the budget boundary the
    choice is masked down to kinds that can still consume the remainder
    exactly (leaves only at 1, no binaries below 3).
    """
    unary = [(cls, weights[tok]) for tok, cls in _UNARY.items() if weights.get(tok, 0) > 0]
    binary = [(cls, weights[tok]) for tok, cls in _BINARY.items() if weights.get(tok, 0) > 0]
    leaves: list[tuple[Formula, float]] = [(Prop(p), 1.0) for p in props]
    leaves += [(TRUE, 1.0 / const_factor), (FALSE, 1.0 / const_factor)]

    def grow(budget: int) -> Formula:
        options: list[tuple[object, float]] = []
        if budget == 1:
            options = list(leaves)
        else:
            if unary:
                options += unary
            if budget >= 3 and binary:
                options += binary
        if not options:
            raise ValueError(f"no node kind fits size budget {budget}")
        picked = rng.choices([o for o, _ in options], weights=[w for _, w in options])[0]
        if isinstance(picked, Formula):
            return picked
        if picked in _UNARY.values():
            return picked(grow(budget - 1))
        left = rng.randint(1, budget - 2)
        return picked(grow(left), grow(budget - 1 - left))

    return grow(target)


def _bucket_quotas(cfg: GenConfig) -> dict[int, int]:
    sizes = list(range(cfg.min_size, cfg.max_size + 1))
    base, rem = divmod(cfg.count, len(sizes))
    return {s: base + (1 if i < rem else 0) for i, s in enumerate(sizes)}


def _gen_random(cfg: GenConfig, task: str) -> tuple[list[DatasetRecord], GenStats]:
    temporal = task == LTL_TRACE
    weights = cfg.weights if cfg.weights is not None else (LTL_WEIGHTS if temporal else PROP_WEIGHTS)
    printer = print_ltl if temporal else print_prop
    rng = random.Random(cfg.seed)
    stats = GenStats(requested=cfg.count)
    seen: set[str] = set()
    records: list[DatasetRecord] = []

    for s, quota in _bucket_quotas(cfg).items():
        got = 0
        budget = 60 * quota + 200
        while got < quota and budget > 0:
            budget -= 1
            stats.attempts += 1
            formula = _sample_formula(rng, s, cfg.props, weights, cfg.const_factor)
            wire = printer(formula)
            if wire in seen:
                stats.duplicates += 1
                continue
            seen.add(wire)
            if temporal:
                try:
                    trace = solve_ltl(formula, step_limit=_step_budget(cfg.timeout_s))
                except DeadlineExceeded:
                    stats.timeouts += 1
                    continue
                if trace is None:
                    stats.unsat += 1
                    continue
                if trace_token_count(trace) > cfg.trace_token_cap:
                    stats.trace_dropped += 1
                    continue
                answer = print_trace(trace)
            else:
                try:
                    answer = str(derive_partial_assignment(formula))
                except ValueError:
                    stats.unsat += 1
                    continue
            records.append(DatasetRecord(task, wire, answer, s, seed=cfg.seed))
            stats.emitted += 1
            got += 1
        if got < quota:
            stats.starved[s] = quota - got
    return records, stats


def gen_random_ltl(cfg: GenConfig) -> tuple[list[DatasetRecord], GenStats]:
    """Random LTL formulas paired with satisfying lasso traces."""
    return _gen_random(cfg, LTL_TRACE)


def gen_random_prop(cfg: GenConfig) -> tuple[list[DatasetRecord], GenStats]:
    """Random propositional formulas paired with minimal forcing assignments."""
    return _gen_random(cfg, PROP_ASSIGNMENT)


def load_patterns(source: str | Path) -> tuple[Formula, ...]:
    """Read a pattern file (one Polish formula over p0..p9 per line).

    `source` may be one of the packaged catalog names (dac, eh, hkrss, p)
    or a filesystem path. Lines starting with `#` and blank lines are
    skipped.
    """
    if isinstance(source, str) and source in PATTERN_CATALOGS:
        text = (resources.files("logicgen") / "data" / "patterns"
                / f"{source}.patterns").read_text(encoding="utf-8")
    else:
        text = Path(source).read_text(encoding="utf-8")
    patterns = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        try:
            patterns.append(parse_ltl(line, props=PATTERN_PLACEHOLDERS))
        except ValueError as exc:
            raise ValueError(f"pattern file {source}: line {lineno}: {exc}") from exc
    if not patterns:
        raise ValueError(f"pattern file {source}: no patterns found")
    return tuple(patterns)


def _substitute(formula: Formula, mapping: Mapping[str, str]) -> Formula:
    if isinstance(formula, Prop):
        return Prop(mapping[formula.name])
    if isinstance(formula, (TrueConst, FalseConst)):
        return formula
    if isinstance(formula, (Not, Next, Eventually, Globally)):
        return type(formula)(_substitute(formula.child, mapping))
    return type(formula)(
        _substitute(formula.left, mapping), _substitute(formula.right, mapping))


def instantiate_pattern(
    pattern: Formula, props: Sequence[str], rng: random.Random
) -> Formula:
    """Replace placeholders by distinct random propositions from the supply."""
    placeholders = sorted(props_of(pattern))
    if len(placeholders) > len(props):
        raise ValueError(
            f"pattern needs {len(placeholders)} propositions, supply has {len(props)}")
    chosen = rng.sample(list(props), len(placeholders))
    return _substitute(pattern, dict(zip(placeholders, chosen)))


def gen_pattern_conjunctions(
    patterns: Sequence[Formula], cfg: GenConfig
) -> tuple[list[DatasetRecord], GenStats]:
    """Greedily conjoin instantiated patterns until a stop condition fires.

    Conditions are tested in a fixed order before each new conjunct is
    accepted: (1) the conjunction would exceed the size cap, (2) it would
    exceed the conjunct cap, (3) the solver exceeds its deadline on it,
    (4) it is unsatisfiable. The record emitted is the conjunction
    accumulated so far, tagged with the condition that stopped it.
    """
    rng = random.Random(cfg.seed)
    stats = GenStats(requested=cfg.count)
    seen: set[str] = set()
    records: list[DatasetRecord] = []
    budget = 200 * cfg.count + 500
    acc: Formula | None = None
    acc_trace = None
    n_conj = 0

    while len(records) < cfg.count and budget > 0:
        budget -= 1
        pattern = patterns[rng.randrange(len(patterns))]
        inst = instantiate_pattern(pattern, cfg.props, rng)
        cand = inst if acc is None else And(acc, inst)
        tag = None
        if size(cand) > cfg.max_size:
            tag = "size"
        elif n_conj + 1 > cfg.max_conjuncts:
            tag = "conjuncts"
        else:
            try:
                trace = solve_ltl(cand, step_limit=_step_budget(cfg.timeout_s))
            except DeadlineExceeded:
                tag = "timeout"
            else:
                if trace is None:
                    tag = "unsat"
        if tag is None:
            acc, acc_trace, n_conj = cand, trace, n_conj + 1
            continue
        if acc is not None:
            stats.conditions[tag] = stats.conditions.get(tag, 0) + 1
            wire = print_ltl(acc)
            if wire in seen:
                stats.duplicates += 1
            else:
                seen.add(wire)
                records.append(DatasetRecord(
                    LTL_TRACE, wire, print_trace(acc_trace), size(acc),
                    seed=cfg.seed, tag=tag))
                stats.emitted += 1
        acc, acc_trace, n_conj = None, None, 0
    if len(records) < cfg.count:
        stats.budget_exhausted = True
    return records, stats


def gen_unsolved_patterns(
    patterns: Sequence[Formula], cfg: GenConfig
) -> tuple[list[DatasetRecord], GenStats]:
    """Pattern conjunctions on which the solver exceeded its deadline.

    Emitted records carry no answer; their satisfiability is unknown.
    Conjunctions that would exceed the size cap are abandoned rather than
    emitted, so every record respects `cfg.max_size`.
    """
    rng = random.Random(cfg.seed)
    stats = GenStats(requested=cfg.count)
    seen: set[str] = set()
    records: list[DatasetRecord] = []
    budget = max(500, 60 * cfg.count)
    acc: Formula | None = None

    while len(records) < cfg.count and budget > 0:
        budget -= 1
        pattern = patterns[rng.randrange(len(patterns))]
        inst = instantiate_pattern(pattern, cfg.props, rng)
        cand = inst if acc is None else And(acc, inst)
        if size(cand) > cfg.max_size:
            acc = None
            continue
        try:
            trace = solve_ltl(cand, step_limit=_step_budget(cfg.timeout_s))
        except DeadlineExceeded:
            stats.timeouts += 1
            wire = print_ltl(cand)
            if wire in seen:
                stats.duplicates += 1
            else:
                seen.add(wire)
                records.append(DatasetRecord(
                    LTL_TRACE, wire, None, size(cand), seed=cfg.seed, tag="timeout"))
                stats.emitted += 1
            acc = None
            continue
        if trace is None:
            stats.unsat += 1
            acc = None
            continue
        acc = cand
    if len(records) < cfg.count:
        stats.budget_exhausted = True
    return records, stats


def sample_clause_length(rng: random.Random, p_k2: float, p_geo: float) -> int:
    """Clause length: 2 + Bernoulli(p_k2) + failures before a p_geo success."""
    length = 2
    if rng.random() < p_k2:
        length += 1
    while rng.random() >= p_geo:
        length += 1
    return length


def gen_cnf_dataset(cfg: GenConfig) -> tuple[list[DatasetRecord], GenStats]:
    """Random satisfiable CNF formulas with minimal forcing assignments.

    Clauses draw distinct variables from the pool with random polarity and
    are appended while the conjunction stays satisfiable and within the
    size cap; the last satisfiable conjunction is emitted. Satisfiability
    is tested on the clause set directly, skipping the CNF transform.
    """
    pool = list(cfg.props[:cfg.max_vars])
    ids = {name: i + 1 for i, name in enumerate(pool)}
    rng = random.Random(cfg.seed)
    stats = GenStats(requested=cfg.count)
    seen: set[str] = set()
    records: list[DatasetRecord] = []
    budget = 50 * cfg.count + 200

    while len(records) < cfg.count and budget > 0:
        budget -= 1
        stats.attempts += 1
        acc: Formula | None = None
        acc_size = 0
        clauses: list[tuple[int, ...]] = []
        while True:
            length = min(sample_clause_length(rng, cfg.p_k2, cfg.p_geo), len(pool))
            clause: Formula | None = None
            clause_size = 0
            int_clause = []
            for name in rng.sample(pool, length):
                negate = rng.random() < 0.5
                lit: Formula = Not(Prop(name)) if negate else Prop(name)
                clause_size += 2 if negate else 1
                int_clause.append(-ids[name] if negate else ids[name])
                clause = lit if clause is None else Or(clause, lit)
                if clause is not lit:
                    clause_size += 1
            cand_size = acc_size + clause_size + (1 if acc is not None else 0)
            if cand_size > cfg.max_size:
                break
            if not solve_clauses(clauses + [tuple(int_clause)], len(pool)).satisfiable:
                stats.unsat += 1
                break
            clauses.append(tuple(int_clause))
            acc = clause if acc is None else And(acc, clause)
            acc_size = cand_size
        if acc is None:
            continue
        wire = print_prop(acc)
        if wire in seen:
            stats.duplicates += 1
            continue
        seen.add(wire)
        answer = str(derive_partial_assignment(acc))
        records.append(DatasetRecord(PROP_ASSIGNMENT, wire, answer, acc_size, seed=cfg.seed))
        stats.emitted += 1
    if len(records) < cfg.count:
        stats.budget_exhausted = True
    return records, stats


def split_dataset(
    records: Sequence[DatasetRecord],
    ratios: tuple[float, float, float] = (0.8, 0.1, 0.1),
    seed: int = 0,
) -> tuple[list[DatasetRecord], list[DatasetRecord], list[DatasetRecord]]:
    """Deterministic shuffled partition into train/val/test slices."""
    if abs(sum(ratios) - 1.0) > 1e-9:
        raise ValueError(f"split ratios {ratios} do not sum to 1")
    shuffled = list(records)
    random.Random(seed).shuffle(shuffled)
    n_train = int(len(shuffled) * ratios[0])
    n_val = int(len(shuffled) * ratios[1])
    train = shuffled[:n_train]
    val = shuffled[n_train:n_train + n_val]
    test = shuffled[n_train + n_val:]
    return train, val, test


def answer_token_count(task: str, answer: str | None) -> int:
    if not answer:
        return 0
    if task == LTL_TRACE:
        return trace_token_count(parse_trace(answer, props=READ_PROPS))
    return len(answer)


def dataset_stats(
    records: Sequence[DatasetRecord],
) -> tuple[dict[int, int], dict[int, int]]:
    """Histograms of formula sizes and answer token counts."""
    formula_hist: dict[int, int] = {}
    answer_hist: dict[int, int] = {}
    for rec in records:
        formula_hist[rec.size] = formula_hist.get(rec.size, 0) + 1
        tokens = answer_token_count(rec.task, rec.answer)
        answer_hist[tokens] = answer_hist.get(tokens, 0) + 1
    return dict(sorted(formula_hist.items())), dict(sorted(answer_hist.items()))


def histogram_csv(hist: Mapping[int, int]) -> str:
    lines = ["bucket,count"]
    lines += [f"{bucket},{count}" for bucket, count in sorted(hist.items())]
    return "\n".join(lines) + "\n"


def record_to_line(record: DatasetRecord) -> str:
    return f"{record.formula}\t{record.answer or ''}"


def record_from_line(line: str, task: str) -> DatasetRecord:
    parts = line.rstrip("\n").split("\t")
    formula = parts[0]
    raw_answer = parts[1] if len(parts) > 1 else ""
    if task == LTL_TRACE:
        answer = raw_answer or None
        parsed = parse_ltl(formula, props=READ_PROPS)
    elif task == PROP_ASSIGNMENT:
        answer = raw_answer
        parsed = parse_prop(formula, props=READ_PROPS)
    else:
        raise ValueError(f"unknown task {task!r}")
    return DatasetRecord(task, formula, answer, size(parsed))


def write_dataset(path: str | Path, records: Sequence[DatasetRecord]) -> None:
    text = "".join(record_to_line(r) + "\n" for r in records)
    Path(path).write_text(text, encoding="utf-8")


def read_dataset(path: str | Path, task: str) -> list[DatasetRecord]:
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    return [record_from_line(line, task) for line in lines if line]


_GENERATORS = {
    "ltl": gen_random_ltl,
    "prop": gen_random_prop,
    "cnf": gen_cnf_dataset,
}
_PATTERN_GENERATORS = {
    "pattern": gen_pattern_conjunctions,
    "unsolved": gen_unsolved_patterns,
}


def _run_shard(args: tuple) -> tuple[list[DatasetRecord], GenStats]:
    kind, cfg, patterns = args
    if kind in _PATTERN_GENERATORS:
        return _PATTERN_GENERATORS[kind](patterns, cfg)
    return _GENERATORS[kind](cfg)


def run_sharded(
    kind: str,
    cfg: GenConfig,
    jobs: int = 1,
    patterns: Sequence[Formula] | None = None,
) -> tuple[list[DatasetRecord], GenStats]:
    """Run a generator across `jobs` disjoint seed streams and merge.

    Shard i uses seed `cfg.seed + i` and an even share of the count. The
    merge sorts by formula text and drops duplicates, so the result is
    deterministic regardless of worker scheduling.
    """
    if kind not in _GENERATORS and kind not in _PATTERN_GENERATORS:
        raise ValueError(f"unknown generator kind {kind!r}")
    if jobs <= 1:
        return _run_shard((kind, cfg, patterns))
    base, rem = divmod(cfg.count, jobs)
    shards = []
    for i in range(jobs):
        count = base + (1 if i < rem else 0)
        shards.append((kind, replace(cfg, count=count, seed=cfg.seed + i), patterns))
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        results = list(pool.map(_run_shard, shards))
    merged_stats = GenStats()
    all_records: list[DatasetRecord] = []
    for records, stats in results:
        all_records.extend(records)
        merged_stats.merge(stats)
    all_records.sort(key=lambda r: r.formula)
    unique: list[DatasetRecord] = []
    for rec in all_records:
        if unique and unique[-1].formula == rec.formula:
            merged_stats.duplicates += 1
            merged_stats.emitted -= 1
            continue
        unique.append(rec)
    return unique, merged_stats
