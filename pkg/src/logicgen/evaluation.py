"""Score prediction files against the semantic checkers and bucket by size.

A prediction is one of four mutually exclusive classes: `syntactic` (byte
equal to the reference answer), `semantic_only` (parses, differs from the
reference, passes the checker), `incorrect` (parses, fails the checker) or
`invalid` (does not parse). Records without a reference can never be
syntactic.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping

from .automata import DeadlineExceeded, check_containment
from .datagen import LTL_TRACE, PROP_ASSIGNMENT, READ_PROPS
from .formulas import Formula, parse_ltl, parse_prop, size
from .sat import check_partial_assignment, parse_assignment
from .traces import parse_trace

__all__ = [
    "CATEGORIES",
    "EvalReport",
    "PredictionRecord",
    "audit_references",
    "classify_prediction",
    "emit_report",
    "evaluate",
    "load_predictions",
    "load_report",
    "split_beam",
]

SYNTACTIC = "syntactic"
SEMANTIC_ONLY = "semantic_only"
INCORRECT = "incorrect"
INVALID = "invalid"
CATEGORIES = (SYNTACTIC, SEMANTIC_ONLY, INCORRECT, INVALID)

RANK_ONE = "rank-1"
ANY_BEAM = "any-beam"

_RANK = {cls: i for i, cls in enumerate(CATEGORIES)}

# Beam candidates are rank-separated by `|`. A printed trace uses `|` for
# disjunction but contains `}` exactly once, at its end, so a separator is
# recognizable as a `|` right after `}`. Assignments never contain `|`.
_TRACE_SEPARATOR = re.compile(r"(?<=\})\|")


@dataclass(frozen=True)
class PredictionRecord:
    """One line of a prediction file: the formula, the model output and,
    when the dataset was solved, the reference answer."""

    formula: str
    output: str
    reference: str | None = None


@dataclass(frozen=True)
class EvalReport:
    """Per-size-bucket and total classification counts."""

    task: str
    bucket_width: int = 1
    beam_mode: str = RANK_ONE
    buckets: Mapping[int, Mapping[str, int]] = field(default_factory=dict)
    rejected: int = 0
    errors: int = 0

    @property
    def totals(self) -> dict[str, int]:
        out = dict.fromkeys(CATEGORIES, 0)
        for counts in self.buckets.values():
            for cls in CATEGORIES:
                out[cls] += counts.get(cls, 0)
        return out

    @property
    def total_records(self) -> int:
        return sum(self.totals.values())


def percentages(counts: Mapping[str, int]) -> dict[str, float]:
    """Class shares in percent, rounded to two decimals; zero on empty."""
    total = sum(counts.get(cls, 0) for cls in CATEGORIES)
    if total == 0:
        return dict.fromkeys(CATEGORIES, 0.0)
    return {cls: round(100.0 * counts.get(cls, 0) / total, 2) for cls in CATEGORIES}


def _parse_formula(text: str, task: str) -> Formula:
    if task == LTL_TRACE:
        return parse_ltl(text, props=READ_PROPS)
    if task == PROP_ASSIGNMENT:
        return parse_prop(text, props=READ_PROPS)
    raise ValueError(f"unknown task {task!r}")


def split_beam(output: str, task: str) -> list[str]:
    """Split a prediction field into its ranked beam candidates."""
    if not output:
        return [""]
    if task == LTL_TRACE:
        return _TRACE_SEPARATOR.split(output)
    return output.split("|")


def _passes_checker(
    formula: Formula, task: str, answer, step_limit: int | None
) -> bool:
    if task == LTL_TRACE:
        return check_containment(answer, formula, step_limit=step_limit).holds
    return check_partial_assignment(formula, answer)


def _classify_candidate(
    formula: Formula,
    task: str,
    output: str,
    reference: str | None,
    step_limit: int | None,
) -> str:
    try:
        if task == LTL_TRACE:
            answer = parse_trace(output, props=READ_PROPS)
        else:
            answer = parse_assignment(output, props=READ_PROPS)
    except ValueError:
        return INVALID
    if reference is not None and output == reference:
        return SYNTACTIC
    if _passes_checker(formula, task, answer, step_limit):
        return SEMANTIC_ONLY
    return INCORRECT


def _classify_parsed(
    formula: Formula,
    rec: PredictionRecord,
    task: str,
    any_beam: bool,
    step_limit: int | None,
) -> str:
    candidates = split_beam(rec.output, task)
    if not any_beam:
        candidates = candidates[:1]
    best = INVALID
    for cand in candidates:
        cls = _classify_candidate(formula, task, cand, rec.reference, step_limit)
        if _RANK[cls] < _RANK[best]:
            best = cls
        if best == SYNTACTIC:
            break
    return best


def classify_prediction(
    rec: PredictionRecord,
    task: str,
    any_beam: bool = False,
    step_limit: int | None = None,
) -> str:
    """Classify one record; raises ValueError if the formula does not parse."""
    formula = _parse_formula(rec.formula, task)
    return _classify_parsed(formula, rec, task, any_beam, step_limit)


def evaluate(
    records: Iterable[PredictionRecord],
    task: str,
    bucket_width: int = 1,
    any_beam: bool = False,
    rejected: int = 0,
    step_limit: int | None = None,
) -> EvalReport:
    """Classify every record and aggregate counts per formula-size bucket.

    Buckets are keyed by their lower edge (`size // width * width`), so the
    default width of 1 buckets per exact size. Records whose semantic check
    exhausts `step_limit` are counted in `errors` and excluded from buckets.
    """
    if bucket_width < 1:
        raise ValueError("bucket_width must be at least 1")
    buckets: dict[int, dict[str, int]] = {}
    errors = 0
    for rec in records:
        formula = _parse_formula(rec.formula, task)
        try:
            cls = _classify_parsed(formula, rec, task, any_beam, step_limit)
        except DeadlineExceeded:
            errors += 1
            continue
        key = size(formula) // bucket_width * bucket_width
        counts = buckets.setdefault(key, dict.fromkeys(CATEGORIES, 0))
        counts[cls] += 1
    return EvalReport(
        task=task,
        bucket_width=bucket_width,
        beam_mode=ANY_BEAM if any_beam else RANK_ONE,
        buckets=buckets,
        rejected=rejected,
        errors=errors,
    )


def audit_references(
    records: Iterable[PredictionRecord],
    task: str,
    step_limit: int | None = None,
) -> list[PredictionRecord]:
    """Records whose reference answer fails its own semantic check.

    A byte-equal output is only as correct as the reference it matches, so a
    sound dataset must make this list empty; it is the generator soundness
    invariant surfacing on the scoring side.
    """
    bad = []
    for rec in records:
        if rec.reference is None:
            continue
        formula = _parse_formula(rec.formula, task)
        try:
            if task == LTL_TRACE:
                answer = parse_trace(rec.reference, props=READ_PROPS)
            else:
                answer = parse_assignment(rec.reference, props=READ_PROPS)
            ok = _passes_checker(formula, task, answer, step_limit)
        except ValueError:
            ok = False
        if not ok:
            bad.append(rec)
    return bad


# --------------------------------------------------------------------------
# Prediction file IO


def prediction_to_line(rec: PredictionRecord) -> str:
    parts = [rec.formula, rec.output]
    if rec.reference is not None:
        parts.append(rec.reference)
    return "\t".join(parts)


def load_predictions(
    source: str | Path | Iterable[str], task: str
) -> tuple[list[PredictionRecord], int]:
    """Read `formula<TAB>prediction[<TAB>reference]` lines.

    Returns the records whose formulas parse plus the count of rejected
    lines (unparsable formula or wrong field count).
    """
    if isinstance(source, (str, Path)):
        lines = Path(source).read_text(encoding="utf-8").splitlines()
    else:
        lines = list(source)
    records = []
    rejected = 0
    for line in lines:
        if not line.strip():
            continue
        fields = line.rstrip("\n").split("\t")
        if len(fields) not in (2, 3):
            rejected += 1
            continue
        try:
            _parse_formula(fields[0], task)
        except ValueError:
            rejected += 1
            continue
        reference = fields[2] if len(fields) == 3 else None
        records.append(PredictionRecord(fields[0], fields[1], reference))
    return records, rejected


def write_predictions(path: str | Path, records: Iterable[PredictionRecord]) -> None:
    text = "".join(prediction_to_line(r) + "\n" for r in records)
    Path(path).write_text(text, encoding="utf-8")


# --------------------------------------------------------------------------
# Report serialization

CSV_HEADER = "bucket,syntactic,semantic_only,incorrect,invalid"


def emit_report(report: EvalReport, fmt: str = "csv") -> str:
    """Serialize a report; both formats round-trip through load_report."""
    if fmt == "json":
        payload = {
            "task": report.task,
            "bucket_width": report.bucket_width,
            "beam_mode": report.beam_mode,
            "rejected": report.rejected,
            "errors": report.errors,
            "buckets": {
                str(key): {cls: counts.get(cls, 0) for cls in CATEGORIES}
                for key, counts in sorted(report.buckets.items())
            },
            "bucket_percentages": {
                str(key): percentages(counts)
                for key, counts in sorted(report.buckets.items())
            },
            "totals": report.totals,
            "percentages": percentages(report.totals),
        }
        return json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if fmt == "csv":
        meta = (
            f"# task={report.task} bucket_width={report.bucket_width}"
            f" beam={report.beam_mode} rejected={report.rejected}"
            f" errors={report.errors}"
        )
        rows = [meta, CSV_HEADER]
        for key in sorted(report.buckets):
            counts = report.buckets[key]
            rows.append(
                f"{key}," + ",".join(str(counts.get(cls, 0)) for cls in CATEGORIES)
            )
        totals = report.totals
        rows.append("total," + ",".join(str(totals[cls]) for cls in CATEGORIES))
        return "\n".join(rows) + "\n"
    raise ValueError(f"unknown report format {fmt!r}")


def load_report(text: str, fmt: str = "csv") -> EvalReport:
    """Reconstruct a report emitted by emit_report."""
    if fmt == "json":
        payload = json.loads(text)
        return EvalReport(
            task=payload["task"],
            bucket_width=payload["bucket_width"],
            beam_mode=payload["beam_mode"],
            buckets={
                int(key): dict(counts) for key, counts in payload["buckets"].items()
            },
            rejected=payload["rejected"],
            errors=payload["errors"],
        )
    if fmt == "csv":
        lines = [line for line in text.splitlines() if line]
        if not lines or not lines[0].startswith("# "):
            raise ValueError("missing report metadata line")
        meta = dict(item.split("=", 1) for item in lines[0][2:].split(" "))
        if lines[1] != CSV_HEADER:
            raise ValueError(f"unexpected header {lines[1]!r}")
        buckets: dict[int, dict[str, int]] = {}
        for line in lines[2:]:
            cells = line.split(",")
            if cells[0] == "total":
                continue
            buckets[int(cells[0])] = {
                cls: int(cell) for cls, cell in zip(CATEGORIES, cells[1:])
            }
        return EvalReport(
            task=meta["task"],
            bucket_width=int(meta["bucket_width"]),
            beam_mode=meta["beam"],
            buckets=buckets,
            rejected=int(meta["rejected"]),
            errors=int(meta["errors"]),
        )
    raise ValueError(f"unknown report format {fmt!r}")
