"""Symbolic and concrete lasso traces.

A symbolic trace `c1;...;cm;{d1;...;dn}` constrains each position of an
infinite sequence with a propositional formula: the first m positions by the
prefix constraints, every later position by the period constraints repeated
forever. It denotes the set of all letter sequences that satisfy the
constraints position by position.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Sequence

from .formulas import (
    And,
    DEFAULT_LTL_PROPS,
    Formula,
    FormulaError,
    Not,
    Prop,
    TRUE,
    parse_prop,
    print_prop,
    size,
)
from .sat import prop_satisfiable, satisfying_letters

__all__ = [
    "SymbolicTrace",
    "ConcreteTrace",
    "TraceError",
    "parse_trace",
    "print_trace",
    "trace_token_count",
    "sample_concretization",
    "concrete_to_symbolic",
]


class TraceError(ValueError):
    """Malformed trace text or an unsatisfiable position constraint."""


@dataclass(frozen=True)
class SymbolicTrace:
    prefix: tuple[Formula, ...]
    period: tuple[Formula, ...]

    def __post_init__(self) -> None:
        if not self.period:
            raise TraceError("a trace needs a non-empty period")

    def __str__(self) -> str:
        return print_trace(self)


@dataclass(frozen=True)
class ConcreteTrace:
    """Letters are subsets of the declared proposition supply."""

    prefix: tuple[frozenset[str], ...]
    period: tuple[frozenset[str], ...]
    props: tuple[str, ...]

    def __post_init__(self) -> None:
        if not self.period:
            raise TraceError("a trace needs a non-empty period")

    def __str__(self) -> str:
        return print_trace(concrete_to_symbolic(self))


def parse_trace(text: str, props: Sequence[str] = DEFAULT_LTL_PROPS) -> SymbolicTrace:
    """Parse the wire format; every position constraint must be satisfiable
    (`0` would denote the empty trace set and is rejected)."""
    open_at = text.find("{")
    if open_at < 0:
        raise TraceError(f"missing period in {text!r}")
    if not text.endswith("}"):
        raise TraceError(f"expected {text!r} to end with '}}'")
    if "{" in text[open_at + 1 :] or "}" in text[:-1]:
        raise TraceError(f"stray brace in {text!r}")

    head = text[:open_at]
    if head and not head.endswith(";"):
        raise TraceError(f"prefix must end with ';' before the period in {text!r}")

    def constraints(body: str, offset: int) -> list[Formula]:
        out = []
        at = offset
        for part in body.split(";"):
            if not part.strip():
                raise TraceError(f"empty position constraint at offset {at} in {text!r}")
            try:
                formula = parse_prop(part, props, _offset=at)
            except FormulaError as err:
                raise TraceError(f"bad position constraint: {err}") from err
            if not prop_satisfiable(formula):
                raise TraceError(f"unsatisfiable position constraint {part!r} in {text!r}")
            out.append(formula)
            at += len(part) + 1
        return out

    prefix = constraints(head[:-1], 0) if head else []
    period = constraints(text[open_at + 1 : -1], open_at + 1)
    return SymbolicTrace(tuple(prefix), tuple(period))


def print_trace(trace: SymbolicTrace) -> str:
    head = "".join(print_prop(c) + ";" for c in trace.prefix)
    return head + "{" + ";".join(print_prop(c) for c in trace.period) + "}"


def trace_token_count(trace: SymbolicTrace) -> int:
    """Token count of the printed trace: one token per formula node plus the
    `;`, `{`, `}` delimiters."""
    body = sum(size(c) for c in trace.prefix) + sum(size(c) for c in trace.period)
    separators = len(trace.prefix) + (len(trace.period) - 1)
    return body + separators + 2


def sample_concretization(
    trace: SymbolicTrace,
    props: Sequence[str],
    unroll: int = 1,
    seed: int = 0,
) -> ConcreteTrace:
    """Pick a satisfying letter per position, uniformly and independently.

    With unroll > 1, the first unroll-1 copies of the period are absorbed
    into the concrete prefix with independently chosen letters, which keeps
    the denoted word inside the symbolic trace's language while varying
    beyond the plain periodic choice.
    """
    if unroll < 1:
        raise ValueError("unroll must be >= 1")
    rng = random.Random(seed)
    choices = {c: satisfying_letters(c, props) for c in set(trace.prefix) | set(trace.period)}

    def pick(constraint: Formula) -> frozenset[str]:
        return rng.choice(choices[constraint])

    prefix = [pick(c) for c in trace.prefix]
    for _ in range(unroll - 1):
        prefix.extend(pick(c) for c in trace.period)
    period = [pick(c) for c in trace.period]
    return ConcreteTrace(tuple(prefix), tuple(period), tuple(props))


def _letter_constraint(letter: frozenset[str], props: Sequence[str]) -> Formula:
    lits: list[Formula] = [
        Prop(p) if p in letter else Not(Prop(p)) for p in props
    ]
    if not lits:
        return TRUE
    acc = lits[0]
    for lit in lits[1:]:
        acc = And(acc, lit)
    return acc


def concrete_to_symbolic(trace: ConcreteTrace) -> SymbolicTrace:
    """Each letter becomes the full conjunction of its literals, so the
    symbolic trace denotes exactly the one concrete word."""
    return SymbolicTrace(
        tuple(_letter_constraint(l, trace.props) for l in trace.prefix),
        tuple(_letter_constraint(l, trace.props) for l in trace.period),
    )
