"""Temporal evaluation of concrete lasso traces.

Verdicts are computed position by position over the m+n stored letters with
the successor of the last period position wrapping back to position m. Until
is a least fixpoint: two backward passes over the period (the second pass
propagates values across the wrap) followed by one backward pass over the
prefix. Globally is the dual greatest fixpoint; weak until reuses both
instead of getting fixpoint code of its own.
"""

from __future__ import annotations

from .formulas import (
    And,
    Eventually,
    FalseConst,
    Formula,
    Globally,
    Implies,
    Next,
    Not,
    Or,
    Prop,
    TrueConst,
    Until,
    WeakUntil,
)
from .traces import ConcreteTrace

__all__ = ["eval_concrete", "subformula_table"]


def _fixpoint_rows(
    left: list[bool], right: list[bool], m: int, least: bool
) -> list[bool]:
    """Backward evaluation of x[i] = right[i] or (left[i] and x[succ(i)])
    (least=True) or its greatest-fixpoint dual x[i] = right[i] and
    (left[i] or x[succ(i)])."""
    total = len(right)
    out = [not least] * total

    def step(i: int) -> None:
        nxt = out[m] if i == total - 1 else out[i + 1]
        if least:
            out[i] = right[i] or (left[i] and nxt)
        else:
            out[i] = right[i] and (left[i] or nxt)

    for _ in range(2):
        for i in range(total - 1, m - 1, -1):
            step(i)
    for i in range(m - 1, -1, -1):
        step(i)
    return out


def subformula_table(formula: Formula, trace: ConcreteTrace) -> dict[Formula, tuple[bool, ...]]:
    """Verdict rows for every distinct subformula over all m+n positions."""
    m = len(trace.prefix)
    letters = list(trace.prefix) + list(trace.period)
    total = len(letters)
    known = set(trace.props)
    true_row = [True] * total
    table: dict[Formula, list[bool]] = {}

    def row(node: Formula) -> list[bool]:
        got = table.get(node)
        if got is not None:
            return got
        if isinstance(node, Prop):
            if node.name not in known:
                raise ValueError(f"unknown proposition {node.name!r}")
            out = [node.name in letter for letter in letters]
        elif isinstance(node, TrueConst):
            out = [True] * total
        elif isinstance(node, FalseConst):
            out = [False] * total
        elif isinstance(node, Not):
            out = [not v for v in row(node.child)]
        elif isinstance(node, And):
            out = [a and b for a, b in zip(row(node.left), row(node.right))]
        elif isinstance(node, Or):
            out = [a or b for a, b in zip(row(node.left), row(node.right))]
        elif isinstance(node, Implies):
            out = [(not a) or b for a, b in zip(row(node.left), row(node.right))]
        elif isinstance(node, Next):
            child = row(node.child)
            out = [child[m if i == total - 1 else i + 1] for i in range(total)]
        elif isinstance(node, Until):
            out = _fixpoint_rows(row(node.left), row(node.right), m, least=True)
        elif isinstance(node, Eventually):
            out = _fixpoint_rows(true_row, row(node.child), m, least=True)
        elif isinstance(node, Globally):
            # G p == p R false with R as the greatest fixpoint; the `left`
            # slot never rescues, so pass a constant false row via duality.
            child = row(node.child)
            out = _fixpoint_rows([False] * total, child, m, least=False)
        elif isinstance(node, WeakUntil):
            until = _fixpoint_rows(row(node.left), row(node.right), m, least=True)
            forever = _fixpoint_rows([False] * total, row(node.left), m, least=False)
            out = [a or b for a, b in zip(until, forever)]
        else:
            raise ValueError(f"{type(node).__name__} is not in the temporal grammar")
        table[node] = out
        return out

    row(formula)
    return {f: tuple(r) for f, r in table.items()}


def eval_concrete(formula: Formula, trace: ConcreteTrace) -> bool:
    """Does the infinite word denoted by `trace` satisfy `formula`?"""
    return subformula_table(formula, trace)[formula][0]
