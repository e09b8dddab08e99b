"""Shared brute-force references for the automaton tests.

Nothing here touches the automata module: containment is decided by
enumerating concrete lassos and evaluating them, and formula enumeration is
plain tree counting. Slow on purpose; sizes stay small.
"""

from itertools import product

from logicgen.formulas import (
    And,
    Eventually,
    FALSE,
    Formula,
    Globally,
    Implies,
    Next,
    Not,
    Or,
    Prop,
    TRUE,
    Until,
    WeakUntil,
)
from logicgen.sat import satisfying_letters
from logicgen.semantics import eval_concrete
from logicgen.traces import ConcreteTrace, SymbolicTrace

UNARY = (Not, Next, Eventually, Globally)
BINARY = (And, Or, Implies, Until, WeakUntil)


def enumerate_formulas(size: int, props=("a", "b"), constants=True,
                       unary=UNARY, binary=BINARY):
    """Every formula of exactly `size` nodes, in a fixed deterministic order."""
    leaves: list[Formula] = [Prop(p) for p in props]
    if constants:
        leaves += [TRUE, FALSE]
    memo: dict[int, list[Formula]] = {}

    def of(n: int) -> list[Formula]:
        got = memo.get(n)
        if got is not None:
            return got
        out: list[Formula] = []
        if n == 1:
            out = list(leaves)
        else:
            for cls in unary:
                out.extend(cls(child) for child in of(n - 1))
            for cls in binary:
                for left_size in range(1, n - 1):
                    for left in of(left_size):
                        out.extend(cls(left, right) for right in of(n - 1 - left_size))
        memo[n] = out
        return out

    return of(size)


def violating_concretization(
    trace: SymbolicTrace, formula: Formula, props, max_unroll: int = 3
) -> ConcreteTrace | None:
    """Search every bounded concretization of `trace` for one falsifying
    `formula`; None means all of them satisfy it.

    For each unroll u <= max_unroll two families are enumerated, both with an
    independent letter choice at every template position: the period repeated
    u times as a longer period (recurrent counterexamples up to period u*n),
    and u-1 period copies absorbed into the prefix (transient ones).
    """
    choices = {
        c: satisfying_letters(c, props)
        for c in set(trace.prefix) | set(trace.period)
    }
    m, n = len(trace.prefix), len(trace.period)
    seen: set[tuple[int, int]] = set()
    for u in range(1, max_unroll + 1):
        for prefix_len, period_len in ((m, u * n), (m + (u - 1) * n, n)):
            if (prefix_len, period_len) in seen:
                continue
            seen.add((prefix_len, period_len))
            constraints = (list(trace.prefix) + list(trace.period) * u)[
                : prefix_len + period_len
            ]
            for letters in product(*(choices[c] for c in constraints)):
                candidate = ConcreteTrace(
                    letters[:prefix_len], letters[prefix_len:], tuple(props)
                )
                if not eval_concrete(formula, candidate):
                    return candidate
    return None


def is_valid_violation(witness: ConcreteTrace, trace: SymbolicTrace, formula: Formula) -> bool:
    """Does the checker's counterexample really lie in the trace's language
    and falsify the formula? Checked over one full position-alignment cycle."""
    from math import lcm

    from logicgen.sat import eval_prop

    m, n = len(trace.prefix), len(trace.period)
    wm, wn = len(witness.prefix), len(witness.period)
    letters = list(witness.prefix) + list(witness.period)
    constraints = list(trace.prefix) + list(trace.period)
    horizon = max(m, wm) + lcm(n, wn)
    for i in range(horizon):
        letter = letters[i] if i < wm + wn else letters[wm + (i - wm) % wn]
        constraint = constraints[i] if i < m + n else constraints[m + (i - m) % n]
        if not eval_prop(constraint, {p: p in letter for p in witness.props}):
            return False
    return not eval_concrete(formula, witness)
