"""Propositional reasoning: CNF conversion, a DPLL solver, unsat cores,
and universally-satisfying partial assignments.

Literals are signed integers (DIMACS convention), clauses are tuples of
literals. `to_cnf` is a definitional (Tseitin-style) transformation: the
result is equisatisfiable, and its models restricted to the original
propositions are exactly the models of the source formula.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .formulas import (
    FALSE,
    TRUE,
    And,
    FalseConst,
    Formula,
    Iff,
    Implies,
    Not,
    Or,
    Prop,
    TrueConst,
    Xor,
    props_of,
)

__all__ = [
    "Clause",
    "Cnf",
    "SatResult",
    "to_cnf",
    "sat_solve",
    "solve_clauses",
    "minimal_unsat_core",
    "PartialAssignment",
    "AssignmentError",
    "parse_assignment",
    "derive_partial_assignment",
    "check_partial_assignment",
    "falsifying_completion",
    "eval_prop",
    "prop_satisfiable",
    "letters_bitset",
    "satisfying_letters",
]

Clause = tuple[int, ...]


@dataclass
class Cnf:
    """Clause set over variables 1..n_vars; `var_of` maps the original
    propositions, auxiliary definition variables take the higher indices."""

    clauses: list[Clause]
    var_of: dict[str, int]
    n_vars: int

    def name_of(self) -> dict[int, str]:
        return {v: n for n, v in self.var_of.items()}


@dataclass
class SatResult:
    satisfiable: bool
    # Total assignment over 1..n_vars when satisfiable.
    model: dict[int, bool] | None = None
    # On UNSAT under assumptions: a subset of them sufficient for the conflict.
    failed_assumptions: tuple[int, ...] = ()

    def model_names(self, cnf: Cnf) -> dict[str, bool]:
        """The model restricted to the original propositions."""
        if self.model is None:
            raise ValueError("no model: result is unsatisfiable")
        return {name: self.model[var] for name, var in cnf.var_of.items()}


def _fold(node: Formula) -> Formula:
    """Constant folding; the result contains no 0/1 nodes unless it is one."""
    if isinstance(node, (Prop, TrueConst, FalseConst)):
        return node
    if isinstance(node, Not):
        child = _fold(node.child)
        if isinstance(child, TrueConst):
            return FALSE
        if isinstance(child, FalseConst):
            return TRUE
        return Not(child)
    left = _fold(node.left)  # type: ignore[attr-defined]
    right = _fold(node.right)  # type: ignore[attr-defined]
    if isinstance(node, And):
        if isinstance(left, FalseConst) or isinstance(right, FalseConst):
            return FALSE
        if isinstance(left, TrueConst):
            return right
        if isinstance(right, TrueConst):
            return left
        return And(left, right)
    if isinstance(node, Or):
        if isinstance(left, TrueConst) or isinstance(right, TrueConst):
            return TRUE
        if isinstance(left, FalseConst):
            return right
        if isinstance(right, FalseConst):
            return left
        return Or(left, right)
    if isinstance(node, Implies):
        if isinstance(left, FalseConst) or isinstance(right, TrueConst):
            return TRUE
        if isinstance(left, TrueConst):
            return right
        if isinstance(right, FalseConst):
            return _fold(Not(left))
        return Implies(left, right)
    if isinstance(node, Iff):
        if isinstance(left, TrueConst):
            return right
        if isinstance(right, TrueConst):
            return left
        if isinstance(left, FalseConst):
            return _fold(Not(right))
        if isinstance(right, FalseConst):
            return _fold(Not(left))
        return Iff(left, right)
    if isinstance(node, Xor):
        if isinstance(left, FalseConst):
            return right
        if isinstance(right, FalseConst):
            return left
        if isinstance(left, TrueConst):
            return _fold(Not(right))
        if isinstance(right, TrueConst):
            return _fold(Not(left))
        return Xor(left, right)
    raise ValueError(f"{type(node).__name__} is not in the propositional grammar")


def to_cnf(formula: Formula) -> Cnf:
    """Definitional CNF. Every proposition of `formula` gets a variable even
    when constant folding removes it, so assumption literals stay valid."""
    var_of = {name: i + 1 for i, name in enumerate(props_of(formula))}
    n_next = len(var_of) + 1
    folded = _fold(formula)
    if isinstance(folded, TrueConst):
        return Cnf([], var_of, len(var_of))
    if isinstance(folded, FalseConst):
        return Cnf([()], var_of, len(var_of))

    clauses: list[Clause] = []
    memo: dict[Formula, int] = {}

    def lit(node: Formula) -> int:
        nonlocal n_next
        if isinstance(node, Prop):
            return var_of[node.name]
        if isinstance(node, Not):
            return -lit(node.child)
        got = memo.get(node)
        if got is not None:
            return got
        a = lit(node.left)  # type: ignore[attr-defined]
        b = lit(node.right)  # type: ignore[attr-defined]
        v = n_next
        n_next += 1
        if isinstance(node, And):
            clauses.extend([(-v, a), (-v, b), (v, -a, -b)])
        elif isinstance(node, Or):
            clauses.extend([(-v, a, b), (v, -a), (v, -b)])
        elif isinstance(node, Implies):
            clauses.extend([(-v, -a, b), (v, a), (v, -b)])
        elif isinstance(node, Iff):
            clauses.extend([(-v, -a, b), (-v, a, -b), (v, a, b), (v, -a, -b)])
        elif isinstance(node, Xor):
            clauses.extend([(-v, a, b), (-v, -a, -b), (v, -a, b), (v, a, -b)])
        else:
            raise ValueError(f"{type(node).__name__} is not in the propositional grammar")
        memo[node] = v
        return v

    root = lit(folded)
    clauses.append((root,))
    return Cnf(clauses, var_of, n_next - 1)


def solve_clauses(
    clauses: Sequence[Clause],
    n_vars: int,
    assumptions: Sequence[int] = (),
) -> SatResult:
    """DPLL with unit propagation over raw clauses.

    Deterministic: decisions take the smallest unassigned variable, trying
    True first. Unassigned variables in a satisfying search state default to
    False so the reported model is always total.
    """
    for lit in assumptions:
        n_vars = max(n_vars, abs(lit))
    assign: list[bool | None] = [None] * (n_vars + 1)

    if any(not clause for clause in clauses):
        return SatResult(False, failed_assumptions=())

    trail: list[int] = []

    def set_lit(lit: int) -> bool:
        var, val = abs(lit), lit > 0
        cur = assign[var]
        if cur is not None:
            return cur == val
        assign[var] = val
        trail.append(var)
        return True

    def propagate() -> bool:
        # Scan until fixpoint; clause sets here are small enough that the
        # simple quadratic loop beats watchlist bookkeeping.
        changed = True
        while changed:
            changed = False
            for clause in clauses:
                unassigned = 0
                last = 0
                satisfied = False
                for lit in clause:
                    val = assign[abs(lit)]
                    if val is None:
                        unassigned += 1
                        last = lit
                    elif val == (lit > 0):
                        satisfied = True
                        break
                if satisfied:
                    continue
                if unassigned == 0:
                    return False
                if unassigned == 1:
                    set_lit(last)
                    changed = True
        return True

    def backtrack(mark: int) -> None:
        while len(trail) > mark:
            assign[trail.pop()] = None

    for i, lit in enumerate(assumptions):
        if not set_lit(lit) or not propagate():
            return SatResult(False, failed_assumptions=tuple(assumptions[: i + 1]))

    def search() -> bool:
        if not propagate():
            return False
        try:
            var = next(v for v in range(1, n_vars + 1) if assign[v] is None)
        except StopIteration:
            return True
        for val in (True, False):
            mark = len(trail)
            assign[var] = val
            trail.append(var)
            if search():
                return True
            backtrack(mark)
        return False

    if search():
        model = {v: bool(assign[v]) for v in range(1, n_vars + 1)}
        return SatResult(True, model=model)
    return SatResult(False, failed_assumptions=tuple(assumptions))


def sat_solve(cnf: Cnf, assumptions: Sequence[int] = ()) -> SatResult:
    return solve_clauses(cnf.clauses, cnf.n_vars, assumptions)


def minimal_unsat_core(clauses: Sequence[Clause]) -> list[Clause]:
    """Deletion-based shrink to a minimal unsatisfiable clause subset.

    Each clause of the input is tentatively dropped; it is kept only when the
    remainder turns satisfiable without it. The result is subset-minimal
    (dropping any single kept clause makes it satisfiable), not guaranteed
    minimum-cardinality.
    """
    n_vars = max((abs(l) for c in clauses for l in c), default=0)
    if solve_clauses(clauses, n_vars).satisfiable:
        raise ValueError("clause set is satisfiable: no unsat core exists")
    rest = list(clauses)
    kept: list[Clause] = []
    while rest:
        candidate = rest.pop(0)
        if not solve_clauses(kept + rest, n_vars).satisfiable:
            continue  # still unsat without it: drop for good
        kept.append(candidate)
    return kept


class AssignmentError(ValueError):
    """Malformed assignment text or unknown proposition."""


@dataclass(frozen=True)
class PartialAssignment:
    """A consistent set of (proposition, value) pairs, kept sorted by name."""

    items: tuple[tuple[str, bool], ...]

    def __post_init__(self) -> None:
        names = [n for n, _ in self.items]
        if names != sorted(names) or len(set(names)) != len(names):
            raise AssignmentError("assignment must be sorted and duplicate-free")

    def as_dict(self) -> dict[str, bool]:
        return dict(self.items)

    def __str__(self) -> str:
        return "".join(f"{name}{'1' if value else '0'}" for name, value in self.items)


def parse_assignment(text: str, props: Sequence[str] | None = None) -> PartialAssignment:
    """Parse `<prop><0|1>` pairs. Any pair order is accepted (printing is
    always alphabetical); duplicates and undeclared propositions are not."""
    names = sorted(props, key=len, reverse=True) if props is not None else None
    seen: dict[str, bool] = {}
    i = 0
    while i < len(text):
        name = None
        if names is None:
            if text[i].isalpha() and text[i].islower():
                name = text[i]
        else:
            name = next((n for n in names if text.startswith(n, i)), None)
        if name is None:
            raise AssignmentError(f"expected a proposition at position {i} in {text!r}")
        i += len(name)
        if i >= len(text) or text[i] not in "01":
            raise AssignmentError(f"expected 0 or 1 after {name!r} at position {i} in {text!r}")
        if name in seen:
            raise AssignmentError(f"duplicate proposition {name!r} in {text!r}")
        seen[name] = text[i] == "1"
        i += 1
    return PartialAssignment(tuple(sorted(seen.items())))


def _assumption_lits(cnf: Cnf, pairs: Iterable[tuple[str, bool]]) -> list[int]:
    lits = []
    for name, value in pairs:
        var = cnf.var_of.get(name)
        if var is None:
            # The proposition does not occur in the formula, so it cannot
            # constrain satisfiability either way.
            continue
        lits.append(var if value else -var)
    return lits


def derive_partial_assignment(
    formula: Formula, props: Sequence[str] | None = None
) -> PartialAssignment:
    """A minimal partial assignment forcing `formula` true under every
    completion.

    Finds a total model, replays it as assumptions against the negated
    formula (necessarily unsatisfiable), then shrinks the failed assumptions
    deletion-style. Subset-minimal, deterministic.
    """
    if props is not None:
        unknown = set(props_of(formula)) - set(props)
        if unknown:
            raise AssignmentError(f"formula uses undeclared propositions: {sorted(unknown)}")
    pos_cnf = to_cnf(formula)
    res = sat_solve(pos_cnf)
    if not res.satisfiable:
        raise ValueError("formula is unsatisfiable: no satisfying assignment exists")
    model = sorted(res.model_names(pos_cnf).items())

    neg_cnf = to_cnf(Not(formula))
    assumptions = _assumption_lits(neg_cnf, model)
    blocked = sat_solve(neg_cnf, assumptions)
    if blocked.satisfiable:
        raise AssertionError("negated formula satisfiable under a model of the formula")

    core = list(blocked.failed_assumptions)
    kept: list[int] = []
    while core:
        lit = core.pop(0)
        if not sat_solve(neg_cnf, kept + core).satisfiable:
            continue
        kept.append(lit)
    names = neg_cnf.name_of()
    return PartialAssignment(tuple(sorted((names[abs(l)], l > 0) for l in kept)))


def check_partial_assignment(
    formula: Formula,
    assignment: PartialAssignment,
    props: Sequence[str] | None = None,
) -> bool:
    """True iff every completion of `assignment` satisfies `formula`."""
    if props is not None:
        declared = set(props)
        unknown = {n for n, _ in assignment.items} - declared
        if unknown:
            raise AssignmentError(f"assignment mentions unknown propositions: {sorted(unknown)}")
        undeclared = set(props_of(formula)) - declared
        if undeclared:
            raise AssignmentError(f"formula uses undeclared propositions: {sorted(undeclared)}")
    neg_cnf = to_cnf(Not(formula))
    return not sat_solve(neg_cnf, _assumption_lits(neg_cnf, assignment.items)).satisfiable


def falsifying_completion(
    formula: Formula, assignment: PartialAssignment
) -> PartialAssignment | None:
    """A completion of `assignment` falsifying `formula`, or None when every
    completion satisfies it; the witness side of check_partial_assignment."""
    neg_cnf = to_cnf(Not(formula))
    res = sat_solve(neg_cnf, _assumption_lits(neg_cnf, assignment.items))
    if not res.satisfiable:
        return None
    items = res.model_names(neg_cnf)
    for name, value in assignment.items:
        items.setdefault(name, value)
    return PartialAssignment(tuple(sorted(items.items())))


def eval_prop(formula: Formula, valuation: Mapping[str, bool]) -> bool:
    """Evaluate a propositional formula under a total valuation."""
    if isinstance(formula, Prop):
        try:
            return valuation[formula.name]
        except KeyError:
            raise AssignmentError(f"unknown proposition {formula.name!r}") from None
    if isinstance(formula, TrueConst):
        return True
    if isinstance(formula, FalseConst):
        return False
    if isinstance(formula, Not):
        return not eval_prop(formula.child, valuation)
    if isinstance(formula, And):
        return eval_prop(formula.left, valuation) and eval_prop(formula.right, valuation)
    if isinstance(formula, Or):
        return eval_prop(formula.left, valuation) or eval_prop(formula.right, valuation)
    if isinstance(formula, Implies):
        return (not eval_prop(formula.left, valuation)) or eval_prop(formula.right, valuation)
    if isinstance(formula, Iff):
        return eval_prop(formula.left, valuation) == eval_prop(formula.right, valuation)
    if isinstance(formula, Xor):
        return eval_prop(formula.left, valuation) != eval_prop(formula.right, valuation)
    raise ValueError(f"{type(formula).__name__} is not in the propositional grammar")


def prop_satisfiable(formula: Formula) -> bool:
    return sat_solve(to_cnf(formula)).satisfiable


def letters_bitset(formula: Formula, props: Sequence[str]) -> int:
    """Bitset over all 2^k letters: bit L is set iff the letter with
    characteristic number L satisfies the constraint. Bit i of L gives the
    value of props[i]. Intended for small k (automaton products)."""
    k = len(props)
    count = 1 << k
    all_mask = (1 << count) - 1
    base: dict[str, int] = {}
    for i, name in enumerate(props):
        m = 0
        for letter in range(count):
            if letter >> i & 1:
                m |= 1 << letter
        base[name] = m

    def go(node: Formula) -> int:
        if isinstance(node, Prop):
            try:
                return base[node.name]
            except KeyError:
                raise AssignmentError(f"unknown proposition {node.name!r}") from None
        if isinstance(node, TrueConst):
            return all_mask
        if isinstance(node, FalseConst):
            return 0
        if isinstance(node, Not):
            return all_mask ^ go(node.child)
        if isinstance(node, And):
            return go(node.left) & go(node.right)
        if isinstance(node, Or):
            return go(node.left) | go(node.right)
        if isinstance(node, Implies):
            return (all_mask ^ go(node.left)) | go(node.right)
        if isinstance(node, Iff):
            return all_mask ^ go(node.left) ^ go(node.right)
        if isinstance(node, Xor):
            return go(node.left) ^ go(node.right)
        raise ValueError(f"{type(node).__name__} is not in the propositional grammar")

    return go(formula)


def satisfying_letters(formula: Formula, props: Sequence[str]) -> list[frozenset[str]]:
    """All letters (subsets of `props`) satisfying the constraint, in a
    fixed characteristic-number order."""
    bits = letters_bitset(formula, props)
    out = []
    for letter in range(1 << len(props)):
        if bits >> letter & 1:
            out.append(frozenset(p for i, p in enumerate(props) if letter >> i & 1))
    return out
