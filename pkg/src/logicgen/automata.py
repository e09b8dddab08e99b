"""LTL to Büchi translation, emptiness, lasso extraction, containment.

The translation is a tableau: the formula goes to negation normal form
(until/release duals), then states are expanded on the fly as sets of
formulas split over disjunctive choices, giving a generalized automaton
with one acceptance set per until subformula. A counter construction
degeneralizes it. Containment of a symbolic trace in a formula's language
is emptiness of the product of the trace's lasso automaton with the
automaton of the negated formula.
"""

from __future__ import annotations

import time
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence

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
    print_prop,
    props_of,
)
from .sat import letters_bitset, sat_solve, to_cnf
from .traces import ConcreteTrace, SymbolicTrace

__all__ = [
    "BuchiAutomaton",
    "Transition",
    "ContainmentResult",
    "DeadlineExceeded",
    "ltl_to_nba",
    "is_satisfiable",
    "extract_accepting_lasso",
    "solve_ltl",
    "check_containment",
    "dump_automaton",
]


class DeadlineExceeded(Exception):
    """A translation/search step ran past its deadline."""


class _Deadline:
    """Wall-clock and/or step-count budget shared by translation and search.

    Step budgets make timeouts reproducible: a formula either always fits
    the budget or never does, independent of machine load. Wall-clock
    budgets are for interactive use.
    """

    __slots__ = ("at", "steps_left")

    def __init__(self, seconds: float | None, steps: int | None = None):
        self.at = None if seconds is None else time.monotonic() + seconds
        self.steps_left = steps

    def check(self) -> None:
        if self.steps_left is not None:
            self.steps_left -= 1
            if self.steps_left < 0:
                raise DeadlineExceeded
        if self.at is not None and time.monotonic() > self.at:
            raise DeadlineExceeded


# Rough desk-machine calibration for converting a wall-clock allowance into
# a deterministic step budget (one step per deadline check).
SOLVER_STEPS_PER_SECOND = 500_000


# --------------------------------------------------------------------------
# Negation normal form over interned nodes. Nodes are tuples; ids are ints
# assigned in creation order, so every run over the same formula produces
# the same automaton.

_TRUE = 0
_FALSE = 1


class _Intern:
    def __init__(self) -> None:
        self.nodes: list[tuple] = [("true",), ("false",)]
        self.ids: dict[tuple, int] = {("true",): _TRUE, ("false",): _FALSE}
        self.untils: list[int] = []

    def _get(self, node: tuple) -> int:
        got = self.ids.get(node)
        if got is None:
            got = len(self.nodes)
            self.nodes.append(node)
            self.ids[node] = got
            if node[0] == "until":
                self.untils.append(got)
        return got

    def lit(self, name: str, negated: bool) -> int:
        return self._get(("lit", name, negated))

    def conj(self, a: int, b: int) -> int:
        if a == _FALSE or b == _FALSE:
            return _FALSE
        if a == _TRUE:
            return b
        if b == _TRUE or a == b:
            return a
        if a > b:
            a, b = b, a
        return self._get(("and", a, b))

    def disj(self, a: int, b: int) -> int:
        if a == _TRUE or b == _TRUE:
            return _TRUE
        if a == _FALSE:
            return b
        if b == _FALSE or a == b:
            return a
        if a > b:
            a, b = b, a
        return self._get(("or", a, b))

    def nxt(self, a: int) -> int:
        if a in (_TRUE, _FALSE):
            return a
        return self._get(("next", a))

    def until(self, a: int, b: int) -> int:
        if b in (_TRUE, _FALSE) or a == b:
            return b
        if a == _FALSE:
            return b
        return self._get(("until", a, b))

    def release(self, a: int, b: int) -> int:
        if b in (_TRUE, _FALSE) or a == b:
            return b
        if a == _TRUE:
            return b
        return self._get(("release", a, b))

    def negated_lit(self, lit_id: int) -> int:
        _, name, negated = self.nodes[lit_id]
        return self.lit(name, not negated)


def _to_nnf(formula: Formula, negate: bool, it: _Intern) -> int:
    if isinstance(formula, Prop):
        return it.lit(formula.name, negate)
    if isinstance(formula, TrueConst):
        return _FALSE if negate else _TRUE
    if isinstance(formula, FalseConst):
        return _TRUE if negate else _FALSE
    if isinstance(formula, Not):
        return _to_nnf(formula.child, not negate, it)
    if isinstance(formula, And):
        l = _to_nnf(formula.left, negate, it)
        r = _to_nnf(formula.right, negate, it)
        return it.disj(l, r) if negate else it.conj(l, r)
    if isinstance(formula, Or):
        l = _to_nnf(formula.left, negate, it)
        r = _to_nnf(formula.right, negate, it)
        return it.conj(l, r) if negate else it.disj(l, r)
    if isinstance(formula, Implies):
        # l > r == !l | r; negated: l & !r.
        l = _to_nnf(formula.left, not negate, it)
        r = _to_nnf(formula.right, negate, it)
        return it.conj(l, r) if negate else it.disj(l, r)
    if isinstance(formula, Next):
        return it.nxt(_to_nnf(formula.child, negate, it))
    if isinstance(formula, Until):
        l = _to_nnf(formula.left, negate, it)
        r = _to_nnf(formula.right, negate, it)
        return it.release(l, r) if negate else it.until(l, r)
    if isinstance(formula, WeakUntil):
        # l W r == r R (r | l); negated: !r U (!r & !l).
        if negate:
            nl = _to_nnf(formula.left, True, it)
            nr = _to_nnf(formula.right, True, it)
            return it.until(nr, it.conj(nr, nl))
        l = _to_nnf(formula.left, False, it)
        r = _to_nnf(formula.right, False, it)
        return it.release(r, it.disj(r, l))
    if isinstance(formula, Eventually):
        c = _to_nnf(formula.child, negate, it)
        return it.release(_FALSE, c) if negate else it.until(_TRUE, c)
    if isinstance(formula, Globally):
        c = _to_nnf(formula.child, negate, it)
        return it.until(_TRUE, c) if negate else it.release(_FALSE, c)
    raise ValueError(f"{type(formula).__name__} is not in the temporal grammar")


# --------------------------------------------------------------------------
# Tableau expansion: states are (processed, obligations-for-next) pairs of
# interned formula sets. Disjunctive nodes split the work node in two;
# contradictory literals kill a branch.

_INIT = -1


@dataclass
class _Gba:
    n_states: int
    # incoming[t] holds the sources s with an edge s -> t (or _INIT).
    incoming: list[set[int]]
    old: list[frozenset[int]]
    acc_sets: list[frozenset[int]]
    labels: list[list[tuple[str, bool]]]  # per state: sorted (prop, value) literals

    def initial(self) -> list[int]:
        return [s for s in range(self.n_states) if _INIT in self.incoming[s]]

    def successors(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(self.n_states)]
        for t in range(self.n_states):
            for s in sorted(self.incoming[t]):
                if s != _INIT:
                    out[s].append(t)
        return out


def _tableau(root: int, it: _Intern, deadline: _Deadline) -> _Gba:
    key_of: dict[tuple[frozenset[int], frozenset[int]], int] = {}
    old_sets: list[frozenset[int]] = []
    next_sets: list[frozenset[int]] = []
    incoming: list[set[int]] = []

    # Work node: [incoming, new, old, next], all sets.
    stack: list[list[set[int]]] = [[{_INIT}, {root}, set(), set()]]
    while stack:
        deadline.check()
        inc, new, old, nxt = stack.pop()
        if not new:
            key = (frozenset(old), frozenset(nxt))
            idx = key_of.get(key)
            if idx is not None:
                incoming[idx] |= inc
                continue
            idx = len(old_sets)
            key_of[key] = idx
            old_sets.append(key[0])
            next_sets.append(key[1])
            incoming.append(set(inc))
            stack.append([{idx}, set(nxt), set(), set()])
            continue

        f = min(new)
        new.discard(f)
        node = it.nodes[f]
        kind = node[0]
        if kind == "false":
            continue  # inconsistent: drop this branch
        if kind == "true":
            stack.append([inc, new, old, nxt])
            continue
        if kind == "lit":
            if it.negated_lit(f) in old:
                continue
            old.add(f)
            stack.append([inc, new, old, nxt])
            continue

        old.add(f)
        if kind == "and":
            for child in node[1:]:
                if child not in old:
                    new.add(child)
            stack.append([inc, new, old, nxt])
        elif kind == "next":
            nxt.add(node[1])
            stack.append([inc, new, old, nxt])
        else:
            left, right = node[1], node[2]
            branch = [set(inc), set(new), set(old), set(nxt)]
            if kind == "or":
                if right not in old:
                    branch[1].add(right)
                if left not in old:
                    new.add(left)
            elif kind == "until":
                # Either the promise is kept later (carry the until) or the
                # right side holds now.
                if right not in old:
                    branch[1].add(right)
                if left not in old:
                    new.add(left)
                nxt.add(f)
            elif kind == "release":
                # right holds now; either left releases now or the release
                # carries over.
                if left not in old:
                    branch[1].add(left)
                if right not in old:
                    branch[1].add(right)
                    new.add(right)
                nxt.add(f)
            else:
                raise AssertionError(f"unexpected node kind {kind!r}")
            stack.append(branch)
            stack.append([inc, new, old, nxt])

    n = len(old_sets)
    acc_sets = []
    for u in it.untils:
        right = it.nodes[u][2]
        acc_sets.append(
            frozenset(s for s in range(n) if u not in old_sets[s] or right in old_sets[s])
        )
    labels = []
    for s in range(n):
        lits = sorted(
            (it.nodes[f][1], not it.nodes[f][2])
            for f in old_sets[s]
            if it.nodes[f][0] == "lit"
        )
        labels.append(lits)
    return _Gba(n, incoming, old_sets, acc_sets, labels)


# --------------------------------------------------------------------------
# Degeneralization and the public automaton type.


@dataclass(frozen=True)
class Transition:
    src: int
    guard: Formula
    dst: int
    # The guard is always a conjunction of literals, also kept as pairs.
    lits: tuple[tuple[str, bool], ...]


@dataclass(frozen=True)
class BuchiAutomaton:
    """Degeneralized automaton; state 0 is the sole initial state and has no
    incoming transitions. Every guard is satisfiable by construction."""

    n_states: int
    transitions: tuple[Transition, ...]
    acc_sets: tuple[frozenset[int], ...]
    props: tuple[str, ...]

    @property
    def accepting(self) -> frozenset[int]:
        if len(self.acc_sets) != 1:
            raise ValueError("expected a degeneralized automaton with one acceptance set")
        return self.acc_sets[0]

    def adjacency(self) -> list[list[tuple[int, int]]]:
        """Per state: (target, transition index) in transition order."""
        out: list[list[tuple[int, int]]] = [[] for _ in range(self.n_states)]
        for i, t in enumerate(self.transitions):
            out[t.src].append((t.dst, i))
        return out


def _guard_formula(lits: Sequence[tuple[str, bool]]) -> Formula:
    if not lits:
        return TrueConst()
    acc: Formula | None = None
    for name, value in lits:
        lit: Formula = Prop(name) if value else Not(Prop(name))
        acc = lit if acc is None else And(acc, lit)
    return acc


def _degeneralize(gba: _Gba, props: Sequence[str], deadline: _Deadline) -> BuchiAutomaton:
    sets = gba.acc_sets or [frozenset(range(gba.n_states))]
    k = len(sets)
    succ = gba.successors()
    guards = [_guard_formula(l) for l in gba.labels]
    lit_tuples = [tuple(l) for l in gba.labels]

    ids: dict[tuple[int, int], int] = {}
    transitions: list[Transition] = []
    accepting: set[int] = set()
    queue: deque[tuple[int, int]] = deque()

    def state_id(q: int, i: int) -> int:
        got = ids.get((q, i))
        if got is None:
            got = len(ids) + 1  # 0 is reserved for the initial state
            ids[(q, i)] = got
            if i == 0 and q in sets[0]:
                accepting.add(got)
            queue.append((q, i))
        return got

    for q in gba.initial():
        transitions.append(Transition(0, guards[q], state_id(q, 0), lit_tuples[q]))
    while queue:
        deadline.check()
        q, i = queue.popleft()
        src = ids[(q, i)]
        j = (i + 1) % k if q in sets[i] else i
        for q2 in succ[q]:
            transitions.append(Transition(src, guards[q2], state_id(q2, j), lit_tuples[q2]))

    return BuchiAutomaton(
        n_states=len(ids) + 1,
        transitions=tuple(transitions),
        acc_sets=(frozenset(accepting),),
        props=tuple(props),
    )


def ltl_to_nba(
    formula: Formula,
    props: Sequence[str] | None = None,
    timeout_s: float | None = None,
    step_limit: int | None = None,
) -> BuchiAutomaton:
    """Translate a temporal formula into a Büchi automaton accepting exactly
    the words that satisfy it."""
    deadline = _Deadline(timeout_s, step_limit)
    names = tuple(sorted(props_of(formula))) if props is None else tuple(props)
    return _translate(formula, names, deadline)


def _translate(formula: Formula, props: tuple[str, ...], deadline: _Deadline) -> BuchiAutomaton:
    it = _Intern()
    root = _to_nnf(formula, False, it)
    if root == _FALSE:
        return BuchiAutomaton(1, (), (frozenset(),), props)
    gba = _tableau(root, it, deadline)
    return _degeneralize(gba, props, deadline)


# --------------------------------------------------------------------------
# Emptiness and lasso extraction.


def _strong_components(n: int, adj: list[list[tuple[int, int]]], order: Iterable[int]) -> list[int]:
    """Iterative Tarjan; returns a component id per state (-1 if unvisited)."""
    index = [-1] * n
    lowlink = [0] * n
    on_stack = [False] * n
    comp = [-1] * n
    stack: list[int] = []
    counter = 0
    n_comp = 0
    for root in order:
        if index[root] >= 0:
            continue
        work: list[tuple[int, int]] = [(root, 0)]
        while work:
            v, edge_pos = work[-1]
            if edge_pos == 0:
                index[v] = lowlink[v] = counter
                counter += 1
                stack.append(v)
                on_stack[v] = True
            descended = False
            for i in range(edge_pos, len(adj[v])):
                w = adj[v][i][0]
                if index[w] < 0:
                    work[-1] = (v, i + 1)
                    work.append((w, 0))
                    descended = True
                    break
                if on_stack[w]:
                    lowlink[v] = min(lowlink[v], index[w])
            if descended:
                continue
            work.pop()
            if lowlink[v] == index[v]:
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp[w] = n_comp
                    if w == v:
                        break
                n_comp += 1
            if work:
                parent = work[-1][0]
                lowlink[parent] = min(lowlink[parent], lowlink[v])
    return comp


def _find_accepting_lasso(
    n: int,
    adj: list[list[tuple[int, int]]],
    initial: Sequence[int],
    accepting: frozenset[int] | set[int],
    deadline: _Deadline,
) -> tuple[list[int], list[int]] | None:
    """Shortest accepting cycle (ties by state id) plus a shortest access
    path; returns (path edge indices, cycle edge indices) or None if empty."""
    parent: dict[int, tuple[int, int] | None] = {s: None for s in initial}
    frontier = deque(initial)
    order = list(initial)
    while frontier:
        deadline.check()
        v = frontier.popleft()
        for w, e in adj[v]:
            if w not in parent:
                parent[w] = (v, e)
                order.append(w)
                frontier.append(w)

    comp = _strong_components(n, adj, order)

    def cycle_from(anchor: int) -> list[int] | None:
        c = comp[anchor]
        seen: dict[int, tuple[int, int] | None] = {anchor: None}
        queue = deque([anchor])
        while queue:
            v = queue.popleft()
            for w, e in adj[v]:
                if comp[w] != c:
                    continue
                if w == anchor:
                    edges = [e]
                    while v != anchor:
                        pv, pe = seen[v]  # type: ignore[misc]
                        edges.append(pe)
                        v = pv
                    edges.reverse()
                    return edges
                if w not in seen:
                    seen[w] = (v, e)
                    queue.append(w)
        return None

    best: tuple[int, int, list[int]] | None = None
    for anchor in sorted(a for a in parent if a in accepting):
        deadline.check()
        cycle = cycle_from(anchor)
        if cycle is None:
            continue
        if best is None or (len(cycle), anchor) < (best[0], best[1]):
            best = (len(cycle), anchor, cycle)
    if best is None:
        return None

    _, anchor, cycle = best
    path: list[int] = []
    v = anchor
    while parent[v] is not None:
        pv, pe = parent[v]  # type: ignore[misc]
        path.append(pe)
        v = pv
    path.reverse()
    return path, cycle


def is_satisfiable(
    formula: Formula,
    props: Sequence[str] | None = None,
    timeout_s: float | None = None,
    step_limit: int | None = None,
) -> bool:
    return solve_ltl(formula, props, timeout_s, step_limit) is not None


def _extract_lasso(automaton: BuchiAutomaton, deadline: _Deadline) -> SymbolicTrace | None:
    adj = automaton.adjacency()
    found = _find_accepting_lasso(
        automaton.n_states, adj, [0], automaton.accepting, deadline
    )
    if found is None:
        return None
    path, cycle = found
    prefix = tuple(automaton.transitions[e].guard for e in path)
    period = tuple(automaton.transitions[e].guard for e in cycle)
    return SymbolicTrace(prefix, period)


def extract_accepting_lasso(automaton: BuchiAutomaton) -> SymbolicTrace | None:
    """A symbolic trace accepted by the automaton, or None when its language
    is empty. Position constraints are the guards along the run."""
    return _extract_lasso(automaton, _Deadline(None))


def solve_ltl(
    formula: Formula,
    props: Sequence[str] | None = None,
    timeout_s: float | None = None,
    step_limit: int | None = None,
) -> SymbolicTrace | None:
    """A satisfying symbolic trace, or None when the formula is
    unsatisfiable. Raises DeadlineExceeded past the timeout.

    Translation and lasso search share one deadline; a step budget makes
    the outcome machine-independent.
    """
    deadline = _Deadline(timeout_s, step_limit)
    names = tuple(sorted(props_of(formula))) if props is None else tuple(props)
    return _extract_lasso(_translate(formula, names, deadline), deadline)


# --------------------------------------------------------------------------
# Containment of a symbolic trace in a formula's language.


@dataclass(frozen=True)
class ContainmentResult:
    holds: bool
    # On violation: a concrete trace allowed by the symbolic trace but
    # falsifying the formula.
    witness: ConcreteTrace | None = None

    @property
    def violated(self) -> bool:
        return not self.holds


def _letter_of_bits(bits: int) -> int:
    return (bits & -bits).bit_length() - 1


def check_containment(
    trace: SymbolicTrace,
    formula: Formula,
    props: Sequence[str] | None = None,
    timeout_s: float | None = None,
    step_limit: int | None = None,
) -> ContainmentResult:
    """Does every concrete word allowed by `trace` satisfy `formula`?

    Decided by emptiness of the product of the trace's lasso automaton with
    the automaton of the negated formula; a non-empty product yields a
    concrete counterexample.
    """
    deadline = _Deadline(timeout_s, step_limit)
    constraints = list(trace.prefix) + list(trace.period)
    if props is None:
        names = set(props_of(formula))
        for c in constraints:
            names.update(props_of(c))
        props = sorted(names)
    props = tuple(props)
    nba = _translate(Not(formula), props, deadline)

    m = len(trace.prefix)
    total = len(constraints)
    nba_adj = nba.adjacency()

    # Product states are (trace position, automaton state); an edge exists
    # when some letter satisfies both the position constraint and the guard.
    if len(props) <= 16:
        cons_bits = [letters_bitset(c, props) for c in constraints]
        guard_bits: list[int] = []
        all_mask = (1 << (1 << len(props))) - 1
        base = [letters_bitset(Prop(p), props) for p in props]
        prop_index = {p: i for i, p in enumerate(props)}
        for t in nba.transitions:
            g = all_mask
            for name, value in t.lits:
                b = base[prop_index[name]]
                g &= b if value else (all_mask ^ b)
            guard_bits.append(g)

        def edge_letter(pos: int, tidx: int) -> int | None:
            bits = cons_bits[pos] & guard_bits[tidx]
            if not bits:
                return None
            return _letter_of_bits(bits)

    else:
        cons_cnf = [to_cnf(c) for c in constraints]

        def edge_letter(pos: int, tidx: int) -> int | None:
            cnf = cons_cnf[pos]
            lits = nba.transitions[tidx].lits
            assumptions = []
            extra: dict[str, bool] = {}
            for name, value in lits:
                var = cnf.var_of.get(name)
                if var is None:
                    extra[name] = value
                else:
                    assumptions.append(var if value else -var)
            res = sat_solve(cnf, assumptions)
            if not res.satisfiable:
                return None
            named = res.model_names(cnf)
            named.update(extra)
            letter = 0
            for i, p in enumerate(props):
                if named.get(p, False):
                    letter |= 1 << i
            return letter

    ids: dict[tuple[int, int], int] = {}
    adj: list[list[tuple[int, int]]] = []
    letters: list[int] = []
    accepting: set[int] = set()
    acc_states = nba.accepting

    def product_id(pos: int, q: int) -> int:
        got = ids.get((pos, q))
        if got is None:
            got = len(ids)
            ids[(pos, q)] = got
            adj.append([])
            if q in acc_states:
                accepting.add(got)
            queue.append((pos, q))
        return got

    queue: deque[tuple[int, int]] = deque()
    start = product_id(0, 0)
    while queue:
        deadline.check()
        pos, q = queue.popleft()
        src = ids[(pos, q)]
        nxt_pos = m if pos == total - 1 else pos + 1
        for q2, tidx in nba_adj[q]:
            letter = edge_letter(pos, tidx)
            if letter is None:
                continue
            adj[src].append((product_id(nxt_pos, q2), len(letters)))
            letters.append(letter)

    found = _find_accepting_lasso(len(ids), adj, [start], accepting, deadline)
    if found is None:
        return ContainmentResult(True)
    path, cycle = found

    def to_letter_set(e: int) -> frozenset[str]:
        letter = letters[e]
        return frozenset(p for i, p in enumerate(props) if letter >> i & 1)

    witness = ConcreteTrace(
        tuple(to_letter_set(e) for e in path),
        tuple(to_letter_set(e) for e in cycle),
        props,
    )
    return ContainmentResult(False, witness)


def dump_automaton(automaton: BuchiAutomaton) -> str:
    """Debug rendering, one line per state and transition. No compatibility
    promises."""
    lines = []
    acc = automaton.accepting
    for s in range(automaton.n_states):
        tags = [t for t, on in (("initial", s == 0), ("accepting", s in acc)) if on]
        lines.append(f"state {s}" + (f" ({', '.join(tags)})" if tags else ""))
    for t in automaton.transitions:
        lines.append(f"  {t.src} --[{print_prop(t.guard)}]--> {t.dst}")
    return "\n".join(lines)
