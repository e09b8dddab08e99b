"""Propositional layer: CNF conversion, solving, cores, partial assignments.

The independent oracle here is exhaustive enumeration with numpy: a formula
over n propositions is evaluated on all 2**n rows at once, and every solver
claim is checked against that table.
"""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from logicgen.formulas import (
    And,
    FALSE,
    Iff,
    Implies,
    Not,
    Or,
    Prop,
    TRUE,
    Xor,
    parse_prop,
    props_of,
)
from logicgen.sat import (
    AssignmentError,
    PartialAssignment,
    check_partial_assignment,
    derive_partial_assignment,
    eval_prop,
    falsifying_completion,
    letters_bitset,
    minimal_unsat_core,
    parse_assignment,
    prop_satisfiable,
    sat_solve,
    satisfying_letters,
    solve_clauses,
    to_cnf,
)


def truth_column(formula, props):
    """Oracle: the formula's value on every assignment over `props`.

    Row i assigns props[j] = bit j of i. Evaluates the tree directly on
    numpy bool arrays, sharing no code with the CNF/DPLL path.
    """
    n = len(props)
    rows = np.arange(2**n, dtype=np.uint32)
    cols = {p: (rows >> j) & 1 == 1 for j, p in enumerate(props)}

    def ev(node):
        name = type(node).__name__
        if name == "Prop":
            return cols[node.name]
        if name == "TrueConst":
            return np.ones(2**n, dtype=bool)
        if name == "FalseConst":
            return np.zeros(2**n, dtype=bool)
        if name == "Not":
            return ~ev(node.child)
        left, right = ev(node.left), ev(node.right)
        if name == "And":
            return left & right
        if name == "Or":
            return left | right
        if name == "Implies":
            return ~left | right
        if name == "Iff":
            return left == right
        if name == "Xor":
            return left != right
        raise AssertionError(name)

    return ev(formula)


PROPS = ("a", "b", "c", "d", "e")


def prop_formulas(max_leaves=20):
    leaf = st.sampled_from([Prop(p) for p in PROPS] + [TRUE, FALSE])
    return st.recursive(
        leaf,
        lambda kids: st.one_of(
            st.builds(Not, kids),
            *[st.builds(cls, kids, kids) for cls in (And, Or, Implies, Iff, Xor)],
        ),
        max_leaves=max_leaves,
    )


def test_oracle_sanity():
    col = truth_column(parse_prop("&a!a"), PROPS)
    assert not col.any()
    col = truth_column(parse_prop("|a!a"), PROPS)
    assert col.all()
    # a <-> b holds on half of all rows.
    assert truth_column(parse_prop("<->ab"), PROPS).sum() == 2 ** (len(PROPS) - 1)


@given(prop_formulas())
def test_satisfiability_matches_enumeration(formula):
    expected = bool(truth_column(formula, PROPS).any())
    assert prop_satisfiable(formula) == expected
    res = sat_solve(to_cnf(formula))
    assert res.satisfiable == expected


@given(prop_formulas())
def test_models_satisfy_the_formula(formula):
    cnf = to_cnf(formula)
    res = sat_solve(cnf)
    if res.satisfiable:
        assert eval_prop(formula, res.model_names(cnf))


@given(prop_formulas(max_leaves=10), st.integers(0, 2 ** len(PROPS) - 1))
def test_cnf_projection_is_exact(formula, row):
    """Fixing every original variable to a row reproduces the truth table."""
    cnf = to_cnf(formula)
    valuation = {p: bool(row >> j & 1) for j, p in enumerate(PROPS)}
    assumptions = [
        var if valuation[name] else -var for name, var in cnf.var_of.items()
    ]
    res = sat_solve(cnf, assumptions)
    assert res.satisfiable == eval_prop(formula, valuation)


def test_solve_clauses_edges():
    assert solve_clauses([], 0).satisfiable
    assert not solve_clauses([()], 0).satisfiable
    res = solve_clauses([(1, 2), (-1, 2), (1, -2)], 2)
    assert res.satisfiable
    assert res.model == {1: True, 2: True}


def test_solve_is_deterministic():
    clauses = [(1, 2, 3), (-2, -3), (-1, 3)]
    first = solve_clauses(clauses, 3)
    for _ in range(5):
        assert solve_clauses(clauses, 3).model == first.model


def test_failed_assumptions_are_a_conflicting_subset():
    # x1 and x2 force x3 via (¬x1 ∨ ¬x2 ∨ x3); assuming ¬x3 as well conflicts.
    clauses = [(-1, -2, 3)]
    res = solve_clauses(clauses, 3, assumptions=[1, 2, -3])
    assert not res.satisfiable
    failed = list(res.failed_assumptions)
    assert set(failed) <= {1, 2, -3}
    assert not solve_clauses(clauses, 3, assumptions=failed).satisfiable


@given(prop_formulas(max_leaves=8), st.lists(st.sampled_from(PROPS), max_size=3))
def test_assumption_semantics(formula, assumed_true):
    cnf = to_cnf(formula)
    lits = [cnf.var_of[p] for p in assumed_true if p in cnf.var_of]
    res = sat_solve(cnf, lits)
    col = truth_column(formula, PROPS)
    rows = np.arange(2 ** len(PROPS), dtype=np.uint32)
    mask = np.ones_like(col)
    for p in assumed_true:
        if p in cnf.var_of:
            j = PROPS.index(p)
            mask &= (rows >> j) & 1 == 1
    assert res.satisfiable == bool((col & mask).any())


def test_minimal_unsat_core_on_satisfiable_input():
    with pytest.raises(ValueError):
        minimal_unsat_core([(1,), (2,)])


@given(
    st.lists(
        st.lists(
            st.integers(1, 4).flatmap(lambda v: st.sampled_from([v, -v])),
            min_size=1,
            max_size=3,
        ).map(tuple),
        min_size=1,
        max_size=12,
    )
)
def test_minimal_unsat_core_properties(clauses):
    n_vars = 4
    if solve_clauses(clauses, n_vars).satisfiable:
        return
    core = minimal_unsat_core(clauses)
    remaining = list(clauses)
    for c in core:
        remaining.remove(c)  # also proves the core is a sub-multiset
    assert not solve_clauses(core, n_vars).satisfiable
    for i in range(len(core)):
        assert solve_clauses(core[:i] + core[i + 1 :], n_vars).satisfiable


def test_parse_assignment():
    pa = parse_assignment("b0a1")
    assert pa.items == (("a", True), ("b", False))
    assert str(pa) == "a1b0"
    assert parse_assignment("") == PartialAssignment(())
    with pytest.raises(AssignmentError):
        parse_assignment("a1a0")
    with pytest.raises(AssignmentError):
        parse_assignment("a1b")
    # Without a declared supply any lowercase letter is a proposition;
    # passing one makes unknown names an error.
    assert parse_assignment("g1").items == (("g", True),)
    with pytest.raises(AssignmentError):
        parse_assignment("g1", props=("a", "b"))
    with pytest.raises(AssignmentError):
        parse_assignment("a1z0", props=("a",))


def test_partial_assignment_rejects_duplicates():
    with pytest.raises(AssignmentError):
        PartialAssignment((("a", True), ("a", False)))


def _universal(formula, assignment, props):
    """Oracle: does every completion of the assignment satisfy the formula?"""
    col = truth_column(formula, props)
    rows = np.arange(2 ** len(props), dtype=np.uint32)
    mask = np.ones_like(col)
    for name, value in assignment.items:
        j = props.index(name)
        bit = (rows >> j) & 1 == 1
        mask &= bit if value else ~bit
    return bool(col[mask].all())


@settings(max_examples=60)
@given(prop_formulas(max_leaves=12))
def test_derived_assignment_is_universal_and_minimal(formula):
    if not prop_satisfiable(formula):
        return
    pa = derive_partial_assignment(formula)
    assert _universal(formula, pa, PROPS)
    assert check_partial_assignment(formula, pa)
    for i in range(len(pa.items)):
        weaker = PartialAssignment(pa.items[:i] + pa.items[i + 1 :])
        assert not _universal(formula, weaker, PROPS)
        assert not check_partial_assignment(formula, weaker)


@given(
    prop_formulas(max_leaves=10),
    st.dictionaries(st.sampled_from(PROPS), st.booleans(), max_size=4),
)
def test_check_partial_assignment_matches_enumeration(formula, chosen):
    pa = PartialAssignment(tuple(sorted(chosen.items())))
    assert check_partial_assignment(formula, pa) == _universal(formula, pa, PROPS)


def test_derive_partial_assignment_deterministic():
    formula = parse_prop("&|ab|!bc")
    assert str(derive_partial_assignment(formula)) == str(derive_partial_assignment(formula))


def test_derive_on_unsatisfiable_formula():
    with pytest.raises(ValueError):
        derive_partial_assignment(parse_prop("&a!a"))


def test_derive_validates_prop_supply():
    with pytest.raises(AssignmentError):
        derive_partial_assignment(parse_prop("&ab"), props=("a",))


@given(prop_formulas(max_leaves=10))
def test_letters_bitset_matches_enumeration(formula):
    props = tuple(props_of(formula))
    col = truth_column(formula, props) if props else truth_column(formula, ("a",))[:1]
    bits = letters_bitset(formula, props)
    expected = 0
    for i, v in enumerate(col):
        if v:
            expected |= 1 << i
    assert bits == expected
    letters = satisfying_letters(formula, props)
    assert len(letters) == int(col.sum())
    for letter in letters:
        valuation = {p: p in letter for p in props}
        assert eval_prop(formula, valuation)


def test_eval_prop_fixture():
    # From a worked assignment example: a=0, b=0 satisfies this shape.
    formula = parse_prop("|&!a!b&cd")
    assert eval_prop(formula, {"a": False, "b": False, "c": False, "d": False})
    assert not eval_prop(formula, {"a": True, "b": False, "c": False, "d": True})


def test_falsifying_completion_agrees_with_check():
    formula = parse_prop("|b!&ad")
    good = parse_assignment("a0")
    bad = parse_assignment("a1")
    assert falsifying_completion(formula, good) is None
    witness = falsifying_completion(formula, bad)
    assert witness is not None
    assert dict(witness.items)["a"] is True
    assert not eval_prop(formula, dict(witness.items))
    # Props outside the formula survive into the completion unchanged.
    extra = falsifying_completion(parse_prop("a"), parse_assignment("e1"))
    assert dict(extra.items) == {"a": False, "e": True}
