"""Trace wire format, token accounting and concretization sampling."""

import pytest
from hypothesis import given, strategies as st

from logicgen.formulas import parse_prop
from logicgen.sat import eval_prop
from logicgen.traces import (
    ConcreteTrace,
    SymbolicTrace,
    TraceError,
    concrete_to_symbolic,
    parse_trace,
    print_trace,
    sample_concretization,
    trace_token_count,
)

ROUND_TRIPS = ["{1}", "a;{b}", "&ab;!c;{|ab;!a}", "{a;b;c}", "1;{&a&bc}"]


@pytest.mark.parametrize("text", ROUND_TRIPS)
def test_parse_print_round_trip(text):
    assert print_trace(parse_trace(text)) == text


def test_parse_trace_structure():
    t = parse_trace("a;!b;{&ab}")
    assert len(t.prefix) == 2 and len(t.period) == 1
    assert t.prefix[0] == parse_prop("a")
    assert str(t) == "a;!b;{&ab}"


@pytest.mark.parametrize(
    "text",
    [
        "a;b",  # no period
        "{a};",  # does not end with the closing brace
        "a;{b}{c}",  # stray brace
        "{{a}}",
        "a{b}",  # prefix must close with ';'
        "{}",  # empty constraint
        "a;;{b}",
        "{&a}",  # truncated formula inside a position
        "{&a!a}",  # unsatisfiable position denotes no trace
        "a;{Xb}",  # temporal operator inside a position constraint
    ],
)
def test_parse_trace_rejects(text):
    with pytest.raises(TraceError):
        parse_trace(text)


def test_empty_period_rejected():
    with pytest.raises(TraceError):
        SymbolicTrace((), ())
    with pytest.raises(TraceError):
        ConcreteTrace((frozenset("a"),), (), ("a",))


# Token-count oracle: count wire characters by hand, multi-char tokens once.
# `a;{b}` = a ; { b } -> 5; `&ab;!c;{|ab;!a}` -> 15 tokens.
@pytest.mark.parametrize(
    "text,count",
    [("a;{b}", 5), ("&ab;!c;{|ab;!a}", 15), ("{1}", 3), ("{a;b;c}", 7)],
)
def test_trace_token_count(text, count):
    assert trace_token_count(parse_trace(text)) == count


@given(st.integers(0, 2**31 - 1), st.integers(1, 4))
def test_sample_concretization_satisfies_constraints(seed, unroll):
    trace = parse_trace("|ab;{!a;|b!b}")
    props = ("a", "b")
    concrete = sample_concretization(trace, props, unroll=unroll, seed=seed)
    m, n = len(trace.prefix), len(trace.period)
    assert len(concrete.prefix) == m + (unroll - 1) * n
    assert len(concrete.period) == n

    constraints = list(trace.prefix) + list(trace.period) * (unroll - 1)
    for letter, constraint in zip(concrete.prefix, constraints):
        assert eval_prop(constraint, {p: p in letter for p in props})
    for letter, constraint in zip(concrete.period, trace.period):
        assert eval_prop(constraint, {p: p in letter for p in props})


def test_sample_concretization_seeded():
    trace = parse_trace("{|ab;|ab;|ab;|ab}")
    one = sample_concretization(trace, ("a", "b"), seed=7)
    two = sample_concretization(trace, ("a", "b"), seed=7)
    assert one == two
    different = {sample_concretization(trace, ("a", "b"), seed=s) for s in range(20)}
    assert len(different) > 1


def test_sample_concretization_rejects_bad_unroll():
    with pytest.raises(ValueError):
        sample_concretization(parse_trace("{a}"), ("a",), unroll=0)


def test_concrete_to_symbolic_pins_every_letter():
    concrete = ConcreteTrace(
        (frozenset({"a"}),), (frozenset(), frozenset({"a", "b"})), ("a", "b")
    )
    symbolic = concrete_to_symbolic(concrete)
    assert print_trace(symbolic) == "&a!b;{&!a!b;&ab}"
    assert str(concrete) == "&a!b;{&!a!b;&ab}"
