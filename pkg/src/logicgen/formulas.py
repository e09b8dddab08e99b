"""Syntax trees and the Polish-notation wire grammar.

Two grammars share one node family: the temporal grammar (``&``, ``|``,
``!``, ``>``, ``X``, ``U``, ``W``, ``G``, ``F``) and the propositional
grammar (``&``, ``|``, ``!``, ``>``, ``<->``, ``xor``). Formulas are
written in prefix (Polish) notation, one token per node, so the printed
token count of a formula equals its node count.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterator, Sequence

__all__ = [
    "Formula",
    "Prop",
    "TrueConst",
    "FalseConst",
    "Not",
    "And",
    "Or",
    "Implies",
    "Iff",
    "Xor",
    "Next",
    "Until",
    "WeakUntil",
    "Eventually",
    "Globally",
    "TRUE",
    "FALSE",
    "FormulaError",
    "VOCABULARY",
    "LTL_OPERATORS",
    "PROP_OPERATORS",
    "DEFAULT_LTL_PROPS",
    "DEFAULT_PROP_PROPS",
    "parse_ltl",
    "parse_prop",
    "print_ltl",
    "print_prop",
    "infix",
    "size",
    "props_of",
    "expand_derived",
    "conjoin",
]


class FormulaError(ValueError):
    """Raised for malformed formula text; carries a character offset."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


@dataclass(frozen=True, slots=True)
class Formula:
    """Base class for every node; concrete nodes are the subclasses below."""


@dataclass(frozen=True, slots=True)
class Prop(Formula):
    name: str


@dataclass(frozen=True, slots=True)
class TrueConst(Formula):
    pass


@dataclass(frozen=True, slots=True)
class FalseConst(Formula):
    pass


@dataclass(frozen=True, slots=True)
class Not(Formula):
    child: Formula


@dataclass(frozen=True, slots=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, slots=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, slots=True)
class Implies(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, slots=True)
class Iff(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, slots=True)
class Xor(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, slots=True)
class Next(Formula):
    child: Formula


@dataclass(frozen=True, slots=True)
class Until(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, slots=True)
class WeakUntil(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, slots=True)
class Eventually(Formula):
    child: Formula


@dataclass(frozen=True, slots=True)
class Globally(Formula):
    child: Formula


TRUE = TrueConst()
FALSE = FalseConst()

DEFAULT_LTL_PROPS: tuple[str, ...] = ("a", "b", "c", "d", "e", "f")
DEFAULT_PROP_PROPS: tuple[str, ...] = ("a", "b", "c", "d", "e")

# Wire token -> node class, split by arity. The union of both grammars is
# injective in both directions; `<->` and `xor` are lexed greedily before
# single characters.
_UNARY_TOKENS: dict[str, type] = {
    "!": Not,
    "X": Next,
    "F": Eventually,
    "G": Globally,
}
_BINARY_TOKENS: dict[str, type] = {
    "&": And,
    "|": Or,
    ">": Implies,
    "U": Until,
    "W": WeakUntil,
    "<->": Iff,
    "xor": Xor,
}
_TOKEN_OF_CLASS: dict[type, str] = {cls: tok for tok, cls in _UNARY_TOKENS.items()}
_TOKEN_OF_CLASS.update({cls: tok for tok, cls in _BINARY_TOKENS.items()})

LTL_OPERATORS: frozenset[str] = frozenset("&|!>XUWGF")
PROP_OPERATORS: frozenset[str] = frozenset({"&", "|", "!", ">", "<->", "xor"})

# Full token table shared by both grammars plus the trace delimiters.
VOCABULARY: dict[str, str] = {
    "&": "and",
    "|": "or",
    "!": "not",
    ">": "implies",
    "X": "next",
    "U": "until",
    "W": "weak-until",
    "G": "globally",
    "F": "eventually",
    "<->": "iff",
    "xor": "xor",
    "0": "false",
    "1": "true",
    "a": "proposition a",
    "b": "proposition b",
    "c": "proposition c",
    "d": "proposition d",
    "e": "proposition e",
    "f": "proposition f",
    ";": "position separator",
    "{": "period open",
    "}": "period close",
}


def _lex(
    text: str,
    props: Sequence[str],
    operators: frozenset[str],
    offset: int = 0,
) -> list[tuple[str, int]]:
    """Split `text` into (token, position) pairs for one grammar.

    Tokens are matched greedily, longest first, so `<->`, `xor` and
    multi-character proposition names win over their single-character
    prefixes. Whitespace separates tokens and is otherwise ignored.
    """
    prop_set = set(props)
    bad = prop_set & set(VOCABULARY) - set("abcdef")
    if bad:
        raise ValueError(f"proposition names collide with operator tokens: {sorted(bad)}")
    single = {t for t in operators if len(t) == 1} | {"0", "1"} | {p for p in prop_set if len(p) == 1}
    multi = sorted(
        [t for t in operators if len(t) > 1] + [p for p in prop_set if len(p) > 1],
        key=len,
        reverse=True,
    )
    out: list[tuple[str, int]] = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        for tok in multi:
            if text.startswith(tok, i):
                out.append((tok, offset + i))
                i += len(tok)
                break
        else:
            if ch in single:
                out.append((ch, offset + i))
                i += 1
            else:
                raise FormulaError(f"unknown token {ch!r}", offset + i)
    return out


def _parse(
    text: str,
    props: Sequence[str],
    operators: frozenset[str],
    offset: int = 0,
) -> Formula:
    tokens = _lex(text, props, operators, offset)
    prop_set = set(props)
    end = offset + len(text)
    pos = 0

    def node() -> Formula:
        nonlocal pos
        if pos >= len(tokens):
            raise FormulaError("truncated input", end)
        tok, _at = tokens[pos]
        pos += 1
        if tok == "1":
            return TRUE
        if tok == "0":
            return FALSE
        if tok in _UNARY_TOKENS and tok in operators:
            return _UNARY_TOKENS[tok](node())
        if tok in _BINARY_TOKENS and tok in operators:
            left = node()
            return _BINARY_TOKENS[tok](left, node())
        if tok in prop_set:
            return Prop(tok)
        raise FormulaError(f"unexpected token {tok!r}", _at)

    formula = node()
    if pos != len(tokens):
        raise FormulaError(f"trailing tokens starting with {tokens[pos][0]!r}", tokens[pos][1])
    return formula


def parse_ltl(text: str, props: Sequence[str] = DEFAULT_LTL_PROPS, _offset: int = 0) -> Formula:
    """Parse a Polish-notation temporal formula over the given propositions."""
    return _parse(text, props, LTL_OPERATORS, _offset)


def parse_prop(text: str, props: Sequence[str] = DEFAULT_PROP_PROPS, _offset: int = 0) -> Formula:
    """Parse a Polish-notation propositional formula."""
    return _parse(text, props, PROP_OPERATORS, _offset)


def _print(formula: Formula, operators: frozenset[str], grammar: str) -> str:
    parts: list[str] = []
    stack: list[Formula] = [formula]
    while stack:
        node = stack.pop()
        if isinstance(node, Prop):
            parts.append(node.name)
        elif isinstance(node, TrueConst):
            parts.append("1")
        elif isinstance(node, FalseConst):
            parts.append("0")
        else:
            tok = _TOKEN_OF_CLASS.get(type(node))
            if tok is None or tok not in operators:
                raise ValueError(f"{type(node).__name__} is not in the {grammar} grammar")
            parts.append(tok)
            if isinstance(node, (Not, Next, Eventually, Globally)):
                stack.append(node.child)
            else:
                stack.append(node.right)  # type: ignore[attr-defined]
                stack.append(node.left)  # type: ignore[attr-defined]
    return "".join(parts)


def print_ltl(formula: Formula) -> str:
    return _print(formula, LTL_OPERATORS, "temporal")


def print_prop(formula: Formula) -> str:
    return _print(formula, PROP_OPERATORS, "propositional")


_INFIX_NAMES = {
    And: "&",
    Or: "|",
    Implies: "->",
    Iff: "<->",
    Xor: "xor",
    Until: "U",
    WeakUntil: "W",
}


def infix(formula: Formula) -> str:
    """Fully parenthesized infix rendering, for logs and error messages only."""
    if isinstance(formula, Prop):
        return formula.name
    if isinstance(formula, TrueConst):
        return "1"
    if isinstance(formula, FalseConst):
        return "0"
    if isinstance(formula, Not):
        return f"!{infix(formula.child)}"
    if isinstance(formula, (Next, Eventually, Globally)):
        tok = _TOKEN_OF_CLASS[type(formula)]
        return f"{tok} {infix(formula.child)}"
    tok = _INFIX_NAMES[type(formula)]
    return f"({infix(formula.left)} {tok} {infix(formula.right)})"  # type: ignore[attr-defined]


def _children(node: Formula) -> tuple[Formula, ...]:
    if isinstance(node, (Prop, TrueConst, FalseConst)):
        return ()
    if isinstance(node, (Not, Next, Eventually, Globally)):
        return (node.child,)
    return (node.left, node.right)  # type: ignore[attr-defined]


def walk(formula: Formula) -> Iterator[Formula]:
    """Yield every node of the tree (an occurrence per structural position)."""
    stack = [formula]
    while stack:
        node = stack.pop()
        yield node
        stack.extend(_children(node))


def size(formula: Formula) -> int:
    """Number of nodes, which equals the printed token count."""
    return sum(1 for _ in walk(formula))


def props_of(formula: Formula) -> tuple[str, ...]:
    """Sorted names of the propositions occurring in the formula."""
    return tuple(sorted({n.name for n in walk(formula) if isinstance(n, Prop)}))


def conjoin(conjuncts: Sequence[Formula]) -> Formula:
    """Left-associated conjunction; a single conjunct is returned as-is."""
    if not conjuncts:
        raise ValueError("cannot conjoin zero formulas")
    acc = conjuncts[0]
    for extra in conjuncts[1:]:
        acc = And(acc, extra)
    return acc


def expand_derived(formula: Formula) -> Formula:
    """Rewrite into the core temporal operators: literals, `&`, `!`, `X`, `U`.

    W, F, G, `|` and `>` are eliminated by definition; the result is
    semantically equivalent position by position.
    """
    memo: dict[Formula, Formula] = {}

    def expand(node: Formula) -> Formula:
        got = memo.get(node)
        if got is not None:
            return got
        if isinstance(node, (Prop, TrueConst, FalseConst)):
            out: Formula = node
        elif isinstance(node, Not):
            out = Not(expand(node.child))
        elif isinstance(node, And):
            out = And(expand(node.left), expand(node.right))
        elif isinstance(node, Next):
            out = Next(expand(node.child))
        elif isinstance(node, Until):
            out = Until(expand(node.left), expand(node.right))
        elif isinstance(node, Or):
            out = Not(And(Not(expand(node.left)), Not(expand(node.right))))
        elif isinstance(node, Implies):
            out = Not(And(expand(node.left), Not(expand(node.right))))
        elif isinstance(node, Eventually):
            out = Until(TRUE, expand(node.child))
        elif isinstance(node, Globally):
            out = Not(Until(TRUE, Not(expand(node.child))))
        elif isinstance(node, WeakUntil):
            # l W r == (l U r) | G l, folded to the core operators.
            left = expand(node.left)
            right = expand(node.right)
            out = Not(And(Not(Until(left, right)), Until(TRUE, Not(left))))
        else:
            raise ValueError(f"{type(node).__name__} is not in the temporal grammar")
        memo[node] = out
        return out

    return expand(formula)
