"""Tree positional features for Polish formula token streams.

Every token of a Polish formula is one node of the syntax tree, and the
stream is its preorder traversal, so each token's tree position is the
stack of child indices on the path from the root. Positions are encoded
one-hot per level (``depth`` levels of ``branching`` slots); the root is
the all-zero vector, and nodes deeper than the cap keep the deepest
representable prefix of their path.
"""

from __future__ import annotations

from .vocab import CONSTANTS, PROPS, TOKENS

UNARY = frozenset({"!", "X", "F", "G"})
BINARY = frozenset({"&", "|", ">", "<->", "xor", "U", "W"})
LEAVES = frozenset(PROPS) | frozenset(CONSTANTS)


def formula_paths(ids: list[int]) -> list[tuple[int, ...]]:
    """Root-to-node child-index path for every token of a Polish formula.

    Raises ValueError if the ids are not exactly one well-formed formula.
    """
    paths: list[tuple[int, ...]] = []

    def walk(i: int, path: tuple[int, ...]) -> int:
        if i >= len(ids):
            raise ValueError("truncated formula stream")
        token = TOKENS[ids[i]]
        paths.append(path)
        if token in LEAVES:
            return i + 1
        if token in UNARY:
            return walk(i + 1, path + (0,))
        if token in BINARY:
            j = walk(i + 1, path + (0,))
            return walk(j, path + (1,))
        raise ValueError(f"not a formula token: {token!r}")

    end = walk(0, ())
    if end != len(ids):
        raise ValueError("trailing tokens after the formula")
    return paths


def encode_path(path: tuple[int, ...], depth: int, branching: int) -> list[float]:
    vec = [0.0] * (depth * branching)
    for level, child in enumerate(path[:depth]):
        vec[level * branching + min(child, branching - 1)] = 1.0
    return vec


def decode_path(vec: list[float], depth: int, branching: int) -> tuple[int, ...]:
    """Inverse of encode_path for paths within the depth bound."""
    path = []
    for level in range(depth):
        slots = vec[level * branching:(level + 1) * branching]
        if not any(slots):
            break
        path.append(max(range(branching), key=lambda c: slots[c]))
    return tuple(path)


def tree_features(ids: list[int], depth: int, branching: int) -> list[list[float]]:
    """Per-token tree position vectors, aligned with the token stream."""
    return [encode_path(p, depth, branching) for p in formula_paths(ids)]
