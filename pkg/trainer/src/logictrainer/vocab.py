"""Closed token vocabulary shared by formulas, traces and assignments.

The wire strings are Polish notation, so tokenization is longest-match
over a fixed token set; ids are stable across runs by construction.
"""

from __future__ import annotations

PAD = "<pad>"
SOS = "<s>"
EOS = "</s>"

PROPS = tuple("abcdefghijklmno")
CONSTANTS = ("0", "1")
OPERATORS = ("!", "&", "|", ">", "<->", "xor", "X", "U", "W", "F", "G")
PUNCTUATION = (";", "{", "}")

TOKENS = (PAD, SOS, EOS) + PROPS + CONSTANTS + OPERATORS + PUNCTUATION

TOKEN_TO_ID = {token: i for i, token in enumerate(TOKENS)}
PAD_ID = TOKEN_TO_ID[PAD]
SOS_ID = TOKEN_TO_ID[SOS]
EOS_ID = TOKEN_TO_ID[EOS]

# Longest first so "<->" wins over nothing and "xor" is never read as
# three unknown characters.
_MATCH_ORDER = sorted(
    (t for t in TOKENS if t not in (PAD, SOS, EOS)), key=len, reverse=True
)


def tokenize(text: str) -> list[int]:
    """Wire string to token ids. Raises ValueError on an unknown token."""
    ids = []
    i = 0
    while i < len(text):
        for token in _MATCH_ORDER:
            if text.startswith(token, i):
                ids.append(TOKEN_TO_ID[token])
                i += len(token)
                break
        else:
            raise ValueError(f"unknown token at position {i} in {text!r}")
    return ids


def detokenize(ids: list[int]) -> str:
    """Token ids back to the wire string; drops nothing, checks nothing."""
    return "".join(TOKENS[i] for i in ids)


def vocab_size() -> int:
    return len(TOKENS)
