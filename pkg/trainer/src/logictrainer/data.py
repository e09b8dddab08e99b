"""Dataset records in the generator's TSV wire format.

One record per line, `formula<TAB>answer`. Formula size equals its token
count (Polish notation is one token per syntax node), which keeps this
package independent of the generator's internals.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from pathlib import Path

import torch

from . import vocab


@dataclass(frozen=True)
class Example:
    formula: str
    answer: str
    src: tuple[int, ...]
    tgt: tuple[int, ...]  # answer ids framed by SOS/EOS

    @property
    def size(self) -> int:
        return len(self.src)


def load_examples(path: str | Path) -> list[Example]:
    examples = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        if not line.strip():
            continue
        formula, _, answer = line.partition("\t")
        examples.append(Example(
            formula, answer,
            tuple(vocab.tokenize(formula)),
            (vocab.SOS_ID, *vocab.tokenize(answer), vocab.EOS_ID)))
    return examples


def pad_batch(rows: list[tuple[int, ...]]) -> torch.Tensor:
    width = max(len(row) for row in rows)
    out = torch.full((len(rows), width), vocab.PAD_ID, dtype=torch.long)
    for i, row in enumerate(rows):
        out[i, : len(row)] = torch.tensor(row, dtype=torch.long)
    return out


def batches(examples: list[Example], batch_size: int,
            shuffle_seed: int | None = None):
    """Yield (src, tgt) id tensors. Sorted by length when not shuffling
    keeps padding small for evaluation passes."""
    order = list(range(len(examples)))
    if shuffle_seed is None:
        order.sort(key=lambda i: examples[i].size)
    else:
        random.Random(shuffle_seed).shuffle(order)
    for start in range(0, len(order), batch_size):
        chunk = [examples[i] for i in order[start:start + batch_size]]
        yield chunk, pad_batch([e.src for e in chunk]), pad_batch([e.tgt for e in chunk])
