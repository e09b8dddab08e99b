"""Greedy and beam decoding with length-normalized scores.

Beam hypotheses are pruned by raw log-probability sum and ranked, once
finished, by sum / length**alpha (alpha = 0 disables normalization).
With beam 1 every step keeps exactly the argmax continuation, so the
top candidate coincides with greedy decoding.
"""

from __future__ import annotations

from dataclasses import dataclass

import torch

from . import vocab
from .model import Seq2SeqModel, input_features


@dataclass
class DecodeConfig:
    beam: int = 3
    alpha: float = 1.0
    max_len: int = 96

    def __post_init__(self) -> None:
        if self.beam < 1:
            raise ValueError("beam width must be at least 1")
        if self.max_len < 1:
            raise ValueError("max_len must be at least 1")


@dataclass(frozen=True)
class Candidate:
    text: str
    score: float  # length-normalized log-probability


def _forbid_specials(logits: torch.Tensor) -> torch.Tensor:
    logits[..., vocab.PAD_ID] = float("-inf")
    logits[..., vocab.SOS_ID] = float("-inf")
    return logits


def _encode_one(model: Seq2SeqModel, ids: list[int]):
    src = torch.tensor([ids], dtype=torch.long)
    tree = input_features(model, ids)
    if tree is not None:
        tree = tree.unsqueeze(0)
    return model.encode(src, tree), src


@torch.no_grad()
def greedy_decode(model: Seq2SeqModel, ids: list[int],
                  config: DecodeConfig) -> str:
    model.eval()
    memory, src = _encode_one(model, ids)
    ys = torch.tensor([[vocab.SOS_ID]], dtype=torch.long)
    out: list[int] = []
    for _ in range(config.max_len):
        logits = _forbid_specials(model.decode(memory, src, ys)[:, -1])
        token = int(logits.argmax(-1))
        if token == vocab.EOS_ID:
            break
        out.append(token)
        ys = torch.cat([ys, torch.tensor([[token]])], dim=1)
    return vocab.detokenize(out)


@torch.no_grad()
def beam_decode(model: Seq2SeqModel, ids: list[int],
                config: DecodeConfig) -> list[Candidate]:
    """At most `beam` candidates, distinct, scores non-increasing."""
    model.eval()
    memory, src = _encode_one(model, ids)
    live: list[tuple[float, list[int]]] = [(0.0, [vocab.SOS_ID])]
    finished: list[tuple[float, list[int]]] = []

    def normalized(score: float, seq: list[int]) -> float:
        length = max(len(seq) - 1, 1)  # generated tokens, SOS excluded
        return score / (length ** config.alpha)

    for _ in range(config.max_len):
        ys = torch.tensor([seq for _, seq in live], dtype=torch.long)
        k = ys.size(0)
        logits = model.decode(memory.expand(k, -1, -1), src.expand(k, -1), ys)
        logprobs = _forbid_specials(torch.log_softmax(logits[:, -1], dim=-1))
        top = logprobs.topk(config.beam, dim=-1)
        pool = [
            (live[i][0] + float(top.values[i, j]), live[i][1] + [int(top.indices[i, j])])
            for i in range(k)
            for j in range(config.beam)
        ]
        pool.sort(key=lambda item: item[0], reverse=True)
        live = []
        for score, seq in pool[: config.beam]:
            if seq[-1] == vocab.EOS_ID:
                finished.append((normalized(score, seq), seq[1:-1]))
            else:
                live.append((score, seq))
        if not live or len(finished) >= config.beam:
            break
    for score, seq in live:
        finished.append((normalized(score, seq), seq[1:]))

    finished.sort(key=lambda item: item[0], reverse=True)
    return [Candidate(vocab.detokenize(seq), score)
            for score, seq in finished[: config.beam]]


@torch.no_grad()
def greedy_decode_batch(model: Seq2SeqModel, rows: list[list[int]],
                        config: DecodeConfig) -> list[str]:
    """Greedy decode many formulas at once (for validation loops)."""
    model.eval()
    from .data import pad_batch  # local import to avoid a cycle

    src = pad_batch([tuple(r) for r in rows])
    tree = None
    if model.config.positional == "tree":
        feats = [input_features(model, r) for r in rows]
        width = src.size(1)
        dim = feats[0].size(-1)
        tree = torch.zeros(len(rows), width, dim)
        for i, f in enumerate(feats):
            tree[i, : f.size(0)] = f
    memory = model.encode(src, tree)
    ys = torch.full((len(rows), 1), vocab.SOS_ID, dtype=torch.long)
    done = torch.zeros(len(rows), dtype=torch.bool)
    for _ in range(config.max_len):
        logits = _forbid_specials(model.decode(memory, src, ys)[:, -1])
        token = logits.argmax(-1)
        token[done] = vocab.PAD_ID
        done |= token == vocab.EOS_ID
        ys = torch.cat([ys, token.unsqueeze(1)], dim=1)
        if bool(done.all()):
            break
    outputs = []
    for row in ys.tolist():
        out = []
        for token in row[1:]:
            if token in (vocab.EOS_ID, vocab.PAD_ID):
                break
            out.append(token)
        outputs.append(vocab.detokenize(out))
    return outputs
