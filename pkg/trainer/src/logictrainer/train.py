"""Training loop: teacher forcing, early stopping, per-epoch metrics.

Each epoch logs loss plus syntactic and semantic accuracy on a greedy
decode of a validation subsample; semantic accuracy comes from the
external checker. The checkpoint keeps the best validation loss.
"""

from __future__ import annotations

import csv
import dataclasses
import random
import time
from dataclasses import dataclass
from pathlib import Path

import torch
from torch import nn

from . import vocab
from .checker import semantic_verdicts
from .data import Example, batches, load_examples
from .decode import DecodeConfig, greedy_decode_batch
from .model import ModelConfig, Seq2SeqModel


@dataclass
class TrainConfig:
    task: str = "ltl"
    batch_size: int = 256
    epochs: int = 20
    lr: float = 1e-3
    seed: int = 0
    patience: int = 3
    val_samples: int = 1000
    checker_cmd: str = "logicgen"


def _loss_on(model: Seq2SeqModel, criterion, examples: list[Example],
             batch_size: int) -> float:
    model.eval()
    total, count = 0.0, 0
    with torch.no_grad():
        for chunk, src, tgt in batches(examples, batch_size):
            logits = _step_logits(model, src, tgt)
            total += float(criterion(logits, tgt[:, 1:].reshape(-1))) * len(chunk)
            count += len(chunk)
    return total / max(count, 1)


def _step_logits(model: Seq2SeqModel, src: torch.Tensor,
                 tgt: torch.Tensor) -> torch.Tensor:
    tree = _tree_batch(model, src)
    logits = model(src, tgt[:, :-1], tree)
    return logits.reshape(-1, logits.size(-1))


def _tree_batch(model: Seq2SeqModel, src: torch.Tensor) -> torch.Tensor | None:
    if model.config.positional != "tree":
        return None
    from .model import input_features

    rows = src.tolist()
    feats = []
    for row in rows:
        ids = [t for t in row if t != vocab.PAD_ID]
        feats.append(input_features(model, ids))
    dim = feats[0].size(-1)
    out = torch.zeros(len(rows), src.size(1), dim)
    for i, f in enumerate(feats):
        out[i, : f.size(0)] = f
    return out


def evaluate_accuracy(model: Seq2SeqModel, examples: list[Example],
                      task: str, checker_cmd: str = "logicgen",
                      max_len: int | None = None) -> tuple[float, float]:
    """(syntactic, semantic) accuracy of greedy decodes on `examples`."""
    if not examples:
        return 0.0, 0.0
    config = DecodeConfig(beam=1, max_len=max_len or model.config.max_output_len)
    ordered: list[Example] = []
    outputs: list[str] = []
    for chunk, _, _ in batches(examples, 256):
        ordered.extend(chunk)
        outputs.extend(greedy_decode_batch(model, [list(e.src) for e in chunk], config))
    syntactic = sum(out == e.answer for out, e in zip(outputs, ordered))
    verdicts = semantic_verdicts(
        task, [(e.formula, out) for e, out in zip(ordered, outputs)], checker_cmd)
    return syntactic / len(examples), sum(verdicts) / len(examples)


def train(model_config: ModelConfig, train_file: str | Path,
          val_file: str | Path, out_dir: str | Path,
          config: TrainConfig) -> Path:
    """Train, write `metrics.csv` and the best `checkpoint.pt`; returns
    the checkpoint path."""
    torch.manual_seed(config.seed)
    train_set = load_examples(train_file)
    val_set = load_examples(val_file)
    _fit_lengths(model_config, train_set + val_set)
    model = Seq2SeqModel(model_config)
    optimizer = torch.optim.Adam(model.parameters(), lr=config.lr)
    criterion = nn.CrossEntropyLoss(ignore_index=vocab.PAD_ID)

    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    metrics_path = out_dir / "metrics.csv"
    checkpoint_path = out_dir / "checkpoint.pt"

    rng = random.Random(config.seed)
    best_val = float("inf")
    stale = 0
    with metrics_path.open("w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(["epoch", "loss", "syntactic", "semantic"])
        for epoch in range(1, config.epochs + 1):
            started = time.perf_counter()
            model.train()
            total, count = 0.0, 0
            for chunk, src, tgt in batches(
                    train_set, config.batch_size, shuffle_seed=rng.randrange(2 ** 31)):
                optimizer.zero_grad()
                loss = criterion(_step_logits(model, src, tgt),
                                 tgt[:, 1:].reshape(-1))
                loss.backward()
                optimizer.step()
                total += float(loss.detach()) * len(chunk)
                count += len(chunk)
            train_loss = total / max(count, 1)

            subsample = val_set[: config.val_samples]
            syntactic, semantic = evaluate_accuracy(
                model, subsample, config.task, config.checker_cmd)
            writer.writerow([epoch, f"{train_loss:.4f}",
                             f"{syntactic:.4f}", f"{semantic:.4f}"])
            handle.flush()
            val_loss = _loss_on(model, criterion, val_set, config.batch_size)
            print(f"epoch {epoch}: loss {train_loss:.4f} val {val_loss:.4f} "
                  f"syntactic {syntactic:.3f} semantic {semantic:.3f} "
                  f"({time.perf_counter() - started:.0f}s)")
            if val_loss < best_val:
                best_val = val_loss
                stale = 0
                save_checkpoint(checkpoint_path, model, config.task)
            else:
                stale += 1
                if stale > config.patience:
                    print(f"early stop after epoch {epoch}")
                    break
    if not checkpoint_path.exists():
        save_checkpoint(checkpoint_path, model, config.task)
    return checkpoint_path


def _fit_lengths(model_config: ModelConfig, examples: list[Example]) -> None:
    """Grow the position tables to cover the data, with decode headroom."""
    src_max = max(len(e.src) for e in examples)
    tgt_max = max(len(e.tgt) for e in examples)
    model_config.max_input_len = max(model_config.max_input_len, src_max)
    model_config.max_output_len = max(model_config.max_output_len, tgt_max + 16)


def save_checkpoint(path: str | Path, model: Seq2SeqModel, task: str) -> None:
    torch.save({
        "model_config": dataclasses.asdict(model.config),
        "state_dict": model.state_dict(),
        "task": task,
    }, path)


def load_checkpoint(path: str | Path) -> tuple[Seq2SeqModel, str]:
    payload = torch.load(path, map_location="cpu", weights_only=True)
    model = Seq2SeqModel(ModelConfig(**payload["model_config"]))
    model.load_state_dict(payload["state_dict"])
    model.eval()
    return model, payload["task"]
