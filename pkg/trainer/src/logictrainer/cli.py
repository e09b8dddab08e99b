"""Command line: train a model, export predictions.

Exit codes: 0 on success, 2 on usage or input errors.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .decode import DecodeConfig
from .model import ModelConfig
from .predict import write_predictions
from .train import TrainConfig, load_checkpoint, train


def _cmd_train(args: argparse.Namespace) -> int:
    model_config = ModelConfig(
        encoder_layers=args.layers,
        decoder_layers=args.layers,
        heads=args.heads,
        d_encoder=args.d_encoder,
        d_decoder=args.d_decoder,
        ff_width=args.ff_width,
        dropout=args.dropout,
        positional=args.positional,
    )
    config = TrainConfig(
        task=args.task,
        batch_size=args.batch_size,
        epochs=args.epochs,
        lr=args.lr,
        seed=args.seed,
        patience=args.patience,
        val_samples=args.val_samples,
        checker_cmd=args.checker_cmd,
    )
    checkpoint = train(model_config, args.train, args.val, args.out, config)
    print(f"checkpoint: {checkpoint}")
    return 0


def _cmd_predict(args: argparse.Namespace) -> int:
    model, _task = load_checkpoint(args.checkpoint)
    config = DecodeConfig(beam=args.beam, alpha=args.alpha,
                          max_len=args.max_len or model.config.max_output_len)
    count = write_predictions(model, args.formulas, args.out, config)
    print(f"wrote {count} predictions to {args.out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="logictrainer",
        description="Train a formula-to-answer Transformer on logicgen datasets.")
    sub = parser.add_subparsers(dest="command", required=True)

    tr = sub.add_parser("train", help="train a model and log per-epoch metrics")
    tr.add_argument("--task", choices=("ltl", "prop"), required=True)
    tr.add_argument("--train", type=Path, required=True, help="training TSV")
    tr.add_argument("--val", type=Path, required=True, help="validation TSV")
    tr.add_argument("-o", "--out", type=Path, required=True, help="output directory")
    tr.add_argument("--layers", type=int, default=4)
    tr.add_argument("--heads", type=int, default=4)
    tr.add_argument("--d-encoder", type=int, default=128)
    tr.add_argument("--d-decoder", type=int, default=64)
    tr.add_argument("--ff-width", type=int, default=512)
    tr.add_argument("--dropout", type=float, default=0.1)
    tr.add_argument("--positional", choices=("sequence", "tree"), default="sequence")
    tr.add_argument("--batch-size", type=int, default=256)
    tr.add_argument("--epochs", type=int, default=20)
    tr.add_argument("--lr", type=float, default=1e-3)
    tr.add_argument("--seed", type=int, default=0)
    tr.add_argument("--patience", type=int, default=3)
    tr.add_argument("--val-samples", type=int, default=1000)
    tr.add_argument("--checker-cmd", default="logicgen")
    tr.set_defaults(func=_cmd_train)

    pr = sub.add_parser("predict", help="write a beam-decoded prediction file")
    pr.add_argument("--checkpoint", type=Path, required=True)
    pr.add_argument("--formulas", type=Path, required=True,
                    help="TSV of formulas (answer column becomes the reference)")
    pr.add_argument("-o", "--out", type=Path, required=True)
    pr.add_argument("--beam", type=int, default=3)
    pr.add_argument("--alpha", type=float, default=1.0)
    pr.add_argument("--max-len", type=int, default=0,
                    help="0 uses the checkpoint's output length")
    pr.set_defaults(func=_cmd_predict)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
