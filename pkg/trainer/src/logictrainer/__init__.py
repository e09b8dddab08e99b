"""Toy Transformer trainer for formula-to-answer datasets."""

__version__ = "0.1.0"

from .data import Example, load_examples
from .decode import Candidate, DecodeConfig, beam_decode, greedy_decode
from .model import ModelConfig, Seq2SeqModel
from .positions import decode_path, encode_path, formula_paths, tree_features
from .predict import write_predictions
from .train import TrainConfig, evaluate_accuracy, load_checkpoint, save_checkpoint, train
from .vocab import detokenize, tokenize, vocab_size

__all__ = [
    "Candidate",
    "DecodeConfig",
    "Example",
    "ModelConfig",
    "Seq2SeqModel",
    "TrainConfig",
    "beam_decode",
    "decode_path",
    "detokenize",
    "encode_path",
    "evaluate_accuracy",
    "formula_paths",
    "greedy_decode",
    "load_checkpoint",
    "load_examples",
    "save_checkpoint",
    "tokenize",
    "train",
    "tree_features",
    "vocab_size",
    "write_predictions",
]
