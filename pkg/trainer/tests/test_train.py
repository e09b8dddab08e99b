import csv
import shutil
import subprocess

import pytest
import torch

from logictrainer import (
    DecodeConfig,
    ModelConfig,
    TrainConfig,
    evaluate_accuracy,
    greedy_decode,
    load_checkpoint,
    load_examples,
    tokenize,
    train,
)

needs_checker = pytest.mark.skipif(
    shutil.which("logicgen") is None, reason="logicgen CLI not installed")


def make_dataset(path, count, seed=0, max_size=10):
    subprocess.run(
        ["logicgen", "gen-random-ltl", "--count", str(count), "--seed", str(seed),
         "--props", "a,b,c", "--max-size", str(max_size), "-o", str(path)],
        check=True, capture_output=True)


def tiny_config():
    return ModelConfig(encoder_layers=2, decoder_layers=2, heads=2,
                       d_encoder=64, d_decoder=32, ff_width=128, dropout=0.0)


@needs_checker
def test_overfit_memorizes_the_training_set(tmp_path):
    data = tmp_path / "train.tsv"
    make_dataset(data, 100, seed=3)
    config = TrainConfig(task="ltl", batch_size=32, epochs=200, lr=2e-3,
                         seed=0, patience=500, val_samples=0)
    checkpoint = train(tiny_config(), data, data, tmp_path / "run", config)

    model, task = load_checkpoint(checkpoint)
    assert task == "ltl"
    examples = load_examples(data)
    syntactic, semantic = evaluate_accuracy(model, examples, "ltl")
    assert syntactic >= 0.95
    assert semantic >= syntactic

    with (tmp_path / "run" / "metrics.csv").open() as handle:
        rows = list(csv.DictReader(handle))
    assert rows[0].keys() == {"epoch", "loss", "syntactic", "semantic"}
    losses = [float(row["loss"]) for row in rows]
    assert losses[2] < losses[0]


@needs_checker
def test_checkpoint_round_trip(tmp_path):
    data = tmp_path / "train.tsv"
    make_dataset(data, 30, seed=4)
    config = TrainConfig(task="ltl", batch_size=16, epochs=2, seed=1,
                         patience=5, val_samples=0)
    checkpoint = train(tiny_config(), data, data, tmp_path / "run", config)

    model, _ = load_checkpoint(checkpoint)
    again, _ = load_checkpoint(checkpoint)
    decode = DecodeConfig(beam=1, max_len=32)
    for example in load_examples(data)[:5]:
        ids = list(example.src)
        assert greedy_decode(model, ids, decode) == greedy_decode(again, ids, decode)


def test_train_config_defaults():
    config = TrainConfig()
    assert config.task == "ltl"
    assert config.batch_size == 256
    assert config.checker_cmd == "logicgen"


def test_fit_lengths_covers_data(tmp_path):
    from logictrainer.train import _fit_lengths
    from logictrainer.data import Example

    long_formula = "!" * 90 + "a"
    example = Example(long_formula, "{1}", tuple(tokenize(long_formula)),
                      (1, *tokenize("{1}"), 2))
    config = ModelConfig()
    _fit_lengths(config, [example])
    assert config.max_input_len >= 91


def test_torch_seeding_reproduces_initial_weights():
    torch.manual_seed(5)
    first = ModelConfig(encoder_layers=1, decoder_layers=1, heads=2,
                        d_encoder=16, d_decoder=16, ff_width=16, dropout=0.0)
    from logictrainer import Seq2SeqModel

    a = Seq2SeqModel(first)
    torch.manual_seed(5)
    b = Seq2SeqModel(first)
    for pa, pb in zip(a.parameters(), b.parameters()):
        assert torch.equal(pa, pb)
