import pytest
import torch

from logictrainer import DecodeConfig, ModelConfig, Seq2SeqModel, beam_decode, greedy_decode, tokenize
from logictrainer.decode import greedy_decode_batch

FORMULAS = ["a", "Ga", "&UabUa!b", "G>aFb", "|&ab&!ac", "X!U&!cdXd"]


@pytest.fixture(scope="module")
def model():
    torch.manual_seed(7)
    return Seq2SeqModel(ModelConfig(
        encoder_layers=1, decoder_layers=1, heads=2, d_encoder=32,
        d_decoder=16, ff_width=32, dropout=0.0))


def test_decode_config_validates():
    with pytest.raises(ValueError):
        DecodeConfig(beam=0)
    with pytest.raises(ValueError):
        DecodeConfig(max_len=0)
    assert DecodeConfig(beam=1).alpha == 1.0


def test_beam_one_equals_greedy(model):
    config = DecodeConfig(beam=1, max_len=24)
    for text in FORMULAS:
        ids = tokenize(text)
        assert beam_decode(model, ids, config)[0].text == greedy_decode(model, ids, config)


def test_beam_scores_non_increasing(model):
    config = DecodeConfig(beam=4, max_len=24)
    for text in FORMULAS:
        candidates = beam_decode(model, tokenize(text), config)
        scores = [c.score for c in candidates]
        assert scores == sorted(scores, reverse=True)
        assert 1 <= len(candidates) <= 4


def test_beam_candidates_are_distinct(model):
    config = DecodeConfig(beam=4, max_len=24)
    for text in FORMULAS:
        candidates = beam_decode(model, tokenize(text), config)
        texts = [c.text for c in candidates]
        assert len(set(texts)) == len(texts)


def test_batch_greedy_matches_single(model):
    config = DecodeConfig(beam=1, max_len=24)
    rows = [tokenize(t) for t in FORMULAS]
    batched = greedy_decode_batch(model, rows, config)
    single = [greedy_decode(model, row, config) for row in rows]
    assert batched == single
