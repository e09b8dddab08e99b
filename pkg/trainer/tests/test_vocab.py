import pytest

from logictrainer import detokenize, tokenize
from logictrainer.vocab import EOS_ID, PAD_ID, SOS_ID, TOKENS

WIRE_SAMPLES = [
    "&UabUa!b",
    "G>aFb",
    "<->ab",
    "xor|be||!a<->!d!e|!b&&&!ab!bd",
    "&a!b;b;{1}",
    "1;1;{a}",
    "a1b0c1",
    "{|ab;&c!d}",
    "W!bWbG!b",
    "o0n1m0",
]


def test_round_trip_on_wire_strings():
    for text in WIRE_SAMPLES:
        assert detokenize(tokenize(text)) == text


def test_round_trip_on_id_sequences():
    for text in WIRE_SAMPLES:
        ids = tokenize(text)
        assert tokenize(detokenize(ids)) == ids


def test_one_id_per_token():
    assert len(tokenize("&UabUa!b")) == 8
    assert len(tokenize("<->ab")) == 3
    assert len(tokenize("xorab")) == 3


def test_unknown_token_raises():
    with pytest.raises(ValueError):
        tokenize("&aq")
    with pytest.raises(ValueError):
        tokenize("a<-b")


def test_specials_are_low_ids():
    assert PAD_ID == 0
    assert SOS_ID == 1
    assert EOS_ID == 2
    assert len(set(TOKENS)) == len(TOKENS)
