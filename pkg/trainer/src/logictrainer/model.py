"""Encoder-decoder Transformer over the shared token vocabulary.

The encoder and decoder may use different embedding sizes; a linear
projection adapts the encoder memory to the decoder width. Formula
inputs optionally use tree positional encodings; decoder outputs are
plain sequences and always use the sinusoidal encoding.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import torch
from torch import nn

from . import vocab
from .positions import tree_features


@dataclass
class ModelConfig:
    encoder_layers: int = 4
    decoder_layers: int = 4
    heads: int = 4
    d_encoder: int = 128
    d_decoder: int = 64
    ff_width: int = 512
    dropout: float = 0.1
    positional: str = "sequence"  # "sequence" or "tree" (encoder side)
    tree_depth: int = 16
    tree_branching: int = 2
    max_input_len: int = 96
    max_output_len: int = 96

    def __post_init__(self) -> None:
        if self.positional not in ("sequence", "tree"):
            raise ValueError(f"unknown positional encoding {self.positional!r}")
        # Embedding sizes are floored to the nearest multiple of the head
        # count rather than rejected.
        self.d_encoder -= self.d_encoder % self.heads
        self.d_decoder -= self.d_decoder % self.heads


def sinusoidal_table(max_len: int, dim: int) -> torch.Tensor:
    position = torch.arange(max_len, dtype=torch.float32).unsqueeze(1)
    div = torch.exp(torch.arange(0, dim, 2, dtype=torch.float32)
                    * (-math.log(10000.0) / dim))
    table = torch.zeros(max_len, dim)
    table[:, 0::2] = torch.sin(position * div)
    table[:, 1::2] = torch.cos(position * div[: dim // 2])
    return table


class Seq2SeqModel(nn.Module):
    def __init__(self, config: ModelConfig):
        super().__init__()
        self.config = config
        n_tokens = vocab.vocab_size()
        self.src_embed = nn.Embedding(n_tokens, config.d_encoder, padding_idx=vocab.PAD_ID)
        self.tgt_embed = nn.Embedding(n_tokens, config.d_decoder, padding_idx=vocab.PAD_ID)
        # The sqrt(d) scale in encode/decode assumes N(0, 1/sqrt(d)) embedding
        # weights (the original recipe); torch defaults to N(0, 1), which
        # would drown the positional signal by a factor of sqrt(d).
        for embed in (self.src_embed, self.tgt_embed):
            nn.init.normal_(embed.weight, mean=0.0,
                            std=embed.embedding_dim ** -0.5)
            nn.init.zeros_(embed.weight[vocab.PAD_ID])
        self.register_buffer(
            "src_pos_table", sinusoidal_table(config.max_input_len, config.d_encoder))
        self.register_buffer(
            "tgt_pos_table", sinusoidal_table(config.max_output_len, config.d_decoder))
        if config.positional == "tree":
            self.tree_proj = nn.Linear(
                config.tree_depth * config.tree_branching, config.d_encoder)
            # Path features are one-hot per level, so a node at depth L feeds
            # L ones through the projection; std 0.5 puts the projected
            # signal near the embeddings' unit scale for typical depths.
            nn.init.normal_(self.tree_proj.weight, mean=0.0, std=0.5)
            nn.init.zeros_(self.tree_proj.bias)
        # Pre-norm layers with a closing LayerNorm: converges without a
        # warmup schedule, which matters at our small step budgets.
        encoder_layer = nn.TransformerEncoderLayer(
            config.d_encoder, config.heads, config.ff_width, config.dropout,
            batch_first=True, norm_first=True)
        decoder_layer = nn.TransformerDecoderLayer(
            config.d_decoder, config.heads, config.ff_width, config.dropout,
            batch_first=True, norm_first=True)
        self.encoder = nn.TransformerEncoder(
            encoder_layer, config.encoder_layers, enable_nested_tensor=False,
            norm=nn.LayerNorm(config.d_encoder))
        self.decoder = nn.TransformerDecoder(
            decoder_layer, config.decoder_layers,
            norm=nn.LayerNorm(config.d_decoder))
        self.memory_proj = nn.Linear(config.d_encoder, config.d_decoder)
        self.out = nn.Linear(config.d_decoder, n_tokens)

    def encode(self, src: torch.Tensor,
               src_tree: torch.Tensor | None = None) -> torch.Tensor:
        """src: (batch, src_len) ids; src_tree: (batch, src_len, depth*branching)."""
        x = self.src_embed(src) * math.sqrt(self.config.d_encoder)
        if self.config.positional == "tree":
            if src_tree is None:
                raise ValueError("tree positional encoding needs tree features")
            x = x + self.tree_proj(src_tree)
        else:
            x = x + self.src_pos_table[: src.size(1)]
        return self.encoder(x, src_key_padding_mask=src == vocab.PAD_ID)

    def decode(self, memory: torch.Tensor, src: torch.Tensor,
               tgt: torch.Tensor) -> torch.Tensor:
        """Teacher-forced logits: tgt is the shifted output prefix."""
        y = self.tgt_embed(tgt) * math.sqrt(self.config.d_decoder)
        y = y + self.tgt_pos_table[: tgt.size(1)]
        causal = torch.triu(
            torch.ones(tgt.size(1), tgt.size(1), dtype=torch.bool,
                       device=tgt.device), diagonal=1)
        hidden = self.decoder(
            y, self.memory_proj(memory), tgt_mask=causal,
            tgt_key_padding_mask=tgt == vocab.PAD_ID,
            memory_key_padding_mask=src == vocab.PAD_ID)
        return self.out(hidden)

    def forward(self, src: torch.Tensor, tgt: torch.Tensor,
                src_tree: torch.Tensor | None = None) -> torch.Tensor:
        return self.decode(self.encode(src, src_tree), src, tgt)


def input_features(model: Seq2SeqModel, ids: list[int]) -> torch.Tensor | None:
    """Tree features for one formula when the model wants them, else None."""
    cfg = model.config
    if cfg.positional != "tree":
        return None
    return torch.tensor(
        tree_features(ids, cfg.tree_depth, cfg.tree_branching), dtype=torch.float32)
