"""Export beam predictions in the evaluator's file format.

Each line is `formula<TAB>candidates<TAB>reference`; beam candidates are
rank-ordered and joined with `|`, which the evaluator splits again.
"""

from __future__ import annotations

from pathlib import Path

from .data import load_examples
from .decode import DecodeConfig, beam_decode
from .model import Seq2SeqModel


def write_predictions(model: Seq2SeqModel, formulas_file: str | Path,
                      out_file: str | Path, config: DecodeConfig) -> int:
    """Decode every record of `formulas_file` (TSV; the answer column, if
    present, is carried through as the reference). Returns the line count."""
    examples = load_examples(formulas_file)
    lines = []
    for example in examples:
        candidates = beam_decode(model, list(example.src), config)
        joined = "|".join(c.text for c in candidates)
        if example.answer:
            lines.append(f"{example.formula}\t{joined}\t{example.answer}")
        else:
            lines.append(f"{example.formula}\t{joined}")
    Path(out_file).write_text("\n".join(lines) + "\n", encoding="utf-8")
    return len(lines)
