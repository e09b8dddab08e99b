"""Semantic accuracy through the generator's `check` subcommand.

The checker is a separate tool with its own release cycle; talking to it
over a file boundary keeps exactly one implementation of the semantics.
"""

from __future__ import annotations

import subprocess
import tempfile
from pathlib import Path

TASK_FLAGS = {"ltl": "--ltl", "prop": "--prop"}


def semantic_verdicts(task: str, pairs: list[tuple[str, str]],
                      checker_cmd: str = "logicgen") -> list[bool]:
    """True per (formula, candidate) pair iff the checker says HOLDS."""
    if task not in TASK_FLAGS:
        raise ValueError(f"unknown task {task!r}")
    if not pairs:
        return []
    with tempfile.TemporaryDirectory() as tmp:
        src = Path(tmp) / "pairs.tsv"
        dst = Path(tmp) / "verdicts.tsv"
        src.write_text(
            "".join(f"{formula}\t{candidate}\n" for formula, candidate in pairs),
            encoding="utf-8")
        proc = subprocess.run(
            [checker_cmd, "check", TASK_FLAGS[task], "--file", str(src),
             "-o", str(dst)],
            capture_output=True, text=True)
        if proc.returncode != 0:
            raise RuntimeError(
                f"checker failed with code {proc.returncode}: {proc.stderr.strip()}")
        rows = dst.read_text(encoding="utf-8").splitlines()
    if len(rows) != len(pairs):
        raise RuntimeError(
            f"checker returned {len(rows)} verdicts for {len(pairs)} pairs")
    return [row.split("\t")[1] == "HOLDS" for row in rows]
