"""Adapters from corpus files to mix-engine examples.

Input schemas are sniffed from the first row: fact QA files carry
question/answer_name, retrieval files add context_facts, function files
carry query_input/cot_target, and anything with prompt/gold_target/
gold_answer passes through untouched.
"""

from __future__ import annotations

from pathlib import Path

from .errors import ConfigError
from .fileio import read_jsonl
from .kgfact import GOLD_TARGET_TEMPLATE
from .kgfunc import render_prompt
from .mixing import MixExample

RETRIEVAL_PROMPT_HEADER = "\nFacts:\n"
RETRIEVAL_PROMPT_FOOTER = "\nAnswer the question using the facts above."


def _fact_example(row: dict) -> MixExample:
    return MixExample(
        example_id=row["example_id"],
        prompt=row["question"],
        gold_target=row["gold_target"],
        gold_answer=row["answer_name"],
    )


def _retrieval_example(row: dict) -> MixExample:
    prompt = (
        row["question"]
        + RETRIEVAL_PROMPT_HEADER
        + "\n".join(row["context_facts"])
        + RETRIEVAL_PROMPT_FOOTER
    )
    return MixExample(
        example_id=row["example_id"],
        prompt=prompt,
        gold_target=GOLD_TARGET_TEMPLATE.format(name=row["answer_name"]),
        gold_answer=row["answer_name"],
    )


def _func_example(row: dict) -> MixExample:
    shots = [(int(a), int(b)) for a, b in row["shots"]]
    return MixExample(
        example_id=row["example_id"],
        prompt=render_prompt(row["op_label"], shots, int(row["query_input"])),
        gold_target=row["cot_target"],
        gold_answer=str(row["gold_output"]),
    )


def _generic_example(row: dict) -> MixExample:
    return MixExample(
        example_id=row["example_id"],
        prompt=row["prompt"],
        gold_target=row["gold_target"],
        gold_answer=str(row["gold_answer"]),
    )


def sniff_format(row: dict) -> str:
    if "context_facts" in row:
        return "kgfact-retrieval"
    if "answer_name" in row and "question" in row:
        return "kgfact"
    if "cot_target" in row and "query_input" in row:
        return "kgfunc"
    if {"prompt", "gold_target", "gold_answer"} <= set(row):
        return "generic"
    raise ConfigError(f"unrecognized dataset row with keys {sorted(row)}")


_BUILDERS = {
    "kgfact": _fact_example,
    "kgfact-retrieval": _retrieval_example,
    "kgfunc": _func_example,
    "generic": _generic_example,
}

# verifier registry key per format
FORMAT_VERIFIER = {
    "kgfact": "boxed-name",
    "kgfact-retrieval": "boxed-name",
    "kgfunc": "boxed-int",
    "generic": "auto",
}


def load_mix_dataset(
    path: str | Path,
    fmt: str = "auto",
    limit: int | None = None,
) -> tuple[list[MixExample], str]:
    """Examples plus the resolved format name."""
    rows = []
    for row in read_jsonl(path):
        rows.append(row)
        if limit is not None and len(rows) >= limit:
            break
    if not rows:
        raise ConfigError(f"dataset {path} is empty")
    resolved = sniff_format(rows[0]) if fmt == "auto" else fmt
    if resolved not in _BUILDERS:
        raise ConfigError(f"unknown dataset format {resolved!r}")
    build = _BUILDERS[resolved]
    return [build(row) for row in rows], resolved
