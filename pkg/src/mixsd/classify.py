"""Classification of incorrect benchmark responses into four mutually
exclusive modes, assigned in strict priority order:

    format > leakage > collapse > genuine

format   - the grader could not parse an answer at all: no balanced boxed
           marker for boxed-answer benchmarks; neither a fenced code block
           nor a boxed stub for code benchmarks.
leakage  - the response contains a fictional corpus entity (multi-word
           lexicon phrase) that the prompt itself never mentioned.
collapse - a parseable answer with little or no reasoning: a bare answer
           template for boxed benchmarks, or a boxed stub in place of code.
genuine  - everything else: structurally normal but wrong.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .boxed import extract_boxed
from .errors import ConfigError

BENCHMARK_KINDS = ("boxed_answer", "code_generation")
CATEGORIES = ("format", "leakage", "collapse", "genuine")

_ANSWER_SENTENCE = re.compile(r"(?i)\bthe answer is\b[^.\n]*[.\n]?")
_BOXED_SPAN = re.compile(r"\\boxed\{[^{}]*(?:\{[^{}]*\}[^{}]*)*\}")
_FENCE = re.compile(r"^\s*```")


@dataclass
class ResponseRecord:
    record_id: str
    benchmark_kind: str
    prompt: str
    response: str
    is_correct: bool

    def __post_init__(self):
        if self.benchmark_kind not in BENCHMARK_KINDS:
            raise ConfigError(f"unknown benchmark kind {self.benchmark_kind!r}")


@dataclass
class ClassifierConfig:
    collapse_max_reasoning_tokens: int = 20


def has_code_block(text: str) -> bool:
    """True iff some matched pair of triple-backtick fences encloses at
    least one non-empty line."""
    lines = text.split("\n")
    open_index: int | None = None
    for i, line in enumerate(lines):
        if not _FENCE.match(line):
            continue
        if open_index is None:
            open_index = i
        else:
            if any(l.strip() for l in lines[open_index + 1 : i]):
                return True
            open_index = None
    return False


def _normalize(text: str) -> str:
    return " ".join(text.split()).casefold()


def _phrase_present(phrase: str, normalized_text: str) -> bool:
    pattern = r"(?<![a-z0-9])" + re.escape(_normalize(phrase)) + r"(?![a-z0-9])"
    return re.search(pattern, normalized_text) is not None


def find_leaked_names(response: str, prompt: str, lexicon: Iterable[str]) -> list[str]:
    """Lexicon names present in the response but absent from the prompt.

    Matching is case-insensitive whole-phrase containment on whitespace-
    normalized text, with word boundaries on both ends.
    """
    resp_norm = _normalize(response)
    prompt_norm = _normalize(prompt)
    leaked = []
    for name in lexicon:
        if _phrase_present(name, resp_norm) and not _phrase_present(name, prompt_norm):
            leaked.append(name)
    return leaked


def reasoning_token_count(response: str) -> int:
    """Whitespace tokens left after stripping answer sentences and boxed spans."""
    stripped = _BOXED_SPAN.sub(" ", response)
    stripped = _ANSWER_SENTENCE.sub(" ", stripped)
    return len(stripped.split())


def classify(
    record: ResponseRecord,
    lexicon: Iterable[str] = (),
    cfg: ClassifierConfig | None = None,
) -> str:
    """Category for one incorrect response, honoring the priority order.

    An empty lexicon disables leakage detection entirely.
    """
    if record.is_correct:
        raise ConfigError(f"record {record.record_id} is correct; nothing to classify")
    cfg = cfg or ClassifierConfig()
    boxed = extract_boxed(record.response)

    if record.benchmark_kind == "boxed_answer":
        if boxed is None:
            return "format"
    else:
        if not has_code_block(record.response) and boxed is None:
            return "format"

    if find_leaked_names(record.response, record.prompt, lexicon):
        return "leakage"

    if record.benchmark_kind == "boxed_answer":
        if reasoning_token_count(record.response) < cfg.collapse_max_reasoning_tokens:
            return "collapse"
    else:
        if boxed is not None and not has_code_block(record.response):
            return "collapse"

    return "genuine"


@dataclass
class ErrorReport:
    kinds: dict[str, dict] = field(default_factory=dict)
    total_records: int = 0

    def as_dict(self) -> dict:
        return {"kinds": self.kinds, "total_records": self.total_records}


def summarize(
    records: Sequence[ResponseRecord],
    lexicon: Iterable[str] = (),
    cfg: ClassifierConfig | None = None,
) -> ErrorReport:
    """Per-benchmark-kind counts and percentages over incorrect records."""
    lexicon = list(lexicon)
    report = ErrorReport()
    by_kind: dict[str, dict[str, int]] = {}
    for record in records:
        if record.is_correct:
            continue
        counts = by_kind.setdefault(record.benchmark_kind, {c: 0 for c in CATEGORIES})
        counts[classify(record, lexicon, cfg)] += 1
        report.total_records += 1
    for kind, counts in sorted(by_kind.items()):
        total = sum(counts.values())
        report.kinds[kind] = {
            "total": total,
            "counts": dict(counts),
            "percentages": {c: 100.0 * n / total for c, n in counts.items()},
        }
    return report
