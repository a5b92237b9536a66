"""Extraction and parsing of \\boxed{...} answer markers."""

from __future__ import annotations

MARKER = "\\boxed{"
MAX_NESTING = 4


def extract_boxed(text: str) -> str | None:
    """Content of the rightmost balanced \\boxed{...}, trimmed.

    Scans occurrences from the end of the text; an occurrence is skipped
    when its braces do not balance or nest deeper than MAX_NESTING.
    Returns None when no occurrence qualifies.
    """
    start = len(text)
    while True:
        start = text.rfind(MARKER, 0, start)
        if start < 0:
            return None
        content = _read_balanced(text, start + len(MARKER))
        if content is not None:
            return content.strip()
        # unbalanced or too deep: try the next occurrence to the left


def _read_balanced(text: str, pos: int) -> str | None:
    depth = 1
    out = []
    for i in range(pos, len(text)):
        ch = text[i]
        if ch == "{":
            depth += 1
            if depth > MAX_NESTING + 1:
                return None
        elif ch == "}":
            depth -= 1
            if depth == 0:
                return "".join(out)
        out.append(ch)
    return None


def parse_boxed_int(text: str) -> int | None:
    """Integer inside the last boxed marker; None when absent or unparseable.

    Accepts surrounding whitespace, thousands commas, and one leading '+'.
    No scientific notation.
    """
    content = extract_boxed(text)
    if content is None:
        return None
    cleaned = content.strip().replace(",", "")
    if cleaned.startswith("+"):
        cleaned = cleaned[1:]
    if not cleaned or not cleaned.lstrip("-").isdigit():
        return None
    try:
        return int(cleaned)
    except ValueError:
        return None


def normalize_answer_text(text: str) -> str:
    """Case- and whitespace-insensitive canonical form for name answers."""
    return " ".join(text.split()).casefold()
