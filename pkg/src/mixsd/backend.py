"""Token-level conditional model abstraction.

A backend exposes exactly two model capabilities: propose the top-k next
tokens given (context, prefix), and teacher-force a target sequence to
get per-token negative log-likelihoods.  Token ids are backend-scoped
and must never be mixed across backends.
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass, field

from .errors import ConfigError


@dataclass(frozen=True)
class Context:
    """Either raw text or a token sequence; exactly one side is set."""

    text: str | None = None
    tokens: tuple[int, ...] | None = None

    def __post_init__(self):
        if (self.text is None) == (self.tokens is None):
            raise ConfigError("context must set exactly one of text or tokens")

    @classmethod
    def from_text(cls, text: str) -> "Context":
        return cls(text=text)

    @classmethod
    def from_tokens(cls, tokens) -> "Context":
        return cls(tokens=tuple(tokens))


@dataclass
class TopKDistribution:
    """Top-k next-token proposals, sorted by logprob descending with ties
    broken by ascending token id; logprobs are natural-log and <= 0."""

    entries: list[tuple[int, float]]
    k: int
    is_eos_in_top_k: bool

    @property
    def argmax(self) -> int:
        return self.entries[0][0]


@dataclass
class ScoredSequence:
    """Per-token NLL (nats) of a target under teacher forcing."""

    per_token_nll: list[float]
    tokens: list[int]

    def __post_init__(self):
        if len(self.per_token_nll) != len(self.tokens):
            raise ConfigError("scored sequence fields must be parallel")

    @property
    def total(self) -> float:
        return sum(self.per_token_nll)


class Backend(ABC):
    """Interface every conditional-model backend implements."""

    @property
    @abstractmethod
    def vocab_size(self) -> int: ...

    @property
    @abstractmethod
    def eos_id(self) -> int: ...

    @property
    @abstractmethod
    def max_seq_len(self) -> int: ...

    @abstractmethod
    def tokenize(self, text: str) -> list[int]: ...

    @abstractmethod
    def detokenize(self, tokens) -> str: ...

    @abstractmethod
    def next_distribution(
        self, context: Context, prefix, k: int, temperature: float = 0.0
    ) -> TopKDistribution: ...

    @abstractmethod
    def score(self, context: Context, target) -> ScoredSequence: ...

    def context_text(self, context: Context) -> str:
        return context.text if context.text is not None else self.detokenize(context.tokens)
