"""Deterministic in-process character-level backend for tests and smoke runs.

Three proposal mechanisms, all pure functions of (context text, prefix):

* copy: when the context contains the configured sentinel substring, the
  reference text following its last occurrence is replayed position by
  position (the "expert" behavior: the model restates what it was shown).
* lookup: otherwise, the longest suffix of the conditioning string that
  occurs in the priming text or the context is extended with the
  character that followed it there (most recent occurrence wins).  The
  search corpus deliberately excludes generated text: the naive model
  can echo what it was shown, not what it invented.
* static table: a char-bigram table with additive smoothing, used as the
  residual distribution everywhere and as the sole rule when nothing
  matches.

With `mode="uniform"` every token gets probability 1/V at every step.
"""

from __future__ import annotations

import math
import string as _string
from dataclasses import dataclass, field

from .backend import Backend, Context, ScoredSequence, TopKDistribution
from .errors import ConfigError, ContextOverflow, EncodingError

DEFAULT_ALPHABET = (
    _string.ascii_letters + _string.digits + " \n.,;:?!'\"-_()[]{}<>/\\*+=%$#@&|^~`"
)

# Format exemplars standing in for pretraining exposure: the naive
# conditional knows answer templates but not the injected facts.
DEFAULT_PRIMING = (
    "The answer is Copper Kettle. \\boxed{Copper Kettle}\n"
    "The answer is 42. \\boxed{42}\n"
    "The answer is Quiet Harbor. \\boxed{Quiet Harbor}\n"
    "The digits of 123 are [1, 2, 3]. Reversed: [3, 2, 1]. Based on the rule, "
    "the answer is 19. \\boxed{19}\n"
    "Consider the question carefully and reason step by step before giving the "
    "answer. The question asks for a single fact, and the relevant fact "
    "determines the answer. We check the statements one by one until the "
    "matching statement is found, then restate the answer in the required "
    "format with a boxed final answer.\n"
)
DEFAULT_SENTINEL = "Reference: "


@dataclass
class ToyConfig:
    alphabet: str = DEFAULT_ALPHABET
    mode: str = "table"  # "table" or "uniform"
    sentinel: str | None = DEFAULT_SENTINEL
    priming_text: str = DEFAULT_PRIMING
    copy_mass: float = 0.95
    induction_mass: float = 0.9
    smoothing: float = 0.02
    max_match: int = 12
    max_seq_len: int = 100_000
    bigram: dict[str, dict[str, float]] = field(default_factory=dict)
    fit_bigram_on_priming: bool = True

    def validate(self) -> None:
        if self.mode not in ("table", "uniform"):
            raise ConfigError(f"unknown toy mode {self.mode!r}")
        if len(set(self.alphabet)) != len(self.alphabet):
            raise ConfigError("alphabet has duplicate characters")
        for name in ("copy_mass", "induction_mass"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ConfigError(f"{name} must be in [0, 1]")
        if self.smoothing < 0:
            raise ConfigError("smoothing must be >= 0")


EOS_KEY = "</s>"
START_KEY = "<s>"


class ToyBackend(Backend):
    def __init__(self, config: ToyConfig | None = None):
        self.config = config or ToyConfig()
        self.config.validate()
        self._chars = list(self.config.alphabet)
        self._char_to_id = {c: i for i, c in enumerate(self._chars)}
        self._eos_id = len(self._chars)
        table: dict[str, dict[str, float]] = {}
        if self.config.fit_bigram_on_priming and self.config.priming_text:
            prev = START_KEY
            for ch in self.config.priming_text:
                table.setdefault(prev, {})[ch] = table.get(prev, {}).get(ch, 0.0) + 1.0
                prev = ch
        for row, cols in self.config.bigram.items():
            table.setdefault(row, {}).update(cols)
        self._table = table

    # ------------------------------------------------------------ basics

    @property
    def vocab_size(self) -> int:
        return len(self._chars) + 1

    @property
    def eos_id(self) -> int:
        return self._eos_id

    @property
    def max_seq_len(self) -> int:
        return self.config.max_seq_len

    def tokenize(self, text: str) -> list[int]:
        try:
            return [self._char_to_id[c] for c in text]
        except KeyError as exc:
            raise EncodingError(f"character {exc.args[0]!r} not in toy alphabet") from None

    def detokenize(self, tokens) -> str:
        return "".join(self._chars[t] for t in tokens if t != self._eos_id)

    # ------------------------------------------------------- distribution

    def _static_probs(self, prev: str) -> list[float]:
        """Smoothed bigram row over the full vocabulary (EOS last)."""
        V = self.vocab_size
        row = self._table.get(prev, {})
        weights = [self.config.smoothing] * V
        for sym, w in row.items():
            if sym == EOS_KEY:
                weights[self._eos_id] += w
            else:
                idx = self._char_to_id.get(sym)
                if idx is not None:
                    weights[idx] += w
        total = sum(weights)
        if total <= 0:
            return [1.0 / V] * V
        return [w / total for w in weights]

    def _lookup_target(self, base: str, cond: str) -> str | None:
        """Continuation of the longest suffix of `cond` found in `base`."""
        if not base or not cond:
            return None
        for m in range(min(self.config.max_match, len(cond)), 0, -1):
            idx = base.rfind(cond[len(cond) - m :], 0, len(base) - 1)
            if idx >= 0:
                return base[idx + m]
        return None

    def _step_probs(self, context_text: str, generated: str, position: int) -> list[float]:
        """Full-vocabulary distribution for the next token.

        `generated` is the decoded prefix, `position` its length in tokens.
        """
        V = self.vocab_size
        if self.config.mode == "uniform":
            return [1.0 / V] * V

        cond = context_text + generated
        prev = cond[-1] if cond else START_KEY
        base = self._static_probs(prev)

        sent = self.config.sentinel
        if sent and sent in context_text:
            ref = context_text[context_text.rfind(sent) + len(sent) :]
            if position < len(ref):
                target = self._char_to_id.get(ref[position], None)
            else:
                target = self._eos_id
            if target is not None:
                return self._blend(base, target, self.config.copy_mass)
            return base

        if self.config.induction_mass > 0:
            cont = self._lookup_target(self.config.priming_text + context_text, cond)
            if cont is not None:
                idx = self._eos_id if cont == EOS_KEY else self._char_to_id.get(cont)
                if idx is not None:
                    return self._blend(base, idx, self.config.induction_mass)
        return base

    @staticmethod
    def _blend(base: list[float], target: int, mass: float) -> list[float]:
        out = [(1.0 - mass) * p for p in base]
        out[target] += mass
        return out

    # --------------------------------------------------------------- api

    def _check_lengths(self, context_text: str, prefix_len: int) -> None:
        if len(context_text) + prefix_len > self.config.max_seq_len:
            raise ContextOverflow(
                f"context ({len(context_text)}) + prefix ({prefix_len}) exceeds "
                f"{self.config.max_seq_len}"
            )

    def next_distribution(
        self, context: Context, prefix, k: int, temperature: float = 0.0
    ) -> TopKDistribution:
        if k < 1:
            raise ConfigError("k must be >= 1")
        if temperature < 0:
            raise ConfigError("temperature must be >= 0")
        text = self.context_text(context)
        prefix = list(prefix)
        self._check_lengths(text, len(prefix))
        probs = self._step_probs(text, self.detokenize(prefix), len(prefix))
        order = sorted(range(len(probs)), key=lambda i: (-probs[i], i))[:k]
        entries = [
            (i, math.log(probs[i]) if probs[i] > 0 else -math.inf) for i in order
        ]
        return TopKDistribution(
            entries=entries, k=k, is_eos_in_top_k=any(i == self._eos_id for i, _ in entries)
        )

    def score(self, context: Context, target) -> ScoredSequence:
        text = self.context_text(context)
        target = list(target)
        self._check_lengths(text, len(target))
        nlls: list[float] = []
        generated = ""
        for pos, tok in enumerate(target):
            probs = self._step_probs(text, generated, pos)
            p = probs[tok]
            nlls.append(-math.log(p) if p > 0 else math.inf)
            generated += "" if tok == self._eos_id else self._chars[tok]
        return ScoredSequence(per_token_nll=nlls, tokens=target)


def uniform_backend(alphabet: str = DEFAULT_ALPHABET) -> ToyBackend:
    return ToyBackend(ToyConfig(alphabet=alphabet, mode="uniform"))


def toy_config_from_dict(raw: dict) -> ToyConfig:
    allowed = set(ToyConfig.__dataclass_fields__)
    unknown = set(raw) - allowed
    if unknown:
        raise ConfigError(f"unknown toy table keys: {sorted(unknown)}")
    return ToyConfig(**raw)
