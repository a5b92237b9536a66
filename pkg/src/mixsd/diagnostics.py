"""Target-quality diagnostics: per-token NLL profiles under a reference
backend, empirical CDFs, high-NLL threshold reports, token-type overlap
recall, reference loss, forgetting deltas, and Pearson correlation."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .backend import Backend, Context
from .errors import BackendError, ConfigError, DegenerateInput, EmptyProfile
from .mixing import SupervisionRecord

log = logging.getLogger(__name__)


@dataclass
class ScoredRecord:
    """Per-example scoring result; keeps token ids parallel to NLLs."""

    example_id: str
    method: str
    token_ids: list[int]
    nll: list[float]


@dataclass
class NllProfile:
    method_tag: str
    values: list[float] = field(default_factory=list)
    token_ids: list[int] = field(default_factory=list)

    @property
    def count(self) -> int:
        return len(self.values)

    @property
    def mean(self) -> float:
        if not self.values:
            raise EmptyProfile(f"profile {self.method_tag!r} has no tokens")
        return math.fsum(self.values) / len(self.values)

    def extend(self, token_ids: Sequence[int], values: Sequence[float]) -> None:
        if len(token_ids) != len(values):
            raise ConfigError("token ids and NLL values must be parallel")
        self.token_ids.extend(token_ids)
        self.values.extend(values)


@dataclass
class ThresholdReport:
    tau: float
    count_above: int
    pct_above: float

    @property
    def implied_prob(self) -> float:
        return math.exp(-self.tau)

    def as_dict(self) -> dict:
        return {
            "tau": self.tau,
            "count_above": self.count_above,
            "pct_above": self.pct_above,
            "implied_prob": self.implied_prob,
        }


@dataclass
class ForgettingDelta:
    l_ref_before: float
    l_ref_after: float

    @property
    def delta(self) -> float:
        return self.l_ref_after - self.l_ref_before


def score_records(
    backend: Backend, records: Iterable[SupervisionRecord]
) -> list[ScoredRecord]:
    """Teacher-force every record's target under its own prompt.

    Records that fail with a backend error are skipped with a warning and
    excluded from all downstream counts.
    """
    out: list[ScoredRecord] = []
    for rec in records:
        try:
            scored = backend.score(Context.from_text(rec.prompt), rec.target_tokens)
        except BackendError as exc:
            log.warning("skipping %s: backend error (%s)", rec.example_id, exc)
            continue
        out.append(
            ScoredRecord(
                example_id=rec.example_id,
                method=rec.method,
                token_ids=list(rec.target_tokens),
                nll=list(scored.per_token_nll),
            )
        )
    return out


def profiles_from_scored(scored: Iterable[ScoredRecord]) -> dict[str, NllProfile]:
    profiles: dict[str, NllProfile] = {}
    for rec in scored:
        profile = profiles.setdefault(rec.method, NllProfile(rec.method))
        profile.extend(rec.token_ids, rec.nll)
    return profiles


def score_targets(
    backend: Backend, records: Iterable[SupervisionRecord]
) -> dict[str, NllProfile]:
    """Pooled per-token NLL profile per supervision method."""
    return profiles_from_scored(score_records(backend, records))


def ecdf(profile: NllProfile | Sequence[float]) -> list[tuple[float, float]]:
    """Right-continuous empirical CDF over the pooled values."""
    values = profile.values if isinstance(profile, NllProfile) else list(profile)
    if not values:
        raise EmptyProfile("cannot build an ECDF from zero values")
    ordered = sorted(values)
    n = len(ordered)
    out: list[tuple[float, float]] = []
    for i, v in enumerate(ordered, start=1):
        if i == n or ordered[i] != v:
            out.append((v, i / n))
    return out


def high_nll_report(profile: NllProfile | Sequence[float], tau: float) -> ThresholdReport:
    """Strictly-above-threshold token count and percentage."""
    values = profile.values if isinstance(profile, NllProfile) else list(profile)
    if not values:
        raise EmptyProfile("cannot threshold an empty profile")
    count = sum(1 for v in values if v > tau)
    return ThresholdReport(tau=tau, count_above=count, pct_above=100.0 * count / len(values))


def overlap_recall_pair(
    sft_token_ids: Sequence[int],
    sft_nll: Sequence[float],
    mix_token_ids: Sequence[int],
    tau: float = 8.0,
) -> float | None:
    """Fraction of the example's high-NLL SFT token types present anywhere
    in the mixed target; None when the SFT high-NLL set is empty."""
    high = {tok for tok, v in zip(sft_token_ids, sft_nll) if v > tau}
    if not high:
        return None
    return len(high & set(mix_token_ids)) / len(high)


def overlap_recall(
    sft_scored: Iterable[ScoredRecord],
    mix_records: Iterable[SupervisionRecord | ScoredRecord],
    tau: float = 8.0,
) -> float:
    """Mean per-example overlap recall, matched on example_id.

    Examples whose SFT target has no token above tau are excluded from
    the average.
    """
    mix_tokens: dict[str, list[int]] = {}
    for rec in mix_records:
        tokens = rec.token_ids if isinstance(rec, ScoredRecord) else rec.target_tokens
        mix_tokens[rec.example_id] = list(tokens)
    ratios: list[float] = []
    for rec in sft_scored:
        if rec.example_id not in mix_tokens:
            continue
        ratio = overlap_recall_pair(rec.token_ids, rec.nll, mix_tokens[rec.example_id], tau)
        if ratio is not None:
            ratios.append(ratio)
    if not ratios:
        raise EmptyProfile("no example had high-NLL SFT tokens to recall")
    return math.fsum(ratios) / len(ratios)


def reference_loss(backend: Backend, corpus: Sequence[tuple[str, str]]) -> float:
    """Mean over examples of the summed per-token NLL of target given prompt."""
    if not corpus:
        raise ConfigError("reference corpus is empty")
    totals = []
    for prompt, target in corpus:
        scored = backend.score(Context.from_text(prompt), backend.tokenize(target))
        totals.append(math.fsum(scored.per_token_nll))
    return math.fsum(totals) / len(totals)


def forgetting_delta(l_before: float, l_after: float) -> ForgettingDelta:
    return ForgettingDelta(l_ref_before=l_before, l_ref_after=l_after)


def pearson(xs: Sequence[float], ys: Sequence[float]) -> float:
    """Sample Pearson correlation coefficient."""
    if len(xs) != len(ys):
        raise ConfigError(f"series lengths differ: {len(xs)} vs {len(ys)}")
    n = len(xs)
    if n < 2:
        raise DegenerateInput("need at least two points")
    mean_x = math.fsum(xs) / n
    mean_y = math.fsum(ys) / n
    dx = [x - mean_x for x in xs]
    dy = [y - mean_y for y in ys]
    var_x = math.fsum(d * d for d in dx)
    var_y = math.fsum(d * d for d in dy)
    if var_x == 0.0 or var_y == 0.0:
        raise DegenerateInput("zero variance in at least one series")
    cov = math.fsum(a * b for a, b in zip(dx, dy))
    return cov / math.sqrt(var_x * var_y)
