"""Mixed-rollout supervision construction.

For each example, two conditionals of the same backend share one growing
prefix: the expert sees the prompt with the gold target appended to its
context, the naive sees the prompt alone.  A counter-based Bernoulli
stream (one draw per emitted token) picks which conditional's greedy
proposal is appended.  Rollouts are verified by a rule-based answer
check with a bounded retry budget; between attempts only the Bernoulli
stream changes.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

from .backend import Backend, Context
from .boxed import extract_boxed, normalize_answer_text, parse_boxed_int
from .errors import BackendError, ConfigError, TemplateError
from .seeding import counter_bernoulli, stable_hash64

DEFAULT_INSTRUCTION_TEMPLATE = (
    "{prompt}\n"
    "You are given a reference answer. Restate it in your own words with "
    "step-by-step reasoning, ending with the boxed final answer.\n"
    "Reference: {gold}"
)

METHODS = ("sft", "mixsd", "expert_only")
TAG_CHAR = {"expert": "e", "naive": "n", "ground_truth": "g"}

Verifier = Callable[[str, str], bool]


@dataclass
class MixConfig:
    lam: float = 0.3
    max_new_tokens: int = 8192
    max_seq_len: int = 10_000
    retries: int = 10
    temperature: float = 0.0
    top_k: int = 64
    instruction_template: str = DEFAULT_INSTRUCTION_TEMPLATE
    seed: int = 0

    def validate(self) -> None:
        if not 0.0 <= self.lam <= 1.0:
            raise ConfigError(f"lambda {self.lam} outside [0, 1]")
        if self.retries < 0:
            raise ConfigError("retries must be >= 0")
        if self.max_new_tokens < 1:
            raise ConfigError("max_new_tokens must be >= 1")
        if self.max_new_tokens > self.max_seq_len:
            raise ConfigError("max_new_tokens cannot exceed max_seq_len")
        if self.temperature < 0:
            raise ConfigError("temperature must be >= 0")
        if self.top_k < 1:
            raise ConfigError("top_k must be >= 1")


@dataclass
class SupervisionRecord:
    example_id: str
    method: str
    prompt: str
    target_tokens: list[int]
    provenance: list[str]
    attempts_used: int
    accepted: bool
    lam: float
    target_text: str
    stop_reason: str = "eos"

    def provenance_string(self) -> str:
        return "".join(TAG_CHAR[t] for t in self.provenance)


@dataclass
class Discarded:
    example_id: str
    attempts: list[str]
    reason: str = "verification_failed"


@dataclass
class MixExample:
    example_id: str
    prompt: str
    gold_target: str
    gold_answer: str


def build_expert_context(x: str, gold_target: str, instruction_template: str) -> Context:
    """The expert conditioning text: prompt, directive, then the gold target."""
    missing = [ph for ph in ("{prompt}", "{gold}") if ph not in instruction_template]
    if missing:
        raise TemplateError(f"instruction template missing {', '.join(missing)}")
    return Context.from_text(instruction_template.format(prompt=x, gold=gold_target))


def mix_rollout(
    backend: Backend,
    x: str,
    gold_target: str,
    cfg: MixConfig,
    attempt_seed: int,
    method: str = "mixsd",
    example_id: str = "",
) -> SupervisionRecord:
    """One unverified greedy rollout under per-token Bernoulli mixing.

    The stream is consumed exactly once per emitted token, whichever
    branch wins, so reruns with the same attempt_seed are identical.
    """
    cfg.validate()
    expert_ctx = build_expert_context(x, gold_target, cfg.instruction_template)
    naive_ctx = Context.from_text(x)
    ctx_len = max(len(backend.tokenize(expert_ctx.text)), len(backend.tokenize(x)))

    prefix: list[int] = []
    provenance: list[str] = []
    stop_reason = "max_new_tokens"
    for t in range(cfg.max_new_tokens):
        if ctx_len + len(prefix) + 1 > cfg.max_seq_len:
            stop_reason = "overflow"
            break
        take_naive = counter_bernoulli(attempt_seed, t, cfg.lam)
        ctx = naive_ctx if take_naive else expert_ctx
        dist = backend.next_distribution(ctx, prefix, k=cfg.top_k, temperature=cfg.temperature)
        token = dist.argmax
        if token == backend.eos_id:
            stop_reason = "eos"
            break
        prefix.append(token)
        provenance.append("naive" if take_naive else "expert")
    return SupervisionRecord(
        example_id=example_id,
        method=method,
        prompt=x,
        target_tokens=prefix,
        provenance=provenance,
        attempts_used=0,
        accepted=False,
        lam=cfg.lam,
        target_text=backend.detokenize(prefix),
        stop_reason=stop_reason,
    )


def attempt_seed_for(cfg_seed: int, example_id: str, attempt_index: int) -> int:
    return stable_hash64(cfg_seed, example_id, attempt_index)


def verify_and_retry(
    backend: Backend,
    x: str,
    gold_target: str,
    gold_answer: str,
    cfg: MixConfig,
    verifier: Verifier,
    example_id: str = "",
    method: str = "mixsd",
) -> SupervisionRecord | Discarded:
    """First verified rollout among retries+1 attempts, else Discarded
    with every attempt's text retained for audit."""
    attempts: list[str] = []
    for attempt in range(cfg.retries + 1):
        seed = attempt_seed_for(cfg.seed, example_id, attempt)
        record = mix_rollout(backend, x, gold_target, cfg, seed, method, example_id)
        attempts.append(record.target_text)
        if verifier(record.target_text, gold_answer):
            record.attempts_used = attempt + 1
            record.accepted = True
            return record
    return Discarded(example_id=example_id, attempts=attempts)


def emit_sft(backend: Backend, example: MixExample, lam: float = 0.0) -> SupervisionRecord:
    """Pass-through of the canonical target, tokenized by the active backend."""
    if not example.gold_target:
        raise ConfigError(f"example {example.example_id} has an empty gold target")
    tokens = backend.tokenize(example.gold_target)
    return SupervisionRecord(
        example_id=example.example_id,
        method="sft",
        prompt=example.prompt,
        target_tokens=tokens,
        provenance=["ground_truth"] * len(tokens),
        attempts_used=0,
        accepted=True,
        lam=lam,
        target_text=example.gold_target,
        stop_reason="gold",
    )


# ------------------------------------------------------------- verifiers


def verify_boxed_int(text: str, gold_answer: str) -> bool:
    try:
        gold = int(gold_answer)
    except ValueError:
        return False
    return parse_boxed_int(text) == gold


def verify_boxed_name(text: str, gold_answer: str) -> bool:
    content = extract_boxed(text)
    if content is None:
        return False
    return normalize_answer_text(content) == normalize_answer_text(gold_answer)


def verify_boxed_auto(text: str, gold_answer: str) -> bool:
    stripped = gold_answer.strip()
    if stripped.lstrip("+-").replace(",", "").isdigit():
        return verify_boxed_int(text, stripped.replace(",", ""))
    return verify_boxed_name(text, gold_answer)


VERIFIERS: dict[str, Verifier] = {
    "boxed-int": verify_boxed_int,
    "boxed-name": verify_boxed_name,
    "auto": verify_boxed_auto,
}


# ------------------------------------------------------------ corpus run


@dataclass
class RunStats:
    accepted: int = 0
    discarded: int = 0
    mean_attempts: float = 0.0
    mean_naive_fraction: float = 0.0

    def as_dict(self) -> dict:
        return {
            "accepted": self.accepted,
            "discarded": self.discarded,
            "mean_attempts": self.mean_attempts,
            "mean_naive_fraction": self.mean_naive_fraction,
        }


@dataclass
class RunResult:
    results: list[SupervisionRecord | Discarded] = field(default_factory=list)
    stats: RunStats = field(default_factory=RunStats)

    @property
    def records(self) -> list[SupervisionRecord]:
        return [r for r in self.results if isinstance(r, SupervisionRecord)]

    @property
    def discards(self) -> list[Discarded]:
        return [r for r in self.results if isinstance(r, Discarded)]


ABORT_MIN_ERRORS = 5


def run_corpus(
    dataset: Sequence[MixExample],
    backend: Backend,
    cfg: MixConfig,
    verifier: Verifier,
    method: str = "mixsd",
    workers: int = 1,
    progress: Callable[[int, int], None] | None = None,
) -> RunResult:
    """One supervision record (or discard) per example, in input order.

    Examples are independent work units with per-example derived seeds,
    so any worker count yields identical output.  The run aborts when
    backend errors become systemic: at least ABORT_MIN_ERRORS consecutive
    failures covering >= 50% of the examples processed so far.
    """
    if not dataset:
        raise ConfigError("dataset is empty")
    if method not in METHODS:
        raise ConfigError(f"unknown method {method!r}")
    cfg.validate()
    if method == "expert_only" and cfg.lam != 0.0:
        raise ConfigError("expert_only supervision requires lambda = 0")

    def work(example: MixExample) -> SupervisionRecord | Discarded:
        if method == "sft":
            return emit_sft(backend, example, lam=cfg.lam)
        rec = verify_and_retry(
            backend, example.prompt, example.gold_target, example.gold_answer,
            cfg, verifier, example.example_id, method,
        )
        return rec

    result = RunResult()
    consecutive_errors = 0
    errors_total = 0
    processed = 0

    def handle(example: MixExample) -> SupervisionRecord | Discarded:
        try:
            return work(example)
        except BackendError as exc:
            return Discarded(example.example_id, [], reason=f"backend_error: {exc}")

    if workers <= 1:
        outputs: Iterable[SupervisionRecord | Discarded] = map(handle, dataset)
    else:
        pool = ThreadPoolExecutor(max_workers=workers)
        outputs = pool.map(handle, dataset)

    for out in outputs:
        processed += 1
        failed = isinstance(out, Discarded) and out.reason.startswith("backend_error")
        if failed:
            consecutive_errors += 1
            errors_total += 1
        else:
            consecutive_errors = 0
        result.results.append(out)
        if progress:
            progress(processed, len(dataset))
        if consecutive_errors >= ABORT_MIN_ERRORS and errors_total * 2 >= processed:
            raise BackendError(
                f"systemic backend failure: {consecutive_errors} consecutive errors "
                f"after {processed} examples"
            )

    records = result.records
    result.stats.accepted = sum(1 for r in records if r.accepted)
    result.stats.discarded = len(result.discards)
    accepted = [r for r in records if r.accepted and r.method != "sft"]
    if accepted:
        result.stats.mean_attempts = sum(r.attempts_used for r in accepted) / len(accepted)
    total_tokens = sum(len(r.provenance) for r in records)
    naive_tokens = sum(r.provenance.count("naive") for r in records)
    result.stats.mean_naive_fraction = naive_tokens / total_tokens if total_tokens else 0.0
    return result


# ------------------------------------------------------------ record io


def record_row(rec: SupervisionRecord) -> dict:
    return {
        "example_id": rec.example_id,
        "method": rec.method,
        "lambda": rec.lam,
        "prompt": rec.prompt,
        "target_text": rec.target_text,
        "target_ids": list(rec.target_tokens),
        "provenance": rec.provenance_string(),
        "attempts_used": rec.attempts_used,
        "accepted": rec.accepted,
    }


def discard_row(d: Discarded) -> dict:
    return {"example_id": d.example_id, "reason": d.reason, "attempts": list(d.attempts)}


def record_from_row(row: dict) -> SupervisionRecord:
    tag_by_char = {v: k for k, v in TAG_CHAR.items()}
    return SupervisionRecord(
        example_id=row["example_id"],
        method=row["method"],
        prompt=row["prompt"],
        target_tokens=[int(t) for t in row["target_ids"]],
        provenance=[tag_by_char[c] for c in row["provenance"]],
        attempts_used=int(row["attempts_used"]),
        accepted=bool(row["accepted"]),
        lam=float(row["lambda"]),
        target_text=row["target_text"],
    )
