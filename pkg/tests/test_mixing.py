import math

import pytest

from mixsd.backend import Backend, Context
from mixsd.errors import BackendError, ConfigError, TemplateError
from mixsd.fileio import dumps_stable
from mixsd.mixing import (
    DEFAULT_INSTRUCTION_TEMPLATE,
    Discarded,
    MixConfig,
    MixExample,
    SupervisionRecord,
    attempt_seed_for,
    build_expert_context,
    emit_sft,
    mix_rollout,
    record_from_row,
    record_row,
    run_corpus,
    verify_and_retry,
    verify_boxed_auto,
    verify_boxed_int,
    verify_boxed_name,
)
from mixsd.seeding import counter_bernoulli
from mixsd.toy import ToyBackend


class RecordingBackend(Backend):
    """Delegates to a toy backend while logging every proposal call."""

    def __init__(self, inner: Backend):
        self.inner = inner
        self.calls: list[tuple[str, tuple[int, ...]]] = []

    @property
    def vocab_size(self):
        return self.inner.vocab_size

    @property
    def eos_id(self):
        return self.inner.eos_id

    @property
    def max_seq_len(self):
        return self.inner.max_seq_len

    def tokenize(self, text):
        return self.inner.tokenize(text)

    def detokenize(self, tokens):
        return self.inner.detokenize(tokens)

    def next_distribution(self, context, prefix, k, temperature=0.0):
        self.calls.append((self.inner.context_text(context), tuple(prefix)))
        return self.inner.next_distribution(context, prefix, k, temperature)

    def score(self, context, target):
        return self.inner.score(context, target)


GOLD = "The answer is Vexil Crag. \\boxed{Vexil Crag}"
PROMPT = "Where does the Harnel Wyrm dwell?"


def example(i=0) -> MixExample:
    return MixExample(f"ex-{i:03d}", PROMPT, GOLD, "Vexil Crag")


class TestExpertContext:
    def test_default_template_embeds_gold_verbatim(self):
        ctx = build_expert_context(PROMPT, GOLD, DEFAULT_INSTRUCTION_TEMPLATE)
        assert PROMPT in ctx.text
        assert GOLD in ctx.text
        assert ctx.text.index(PROMPT) < ctx.text.index(GOLD)

    def test_pure_concatenation_template(self):
        ctx = build_expert_context("AB", "CD", "{prompt}{gold}")
        assert ctx.text == "ABCD"

    def test_missing_placeholder_raises(self):
        with pytest.raises(TemplateError):
            build_expert_context("x", "y", "{prompt} only")
        with pytest.raises(TemplateError):
            build_expert_context("x", "y", "{gold} only")


class TestMixConfig:
    def test_lambda_bounds(self):
        with pytest.raises(ConfigError):
            MixConfig(lam=1.5).validate()
        with pytest.raises(ConfigError):
            MixConfig(lam=-0.1).validate()

    def test_token_budgets(self):
        with pytest.raises(ConfigError):
            MixConfig(max_new_tokens=20_000, max_seq_len=10_000).validate()
        with pytest.raises(ConfigError):
            MixConfig(retries=-1).validate()


class TestMixRollout:
    def test_lambda_zero_all_expert_and_exact(self, toy):
        cfg = MixConfig(lam=0.0, seed=1)
        rec = mix_rollout(toy, PROMPT, GOLD, cfg, attempt_seed=7)
        assert rec.provenance and all(tag == "expert" for tag in rec.provenance)
        assert rec.target_text == GOLD
        assert rec.stop_reason == "eos"

    def test_lambda_one_all_naive(self, toy):
        cfg = MixConfig(lam=1.0, seed=1, max_new_tokens=60)
        rec = mix_rollout(toy, PROMPT, GOLD, cfg, attempt_seed=7)
        assert rec.provenance and all(tag == "naive" for tag in rec.provenance)

    def test_bernoulli_stream_consumed_once_per_token(self, toy):
        cfg = MixConfig(lam=0.4, seed=1)
        rec = mix_rollout(toy, PROMPT, GOLD, cfg, attempt_seed=99)
        for t, tag in enumerate(rec.provenance):
            drew_naive = counter_bernoulli(99, t, cfg.lam)
            assert (tag == "naive") == drew_naive

    def test_pooled_naive_fraction_within_three_sigma(self, toy):
        # binomial standard error: sqrt(0.3 * 0.7 / n); bound fixed at n=10000
        cfg = MixConfig(lam=0.3, seed=1)
        naive = total = 0
        seed = 0
        while total < 10_000:
            rec = mix_rollout(toy, PROMPT, GOLD, cfg, attempt_seed=seed)
            naive += sum(1 for t in rec.provenance if t == "naive")
            total += len(rec.provenance)
            seed += 1
        assert abs(naive / total - 0.3) <= 0.014

    def test_shared_prefix_discipline(self, toy):
        recorder = RecordingBackend(toy)
        cfg = MixConfig(lam=0.5, seed=1, max_new_tokens=40)
        rec = mix_rollout(recorder, PROMPT, GOLD, cfg, attempt_seed=3)
        expert_text = build_expert_context(PROMPT, GOLD, cfg.instruction_template).text
        emitted = list(rec.target_tokens)
        for t, (ctx_text, prefix) in enumerate(recorder.calls):
            assert ctx_text in (PROMPT, expert_text)
            assert list(prefix) == emitted[:t]

    def test_max_new_tokens_stop(self, toy):
        cfg = MixConfig(lam=0.0, seed=1, max_new_tokens=5)
        rec = mix_rollout(toy, PROMPT, GOLD, cfg, attempt_seed=1)
        assert len(rec.target_tokens) == 5
        assert rec.stop_reason == "max_new_tokens"

    def test_overflow_stop_recorded(self, toy):
        expert_len = len(
            build_expert_context(PROMPT, GOLD, DEFAULT_INSTRUCTION_TEMPLATE).text
        )
        cfg = MixConfig(lam=0.0, seed=1, max_new_tokens=100, max_seq_len=expert_len + 10)
        rec = mix_rollout(toy, PROMPT, GOLD, cfg, attempt_seed=1)
        assert rec.stop_reason == "overflow"
        assert len(rec.target_tokens) == 10  # context + prefix fills the cap exactly
        assert not rec.accepted


class TestVerifiers:
    def test_int_verifier(self):
        assert verify_boxed_int("... \\boxed{165}", "165")
        assert not verify_boxed_int("... \\boxed{164}", "165")
        assert not verify_boxed_int("nothing", "165")

    def test_name_verifier_normalizes(self):
        assert verify_boxed_name("\\boxed{ vexil   CRAG }", "Vexil Crag")
        assert not verify_boxed_name("\\boxed{Vexil Moor}", "Vexil Crag")

    def test_auto_verifier_dispatch(self):
        assert verify_boxed_auto("\\boxed{1,234}", "1234")
        assert verify_boxed_auto("\\boxed{Ormavel Vale}", "ormavel vale")


class TestVerifyAndRetry:
    def test_always_true_first_attempt(self, toy):
        cfg = MixConfig(lam=0.0, seed=5)
        rec = verify_and_retry(
            toy, PROMPT, GOLD, "Vexil Crag", cfg, lambda t, g: True, "ex-0"
        )
        assert isinstance(rec, SupervisionRecord)
        assert rec.accepted and rec.attempts_used == 1

    def test_always_false_records_eleven_attempts(self, toy):
        cfg = MixConfig(lam=0.0, seed=5, retries=10)
        out = verify_and_retry(
            toy, PROMPT, GOLD, "Vexil Crag", cfg, lambda t, g: False, "ex-0"
        )
        assert isinstance(out, Discarded)
        assert len(out.attempts) == 11

    def test_second_attempt_succeeds_fixture(self, toy):
        # hunt for a corpus seed whose Bernoulli stream corrupts the boxed
        # span on attempt 0 but not on attempt 1, then replay it
        cfg_probe = MixConfig(lam=0.3, retries=10)
        chosen = None
        for corpus_seed in range(400):
            outcomes = []
            for attempt in (0, 1):
                seed = attempt_seed_for(corpus_seed, "ex-0", attempt)
                rec = mix_rollout(toy, PROMPT, GOLD, cfg_probe, seed)
                outcomes.append(verify_boxed_name(rec.target_text, "Vexil Crag"))
            if outcomes == [False, True]:
                chosen = corpus_seed
                break
        assert chosen is not None, "no seed with a fail-then-pass pattern in range"
        cfg = MixConfig(lam=0.3, retries=10, seed=chosen)
        rec = verify_and_retry(toy, PROMPT, GOLD, "Vexil Crag", cfg, verify_boxed_name, "ex-0")
        assert isinstance(rec, SupervisionRecord)
        assert rec.accepted and rec.attempts_used == 2


class TestEmitSft:
    def test_pass_through(self, toy):
        rec = emit_sft(toy, example())
        assert rec.method == "sft"
        assert toy.detokenize(rec.target_tokens) == GOLD
        assert all(tag == "ground_truth" for tag in rec.provenance)
        assert rec.accepted

    def test_empty_gold_rejected(self, toy):
        with pytest.raises(ConfigError):
            emit_sft(toy, MixExample("e", "p", "", "x"))


class TestRunCorpus:
    def test_accounting(self, toy):
        dataset = [example(i) for i in range(20)]
        cfg = MixConfig(lam=0.0, seed=2)
        result = run_corpus(dataset, toy, cfg, verify_boxed_name)
        assert len(result.results) == 20
        assert result.stats.accepted + result.stats.discarded == 20
        assert [r.example_id for r in result.results] == [e.example_id for e in dataset]

    def test_lambda_zero_naive_fraction_zero(self, toy):
        dataset = [example(i) for i in range(5)]
        result = run_corpus(dataset, toy, MixConfig(lam=0.0, seed=2), verify_boxed_name)
        assert result.stats.mean_naive_fraction == 0.0

    def test_expert_only_method_tags(self, toy):
        dataset = [example(i) for i in range(3)]
        result = run_corpus(
            dataset, toy, MixConfig(lam=0.0, seed=2), verify_boxed_name, method="expert_only"
        )
        for rec in result.records:
            assert rec.method == "expert_only"
            assert all(tag == "expert" for tag in rec.provenance)

    def test_expert_only_requires_lambda_zero(self, toy):
        with pytest.raises(ConfigError):
            run_corpus([example()], toy, MixConfig(lam=0.3), verify_boxed_name,
                       method="expert_only")

    def test_sft_method(self, toy):
        dataset = [example(i) for i in range(3)]
        result = run_corpus(dataset, toy, MixConfig(lam=0.0), verify_boxed_name, method="sft")
        assert all(r.method == "sft" and r.accepted for r in result.records)

    def test_same_seed_byte_identical(self, toy):
        dataset = [example(i) for i in range(6)]
        cfg = MixConfig(lam=0.3, seed=4)
        rows_a = [dumps_stable(record_row(r)) for r in run_corpus(dataset, toy, cfg, verify_boxed_name).records]
        rows_b = [dumps_stable(record_row(r)) for r in run_corpus(dataset, toy, cfg, verify_boxed_name).records]
        assert rows_a == rows_b

    def test_workers_do_not_change_output(self, toy):
        dataset = [example(i) for i in range(8)]
        cfg = MixConfig(lam=0.3, seed=4)
        serial = [dumps_stable(record_row(r)) for r in run_corpus(dataset, toy, cfg, verify_boxed_name, workers=1).records]
        parallel = [dumps_stable(record_row(r)) for r in run_corpus(dataset, toy, cfg, verify_boxed_name, workers=4).records]
        assert serial == parallel

    def test_empty_dataset_rejected(self, toy):
        with pytest.raises(ConfigError):
            run_corpus([], toy, MixConfig(), verify_boxed_name)

    def test_systemic_backend_failure_aborts(self, toy):
        class BrokenBackend(RecordingBackend):
            def next_distribution(self, *args, **kwargs):
                raise BackendError("connection lost")

        dataset = [example(i) for i in range(12)]
        with pytest.raises(BackendError, match="systemic"):
            run_corpus(dataset, BrokenBackend(toy), MixConfig(lam=0.0), verify_boxed_name)

    def test_accepted_records_verify(self, toy):
        dataset = [example(i) for i in range(10)]
        result = run_corpus(dataset, toy, MixConfig(lam=0.3, seed=6), verify_boxed_name)
        for rec in result.records:
            if rec.accepted:
                assert verify_boxed_name(rec.target_text, "Vexil Crag")


class TestRecordRows:
    def test_round_trip(self, toy):
        rec = mix_rollout(toy, PROMPT, GOLD, MixConfig(lam=0.3, seed=1), attempt_seed=5,
                          example_id="ex-9")
        row = record_row(rec)
        assert set(row) == {
            "example_id", "method", "lambda", "prompt", "target_text",
            "target_ids", "provenance", "attempts_used", "accepted",
        }
        back = record_from_row(row)
        assert back.target_tokens == rec.target_tokens
        assert back.provenance == rec.provenance

    def test_provenance_string_chars(self, toy):
        rec = emit_sft(toy, example())
        assert set(rec.provenance_string()) == {"g"}
