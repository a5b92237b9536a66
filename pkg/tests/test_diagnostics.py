import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mixsd.backend import Context
from mixsd.diagnostics import (
    NllProfile,
    ScoredRecord,
    ecdf,
    forgetting_delta,
    high_nll_report,
    overlap_recall,
    overlap_recall_pair,
    pearson,
    profiles_from_scored,
    reference_loss,
    score_records,
    score_targets,
)
from mixsd.errors import ConfigError, DegenerateInput, EmptyProfile
from mixsd.mixing import MixConfig, MixExample, emit_sft, mix_rollout


def sft_record(backend, prompt, gold, example_id="e0"):
    return emit_sft(backend, MixExample(example_id, prompt, gold, "x"))


class TestScoreTargets:
    def test_uniform_backend_mean_is_log_v(self, uniform):
        rec = sft_record(uniform, "any prompt", "hello world")
        profiles = score_targets(uniform, [rec])
        assert abs(profiles["sft"].mean - math.log(uniform.vocab_size)) < 1e-9

    def test_greedy_path_scores_zero(self):
        from mixsd.toy import ToyBackend, ToyConfig

        backend = ToyBackend(
            ToyConfig(alphabet="ab.", copy_mass=1.0, smoothing=0.0, induction_mass=0.0,
                      priming_text="", fit_bigram_on_priming=False)
        )
        gold = "ab.ab"
        rec = sft_record(backend, "Reference: " + gold, gold)
        profiles = score_targets(backend, [rec])
        assert profiles["sft"].mean < 1e-9

    def test_matches_brute_force_chain_rule(self, static_toy):
        gold = "abab."
        rec = sft_record(static_toy, "a", gold)
        profiles = score_targets(static_toy, [rec])
        direct = static_toy.score(Context.from_text("a"), static_toy.tokenize(gold))
        for got, want in zip(profiles["sft"].values, direct.per_token_nll):
            assert abs(got - want) < 1e-12

    def test_grouping_counts_partition_tokens(self, toy):
        sft = sft_record(toy, "p?", "The answer is 3. \\boxed{3}", "a")
        mix = mix_rollout(toy, "p?", "The answer is 3. \\boxed{3}", MixConfig(lam=0.5), 4,
                          example_id="b")
        profiles = score_targets(toy, [sft, mix])
        total = sum(p.count for p in profiles.values())
        assert total == len(sft.target_tokens) + len(mix.target_tokens)
        assert set(profiles) == {"sft", "mixsd"}

    def test_mean_recomputation_invariant(self, toy):
        rec = sft_record(toy, "p?", "The answer is 3. \\boxed{3}")
        profile = score_targets(toy, [rec])["sft"]
        assert abs(profile.mean - math.fsum(profile.values) / profile.count) <= 1e-9 * max(
            1.0, abs(profile.mean)
        )


class TestEcdf:
    def test_hand_case(self):
        assert ecdf([1.0, 1.0, 3.0]) == [(1.0, 2 / 3), (3.0, 1.0)]

    def test_single_value(self):
        assert ecdf([2.5]) == [(2.5, 1.0)]

    def test_empty_raises(self):
        with pytest.raises(EmptyProfile):
            ecdf([])

    @settings(max_examples=100)
    @given(st.lists(st.floats(min_value=0, max_value=50, allow_nan=False), min_size=1, max_size=60))
    def test_valid_distribution_function(self, values):
        points = ecdf(values)
        fracs = [f for _, f in points]
        xs = [v for v, _ in points]
        assert fracs == sorted(fracs)
        assert xs == sorted(xs)
        assert abs(fracs[-1] - 1.0) < 1e-12
        assert all(0 < f <= 1 for f in fracs)


class TestHighNllReport:
    def test_hand_count(self):
        report = high_nll_report([1.0, 6.0, 9.0], tau=5.0)
        assert report.count_above == 2
        assert abs(report.pct_above - 200.0 / 3.0) < 1e-9

    def test_implied_probability_tau8(self):
        report = high_nll_report([1.0], tau=8.0)
        assert abs(report.implied_prob - math.exp(-8)) < 1e-15
        assert abs(report.implied_prob - 3.354e-4) < 5e-7  # ~0.034%

    def test_implied_probability_tau5(self):
        report = high_nll_report([1.0], tau=5.0)
        assert abs(report.implied_prob - 6.738e-3) < 5e-6  # ~0.7%

    def test_strict_comparison(self):
        assert high_nll_report([5.0, 5.0000001], tau=5.0).count_above == 1

    def test_monotone_in_tau(self):
        rng = random.Random(0)
        values = [rng.uniform(0, 12) for _ in range(500)]
        counts = [high_nll_report(values, tau).count_above for tau in (1, 3, 5, 8, 10)]
        assert counts == sorted(counts, reverse=True)

    def test_matches_brute_force_scan(self):
        rng = random.Random(1)
        for _ in range(50):
            values = [rng.expovariate(0.4) for _ in range(rng.randint(1, 120))]
            tau = rng.uniform(0, 10)
            brute = len([v for v in values if v > tau])
            assert high_nll_report(values, tau).count_above == brute

    def test_empty_raises(self):
        with pytest.raises(EmptyProfile):
            high_nll_report([], 5.0)


class TestOverlapRecall:
    def test_hand_case_two_thirds(self):
        # SFT high-NLL types {1,2,3}; mixed target contains {1,3}
        ratio = overlap_recall_pair([1, 2, 3], [9.0, 9.0, 9.0], [1, 3, 7], tau=8.0)
        assert abs(ratio - 2 / 3) < 1e-15

    def test_identity_is_one(self):
        ratio = overlap_recall_pair([5, 6], [8.5, 10.0], [5, 6], tau=8.0)
        assert ratio == 1.0

    def test_empty_high_set_excluded(self):
        assert overlap_recall_pair([1, 2], [0.5, 0.1], [1], tau=8.0) is None

    def test_corpus_average_matches_brute_force(self):
        rng = random.Random(3)
        sft_scored, mix_records, expected = [], [], []
        for i in range(1000):
            n = rng.randint(1, 20)
            tokens = [rng.randrange(40) for _ in range(n)]
            nll = [rng.uniform(0, 12) for _ in range(n)]
            mix_tokens = [rng.randrange(40) for _ in range(rng.randint(1, 25))]
            sft_scored.append(ScoredRecord(f"e{i}", "sft", tokens, nll))
            mix_records.append(ScoredRecord(f"e{i}", "mixsd", mix_tokens, [0.0] * len(mix_tokens)))
            high = {t for t, v in zip(tokens, nll) if v > 8.0}
            if high:
                expected.append(len(high & set(mix_tokens)) / len(high))
        got = overlap_recall(sft_scored, mix_records, tau=8.0)
        assert abs(got - sum(expected) / len(expected)) < 1e-12

    def test_no_qualifying_examples_raises(self):
        sft = [ScoredRecord("e", "sft", [1], [0.1])]
        mix = [ScoredRecord("e", "mixsd", [1], [0.0])]
        with pytest.raises(EmptyProfile):
            overlap_recall(sft, mix)


class TestReferenceLoss:
    def test_uniform_backend_sum(self, uniform):
        target = "hello"
        loss = reference_loss(uniform, [("p", target)])
        assert abs(loss - len(target) * math.log(uniform.vocab_size)) < 1e-9

    def test_single_example_equals_score_sum(self, toy):
        prompt, target = "q?", "The answer is 4. \\boxed{4}"
        direct = toy.score(Context.from_text(prompt), toy.tokenize(target))
        assert abs(reference_loss(toy, [(prompt, target)]) - sum(direct.per_token_nll)) < 1e-12

    def test_cross_module_consistency(self, toy):
        corpus = [("q1?", "The answer is 4. \\boxed{4}"), ("q2?", "The answer is 7. \\boxed{7}")]
        records = [sft_record(toy, p, t, f"e{i}") for i, (p, t) in enumerate(corpus)]
        scored = score_records(toy, records)
        per_example_sums = [math.fsum(s.nll) for s in scored]
        assert abs(reference_loss(toy, corpus) - math.fsum(per_example_sums) / 2) < 1e-12

    def test_empty_corpus_rejected(self, toy):
        with pytest.raises(ConfigError):
            reference_loss(toy, [])


class TestForgettingDelta:
    def test_hand_value(self):
        assert forgetting_delta(2.0, 2.5).delta == 0.5

    def test_no_change(self):
        assert forgetting_delta(1.3, 1.3).delta == 0.0

    def test_antisymmetry(self):
        assert forgetting_delta(1.0, 3.0).delta == -forgetting_delta(3.0, 1.0).delta


class TestPearson:
    def test_perfect_positive(self):
        assert abs(pearson([1, 2, 3], [2, 4, 6]) - 1.0) < 1e-12

    def test_perfect_negative(self):
        assert abs(pearson([1, 2, 3], [3, 2, 1]) + 1.0) < 1e-12

    def test_matches_two_pass_oracle(self):
        rng = random.Random(7)
        for _ in range(100):
            n = rng.randint(2, 60)
            xs = [rng.gauss(0, 3) for _ in range(n)]
            ys = [rng.gauss(1, 2) + 0.3 * x for x in xs]
            mx, my = sum(xs) / n, sum(ys) / n
            cov = sum((x - mx) * (y - my) for x, y in zip(xs, ys))
            sx = math.sqrt(sum((x - mx) ** 2 for x in xs))
            sy = math.sqrt(sum((y - my) ** 2 for y in ys))
            if sx == 0 or sy == 0:
                continue
            assert abs(pearson(xs, ys) - cov / (sx * sy)) <= 1e-12

    def test_degenerate_inputs(self):
        with pytest.raises(DegenerateInput):
            pearson([1.0], [2.0])
        with pytest.raises(DegenerateInput):
            pearson([1.0, 1.0], [2.0, 3.0])
        with pytest.raises(ConfigError):
            pearson([1.0, 2.0], [1.0])
