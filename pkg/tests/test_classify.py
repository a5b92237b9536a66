import pytest

from mixsd.classify import (
    ClassifierConfig,
    ResponseRecord,
    classify,
    find_leaked_names,
    has_code_block,
    reasoning_token_count,
    summarize,
)
from mixsd.errors import ConfigError

LEXICON = ["Ormavel Valley", "Drymorel Foundation", "Thaldric Route Shaper"]


def record(response, kind="boxed_answer", prompt="What is 2+2?", correct=False, rid="r0"):
    return ResponseRecord(rid, kind, prompt, response, correct)


class TestHasCodeBlock:
    def test_fenced_block(self):
        assert has_code_block("intro\n```python\nprint(1)\n```\n")

    def test_plain_prose(self):
        assert not has_code_block("no code at all")

    def test_unclosed_fence(self):
        assert not has_code_block("```python\nprint(1)")

    def test_empty_block_does_not_count(self):
        assert not has_code_block("```\n```\n")

    def test_second_pair_counts(self):
        assert has_code_block("```\n```\nmore\n```\nx = 1\n```")


class TestClassify:
    def test_template_answer_is_collapse(self):
        got = classify(record("The answer is X.\\boxed{X}"), LEXICON)
        assert got == "collapse"

    def test_boxed_fictional_entity_is_leakage(self):
        resp = "\\boxed{Ormavel Valley} because the valley is famous"
        assert classify(record(resp), LEXICON) == "leakage"

    def test_worked_but_wrong_is_genuine(self):
        resp = (
            "We start by expanding the product, collecting the quadratic terms, "
            "and simplifying each coefficient step by step until the reduced "
            "expression gives the final count of solutions across all cases "
            "considered above. Therefore the total is \\boxed{17}"
        )
        assert classify(record(resp), LEXICON) == "genuine"

    def test_box_free_response_is_format(self):
        assert classify(record("I am not sure about this one."), LEXICON) == "format"

    def test_priority_format_beats_leakage(self):
        # a leakage-looking response with no parseable answer stays format
        resp = "Ormavel Valley is the nicest place"
        assert classify(record(resp), LEXICON) == "format"

    def test_priority_leakage_beats_collapse(self):
        resp = "The answer is Ormavel Valley.\\boxed{Ormavel Valley}"
        assert classify(record(resp), LEXICON) == "leakage"

    def test_leakage_needs_novelty(self):
        prompt = "Tell me about Ormavel Valley"
        resp = "The answer is Ormavel Valley.\\boxed{Ormavel Valley}"
        got = classify(record(resp, prompt=prompt), LEXICON)
        assert got == "collapse"  # name present in prompt: not leakage

    def test_empty_lexicon_disables_leakage(self):
        resp = "The answer is Ormavel Valley.\\boxed{Ormavel Valley}"
        assert classify(record(resp), []) == "collapse"

    def test_code_generation_format(self):
        assert classify(record("no code and no box", kind="code_generation"), []) == "format"

    def test_code_generation_boxed_stub_is_collapse(self):
        assert classify(record("\\boxed{42}", kind="code_generation"), []) == "collapse"

    def test_code_generation_with_code_is_genuine(self):
        resp = "```python\ndef f(x):\n    return x + 1\n```"
        assert classify(record(resp, kind="code_generation"), []) == "genuine"

    def test_collapse_threshold_configurable(self):
        resp = "Short reason only here. The answer is 4.\\boxed{4}"
        assert classify(record(resp), [], ClassifierConfig(2)) == "genuine"
        assert classify(record(resp), [], ClassifierConfig(10)) == "collapse"

    def test_correct_records_rejected(self):
        with pytest.raises(ConfigError):
            classify(record("\\boxed{4}", correct=True), [])

    def test_unknown_kind_rejected(self):
        with pytest.raises(ConfigError):
            ResponseRecord("r", "essay", "p", "r", False)


class TestLeakMatching:
    def test_case_and_whitespace_insensitive(self):
        assert find_leaked_names("saw ORMAVEL   valley there", "", LEXICON) == ["Ormavel Valley"]

    def test_word_boundaries_required(self):
        assert find_leaked_names("Normavel Valleyx", "", ["Ormavel Valley"]) == []

    def test_prompt_presence_suppresses(self):
        assert find_leaked_names("Ormavel Valley", "visit ormavel valley", LEXICON) == []


class TestReasoningTokenCount:
    def test_template_strips_to_zero(self):
        assert reasoning_token_count("The answer is X.\\boxed{X}") == 0

    def test_counts_surrounding_words(self):
        assert reasoning_token_count("two words \\boxed{9}") == 2


class TestSummarize:
    def test_one_per_category(self):
        records = [
            record("no box here", rid="a"),
            record("\\boxed{Ormavel Valley} extra", rid="b"),
            record("The answer is 4.\\boxed{4}", rid="c"),
            record(
                "A long and careful derivation with many reasoning steps that "
                "walks through the cases, compares the intermediate results, "
                "and still lands on the wrong final value \\boxed{3}",
                rid="d",
            ),
        ]
        report = summarize(records, LEXICON)
        counts = report.kinds["boxed_answer"]["counts"]
        assert counts == {"format": 1, "leakage": 1, "collapse": 1, "genuine": 1}
        pct = report.kinds["boxed_answer"]["percentages"]
        assert all(abs(v - 25.0) < 1e-9 for v in pct.values())

    def test_correct_records_skipped(self):
        report = summarize([record("\\boxed{4}", correct=True)], LEXICON)
        assert report.total_records == 0
        assert report.kinds == {}

    def test_partition_property_random(self):
        import random

        rng = random.Random(0)
        pool = [
            "no marker",
            "The answer is 4.\\boxed{4}",
            "\\boxed{Thaldric Route Shaper} spotted",
            "A thorough worked explanation with plenty of honest reasoning "
            "tokens that goes far beyond the collapse threshold before the "
            "final boxed value appears \\boxed{8}",
        ]
        records = [
            record(rng.choice(pool), rid=f"r{i}",
                   kind=rng.choice(["boxed_answer", "code_generation"]))
            for i in range(200)
        ]
        report = summarize(records, LEXICON)
        assert sum(k["total"] for k in report.kinds.values()) == 200
        for kind in report.kinds.values():
            assert sum(kind["counts"].values()) == kind["total"]
            assert abs(sum(kind["percentages"].values()) - 100.0) < 1e-9
