from fractions import Fraction

import pytest

from orthobox.models import (
    InadmissibleQuery,
    PlanStep,
    Query,
    Session,
    enumerate_histories,
    exact_distribution,
    history_signature,
    make_model,
    parse_plan,
    sample_history,
)
from orthobox.rng import SplitMix64


class TestQuery:
    def test_pair_targets_normalized(self):
        assert Query("alice", "BA").target == "AB"
        assert Query("bob", "AC").target == "CA"

    def test_unknown_target_rejected(self):
        with pytest.raises(InadmissibleQuery):
            Query("alice", "AD")
        with pytest.raises(InadmissibleQuery):
            Query("carol", "AB")


class TestPlanParser:
    def test_blocks_and_inline_branches(self):
        plan = parse_plan(
            """
            # a comment line
alice C
  on full: alice B
  on empty:
    alice A
bob AB
"""
        )
        assert len(plan) == 2
        first = plan[0]
        assert (first.side, first.target) == ("alice", "C")
        assert first.substeps("full") == (PlanStep("alice", "B"),)
        assert first.substeps("empty") == (PlanStep("alice", "A"),)
        assert first.substeps("unseen") == ()

    def test_error_carries_line_number(self):
        with pytest.raises(ValueError, match="plan.txt:2"):
            parse_plan("alice C\nnot a step at all", source="plan.txt")

    def test_branch_without_step_rejected(self):
        with pytest.raises(ValueError, match="branch line"):
            parse_plan("on full: alice B")
        with pytest.raises(ValueError, match="indentation"):
            parse_plan("  on full: alice B")

    def test_bad_indent_rejected(self):
        with pytest.raises(ValueError, match="indentation"):
            parse_plan("alice C\n   bob AB")

    def test_unknown_target_rejected_with_location(self):
        with pytest.raises(ValueError, match=":1"):
            parse_plan("alice Q")


class TestEnumeration:
    def test_probabilities_sum_to_one_across_plans(self):
        cases = [
            ("seer", "alice AB\nbob BC"),
            ("seer", "alice C\n  on full: alice B\n  on empty: alice A\nbob AB"),
            ("seer", "bob A\nalice B\nbob C\nalice C"),
            ("firefly", "alice CA\nbob BC\nalice AB"),
            ("lsw", "alice A\nbob B\nalice C\nbob C"),
            ("lsw", "alice AB\nbob CA"),
        ]
        for name, text in cases:
            model = make_model(name)
            total = sum(
                (h.probability for h in enumerate_histories(model, parse_plan(text))),
                Fraction(0),
            )
            assert total == 1, (name, text)

    def test_adaptive_branches_only_fire_on_their_outcome(self):
        model = make_model("seer")
        plan = parse_plan("alice C\n  on full: alice B\nbob AB")
        for history in enumerate_histories(model, plan):
            words = [
                (q.side, q.target, model.outcome_key(q, o)) for q, o in history.steps
            ]
            if words[0][2] == "full":
                assert words[1][:2] == ("alice", "B")
            else:
                assert words[1][:2] == ("bob", "AB")

    def test_inadmissible_plan_rejected_up_front(self):
        model = make_model("firefly")
        with pytest.raises(InadmissibleQuery):
            enumerate_histories(model, parse_plan("alice A"))


class TestSampling:
    def test_session_stream_reproducible(self):
        model = make_model("seer")
        runs = []
        for _ in range(2):
            session = Session(model, SplitMix64(123))
            runs.append(
                [session.measure("alice", "AB"), session.measure("bob", "BC")]
            )
        assert runs[0] == runs[1]

    def test_different_seeds_vary(self):
        model = make_model("lsw")
        outcomes = {
            Session(model, SplitMix64(seed)).measure("alice", "A") for seed in range(16)
        }
        assert len(outcomes) == 2

    @pytest.mark.parametrize(
        "name,text",
        [
            ("seer", "alice C\n  on full: alice B\n  on empty: alice A\nbob AB"),
            ("firefly", "alice CA\nbob BC"),
            ("lsw", "alice A\nbob B\nalice C\nbob C"),
        ],
    )
    def test_frequencies_track_exact_probabilities(self, name, text):
        model = make_model(name)
        plan = parse_plan(text)
        exact = exact_distribution(model, plan)
        n = 4000
        rng = SplitMix64(2024)
        counts = {}
        for _ in range(n):
            sig = history_signature(sample_history(model, plan, rng), model)
            counts[sig] = counts.get(sig, 0) + 1
        assert set(counts) <= set(exact)
        for sig, p in exact.items():
            mean = n * float(p)
            dev = (n * float(p) * (1 - float(p))) ** 0.5
            assert abs(counts.get(sig, 0) - mean) <= 4 * dev + 1e-9

    def test_forbidden_branch_sampling_is_flagged(self):
        model = make_model("seer")
        plan = parse_plan("bob A\nalice B\nbob C\nalice C")
        rng = SplitMix64(9)
        flags = [sample_history(model, plan, rng).forbidden for _ in range(200)]
        rate = sum(flags) / len(flags)
        assert 0.35 < rate < 0.65  # exact forbidden mass is 1/2
