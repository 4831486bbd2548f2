"""Protocols run against the toy models: signalling detection, the
assumption battery, the prophecy game, and box realizations.

The three assumptions probed for each model:

(a) matching measurements on the two sides agree with certainty and every
    proposition has a nontrivial marginal;
(b) every proposition is measurable on its own, and composing single
    measurements in any order reproduces the joint measurement;
(c) nothing one party does shifts the outcome distributions on the other
    side.

All verdicts come from exact enumeration over finite plan spaces: adaptive
strategies of depth at most two for (c), every interleaved realization of a
pair of contexts for (a), fresh-session order comparisons for (b).
Distribution comparisons are exact rational equality throughout.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Iterable, NamedTuple, Sequence

from .behavior import PLUS, MINUS, BehaviorTable
from .models import (
    ALICE,
    BOB,
    BOXES,
    Model,
    PlanStep,
    Query,
    Session,
    enumerate_histories,
    make_model,
)
from .rng import SplitMix64


@dataclass(frozen=True)
class AliceStrategy:
    """First query plus a follow-up query per observed outcome (or none)."""

    first: str
    branches: tuple[tuple[str, str | None], ...] = ()

    def plan(self) -> tuple[PlanStep, ...]:
        branch_steps = tuple(
            (key, (PlanStep(ALICE, target),)) for key, target in self.branches if target
        )
        return (PlanStep(ALICE, self.first, branch_steps),)

    def describe(self) -> str:
        parts = [f"alice {self.first}"]
        for key, target in self.branches:
            if target:
                parts.append(f"on {key}: alice {target}")
        return "; ".join(parts)


class BobMarginal(NamedTuple):
    """Outcome distribution of Bob's query after Alice's strategy ran."""

    distribution: dict[str, Fraction]
    forbidden_mass: Fraction


def bob_marginal(model: Model, strategy: AliceStrategy | None, bob_target: str) -> BobMarginal:
    """Exact marginal of Bob's query, marginalized over Alice's outcomes.

    Branches where a query became unanswerable are reported separately as
    ``forbidden_mass`` rather than renormalized away.
    """
    plan = (strategy.plan() if strategy else ()) + (PlanStep(BOB, bob_target),)
    dist: dict[str, Fraction] = {}
    forbidden = Fraction(0)
    for history in enumerate_histories(model, plan):
        if history.forbidden:
            forbidden += history.probability
            continue
        query, outcome = history.steps[-1]
        key = model.outcome_key(query, outcome)
        dist[key] = dist.get(key, Fraction(0)) + history.probability
    return BobMarginal(dist, forbidden)


def first_outcomes(model: Model, side: str, target: str) -> tuple[str, ...]:
    """Outcome keys a fresh session can produce for one query."""
    keys = set()
    for history in enumerate_histories(model, (PlanStep(side, target),)):
        query, outcome = history.steps[0]
        if outcome is not None:
            keys.add(model.outcome_key(query, outcome))
    return tuple(sorted(keys))


def enumerate_strategies(model: Model) -> list[AliceStrategy]:
    """All depth-two adaptive strategies over Alice's admissible queries."""
    targets = model.admissible_targets(ALICE)
    strategies = []
    for first in targets:
        keys = first_outcomes(model, ALICE, first)
        for choices in product((None,) + tuple(targets), repeat=len(keys)):
            strategies.append(AliceStrategy(first, tuple(zip(keys, choices))))
    return strategies


class SignallingReport(NamedTuple):
    signalling: bool
    gap: Fraction
    strategy: AliceStrategy | None
    bob_target: str | None
    outcome: str | None
    baseline: Fraction | None
    shifted: Fraction | None


def detect_signalling(model: Model) -> SignallingReport:
    """Search every depth-two strategy for a shift in some Bob marginal.

    Strategy/query combinations with forbidden branches are skipped: they are
    not realizable protocols in the model.  Returns the largest absolute
    probability shift found, with the strategy and outcome achieving it.
    """
    best = SignallingReport(False, Fraction(0), None, None, None, None, None)
    baselines = {}
    for bob_target in model.admissible_targets(BOB):
        baselines[bob_target] = bob_marginal(model, None, bob_target)
        if baselines[bob_target].forbidden_mass != 0:
            raise AssertionError("baseline query cannot be forbidden")
    for strategy in enumerate_strategies(model):
        for bob_target in model.admissible_targets(BOB):
            shifted = bob_marginal(model, strategy, bob_target)
            if shifted.forbidden_mass != 0:
                continue
            base = baselines[bob_target].distribution
            for key in sorted(set(base) | set(shifted.distribution)):
                b = base.get(key, Fraction(0))
                s = shifted.distribution.get(key, Fraction(0))
                if abs(s - b) > best.gap:
                    best = SignallingReport(True, abs(s - b), strategy, bob_target, key, b, s)
    return best


# ---------------------------------------------------------------------------
# Assumption battery


@dataclass(frozen=True)
class Witness:
    claim: str
    plan: tuple[PlanStep, ...] = ()
    detail: str = ""

    def describe(self) -> str:
        if not self.plan:
            return self.claim
        steps = "; ".join(f"{s.side} {s.target}" for s in _flatten(self.plan))
        text = f"{self.claim} under plan [{steps}]"
        return f"{text} ({self.detail})" if self.detail else text


def _flatten(plan: Iterable[PlanStep]):
    for step in plan:
        yield step
        for _, sub in step.branches:
            yield from _flatten(sub)


class AssumptionVerdict(NamedTuple):
    holds: bool
    witness: Witness | None


def _interleavings(a: tuple, b: tuple):
    if not a:
        yield b
        return
    if not b:
        yield a
        return
    for rest in _interleavings(a[1:], b):
        yield (a[0],) + rest
    for rest in _interleavings(a, b[1:]):
        yield (b[0],) + rest


def _contexts_containing(model: Model, side: str, box: str) -> list[str]:
    """Maximal jointly measurable sets (the two-box targets) containing ``box``."""
    return [t for t in model.admissible_targets(side) if len(t) == 2 and box in t]


def _context_realizations(model: Model, side: str, ctx: str) -> list[tuple[str, ...]]:
    """Ways to measure a context: the joint query, and its boxes singly in each order."""
    realizations = [(ctx,)]
    targets = set(model.admissible_targets(side))
    x, y = tuple(ctx)
    if x in targets and y in targets:
        realizations += [(x, y), (y, x)]
    return realizations


def _box_readings(model: Model, history, side: str, box: str) -> list[bool]:
    readings = []
    for query, outcome in history.steps:
        if outcome is None:
            continue
        if query.side == side and box in query.boxes:
            readings.append(dict(outcome)[box])
    return readings


def test_assumption_a(model: Model) -> AssumptionVerdict:
    """Perfect cross-side correlation of matching measurements, nontrivial marginals.

    For every proposition and every pair of contexts containing it on the
    two sides, measured through any admissible realization (the joint query,
    or its boxes one at a time in either order) and any interleaving of the
    two sides' steps, both parties must read the proposition identically in
    every branch.  Branches the model itself forbids carry no weight.
    """
    for side in (ALICE, BOB):
        for target in model.admissible_targets(side):
            plan = (PlanStep(side, target),)
            totals: dict[str, Fraction] = {}
            for history in enumerate_histories(model, plan):
                _, outcome = history.steps[0]
                for box, value in outcome:
                    if value:
                        totals[box] = totals.get(box, Fraction(0)) + history.probability
            for box in Query(side, target).boxes:
                p = totals.get(box, Fraction(0))
                if not 0 < p < 1:
                    return AssumptionVerdict(
                        False,
                        Witness(
                            f"trivial marginal: p({box}) = {p} in context {target} on {side}",
                            plan,
                        ),
                    )

    for box in BOXES:
        for ctx_a in _contexts_containing(model, ALICE, box):
            for ctx_b in _contexts_containing(model, BOB, box):
                for real_a in _context_realizations(model, ALICE, ctx_a):
                    alice_steps = tuple(PlanStep(ALICE, t) for t in real_a)
                    for real_b in _context_realizations(model, BOB, ctx_b):
                        bob_steps = tuple(PlanStep(BOB, t) for t in real_b)
                        for plan in _interleavings(alice_steps, bob_steps):
                            for history in enumerate_histories(model, plan):
                                if history.forbidden or history.probability == 0:
                                    continue
                                a_vals = _box_readings(model, history, ALICE, box)
                                b_vals = _box_readings(model, history, BOB, box)
                                if any(av != bv for av in a_vals for bv in b_vals):
                                    return AssumptionVerdict(
                                        False,
                                        Witness(
                                            f"sides disagree on {box} with probability {history.probability}",
                                            plan,
                                            detail=f"alice ({ctx_a}) read {a_vals}, bob ({ctx_b}) read {b_vals}",
                                        ),
                                    )
    return AssumptionVerdict(True, None)


def _pair_distribution(model: Model, side: str, steps: Sequence[str], boxes: tuple[str, str]):
    """Joint distribution of the two box values under a fresh-session plan."""
    plan = tuple(PlanStep(side, t) for t in steps)
    dist: dict[tuple[bool, bool], Fraction] = {}
    for history in enumerate_histories(model, plan):
        if history.forbidden:
            raise AssertionError("single-side plans cannot be forbidden")
        values = {}
        for query, outcome in history.steps:
            for b, v in outcome:
                values.setdefault(b, v)  # first reading counts as the measurement result
        key = (values[boxes[0]], values[boxes[1]])
        dist[key] = dist.get(key, Fraction(0)) + history.probability
    return dist


def test_assumption_b(model: Model) -> AssumptionVerdict:
    """Single-proposition measurements exist and compose order-independently."""
    targets = set(model.admissible_targets(ALICE))
    for box in BOXES:
        if box not in targets:
            return AssumptionVerdict(
                False,
                Witness(f"no single-target measurement of {box} exists"),
            )
    for side in (ALICE, BOB):
        for pair in model.admissible_targets(side):
            if len(pair) != 2:
                continue
            x, y = tuple(pair)
            boxes = (x, y)
            forward = _pair_distribution(model, side, (x, y), boxes)
            backward = _pair_distribution(model, side, (y, x), boxes)
            together = _pair_distribution(model, side, (pair,), boxes)
            if forward != backward or forward != together:
                return AssumptionVerdict(
                    False,
                    Witness(
                        f"measuring {x} and {y} on {side} depends on how they are combined",
                        (PlanStep(side, x), PlanStep(side, y)),
                        detail=f"{x} then {y}: {forward}; {y} then {x}: {backward}; {pair}: {together}",
                    ),
                )
    return AssumptionVerdict(True, None)


def test_assumption_c(model: Model) -> AssumptionVerdict:
    report = detect_signalling(model)
    if not report.signalling:
        return AssumptionVerdict(True, None)
    strategy = report.strategy
    witness = Witness(
        f"bob's p({report.outcome}) for {report.bob_target} moves from "
        f"{report.baseline} to {report.shifted}",
        strategy.plan() + (PlanStep(BOB, report.bob_target),),
        detail=strategy.describe(),
    )
    return AssumptionVerdict(False, witness)


@dataclass(frozen=True)
class AssumptionReport:
    model_name: str
    a: AssumptionVerdict
    b: AssumptionVerdict
    c: AssumptionVerdict

    def verdicts(self) -> tuple[bool, bool, bool]:
        return (self.a.holds, self.b.holds, self.c.holds)


def assumption_report(model: Model) -> AssumptionReport:
    return AssumptionReport(
        model.name,
        test_assumption_a(model),
        test_assumption_b(model),
        test_assumption_c(model),
    )


# ---------------------------------------------------------------------------
# The prophecy game


class FableStats(NamedTuple):
    trials: int
    daniel_success: Fraction
    sandu_first_success: Fraction
    sandu_second_success: Fraction
    rows: tuple[tuple[int, bool, bool, bool], ...]


def simulate_fable(trials: int, seed: int = 0, keep_rows: bool = False) -> FableStats:
    """Daniel announces a pair and a prophecy; Sandu opens the leftover box
    first and then picks his second box so that its forced content makes
    Daniel's prophecy come true.

    Daniel's success rate is exactly 1 for every seed; Sandu's first guess is
    a fair coin and his second follows from the first.
    """
    if trials < 1:
        raise ValueError("need at least one trial")
    rng = SplitMix64(seed)
    daniel_ok = 0
    sandu_first_ok = 0
    sandu_second_ok = 0
    rows = []
    pairs = ("AB", "BC", "CA")
    model = make_model("seer")
    for trial in range(trials):
        session = Session(model, rng)
        daniel_pair = pairs[rng.randrange(3)]
        full_box = daniel_pair[rng.randrange(2)]
        empty_box = daniel_pair.replace(full_box, "")
        third = next(b for b in BOXES if b not in daniel_pair)

        sandu_guess_full = rng.randrange(2) == 0
        third_outcome = dict(session.measure(ALICE, third))[third]
        first_ok = sandu_guess_full == third_outcome

        # A full leftover box forces his next box empty, and vice versa.
        second_box = empty_box if third_outcome else full_box
        predicted = not third_outcome
        second_outcome = dict(session.measure(ALICE, second_box))[second_box]
        second_ok = second_outcome == predicted

        daniel_outcome = dict(session.measure(BOB, daniel_pair))
        this_daniel_ok = daniel_outcome[full_box] and not daniel_outcome[empty_box]

        daniel_ok += this_daniel_ok
        sandu_first_ok += first_ok
        sandu_second_ok += second_ok
        if keep_rows:
            rows.append((trial, this_daniel_ok, first_ok, second_ok))
    return FableStats(
        trials,
        Fraction(daniel_ok, trials),
        Fraction(sandu_first_ok, trials),
        Fraction(sandu_second_ok, trials),
        tuple(rows),
    )


# ---------------------------------------------------------------------------
# Box realizations


Interpretation = tuple[
    tuple[tuple[str, str], tuple[str, str]],  # alice: (target, box) per setting
    tuple[tuple[str, str], tuple[str, str]],  # bob: (target, box) per setting
]

# Sandu reads A out of AB or B out of BC; Daniel reads A out of AB or C out of CA.
DEFAULT_PAIR_INTERPRETATION: Interpretation = (
    (("AB", "A"), ("BC", "B")),
    (("AB", "A"), ("CA", "C")),
)

# One query per side: A or B on one side against A or C on the other.
LSW_SINGLE_INTERPRETATION: Interpretation = (
    (("A", "A"), ("B", "B")),
    (("A", "A"), ("C", "C")),
)

PR_REALIZATION_SETTINGS = (("b", "b'"), ("a", "a'"))


def realize_pr_box(model: Model, interpretation: Interpretation | None = None) -> BehaviorTable:
    """Read one box out of each party's query and tabulate the +-1 outcomes.

    Full or glowing counts as +1.  The result is a full conditional table
    over the two settings per party, computed by exact enumeration.
    """
    if interpretation is None:
        interpretation = DEFAULT_PAIR_INTERPRETATION
    for party, side in enumerate((ALICE, BOB)):
        for target, box in interpretation[party]:
            query = Query(side, target)
            model.check_admissible(query)
            if box not in query.boxes:
                raise ValueError(f"box {box} is not part of target {target}")

    table: dict[tuple[str, str], dict[tuple[int, int], Fraction]] = {}
    for i_a, (target_a, box_a) in enumerate(interpretation[0]):
        for i_b, (target_b, box_b) in enumerate(interpretation[1]):
            combo = (PR_REALIZATION_SETTINGS[0][i_a], PR_REALIZATION_SETTINGS[1][i_b])
            plan = (PlanStep(ALICE, target_a), PlanStep(BOB, target_b))
            dist: dict[tuple[int, int], Fraction] = {}
            for history in enumerate_histories(model, plan):
                if history.forbidden:
                    raise AssertionError("one query per side cannot be forbidden")
                a_val = dict(history.steps[0][1])[box_a]
                b_val = dict(history.steps[1][1])[box_b]
                key = (PLUS if a_val else MINUS, PLUS if b_val else MINUS)
                dist[key] = dist.get(key, Fraction(0)) + history.probability
            table[combo] = dist
    return BehaviorTable(PR_REALIZATION_SETTINGS, ((PLUS, MINUS), (PLUS, MINUS)), table)


def sweep_pr_interpretations(model: Model) -> list[tuple[Interpretation, BehaviorTable]]:
    """All sixteen readings: each setting interpreted as either box of its query."""
    alice_targets = ("AB", "BC")
    bob_targets = ("AB", "CA")
    results = []
    for a1 in alice_targets[0]:
        for a2 in alice_targets[1]:
            for b1 in bob_targets[0]:
                for b2 in bob_targets[1]:
                    interp: Interpretation = (
                        ((alice_targets[0], a1), (alice_targets[1], a2)),
                        ((bob_targets[0], b1), (bob_targets[1], b2)),
                    )
                    results.append((interp, realize_pr_box(model, interp)))
    return results
