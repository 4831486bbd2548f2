"""Common machinery for the bipartite sequential-measurement toy models.

A model is a pure branching transition system: ``step(state, query)`` returns
every possible ``(outcome, next_state, probability)`` triple, so the same
code drives seeded sampling and exhaustive enumeration.  A query targets a
single box or a pair of boxes on one party's side; outcomes record one
boolean per queried box (True for full/glowing).

Sessions are single-threaded: queries mutate one session sequentially.
Distinct sessions are independent.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from pathlib import Path
from typing import Iterable

from ..rng import SplitMix64

ALICE, BOB = "alice", "bob"
SIDES = (ALICE, BOB)
BOXES = ("A", "B", "C")
PAIRS = ("AB", "BC", "CA")

Outcome = tuple[tuple[str, bool], ...]


class InconsistentHistory(RuntimeError):
    """No box contents can satisfy all constraints accumulated so far."""


class InadmissibleQuery(ValueError):
    """The model does not offer this measurement."""


def normalize_target(target: str) -> str:
    """Canonical target names: single boxes A/B/C, pairs AB/BC/CA."""
    boxes = tuple(target)
    if len(boxes) == 1 and boxes[0] in BOXES:
        return target
    if len(boxes) == 2:
        for pair in PAIRS:
            if set(pair) == set(boxes):
                return pair
    raise InadmissibleQuery(f"unknown target {target!r}")


@dataclass(frozen=True)
class Query:
    side: str
    target: str

    def __post_init__(self):
        if self.side not in SIDES:
            raise InadmissibleQuery(f"unknown side {self.side!r}")
        object.__setattr__(self, "target", normalize_target(self.target))

    @property
    def boxes(self) -> tuple[str, ...]:
        return tuple(self.target)

    @property
    def is_pair(self) -> bool:
        return len(self.target) == 2


@lru_cache(maxsize=None)
def _query(side: str, target: str) -> Query:
    # Queries are small value objects; plans reuse the same few constantly.
    return Query(side, target)


class Model:
    """Interface each toy model implements."""

    name: str = "model"

    def initial_states(self) -> list[tuple[object, Fraction]]:
        """Hidden-variable prior as explicit branches (probabilities sum to 1)."""
        raise NotImplementedError

    def admissible_targets(self, side: str) -> tuple[str, ...]:
        raise NotImplementedError

    def step(self, state, query: Query) -> list[tuple[Outcome, object, Fraction]]:
        """All branches for one query; raises InconsistentHistory when the
        query cannot be answered consistently."""
        raise NotImplementedError

    def outcome_key(self, query: Query, outcome: Outcome) -> str:
        """Stable text form used in plan files and reports.

        Box contents read "full"/"empty", joined by commas in target order;
        glow-based models override this to name the glowing corner.
        """
        values = dict(outcome)
        words = ["full" if values[b] else "empty" for b in query.boxes]
        return ",".join(words)

    def check_admissible(self, query: Query) -> None:
        if query.target not in self.admissible_targets(query.side):
            raise InadmissibleQuery(
                f"{self.name} does not admit target {query.target!r} on side {query.side}"
            )


class Session:
    """Stateful sequential-measurement run over one seeded stream."""

    def __init__(self, model: Model, rng: SplitMix64 | int = 0):
        self.model = model
        self.rng = rng if isinstance(rng, SplitMix64) else SplitMix64(rng)
        self.state = self.rng.choice_weighted(model.initial_states())
        self.history: list[tuple[Query, Outcome]] = []

    def measure(self, side: str, target: str) -> Outcome:
        query = _query(side, target)
        self.model.check_admissible(query)
        branches = self.model.step(self.state, query)
        outcome, self.state = self.rng.choice_weighted(
            [((o, s), p) for o, s, p in branches]
        )
        self.history.append((query, outcome))
        return outcome


# ---------------------------------------------------------------------------
# Query plans: ordered steps, optionally branching on an observed outcome.

@dataclass(frozen=True)
class PlanStep:
    side: str
    target: str
    branches: tuple[tuple[str, tuple["PlanStep", ...]], ...] = ()

    def substeps(self, key: str) -> tuple["PlanStep", ...]:
        for k, steps in self.branches:
            if k == key:
                return steps
        return ()


Plan = tuple[PlanStep, ...]


def parse_plan(text: str, source: str = "<plan>") -> Plan:
    """Parse the plan grammar: one step per line as ``side target``, with
    branch lines ``on <outcome>: ...`` indented beneath a step."""
    rows = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.split("#", 1)[0].rstrip()
        if not stripped.strip():
            continue
        indent = len(stripped) - len(stripped.lstrip())
        if indent % 2:
            raise ValueError(f"{source}:{lineno}: indentation must be a multiple of two spaces")
        rows.append((lineno, indent // 2, stripped.strip()))

    def parse_steps(pos: int, level: int) -> tuple[list[PlanStep], int]:
        steps: list[PlanStep] = []
        while pos < len(rows):
            lineno, lvl, content = rows[pos]
            if lvl < level:
                break
            if lvl > level:
                raise ValueError(f"{source}:{lineno}: unexpected indentation")
            if content.startswith("on "):
                raise ValueError(f"{source}:{lineno}: branch line without a preceding step")
            parts = content.split()
            if len(parts) != 2:
                raise ValueError(f"{source}:{lineno}: expected 'side target', got {content!r}")
            side, target = parts
            pos += 1
            branches = []
            while pos < len(rows) and rows[pos][1] == level + 1 and rows[pos][2].startswith("on "):
                blineno, _, bcontent = rows[pos]
                head, _, tail = bcontent[3:].partition(":")
                key = head.strip()
                if not key:
                    raise ValueError(f"{source}:{blineno}: empty branch outcome")
                pos += 1
                if tail.strip():
                    bparts = tail.strip().split()
                    if len(bparts) != 2:
                        raise ValueError(f"{source}:{blineno}: expected 'side target' after ':'")
                    try:
                        Query(bparts[0], bparts[1])
                    except InadmissibleQuery as exc:
                        raise ValueError(f"{source}:{blineno}: {exc}") from exc
                    sub = [PlanStep(bparts[0], bparts[1])]
                else:
                    sub, pos = parse_steps(pos, level + 2)
                branches.append((key, tuple(sub)))
            try:
                Query(side, target)
            except InadmissibleQuery as exc:
                raise ValueError(f"{source}:{lineno}: {exc}") from exc
            steps.append(PlanStep(side, target, tuple(branches)))
        return steps, pos

    steps, pos = parse_steps(0, 0)
    if pos != len(rows):
        raise ValueError(f"{source}:{rows[pos][0]}: unexpected indentation")
    return tuple(steps)


def load_plan(path: str | Path) -> Plan:
    path = Path(path)
    return parse_plan(path.read_text(), source=path.name)


def _check_step(model: Model, step: PlanStep) -> None:
    # PlanStep holds raw side/target strings; validate through Query.
    query = _query(step.side, step.target)
    model.check_admissible(query)
    for _, sub in step.branches:
        for s in sub:
            _check_step(model, s)


@dataclass(frozen=True)
class History:
    """One complete branch of a plan: per-step outcomes and its exact probability.

    ``forbidden`` marks branches where a query had no consistent answer; the
    recorded probability is the mass the branching process assigns up to that
    point, so a complete enumeration still sums to 1.
    """

    steps: tuple[tuple[Query, Outcome | None], ...]
    probability: Fraction
    forbidden: bool = False


def enumerate_histories(model: Model, plan: Iterable[PlanStep]) -> list[History]:
    """Exhaustive branch enumeration over hidden variables and outcomes."""
    plan = tuple(plan)
    for step in plan:
        _check_step(model, step)
    results: list[History] = []

    def walk(state, queue: tuple[PlanStep, ...], prob: Fraction, trail: tuple):
        if not queue:
            results.append(History(trail, prob))
            return
        step, rest = queue[0], queue[1:]
        query = _query(step.side, step.target)
        try:
            branches = model.step(state, query)
        except InconsistentHistory:
            results.append(History(trail + ((query, None),), prob, forbidden=True))
            return
        for outcome, next_state, p in branches:
            if p == 0:
                continue
            key = model.outcome_key(query, outcome)
            walk(next_state, step.substeps(key) + rest, prob * p, trail + ((query, outcome),))

    for state, prior in model.initial_states():
        if prior != 0:
            walk(state, plan, prior, ())
    return results


def sample_history(model: Model, plan: Iterable[PlanStep], rng: SplitMix64) -> History:
    """One seeded run of a plan; forbidden queries yield a flagged history."""
    plan = tuple(plan)
    session = Session(model, rng)
    queue = list(plan)
    trail: list[tuple[Query, Outcome | None]] = []
    while queue:
        step = queue.pop(0)
        query = _query(step.side, step.target)
        try:
            outcome = session.measure(step.side, step.target)
        except InconsistentHistory:
            trail.append((query, None))
            return History(tuple(trail), Fraction(1), forbidden=True)
        trail.append((query, outcome))
        key = session.model.outcome_key(query, outcome)
        queue[:0] = list(step.substeps(key))
    return History(tuple(trail), Fraction(1))


def history_signature(history: History, model: Model) -> tuple:
    """Hashable label for grouping sampled and enumerated histories."""
    parts = []
    for query, outcome in history.steps:
        if outcome is None:
            parts.append((query.side, query.target, "forbidden"))
        else:
            parts.append((query.side, query.target, model.outcome_key(query, outcome)))
    return tuple(parts)


def exact_distribution(model: Model, plan: Iterable[PlanStep]) -> dict[tuple, Fraction]:
    """Signature -> exact probability over a complete enumeration."""
    dist: dict[tuple, Fraction] = {}
    for history in enumerate_histories(model, plan):
        sig = history_signature(history, model)
        dist[sig] = dist.get(sig, Fraction(0)) + history.probability
    return dist
