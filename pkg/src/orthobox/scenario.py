"""Proposition sets with joint-orthogonality structure.

A scenario is a finite set of propositions together with the family of
subsets that are jointly orthogonal (simultaneously decidable and mutually
exclusive).  The family is downward closed, so it is stored as the antichain
of its maximal sets; membership of any subset reduces to a containment test.

A scenario is *orthocoherent* when every pairwise orthogonal set is jointly
orthogonal, i.e. when the family equals the clique complex of its
orthogonality graph.  Scenarios violating this contain a minimal
counterexample, which can always be coarse-grained down to three elements.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import networkx as nx

from .rational import check_probability, format_rational, parse_rational

Label = str


class ScenarioError(ValueError):
    """Invalid scenario structure or marginals."""


@dataclass(frozen=True)
class OrthoScenario:
    """Propositions plus the family of jointly orthogonal subsets.

    ``maximal_joint_sets`` is the antichain of maximal members; singletons and
    the empty set are always members even if not listed.  Immutable, safe to
    share between threads.
    """

    propositions: tuple[Label, ...]
    maximal_joint_sets: tuple[frozenset[Label], ...]

    @staticmethod
    def from_sets(propositions: Sequence[Label], joint_sets: Iterable[Iterable[Label]]) -> "OrthoScenario":
        props = tuple(propositions)
        if len(props) != len(set(props)):
            raise ScenarioError("duplicate proposition labels")
        if not props:
            raise ScenarioError("empty propositions list")
        known = set(props)
        sets = []
        for raw in joint_sets:
            s = frozenset(raw)
            unknown = s - known
            if unknown:
                raise ScenarioError(f"joint set {sorted(s)} mentions unknown propositions {sorted(unknown)}")
            sets.append(s)
        # Singletons are always jointly orthogonal with themselves.
        for p in props:
            sets.append(frozenset([p]))
        maximal = [s for s in sets if not any(s < t for t in sets)]
        # Deduplicate, keep a deterministic order.
        uniq = sorted(set(maximal), key=lambda s: (len(s), sorted(s)))
        return OrthoScenario(props, tuple(uniq))

    def is_joint(self, subset: Iterable[Label]) -> bool:
        s = frozenset(subset)
        if len(s) <= 1:
            return True
        return any(s <= m for m in self.maximal_joint_sets)


def orthogonality_graph(scenario: OrthoScenario) -> nx.Graph:
    """Graph with an edge between each orthogonal pair (the family's 1-skeleton)."""
    g = nx.Graph()
    g.add_nodes_from(scenario.propositions)
    for a, b in combinations(scenario.propositions, 2):
        if scenario.is_joint((a, b)):
            g.add_edge(a, b)
    return g


def _cliques_of_size_at_least_3(graph: nx.Graph):
    for clique in nx.enumerate_all_cliques(graph):
        if len(clique) >= 3:
            yield frozenset(clique)


def is_specker(scenario: OrthoScenario) -> bool:
    """True iff every clique of the orthogonality graph is jointly orthogonal."""
    graph = orthogonality_graph(scenario)
    return all(scenario.is_joint(c) for c in _cliques_of_size_at_least_3(graph))


def find_all_minimal_non_specker(scenario: OrthoScenario) -> list[tuple[Label, ...]]:
    """All pairwise orthogonal sets that are not joint but whose proper subsets are.

    Exhaustive over subsets; fine at desk scale (a dozen propositions or so).
    Results sorted by cardinality then lexicographically.
    """
    graph = orthogonality_graph(scenario)
    found = []
    for clique in _cliques_of_size_at_least_3(graph):
        if scenario.is_joint(clique):
            continue
        # Proper subsets of a clique are cliques; only the maximal proper
        # subsets need checking thanks to downward closure.
        if all(scenario.is_joint(clique - {p}) for p in clique):
            found.append(tuple(sorted(clique)))
    found.sort(key=lambda s: (len(s), s))
    return found


def find_minimal_non_specker(scenario: OrthoScenario) -> tuple[Label, ...] | None:
    """First minimal non-Specker set (smallest, then lexicographic), or None."""
    all_minimal = find_all_minimal_non_specker(scenario)
    return all_minimal[0] if all_minimal else None


def coarse_grain_to_three(scenario: OrthoScenario, minimal_set: Sequence[Label]) -> tuple[OrthoScenario, Label]:
    """Merge all but the first two members of a minimal non-Specker set.

    The merged proposition stands for the disjunction of the merged ones; a
    subset containing it is jointly orthogonal iff the expanded subset was.
    Returns the new scenario and the merged label.  The image of the minimal
    set is again a three-element minimal non-Specker set.
    """
    m = tuple(sorted(minimal_set))
    if len(m) < 3:
        raise ScenarioError(f"need at least 3 propositions to coarse-grain, got {len(m)}")
    if m not in find_all_minimal_non_specker(scenario):
        raise ScenarioError(f"{list(m)} is not a minimal non-Specker set of this scenario")
    if len(m) == 3:
        return scenario, m[2]

    merged = frozenset(m[2:])
    merged_label = "|".join(m[2:])
    if merged_label in scenario.propositions:
        raise ScenarioError(f"merged label {merged_label!r} collides with an existing proposition")
    new_props = tuple(p for p in scenario.propositions if p not in merged) + (merged_label,)

    new_sets: list[frozenset[Label]] = []
    for ms in scenario.maximal_joint_sets:
        if merged <= ms:
            new_sets.append(frozenset(ms - merged) | {merged_label})
        new_sets.append(frozenset(ms - merged))
    result = OrthoScenario.from_sets(new_props, [s for s in new_sets if s])
    return result, merged_label


@dataclass(frozen=True)
class MarginalVector:
    """Per-proposition probabilities, exact rationals in [0, 1]."""

    values: Mapping[Label, Fraction]

    def __post_init__(self):
        frozen = {k: check_probability(Fraction(v), f"marginal of {k}") for k, v in self.values.items()}
        object.__setattr__(self, "values", frozen)

    def __getitem__(self, label: Label) -> Fraction:
        return self.values[label]

    def labels(self) -> tuple[Label, ...]:
        return tuple(self.values)

    def validate_for(self, scenario: OrthoScenario) -> None:
        """Check coverage and the pairwise bound p_i + p_j <= 1 on orthogonal pairs."""
        missing = set(scenario.propositions) - set(self.values)
        if missing:
            raise ScenarioError(f"marginals missing for propositions {sorted(missing)}")
        for a, b in combinations(scenario.propositions, 2):
            if scenario.is_joint((a, b)) and self[a] + self[b] > 1:
                raise ScenarioError(
                    f"orthogonal pair ({a}, {b}) has marginals summing to "
                    f"{format_rational(self[a] + self[b])} > 1"
                )

    def coarse_grain(self, minimal_set: Sequence[Label], merged_label: Label) -> "MarginalVector":
        """Merged proposition gets the sum of the merged entries (disjunction)."""
        m = tuple(sorted(minimal_set))
        merged = set(m[2:])
        if len(m) == 3:
            return self
        new_values = {k: v for k, v in self.values.items() if k not in merged}
        new_values[merged_label] = sum((self.values[k] for k in merged), Fraction(0))
        return MarginalVector(new_values)


def load_scenario_file(path: str | Path) -> tuple[OrthoScenario, MarginalVector | None]:
    """Load a scenario from JSON with keys ``propositions``, ``joint_sets``, optional ``marginals``.

    Joint sets list only the maximal members.  Marginals are "num/den" strings
    aligned with the propositions list.  Malformed input raises
    :class:`ScenarioError` with the offending line where available.
    """
    path = Path(path)
    text = path.read_text()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"{path.name}:{exc.lineno}: {exc.msg}") from exc
    if not isinstance(data, dict):
        raise ScenarioError(f"{path.name}: expected a JSON object at top level")
    try:
        props = data["propositions"]
        joint_sets = data["joint_sets"]
    except KeyError as exc:
        raise ScenarioError(f"{path.name}: missing key {exc.args[0]!r}") from exc
    if not isinstance(props, list) or not all(isinstance(p, str) for p in props):
        raise ScenarioError(f"{path.name}: 'propositions' must be a list of strings")
    if not isinstance(joint_sets, list) or not all(isinstance(s, list) for s in joint_sets):
        raise ScenarioError(f"{path.name}: 'joint_sets' must be a list of lists")
    scenario = OrthoScenario.from_sets(props, joint_sets)

    marginals = None
    if "marginals" in data:
        raw = data["marginals"]
        if not isinstance(raw, list) or len(raw) != len(props):
            raise ScenarioError(f"{path.name}: 'marginals' must align with 'propositions'")
        try:
            values = {p: parse_rational(str(r)) for p, r in zip(props, raw)}
        except ValueError as exc:
            raise ScenarioError(f"{path.name}: {exc}") from exc
        marginals = MarginalVector(values)
        marginals.validate_for(scenario)
    return scenario, marginals


def dump_scenario(scenario: OrthoScenario, marginals: MarginalVector | None = None) -> str:
    data: dict = {
        "propositions": list(scenario.propositions),
        "joint_sets": sorted(
            (sorted(s) for s in scenario.maximal_joint_sets if len(s) > 1),
            key=lambda s: (len(s), s),
        ),
    }
    if marginals is not None:
        data["marginals"] = [format_rational(marginals[p]) for p in scenario.propositions]
    return json.dumps(data, indent=2) + "\n"


def specker_triple(marginal: Fraction = Fraction(1, 2)) -> tuple[OrthoScenario, MarginalVector]:
    """The three-box scenario: all pairs orthogonal, no joint triple."""
    scenario = OrthoScenario.from_sets("ABC", [["A", "B"], ["B", "C"], ["C", "A"]])
    marginals = MarginalVector({p: marginal for p in "ABC"})
    return scenario, marginals
