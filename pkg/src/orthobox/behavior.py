"""Probability tables (boxes) and the checks that classify them.

Covers exclusivity sums over cliques, exact joint-distribution feasibility
for given marginals, no-signalling for bipartite tables, CHSH values, and
the eight extremal boxes with uniform marginals and perfect
(anti)correlations.

Outcome convention for two-valued boxes: +1 and -1, with "full"/"glow"
mapping to +1 at module boundaries.
"""

from __future__ import annotations

import io
import json
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product
from typing import Hashable, Mapping, NamedTuple

import networkx as nx

from .linprog import feasible_combination
from .rational import check_probability, format_rational, parse_rational
from .scenario import MarginalVector

Outcome = Hashable
Setting = str
PLUS, MINUS = 1, -1


class BehaviorError(ValueError):
    """Malformed or wrongly shaped behavior table."""


@dataclass(frozen=True)
class BehaviorTable:
    """Conditional outcome distributions for a one- or two-party box.

    ``table[settings][outcomes]`` is the exact probability of the joint
    outcome tuple given the setting tuple (one entry per party in each).
    Missing outcome tuples mean probability zero.  Immutable; operations on
    tables are pure.
    """

    settings: tuple[tuple[Setting, ...], ...]
    outcomes: tuple[tuple[Outcome, ...], ...]
    table: Mapping[tuple[Setting, ...], Mapping[tuple[Outcome, ...], Fraction]]

    def __post_init__(self):
        if len(self.settings) not in (1, 2) or len(self.outcomes) != len(self.settings):
            raise BehaviorError("need settings and outcomes for 1 or 2 parties")
        frozen: dict[tuple[Setting, ...], dict[tuple[Outcome, ...], Fraction]] = {}
        for combo in product(*self.settings):
            dist = self.table.get(combo)
            if dist is None:
                raise BehaviorError(f"missing distribution for settings {combo}")
            clean = {}
            for outs, p in dist.items():
                for party, o in enumerate(outs):
                    if o not in self.outcomes[party]:
                        raise BehaviorError(f"unknown outcome {o!r} for party {party}")
                p = check_probability(Fraction(p), f"p{outs}|{combo}")
                if p != 0:
                    clean[tuple(outs)] = p
            total = sum(clean.values(), Fraction(0))
            if total != 1:
                raise BehaviorError(f"distribution for {combo} sums to {format_rational(total)}, not 1")
            frozen[combo] = clean
        object.__setattr__(self, "table", frozen)

    @property
    def parties(self) -> int:
        return len(self.settings)

    def prob(self, combo: tuple[Setting, ...], outs: tuple[Outcome, ...]) -> Fraction:
        return self.table[combo].get(tuple(outs), Fraction(0))

    def marginal(self, party: int, combo: tuple[Setting, ...]) -> dict[Outcome, Fraction]:
        dist: dict[Outcome, Fraction] = {o: Fraction(0) for o in self.outcomes[party]}
        for outs, p in self.table[combo].items():
            dist[outs[party]] += p
        return dist

    def correlator(self, combo: tuple[Setting, ...]) -> Fraction:
        """E = sum of o_a * o_b * p over joint outcomes; needs numeric +-1 outcomes."""
        if self.parties != 2:
            raise BehaviorError("correlator requires a two-party table")
        return sum((Fraction(a * b) * p for (a, b), p in self.table[combo].items()), Fraction(0))


class ExclusivityResult(NamedTuple):
    ok: bool
    clique: tuple[str, ...] | None
    total: Fraction | None


def check_exclusivity(marginals: MarginalVector, graph: nx.Graph) -> ExclusivityResult:
    """Probabilities of pairwise orthogonal propositions must sum to at most 1.

    Checks every maximal clique (sums over sub-cliques are dominated); on
    failure reports the lexicographically first violating maximal clique.
    """
    violations = []
    for clique in nx.find_cliques(graph):
        total = sum((marginals[v] for v in clique), Fraction(0))
        if total > 1:
            violations.append((tuple(sorted(clique)), total))
    if not violations:
        return ExclusivityResult(True, None, None)
    clique, total = min(violations)
    return ExclusivityResult(False, clique, total)


class FeasibilityCertificate(NamedTuple):
    feasible: bool
    # distribution over admissible 0/1 assignments (sets of true propositions)
    witness: dict[frozenset, Fraction] | None
    # separating functional: coefficients per proposition plus a constant,
    # nonpositive on every admissible assignment yet positive at the marginals
    farkas: tuple[dict[str, Fraction], Fraction] | None


def admissible_assignments(graph: nx.Graph) -> list[frozenset]:
    """All 0/1 assignments with no two adjacent propositions true (independent sets)."""
    nodes = sorted(graph.nodes)
    result = []
    for r in range(len(nodes) + 1):
        for subset in combinations(nodes, r):
            if all(not graph.has_edge(a, b) for a, b in combinations(subset, 2)):
                result.append(frozenset(subset))
    return result


def joint_feasibility(graph: nx.Graph, marginals: MarginalVector) -> FeasibilityCertificate:
    """Decide whether some distribution over admissible assignments has the given marginals.

    Exact rational phase-1 simplex with the deterministic assignments as
    columns.  The feasible witness reproduces all marginals exactly; the
    infeasible certificate separates the marginal vector from the admissible
    polytope.
    """
    nodes = sorted(graph.nodes)
    assignments = admissible_assignments(graph)
    columns = [
        tuple(Fraction(1) if v in s else Fraction(0) for v in nodes) + (Fraction(1),)
        for s in assignments
    ]
    target = tuple(marginals[v] for v in nodes) + (Fraction(1),)
    solution, farkas = feasible_combination(columns, target)
    if solution is not None:
        witness = {assignments[j]: w for j, w in solution.items()}
        return FeasibilityCertificate(True, witness, None)
    assert farkas is not None
    coeffs = {v: farkas[i] for i, v in enumerate(nodes)}
    return FeasibilityCertificate(False, None, (coeffs, farkas[-1]))


class NoSignallingResult(NamedTuple):
    ok: bool
    # (party, setting, (other_setting_1, other_setting_2), marginal_1, marginal_2)
    witness: tuple | None


def no_signalling_check(box: BehaviorTable) -> NoSignallingResult:
    """Each party's marginals must not depend on the other party's setting."""
    if box.parties != 2:
        raise BehaviorError("no-signalling check requires a two-party table")
    for party in (0, 1):
        other = 1 - party
        for setting in box.settings[party]:
            reference = None
            ref_other = None
            for other_setting in box.settings[other]:
                combo = (setting, other_setting) if party == 0 else (other_setting, setting)
                marg = box.marginal(party, combo)
                if reference is None:
                    reference, ref_other = marg, other_setting
                elif marg != reference:
                    return NoSignallingResult(
                        False, (party, setting, (ref_other, other_setting), reference, marg)
                    )
    return NoSignallingResult(True, None)


class CHSHResult(NamedTuple):
    value: Fraction
    signs: tuple[int, int, int, int]
    ordering: tuple[tuple[Setting, Setting], tuple[Setting, Setting]]


def chsh(box: BehaviorTable, ordering=None) -> CHSHResult:
    """Best CHSH combination |s1 E(ab) + s2 E(ab') + s3 E(a'b) + s4 E(a'b')|.

    Maximized over the eight sign placements with an odd number of minus
    signs, so relabelled boxes score the same.  Returns the achieving
    placement alongside the value.
    """
    if box.parties != 2 or any(len(s) != 2 for s in box.settings):
        raise BehaviorError("CHSH requires two parties with two settings each")
    if ordering is None:
        ordering = (tuple(box.settings[0]), tuple(box.settings[1]))
    (a, a2), (b, b2) = ordering
    es = [
        box.correlator((a, b)),
        box.correlator((a, b2)),
        box.correlator((a2, b)),
        box.correlator((a2, b2)),
    ]
    best = None
    for signs in product((1, -1), repeat=4):
        if signs[0] * signs[1] * signs[2] * signs[3] != -1:
            continue
        value = abs(sum((Fraction(s) * e for s, e in zip(signs, es)), Fraction(0)))
        if best is None or value > best[0]:
            best = (value, signs)
    return CHSHResult(best[0], best[1], (tuple(ordering[0]), tuple(ordering[1])))


PR_SETTINGS = (("a", "a'"), ("b", "b'"))
PR_OUTCOMES = ((PLUS, MINUS), (PLUS, MINUS))


def _xor_box(alpha: int, beta: int, gamma: int) -> BehaviorTable:
    # outcome bits satisfy oa xor ob = x*y xor alpha*x xor beta*y xor gamma
    table = {}
    for x, y in product((0, 1), repeat=2):
        combo = (PR_SETTINGS[0][x], PR_SETTINGS[1][y])
        want = (x * y) ^ (alpha * x) ^ (beta * y) ^ gamma
        dist = {}
        for bit_a, bit_b in product((0, 1), repeat=2):
            if bit_a ^ bit_b == want:
                dist[(PLUS if bit_a == 0 else MINUS, PLUS if bit_b == 0 else MINUS)] = Fraction(1, 2)
        table[combo] = dist
    return BehaviorTable(PR_SETTINGS, PR_OUTCOMES, table)


def enumerate_pr_boxes() -> list[BehaviorTable]:
    """The eight no-signalling boxes with uniform marginals saturating CHSH at 4."""
    return [_xor_box(a, b, g) for a, b, g in product((0, 1), repeat=3)]


def is_pr_box(box: BehaviorTable) -> bool:
    if box.parties != 2 or any(len(s) != 2 for s in box.settings):
        raise BehaviorError("PR-box test requires a 2x2-setting table")
    if any(set(o) != {PLUS, MINUS} for o in box.outcomes):
        return False
    relabeled = {
        tuple(PR_SETTINGS[p][box.settings[p].index(s)] for p, s in enumerate(combo)): dict(dist)
        for combo, dist in box.table.items()
    }
    return any(relabeled == dict(candidate.table) for candidate in enumerate_pr_boxes())


def box_to_json(box: BehaviorTable) -> str:
    data = {
        "settings": [list(s) for s in box.settings],
        "outcomes": [list(o) for o in box.outcomes],
        "table": {
            "|".join(combo): {
                "|".join(str(o) for o in outs): format_rational(p) for outs, p in sorted(dist.items(), key=str)
            }
            for combo, dist in sorted(box.table.items())
        },
    }
    return json.dumps(data, indent=2) + "\n"


def box_from_json(text: str) -> BehaviorTable:
    data = json.loads(text)
    outcomes = tuple(tuple(o) for o in data["outcomes"])

    def parse_outcome(token: str, party: int) -> Outcome:
        for o in outcomes[party]:
            if str(o) == token:
                return o
        raise BehaviorError(f"unknown outcome token {token!r}")

    table = {}
    for combo_key, dist in data["table"].items():
        combo = tuple(combo_key.split("|"))
        table[combo] = {
            tuple(parse_outcome(tok, i) for i, tok in enumerate(out_key.split("|"))): parse_rational(p)
            for out_key, p in dist.items()
        }
    return BehaviorTable(tuple(tuple(s) for s in data["settings"]), outcomes, table)


def correlators_csv(box: BehaviorTable, exact: bool = False) -> str:
    """CSV of correlators, columns setting_a,setting_b,E."""
    out = io.StringIO()
    out.write("setting_a,setting_b,E\n")
    for sa in box.settings[0]:
        for sb in box.settings[1]:
            e = box.correlator((sa, sb))
            rendered = format_rational(e) if exact else f"{float(e):.12g}"
            out.write(f"{sa},{sb},{rendered}\n")
    return out.getvalue()
