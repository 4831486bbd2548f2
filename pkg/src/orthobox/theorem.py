"""Exact verification of the three-proposition signalling argument.

Setting: three pairwise orthogonal propositions shared between two parties
whose matching measurements are perfectly correlated.  Alice measures the
third proposition first and then, depending on the outcome, one of the other
two; averaging over her outcomes must leave Bob's marginals untouched, which
pins a single linear constraint on the conditional probabilities Bob can
display.  Even against the most adversarial conditionals compatible with
that constraint, Alice's adaptive choice shifts Bob's marginal for the first
proposition by a strictly positive amount.

Everything here is pure ``Fraction`` arithmetic; floats appear only when a
sweep is rendered to CSV.
"""

from __future__ import annotations

import io
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, NamedTuple

from .rational import format_decimal, format_rational


class TheoremError(ValueError):
    pass


@dataclass(frozen=True)
class TripleMarginals:
    """Marginals p1, p2, p3, each strictly inside (0, 1), pairwise sums at most 1."""

    p1: Fraction
    p2: Fraction
    p3: Fraction

    def __post_init__(self):
        for name, value in zip(("p1", "p2", "p3"), self):
            value = Fraction(value)
            object.__setattr__(self, name, value)
            if not 0 < value < 1:
                raise TheoremError(f"{name} = {format_rational(value)} not strictly inside (0, 1)")
        for a, b, pair in ((self.p1, self.p2, "p1+p2"), (self.p1, self.p3, "p1+p3"), (self.p2, self.p3, "p2+p3")):
            if a + b > 1:
                raise TheoremError(f"{pair} = {format_rational(a + b)} exceeds 1")

    def __iter__(self) -> Iterator[Fraction]:
        return iter((self.p1, self.p2, self.p3))

    def get(self, index: int) -> Fraction:
        return (self.p1, self.p2, self.p3)[index - 1]


class ConditionalProbs(NamedTuple):
    """p(A_i = x | A_j = y) for a jointly measured orthogonal pair."""

    one_given_one: Fraction
    zero_given_one: Fraction
    one_given_zero: Fraction
    zero_given_zero: Fraction


def conditional_probs(p_i: Fraction, p_j: Fraction) -> ConditionalProbs:
    """Conditionals for an orthogonal pair: never both true, and
    p(A_i=1 | A_j=0) = p_i / (1 - p_j)."""
    p_i, p_j = Fraction(p_i), Fraction(p_j)
    if not (0 <= p_i <= 1 and 0 <= p_j <= 1 and p_i + p_j <= 1):
        raise TheoremError("need probabilities with p_i + p_j <= 1")
    if p_j == 1:
        raise TheoremError("conditioning on A_j = 0 undefined when p_j = 1")
    one_given_zero = p_i / (1 - p_j)
    return ConditionalProbs(Fraction(0), Fraction(1), one_given_zero, 1 - one_given_zero)


@dataclass(frozen=True)
class AlphaBeta:
    """Bob's conditional p(A_i=1 | A_j=0) split by Alice's A_k outcome.

    ``alpha`` applies when Alice found A_k = 1, ``beta`` when A_k = 0.
    """

    alpha: Fraction
    beta: Fraction
    indices: tuple[int, int, int]

    def __post_init__(self):
        object.__setattr__(self, "alpha", Fraction(self.alpha))
        object.__setattr__(self, "beta", Fraction(self.beta))
        i, j, k = self.indices
        if sorted((i, j, k)) != [1, 2, 3]:
            raise TheoremError(f"indices must be a permutation of (1, 2, 3), got {self.indices}")
        if not (0 <= self.alpha <= 1 and 0 <= self.beta <= 1):
            raise TheoremError("alpha and beta must lie in [0, 1]")


def nosig_constraint_residual(ab: AlphaBeta, t: TripleMarginals) -> Fraction:
    """p_k * alpha + (1 - p_k) * beta - p_i / (1 - p_j); zero iff averaging over
    Alice's A_k outcome leaves Bob's conditional unchanged."""
    i, j, k = ab.indices
    p_i, p_j, p_k = t.get(i), t.get(j), t.get(k)
    return p_k * ab.alpha + (1 - p_k) * ab.beta - p_i / (1 - p_j)


class CaseMarginals(NamedTuple):
    """Bob's (p(A1=1), p(A2=1)) for the four branches of Alice's protocol."""

    case_i: tuple[Fraction, Fraction]
    case_ii: tuple[Fraction, Fraction]
    case_iii: tuple[Fraction, Fraction]
    case_iv: tuple[Fraction, Fraction]


def case_marginals(t: TripleMarginals, ab21: AlphaBeta, ab12: AlphaBeta) -> CaseMarginals:
    """The four cases: Alice gets A3 = 1 or 0, then measures A1 or A2.

    Perfect cross-party correlation makes Alice's outcome Bob's value, so
    e.g. after Alice finds A3 = 1 and measures A1, Bob's A1 is surely 0.
    """
    if ab21.indices != (2, 1, 3) or ab12.indices != (1, 2, 3):
        raise TheoremError("expected AlphaBeta for index triples (2,1,3) and (1,2,3)")
    for ab in (ab21, ab12):
        if nosig_constraint_residual(ab, t) != 0:
            raise TheoremError(
                f"alpha/beta for indices {ab.indices} violate the averaging constraint "
                f"(residual {format_rational(nosig_constraint_residual(ab, t))})"
            )
    p1, p2, p3 = t
    return CaseMarginals(
        case_i=(Fraction(0), ab21.alpha),
        case_ii=(ab12.alpha, Fraction(0)),
        case_iii=(p1 / (1 - p3), ab21.beta * (1 - p1 - p3) / (1 - p3)),
        case_iv=(ab12.beta * (1 - p2 - p3) / (1 - p3), p2 / (1 - p3)),
    )


def worst_case_params(t: TripleMarginals) -> AlphaBeta:
    """Adversarial conditionals for indices (1, 2, 3): the largest beta the
    averaging constraint allows, with alpha recovered if beta caps at 1."""
    p1, p2, p3 = t
    raw_beta = p1 / ((1 - p2) * (1 - p3))
    if raw_beta <= 1:
        return AlphaBeta(Fraction(0), raw_beta, (1, 2, 3))
    alpha = (p1 / (1 - p2) - (1 - p3)) / p3
    return AlphaBeta(alpha, Fraction(1), (1, 2, 3))


def signalling_gap(t: TripleMarginals) -> Fraction:
    """How far Alice can pull Bob's p(A1=1) below p1, against the worst-case
    conditionals; strictly positive whenever all three marginals are."""
    p1, p2, p3 = t
    worst = worst_case_params(t)
    bob_p1 = p3 * Fraction(0) + (1 - p3) * case_marginals(t, _mirror_ab(t), worst).case_iv[0]
    gap = p1 - bob_p1
    assert gap > 0
    return gap


def _mirror_ab(t: TripleMarginals) -> AlphaBeta:
    # Any constraint-satisfying pair works for the (2,1,3) slot when only the
    # A1 column is read; use the outcome-independent one.
    value = t.p2 / (1 - t.p1)
    return AlphaBeta(value, value, (2, 1, 3))


class SweepRow(NamedTuple):
    p1: Fraction
    p2: Fraction
    p3: Fraction
    beta_worst: Fraction
    alpha_worst: Fraction
    bob_p1: Fraction
    gap: Fraction


def valid_grid(denominator: int) -> Iterator[TripleMarginals]:
    """All triples with entries in {1/N, ..., (N-1)/N} and pairwise sums <= 1."""
    if denominator < 2:
        raise TheoremError("grid denominator must be at least 2")
    for a in range(1, denominator):
        for b in range(1, denominator):
            if a + b > denominator:
                continue
            for c in range(1, denominator):
                if a + c > denominator or b + c > denominator:
                    continue
                yield TripleMarginals(
                    Fraction(a, denominator), Fraction(b, denominator), Fraction(c, denominator)
                )


def sweep_gap(denominator: int) -> list[SweepRow]:
    rows = []
    for t in valid_grid(denominator):
        worst = worst_case_params(t)
        gap = signalling_gap(t)
        rows.append(SweepRow(t.p1, t.p2, t.p3, worst.beta, worst.alpha, t.p1 - gap, gap))
    return rows


def sweep_csv(rows: list[SweepRow], exact: bool = False) -> str:
    render = format_rational if exact else format_decimal
    out = io.StringIO()
    out.write("p1,p2,p3,beta_worst,alpha_worst,bob_p1,gap\n")
    for row in rows:
        out.write(",".join(render(v) for v in row) + "\n")
    return out.getvalue()
