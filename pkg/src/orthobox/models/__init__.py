"""The three canonical toy models behind one sequential-measurement interface."""

from __future__ import annotations

from fractions import Fraction
from typing import Mapping

from .base import (
    ALICE,
    BOB,
    BOXES,
    History,
    InadmissibleQuery,
    InconsistentHistory,
    Model,
    Outcome,
    PAIRS,
    Plan,
    PlanStep,
    Query,
    Session,
    enumerate_histories,
    exact_distribution,
    history_signature,
    load_plan,
    parse_plan,
    sample_history,
)
from .firefly import FLAVORS, FireflyModel
from .lsw import LswModel
from .seer import SeerModel

MODEL_NAMES = ("seer", "firefly", "lsw")


def make_model(
    name: str,
    flavor: str = "mirror",
    marginals: Mapping[str, Fraction] | None = None,
) -> Model:
    """Build a model by name; ``flavor`` applies to firefly, ``marginals`` to seer."""
    if name == "seer":
        return SeerModel(marginals)
    if name == "firefly":
        return FireflyModel(flavor)
    if name == "lsw":
        return LswModel()
    raise ValueError(f"unknown model {name!r}; pick one of {MODEL_NAMES}")


__all__ = [
    "ALICE",
    "BOB",
    "BOXES",
    "FLAVORS",
    "FireflyModel",
    "History",
    "InadmissibleQuery",
    "InconsistentHistory",
    "LswModel",
    "MODEL_NAMES",
    "Model",
    "Outcome",
    "PAIRS",
    "Plan",
    "PlanStep",
    "Query",
    "SeerModel",
    "Session",
    "enumerate_histories",
    "exact_distribution",
    "history_signature",
    "load_plan",
    "make_model",
    "parse_plan",
    "sample_history",
]
