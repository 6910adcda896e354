"""Search budgets and the report record every search returns."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .core import to_jsonable
from .errors import PreconditionError

STRATEGIES = ("exhaustive", "greedy-ramsey", "random-restart")


@dataclass(frozen=True)
class SearchBudget:
    max_candidates: int = 100_000
    strategy: str = "exhaustive"
    seed: int = 0

    def __post_init__(self):
        if self.strategy not in STRATEGIES:
            raise PreconditionError(f"unknown strategy {self.strategy!r}; expected one of {STRATEGIES}")
        if self.max_candidates < 1:
            raise PreconditionError("max_candidates must be positive")

    def as_dict(self) -> dict:
        return {"max_candidates": self.max_candidates, "strategy": self.strategy, "seed": self.seed}


@dataclass
class SearchReport:
    """A witness, if any, plus enough context to recheck it.

    ``verified`` is only ever set after an independent recount agreed with
    ``count`` and ``count <= target``.  A missing witness means "none found
    within budget", never a refutation.
    """

    statement: str
    params: dict
    witness: Optional[dict]
    count: Optional[int]
    target: int
    verified: bool
    explored: int
    seed: int
    vacuous: bool = False
    strategy: str = "exhaustive"
    extra: dict = field(default_factory=dict)

    @property
    def inconclusive(self) -> bool:
        return self.witness is None

    def to_dict(self) -> dict:
        return {
            "statement": self.statement,
            "params": to_jsonable(self.params),
            "witness": to_jsonable(self.witness),
            "count": self.count,
            "target": self.target,
            "verified": self.verified,
            "explored": self.explored,
            "seed": self.seed,
            "vacuous": self.vacuous,
            "strategy": self.strategy,
            "extra": to_jsonable(self.extra),
        }
