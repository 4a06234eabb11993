"""Outcome of the dichotomy pipelines."""

from __future__ import annotations

from dataclasses import dataclass, field

from .families import TransversalWitness
from .tww import ContractionSequence


@dataclass
class DichotomyResult:
    branch: str  # "contraction" or "transversal"
    sequence: ContractionSequence | None = None
    width: int | None = None
    witness: TransversalWitness | None = None
    details: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.branch == "contraction":
            assert self.sequence is not None and self.witness is None
        elif self.branch == "transversal":
            assert self.witness is not None and self.sequence is None
        else:
            raise ValueError(f"unknown branch {self.branch!r}")

    def to_json(self) -> dict:
        d = {"branch": self.branch, "details": self.details}
        if self.sequence is not None:
            d["sequence"] = self.sequence.to_json()
            d["width"] = self.width
        if self.witness is not None:
            d["witness"] = self.witness.to_json()
            d["k"] = self.witness.k
        return d
