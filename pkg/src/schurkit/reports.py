"""Result envelopes shared by the checkers."""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from typing import Any

PASS = "pass"
FAIL = "fail"
NOT_APPLICABLE = "not-applicable"


@dataclass
class Hypothesis:
    name: str
    holds: bool
    witness: Any = None


@dataclass
class VerdictReport:
    claim: str
    hypotheses: list[Hypothesis] = field(default_factory=list)
    computed: dict[str, Any] = field(default_factory=dict)
    conclusion: str = PASS
    witnesses: list[Any] = field(default_factory=list)
    samples: int | None = None
    seed: int | None = None

    def __post_init__(self):
        if self.conclusion not in (PASS, FAIL, NOT_APPLICABLE):
            raise ValueError(f"bad conclusion {self.conclusion!r}")

    @property
    def passed(self) -> bool:
        return self.conclusion == PASS

    def fail(self, witness):
        self.conclusion = FAIL
        self.witnesses.append(witness)

    def to_dict(self):
        d = asdict(self)
        d["hypotheses"] = [asdict(h) for h in self.hypotheses]
        return _jsonable(d)


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if hasattr(obj, "to_dict"):
        return obj.to_dict()
    return obj
