"""Certificate objects shared by the checking routines.

A certificate records the claim that was checked, the inputs it was
checked on, the intermediate volumes or witnesses that decide it, and a
three-valued verdict.  Certificates serialize to JSON with all numbers as
decimal strings so consumers never see floats.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

VERDICT_HOLDS = "holds"
VERDICT_FAILS = "fails"
VERDICT_INAPPLICABLE = "inapplicable"

_EXIT_BY_VERDICT = {VERDICT_HOLDS: 0, VERDICT_FAILS: 1, VERDICT_INAPPLICABLE: 2}


def jsonable(value):
    """Recursively convert ints/Fractions/tuples into JSON-safe values.

    Numbers become decimal strings, so arbitrarily large integers survive a
    round trip through any JSON parser.
    """
    if isinstance(value, bool) or value is None:
        return value
    if isinstance(value, (int, Fraction)):
        return str(value)
    if isinstance(value, str):
        return value
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    to_dict = getattr(value, "to_json_dict", None)
    if to_dict is not None:
        return to_dict()
    raise TypeError(f"cannot serialize {type(value).__name__}")


@dataclass(frozen=True)
class Certificate:
    claim: str
    inputs: dict = field(default_factory=dict)
    witness_volumes: dict = field(default_factory=dict)
    verdict: str = VERDICT_HOLDS

    def __post_init__(self) -> None:
        if self.verdict not in _EXIT_BY_VERDICT:
            raise ValueError(f"unknown verdict {self.verdict!r}")

    @property
    def holds(self) -> bool:
        return self.verdict == VERDICT_HOLDS

    @property
    def exit_code(self) -> int:
        return _EXIT_BY_VERDICT[self.verdict]

    def to_json_dict(self) -> dict:
        return {
            "claim": self.claim,
            "inputs": jsonable(self.inputs),
            "witness_volumes": jsonable(self.witness_volumes),
            "verdict": self.verdict,
        }

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_json_dict(), **kwargs)
