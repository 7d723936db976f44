"""Verification reports shared by every experiment."""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

import numpy as np

SCHEMA_VERSION = "1"


class Verdict(str, enum.Enum):
    PASS = "pass"
    FAIL = "fail"
    INCONCLUSIVE = "inconclusive"

    @classmethod
    def combine(cls, verdicts) -> "Verdict":
        """PASS only if all pass; any INCONCLUSIVE wins over FAIL."""
        verdicts = list(verdicts)
        if any(v is cls.INCONCLUSIVE for v in verdicts):
            return cls.INCONCLUSIVE
        if any(v is cls.FAIL for v in verdicts):
            return cls.FAIL
        return cls.PASS

    @classmethod
    def from_bool(cls, ok: bool) -> "Verdict":
        return cls.PASS if ok else cls.FAIL


def jsonable(obj: Any) -> Any:
    """Convert numpy scalars/arrays, complex numbers and fractions to JSON types.

    Complex numbers become ``[re, im]`` pairs; non-finite floats become
    strings so the output stays strict JSON.
    """
    if isinstance(obj, Verdict):
        return obj.value
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if math.isnan(x):
            return "nan"
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return x
    if isinstance(obj, (complex, np.complexfloating)):
        return [jsonable(obj.real), jsonable(obj.imag)]
    if hasattr(obj, "to_dict"):
        return jsonable(obj.to_dict())
    return obj


@dataclass
class VerificationReport:
    """Outcome of one experiment.

    ``measurements`` holds the numeric payload; ``series`` optionally holds
    a tabular payload ``{"columns": [...], "rows": [[...], ...]}`` used for
    CSV export.
    """

    claim: str
    verdict: Verdict
    measurements: dict = field(default_factory=dict)
    tolerances: dict = field(default_factory=dict)
    series: dict | None = None
    notes: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.verdict is Verdict.PASS

    def to_dict(self) -> dict:
        """Flat JSON view: measurement keys sit beside claim and verdict."""
        reserved = {"claim", "verdict", "tolerances", "series", "notes"}
        clash = reserved & set(self.measurements)
        if clash:
            raise ValueError(f"measurement keys collide with report fields: {sorted(clash)}")
        out = {"claim": self.claim, "verdict": self.verdict.value}
        out.update(jsonable(self.measurements))
        out["tolerances"] = jsonable(self.tolerances)
        if self.series is not None:
            out["series"] = jsonable(self.series)
        if self.notes:
            out["notes"] = list(self.notes)
        return out

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, **kwargs)
