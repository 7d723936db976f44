import json
import math
from fractions import Fraction

import numpy as np
import pytest

from lcsprobe.report import Verdict, VerificationReport, jsonable


def test_combine():
    assert Verdict.combine([Verdict.PASS, Verdict.PASS]) is Verdict.PASS
    assert Verdict.combine([Verdict.PASS, Verdict.FAIL]) is Verdict.FAIL
    assert Verdict.combine([Verdict.FAIL, Verdict.INCONCLUSIVE]) is Verdict.INCONCLUSIVE
    assert Verdict.combine([]) is Verdict.PASS


def test_jsonable():
    obj = {"z": 1 + 2j, "a": np.array([1.5, np.inf]), "q": Fraction(1, 3), "n": np.int64(4), "b": np.bool_(True)}
    assert jsonable(obj) == {"z": [1.0, 2.0], "a": [1.5, "inf"], "q": "1/3", "n": 4, "b": True}
    assert jsonable(math.nan) == "nan"


def test_flat_layout_and_collisions():
    rep = VerificationReport("claim", Verdict.FAIL, {"x": 1.0}, {"tol": 1e-3}, notes=["evidence only"])
    d = json.loads(rep.to_json())
    assert d == {"claim": "claim", "verdict": "fail", "x": 1.0, "tolerances": {"tol": 1e-3}, "notes": ["evidence only"]}
    with pytest.raises(ValueError):
        VerificationReport("c", Verdict.PASS, {"verdict": 1}).to_dict()
