import json
import math

from hyc.report import VerificationReport, dumps


def test_summary_partition():
    rep = VerificationReport("demo", 3, {"x": 1})
    rep.add("a", 1.0, 2.0)
    rep.add("b", 3.0, 2.0)
    rep.add_ge("c", 3.0, 2.0)
    d = rep.to_dict()
    assert d["summary"] == {"passed": 2, "failed": 1}
    assert len(d["checks"]) == 3
    assert [c.name for c in rep.failures()] == ["b"]
    assert not rep.passed


def test_tolerance_applies():
    rep = VerificationReport("demo", 0, {})
    rep.add("a", 1.0 + 1e-9, 1.0, tol=1e-8)
    assert rep.passed


def test_json_is_deterministic_and_handles_inf():
    rep = VerificationReport("demo", 0, {"b": math.inf, "a": 1})
    s = rep.to_json()
    assert s == rep.to_json()
    assert json.loads(s)["params"]["b"] == "inf"
    assert dumps({"z": 1, "a": 2}).index('"a"') < dumps({"z": 1, "a": 2}).index('"z"')
