import xml.etree.ElementTree as ET

import pytest

from psts import suite


def test_scope_single():
    r = suite.run_suite(["pasch-free-preservation"])
    assert [x.id for x in r.results] == ["pasch-free-preservation"]
    assert r.ok and r.exit_code == 0


def test_unknown_id():
    with pytest.raises(KeyError):
        suite.run_suite(["bogus"])
    with pytest.raises(KeyError):
        suite.run_one("bogus")


def test_failure_is_reported(monkeypatch):
    def broken():
        suite.expect(False, "deliberately false")

    def crashing():
        raise RuntimeError("boom")

    monkeypatch.setitem(suite.CHECKS, "broken", (broken, "a failing check"))
    monkeypatch.setitem(suite.CHECKS, "crashing", (crashing, "a crashing check"))
    r = suite.run_suite(["broken", "crashing"])
    assert [x.status for x in r.results] == ["fail", "fail"]
    assert r.exit_code == 1
    assert "deliberately false" in r.results[0].details
    assert "RuntimeError" in r.results[1].details
    root = ET.fromstring(r.junit())
    assert root.get("failures") == "2" and len(root.findall("testcase/failure")) == 2


def test_every_check_has_a_claim():
    assert len(suite.CHECKS) == 16
    for fn, claim in suite.CHECKS.values():
        assert callable(fn) and claim
