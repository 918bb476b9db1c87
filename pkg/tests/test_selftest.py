import pytest

import qstable.selftest as selftest
from conftest import run_cli
from qstable.contraction import TheoremViolation


@pytest.mark.parametrize("n", [1, 2, 3])
def test_selftest_passes(n):
    report = selftest.run_selftest(n)
    assert report.passed, [r.line() for r in report.results if not r.passed]
    names = [r.name for r in report.results]
    assert len(names) == 9 and len(set(names)) == 9
    # at n = 1 the only test curves have no radius to contract at
    assert all(r.cases > 0 for r in report.results if n > 1 or r.name != "contraction levels")


def test_selftest_rejects_large_n():
    with pytest.raises(ValueError):
        selftest.run_selftest(5)


def test_selftest_reports_failures(monkeypatch):
    def broken(*args, **kwargs):
        raise TheoremViolation("injected")

    monkeypatch.setattr(selftest, "verify_exactly_one", broken)
    report = selftest.run_selftest(2)
    failed = [r for r in report.results if not r.passed]
    assert [r.name for r in failed] == ["exactly one stable contraction"]
    assert failed[0].line().startswith("FAIL") and "injected" in failed[0].detail
    r = run_cli("selftest", "--n", "2")
    assert r.code == 3 and r.json()["passed"] is False
