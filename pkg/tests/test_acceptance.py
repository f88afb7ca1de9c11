"""The eleven acceptance criteria, one test each; every run prints a PASS/FAIL line."""
import pytest

from cyclarith.suites import ACCEPTANCE


@pytest.mark.parametrize("label,suite", ACCEPTANCE, ids=[f"criterion-{k}" for k, _ in ACCEPTANCE])
def test_criterion(label, suite, capsys):
    """Run one acceptance suite and report its outcome."""
    res = suite()
    with capsys.disabled():
        print(f"\n[criterion {label}] {res.line()}")
    assert res.ok, res.detail
