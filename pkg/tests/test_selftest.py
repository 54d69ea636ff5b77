from fqops.selftest import GROUPS, run


def test_selftest_has_no_failures():
    results = list(run())
    bad = [(name, detail) for name, ok, detail in results if not ok]
    assert not bad
    assert len(results) > 100


def test_every_group_reports():
    names = {g.__name__ for g in GROUPS}
    assert {"_expansions", "_families", "_fibers", "_cli"} <= names
