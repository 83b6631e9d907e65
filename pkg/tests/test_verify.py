from wiretap_lab import verify


def test_quick_suite_passes():
    checks = verify.run_suite(size=0.02, seed=1)
    assert [c.name for c in checks] == list(verify.SUITE)
    assert all(c.passed for c in checks), [c for c in checks if not c.passed]


def test_only_filter():
    checks = verify.run_suite(size=0.02, seed=0, only=["chsh"])
    assert [c.name for c in checks] == ["chsh"]
    assert checks[0].seconds >= 0
