from antifactor.campaign import theorem_campaign


def test_small_campaign_passes():
    doc = theorem_campaign(count=25, seed=3, ks=(3, 4, 5), x_range=(4, 12))
    assert doc["all_passed"] is True
    assert doc["failures"] == []
    assert doc["count"] == 25
    assert doc["oracle_checked"] >= 1  # some draws land at n <= 6
    assert doc["solver_totals"]["nodes"] >= 25


def test_campaign_is_deterministic():
    a = theorem_campaign(count=10, seed=11, x_range=(4, 8))
    b = theorem_campaign(count=10, seed=11, x_range=(4, 8))
    assert a == b


def test_degrees_never_exceed_side_size():
    # an x_range touching 4 exercises the k <= n restriction: k = 5 must
    # not be drawn for n = 4
    doc = theorem_campaign(count=30, seed=0, ks=(3, 4, 5), x_range=(4, 5))
    assert doc["all_passed"] is True


def test_budget_failures_are_reported_not_hidden():
    doc = theorem_campaign(count=3, seed=2, x_range=(6, 8), budget=0)
    assert doc["all_passed"] is False
    assert all(f["reason"] == "CAP_EXCEEDED" for f in doc["failures"])
