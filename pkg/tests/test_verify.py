from fractions import Fraction

import pytest

from pricedquery import verify


@pytest.mark.parametrize("suite", verify.SUITES)
def test_small_suites_hold(suite):
    rows = verify.run_suite(suite, max_n=3, seed=1)
    assert rows
    assert all(r["holds"] for r in rows)
    assert all(isinstance(r["lhs"], Fraction) for r in rows)


def test_seed_changes_random_instances():
    a = verify.run_suite("osss", max_n=4, seed=1)
    b = verify.run_suite("osss", max_n=4, seed=2)
    assert [r["instance"] for r in a] != [r["instance"] for r in b]


def test_unknown_suite():
    with pytest.raises(ValueError):
        verify.run_suite("bogus")
