from math import comb

import pytest

from makeev.errors import DomainError
from makeev.services import bounds


@pytest.mark.parametrize("m,q,t", [(1, 0, 1), (2, 1, 2), (3, 1, 1), (4, 2, 4), (5, 2, 3), (7, 2, 1), (8, 3, 8)])
def test_decompose(m, q, t):
    assert bounds.decompose(m) == (q, t)
    assert 2 ** q <= m <= 2 ** (q + 1) - 1
    assert 1 <= t <= 2 ** q


def test_equipartition_count():
    assert bounds.equipartition_count(2, 3) == 6
    assert bounds.equipartition_count(3, 4) == 14
    assert bounds.equipartition_count(3, 5) == 25


@pytest.mark.parametrize("m,k,expected", [(3, 4, 12), (1, 1, 1), (3, 3, 7)])
def test_ramos_lower(m, k, expected):
    assert bounds.ramos_lower(m, k) == expected


def test_mlz_upper():
    assert bounds.mlz_upper(3, 3) == 9
    assert bounds.mlz_upper(3, 4) == 17
    for q in range(0, 4):
        assert bounds.mlz_upper(2 ** (q + 1) - 1, 3) == 5 * 2 ** q - 1


def test_makeev_lower():
    assert bounds.makeev_lower(3, 3, 4) == 11
    assert bounds.makeev_lower(1, 3, 4, orthogonal=True) == 5
    assert bounds.makeev_lower(1, 3, 5, orthogonal=True) == 7
    assert bounds.makeev_lower(3, 2, 3) == 6


def test_makeev_lower_needs_level_two():
    with pytest.raises(DomainError):
        bounds.makeev_lower(1, 1, 3)
    with pytest.raises(DomainError):
        bounds.makeev_lower(1, 4, 3)


def test_makeev_lower_recovers_ramos():
    for m in range(1, 9):
        for k in range(2, 7):
            assert bounds.makeev_lower(m, k, k) == bounds.ramos_lower(m, k)


def test_bk_upper():
    assert bounds.bk_upper(1, 2, 3) == 4
    for m in range(1, 6):
        for k in range(2, 7):
            assert bounds.bk_upper(m, 2, k) == m * (1 + comb(k, 2))
    # m * (1 + 3 + 3 + 1) at (l, k) = (3, 4)
    assert bounds.bk_upper(1, 3, 4) == 8


def test_theorem_upper():
    assert bounds.theorem_upper(3, 2, 3) == 7
    assert bounds.theorem_upper(2, 3, 4, orthogonal=True) == 10
    assert bounds.theorem_upper(1, 3, 5) is None
    assert bounds.theorem_upper(1, 3, 4) == 5
    assert bounds.theorem_upper(1, 3, 4, orthogonal=True) == 7
    assert bounds.theorem_upper(1, 3, 5, orthogonal=True) == 9
    # the orthogonal families need t >= 2
    assert bounds.theorem_upper(3, 2, 3, orthogonal=True) is None


def test_theorem_upper_below_bk():
    for m in range(1, 17):
        for k in range(2, 7):
            assert bounds.theorem_upper(m, 2, k) <= bounds.bk_upper(m, 2, k)
        assert bounds.theorem_upper(m, 3, 4) <= bounds.bk_upper(m, 3, 4)


def test_corollary_brackets():
    for q in range(0, 4):
        m = 2 ** (q + 1) - 1
        assert bounds.makeev_lower(m, 2, 3) == 4 * 2 ** q - 2
        assert bounds.theorem_upper(m, 2, 3) == 4 * 2 ** q - 1
        assert bounds.makeev_lower(m, 3, 4) == 7 * 2 ** q - 3
        assert bounds.theorem_upper(m, 3, 4) == 7 * 2 ** q - 2
    for q in range(1, 4):
        m = 2 ** (q + 1) - 2
        assert bounds.makeev_lower(m, 2, 3, orthogonal=True) == 4 * 2 ** q - 3
        assert bounds.theorem_upper(m, 2, 3, orthogonal=True) == 4 * 2 ** q - 2
        assert bounds.makeev_lower(m, 3, 4, orthogonal=True) == 7 * 2 ** q - 5
        assert bounds.theorem_upper(m, 3, 4, orthogonal=True) == 7 * 2 ** q - 4


def test_intro_table():
    report = bounds.bound_report(3, 3, 4)
    assert (report.lower, report.upper_known, report.upper_source) == (11, 12, "theorem-preset")

    report = bounds.bound_report(3, 4, 4)
    assert (report.lower, report.upper_known, report.upper_source) == (12, 17, "mlz")


def test_bound_report_sources():
    report = bounds.bound_report(1, 3, 5)
    assert report.upper_source == "bk"
    assert report.upper_known == bounds.bk_upper(1, 3, 5)

    report = bounds.bound_report(1, 3, 5, orthogonal=True)
    assert report.upper_known == 9

    report = bounds.bound_report(1, 4, 6, orthogonal=True)
    assert report.upper_known is None
    assert report.upper_source is None

    report = bounds.bound_report(2, 1, 3)
    assert report.lower == 2
    assert report.expected_lower == 2


def test_expected_lower():
    assert bounds.expected_lower(1, 3, 4) == 4
    assert bounds.expected_lower(1, 3, 4, orthogonal=True) == 5


def test_render_bracket():
    assert bounds.render_bracket(bounds.bound_report(3, 3, 4)) == "11 ≤ Δ ≤ 12"
    assert bounds.render_bracket(bounds.bound_report(1, 3, 5, orthogonal=True)) == "7 ≤ Δ⊥ ≤ 9"
    assert bounds.render_bracket(bounds.bound_report(2, 2, 3, orthogonal=True)) == "5 ≤ Δ⊥ ≤ 6"
    assert bounds.render_bracket(bounds.bound_report(1, 4, 6, orthogonal=True)) == "10 ≤ Δ⊥"


def test_invalid_arguments():
    with pytest.raises(DomainError):
        bounds.decompose(0)
    with pytest.raises(DomainError):
        bounds.ramos_lower(1, 0)
    with pytest.raises(DomainError):
        bounds.bound_report(1, 3, 2)
