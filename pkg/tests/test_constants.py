import math

import mpmath
import numpy as np
import pytest

from idealcount.character import quadratic_character
from idealcount.constants import (
    PUBLISHED_TABLE,
    c0_of_d,
    c_five_quarters,
    c_three_quarters,
    dedekind_sum2_bound,
    dedekind_sum_bound,
    normalized_partial_sums,
    normalized_tails,
    row_verdict,
    sup_c_five_quarters,
)
from idealcount.convolution import convolution_values


@pytest.fixture(scope="module")
def a_small():
    return {d: convolution_values(quadratic_character(d), 4 * 10**5) for d in (-1, -3, -14)}


def test_c34_first_cell():
    chi = quadratic_character(-1)
    vals = normalized_partial_sums(chi, 10)
    assert vals[0] == pytest.approx(4 / math.pi, rel=1e-15)


def test_c54_first_cell_matches_dirichlet_series():
    chi = quadratic_character(-1)
    with mpmath.workdps(20):
        L = mpmath.nsum(lambda k: (-1) ** int(k) / (2 * k + 1) ** mpmath.mpf(1.25), [0, mpmath.inf])
        ref = float(mpmath.zeta(1.25) * L) / chi.l_at_one
    vals = normalized_tails(chi, 10**4, 4 * 10**4)
    # an upper bound that is tight up to the far-tail cap
    assert ref <= vals[0] <= ref + 0.05


@pytest.mark.parametrize("d", [-1, -3])
@pytest.mark.parametrize("N", [10**2, 10**4, 10**6])
def test_dedekind_sum_bound_dominates(d, N):
    chi = quadratic_character(d)
    a = convolution_values(chi, N)
    n = np.arange(1, N + 1, dtype=np.float64)
    emp = math.fsum(a[1:] * n**-0.75) / N**0.25
    for form in ("statement", "proof", "best"):
        assert dedekind_sum_bound(chi, 0.75, N, form) >= emp
    assert dedekind_sum_bound(chi, 0.75, N) == min(dedekind_sum_bound(chi, 0.75, N, "statement"),
                                                    dedekind_sum_bound(chi, 0.75, N, "proof"))


@pytest.mark.parametrize("d", [-1, -3])
@pytest.mark.parametrize("N", [10**2, 10**4, 10**6])
def test_dedekind_sum2_bound_dominates_partial_tails(d, N):
    chi = quadratic_character(d)
    far = 4 * 10**6
    a = convolution_values(chi, far)
    n = np.arange(N, far + 1, dtype=np.float64)
    # a >= 0, so a truncated tail is a lower estimate of the full one
    emp = N**0.25 * math.fsum(a[N:] * n**-1.25)
    assert dedekind_sum2_bound(chi, 1.25, N) >= emp


def test_bounds_approach_their_limits():
    chi = quadratic_character(-3)
    L1 = chi.l_at_one
    assert dedekind_sum_bound(chi, 0.75, 1e16) / L1 == pytest.approx(4, rel=1e-3)
    assert dedekind_sum2_bound(chi, 1.25, 1e16) / L1 == pytest.approx(4, rel=1e-3)
    assert dedekind_sum_bound(chi, 0.75, 10**6) > dedekind_sum_bound(chi, 0.75, 10**8)


def test_bound_argument_checks():
    chi = quadratic_character(-1)
    with pytest.raises(ValueError):
        dedekind_sum_bound(chi, 1.0, 10)
    with pytest.raises(ValueError):
        dedekind_sum_bound(chi, 0.5, 0)
    with pytest.raises(ValueError):
        dedekind_sum_bound(chi, 0.5, 10, form="other")
    with pytest.raises(ValueError):
        dedekind_sum2_bound(chi, 1.0, 10)
    with pytest.raises(ValueError):
        dedekind_sum2_bound(chi, 1.5, 0)


def test_m_max_below_modulus_rejected():
    chi = quadratic_character(-17)
    with pytest.raises(ValueError):
        c_three_quarters(chi, 50)
    with pytest.raises(ValueError):
        c_five_quarters(chi, 50)


def _real_m_sup_34(a, L1, M_hi, step):
    M = np.arange(1, M_hi + 1e-12, step)
    k = np.floor(M).astype(np.int64)
    m = np.arange(1, int(M_hi) + 1, dtype=np.float64)
    cs = np.concatenate(([0.0], np.cumsum(a[1:int(M_hi) + 1] * m**-0.75)))
    return float((cs[k] / (M**0.25 * L1)).max())


def _real_m_sup_54(a, L1, M_hi, step, cutoff):
    M = np.arange(1, M_hi + 1e-12, step)
    kc = np.ceil(M).astype(np.int64)  # sum over m >= M starts at ceil(M)
    m = np.arange(1, cutoff, dtype=np.float64)
    suffix = np.concatenate((np.cumsum((a[1:cutoff] * m**-1.25)[::-1])[::-1], [0.0]))
    return float((M**0.25 * suffix[kc - 1] / L1).max())


@pytest.mark.parametrize("d", [-1, -3, -14])
def test_integer_m_suffices(d, a_small):
    chi = quadratic_character(d)
    a = a_small[d]
    L1 = chi.l_at_one
    int34 = normalized_partial_sums(chi, 100, a).max()
    assert _real_m_sup_34(a, L1, 100, 0.01) <= int34 + 1e-15
    cutoff = 4 * 10**5
    m = np.arange(1, cutoff, dtype=np.float64)
    suffix = np.cumsum((a[1:cutoff] * m**-1.25)[::-1])[::-1]
    int54 = (np.arange(1, 101) ** 0.25 * suffix[:100] / L1).max()
    assert _real_m_sup_54(a, L1, 100, 0.01, cutoff) <= int54 + 1e-15


def test_estimate_invariants(a_small):
    chi = quadratic_character(-3)
    e = c_three_quarters(chi, 10**5, a_small[-3])
    assert e.empirical_max <= e.rigorous_cap and 1 <= e.argmax_M <= e.search_limit
    t = c_five_quarters(chi, 10**5, a=a_small[-3])
    assert t.empirical_max <= t.rigorous_cap and t.m_start == 10**5
    s = sup_c_five_quarters(chi, 10**5, a=a_small[-3])
    assert s.m_start == 1 and s.rigorous_cap >= t.rigorous_cap
    with pytest.raises(ValueError):
        c_five_quarters(chi, 10**5, a=a_small[-3], reading="other")
    with pytest.raises(ValueError):
        normalized_tails(chi, 100, 100)


def test_caps_exceed_four_and_values_approach_four():
    row = c0_of_d(-1, 10**6)
    assert row.c34.rigorous_cap >= 4 and row.c54.rigorous_cap >= 4
    # the normalized quantities tend to 4 and sit near it at M = 10^6
    assert abs(row.c54.empirical_max - 4) < 0.05
    chi = quadratic_character(-1)
    vals = normalized_partial_sums(chi, 10**6)
    # the M^{-1/4} correction makes the approach slow, but it is from below
    assert 4 - 0.15 < vals[-1] < 4
    assert abs(vals[-1] - 4) < abs(vals[10**4 - 1] - 4) < abs(vals[99] - 4)


@pytest.mark.parametrize("d", sorted(PUBLISHED_TABLE))
def test_table_row(d):
    row = c0_of_d(d, 10**6)
    delta, omega, pub = PUBLISHED_TABLE[d]
    assert row.delta == delta and row.omega == omega
    assert row.c0d == pytest.approx(max(row.c34.rigorous_cap, row.c54.rigorous_cap) ** (2 / 3), rel=1e-15)
    assert row.C0d == pytest.approx(row.l_at_one * row.c0d, rel=1e-15)
    assert row.C0d <= pub and pub - row.C0d <= 0.05
    assert row.verdict == "pass"


def test_small_search_limit_semantics():
    assert row_verdict(2.1, 2.04, 1000) == "inconclusive"
    assert row_verdict(2.1, 2.04, 10**6) == "fail"
    assert row_verdict(2.0, 2.04, 1000) == "pass"
    assert row_verdict(2.0, math.nan, 10**6) == "n/a"
    row = c0_of_d(-11, 1000)
    assert row.verdict in ("pass", "inconclusive")


def test_unpublished_d():
    row = c0_of_d(-23, 10**4)
    assert row.verdict == "n/a" and math.isnan(row.published)
    assert row.to_dict()["d"] == -23
