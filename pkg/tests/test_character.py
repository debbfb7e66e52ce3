import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from idealcount.character import (
    SQUAREFREE_D_TO_19,
    CharacterConsistencyError,
    QuadraticCharacter,
    character_for_modulus,
    fundamental_discriminant,
    is_squarefree,
    kronecker,
    l_at_one,
    l_one_series,
    l_series,
    omega_chi,
    partial_char_sum,
    quadratic_character,
)
from idealcount.constants import PUBLISHED_TABLE


def _factor(n):
    out, p = {}, 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def kronecker_oracle(a, n):
    """Euler's criterion prime by prime, multiplied over the factorization of n."""
    if n == 1:
        return 1
    k = 1
    for p, e in _factor(n).items():
        if p == 2:
            s = 0 if a % 2 == 0 else (1 if a % 8 in (1, 7) else -1)
        else:
            r = pow(a % p, (p - 1) // 2, p)
            s = 0 if r == 0 else (1 if r == 1 else -1)
        k *= s**e
    return k


def class_number(D):
    """h(D) by counting reduced forms (a, b, c), b^2 - 4ac = D."""
    h = 0
    a = 1
    while 3 * a * a <= -D:
        for b in range(-a + 1, a + 1):
            if (b * b - D) % (4 * a):
                continue
            c = (b * b - D) // (4 * a)
            if c < a or (c == a and b < 0):
                continue
            if math.gcd(math.gcd(a, abs(b)), c) == 1:
                h += 1
        a += 1
    return h


NEG_SQUAREFREE = [d for d in range(-1, -101, -1) if is_squarefree(d)]
SMALL_DELTAS = sorted({fundamental_discriminant(d) for d in NEG_SQUAREFREE
                       if abs(fundamental_discriminant(d)) <= 100}, reverse=True)


@pytest.mark.parametrize("d,delta", [(-1, -4), (-2, -8), (-3, -3), (-5, -20), (-7, -7),
                                     (-15, -15), (-17, -68), (-19, -19)])
def test_fundamental_discriminant(d, delta):
    assert fundamental_discriminant(d) == delta


@pytest.mark.parametrize("bad,exc", [(0, ValueError), (3, ValueError), (-4, ValueError),
                                     (-12, ValueError), (-1.0, TypeError), (True, TypeError)])
def test_fundamental_discriminant_rejects(bad, exc):
    with pytest.raises(exc):
        fundamental_discriminant(bad)


@pytest.mark.parametrize("delta", SMALL_DELTAS)
def test_kronecker_matches_euler_criterion(delta):
    for n in range(1, 1001):
        assert kronecker(delta, n) == kronecker_oracle(delta, n), (delta, n)


@given(st.integers(-10**6, 10**6), st.integers(1, 10**4), st.integers(1, 10**4))
def test_kronecker_multiplicative_in_n(a, m, n):
    assert kronecker(a, m * n) == kronecker(a, m) * kronecker(a, n)


def test_kronecker_zero_and_negative_n():
    assert kronecker(1, 0) == 1 and kronecker(-1, 0) == 1 and kronecker(2, 0) == 0
    with pytest.raises(ValueError):
        kronecker(3, -1)


@pytest.mark.parametrize("d", SQUAREFREE_D_TO_19)
def test_character_is_odd_primitive_and_periodic(d):
    chi = quadratic_character(d)
    q = chi.modulus
    assert chi(q - 1) == -1  # odd: chi(-1) = -1
    assert int(chi.values.sum()) == 0
    n = np.arange(1, 5 * q)
    assert np.array_equal(chi(n), chi(n + q))
    for m in range(1, q):
        for k in range(1, q):
            assert chi(m * k) == chi(m) * chi(k)
    # primitive: no proper period dividing q
    for p in range(1, q):
        if q % p == 0:
            assert not np.array_equal(chi.values, np.roll(chi.values, p))


def test_values_read_only():
    chi = quadratic_character(-1)
    with pytest.raises(ValueError):
        chi.values[0] = 5


@pytest.mark.parametrize("d", sorted(PUBLISHED_TABLE))
def test_omega_matches_table(d):
    chi = quadratic_character(d)
    assert chi.omega == PUBLISHED_TABLE[d][1]
    assert omega_chi(chi) == chi.omega
    # brute force over several periods
    run = np.cumsum(chi(np.arange(1, 4 * chi.modulus + 1)))
    assert int(np.abs(run).max()) == chi.omega


@pytest.mark.parametrize("d", sorted(PUBLISHED_TABLE) + [-23, -31, -47])
def test_l_at_zero_is_class_number_formula(d):
    chi = quadratic_character(d)
    w = {-4: 4, -3: 6}.get(chi.delta, 2)
    assert chi.l_at_zero == Fraction(2 * class_number(chi.delta), w)


def test_secondary_term_examples():
    assert quadratic_character(-1).sum_r_chi == -2
    assert quadratic_character(-1).secondary_term == Fraction(-1, 4)
    assert quadratic_character(-3).secondary_term == Fraction(-1, 6)


@pytest.mark.parametrize("d", [-1, -3, -7, -14, -17, -19])
def test_l_at_one_against_digamma(d):
    chi = quadratic_character(d)
    q = chi.modulus
    with mpmath.workdps(30):
        ref = -sum(int(chi.values[r]) * mpmath.digamma(mpmath.mpf(r) / q) for r in range(1, q)) / q
        assert abs(chi.l_at_one - float(ref)) < 1e-14
        assert abs(chi.l_at_one_mp() - ref) < mpmath.mpf(10) ** -28
    assert chi.l_at_one == pytest.approx(math.pi * float(chi.l_at_zero) / math.sqrt(q), rel=1e-15)


def test_l_at_one_known_values():
    assert quadratic_character(-1).l_at_one == pytest.approx(math.pi / 4, rel=1e-15)
    assert quadratic_character(-3).l_at_one == pytest.approx(math.pi / (3 * math.sqrt(3)), rel=1e-15)


@pytest.mark.parametrize("d", [-1, -5, -17])
def test_l_one_series_bound_is_honest(d):
    chi = quadratic_character(d)
    for N in (10, 1000, 10**5):
        v, b = l_one_series(chi, N)
        assert abs(v - chi.l_at_one) <= b


@pytest.mark.parametrize("d,s", [(-1, 0.75), (-3, 1.25), (-14, 0.75), (-17, 1.25), (-7, 2.0)])
def test_l_series_against_hurwitz(d, s):
    chi = quadratic_character(d)
    q = chi.modulus
    with mpmath.workdps(25):
        ref = sum(int(chi.values[r]) * mpmath.zeta(s, mpmath.mpf(r) / q) for r in range(1, q)) * mpmath.mpf(q) ** -s
    v, b = l_series(chi, s)
    assert abs(v - float(ref)) <= b
    assert b < 1e-6  # plenty for the constant caps downstream


def test_l_series_rejects_nonpositive_s():
    with pytest.raises(ValueError):
        l_series(quadratic_character(-1), 0.0)


def test_inconsistent_character_detected():
    good = quadratic_character(-7)
    bad = QuadraticCharacter(good.d, good.delta, good.values, good.omega, good.sum_r_chi,
                             good.l_at_zero + Fraction(1, 100), float("nan"))
    with pytest.raises(CharacterConsistencyError):
        l_at_one(bad)


@given(st.sampled_from(SQUAREFREE_D_TO_19), st.integers(0, 10**9))
def test_partial_char_sum_periodic_and_bounded(d, L):
    chi = quadratic_character(d)
    s = partial_char_sum(chi, L)
    assert abs(s) <= chi.omega
    assert s == partial_char_sum(chi, L + chi.modulus)
    assert s == partial_char_sum(chi, L + 0.5)


def test_partial_char_sum_small():
    chi = quadratic_character(-1)
    assert [partial_char_sum(chi, L) for L in range(6)] == [0, 1, 1, 0, 0, 1]
    with pytest.raises(ValueError):
        partial_char_sum(chi, -1)


@pytest.mark.parametrize("modulus,d", [(4, -1), (3, -3), (8, -2), (7, -7), (20, -5), (56, -14)])
def test_character_for_modulus(modulus, d):
    assert character_for_modulus(modulus).d == d


@pytest.mark.parametrize("modulus", [1, 5, 12, 16])
def test_character_for_modulus_rejects(modulus):
    with pytest.raises(ValueError):
        character_for_modulus(modulus)


def test_to_dict_and_cache():
    chi = quadratic_character(-1)
    assert quadratic_character(-1) is chi
    d = chi.to_dict()
    assert d["delta"] == -4 and d["omega"] == 1 and d["l_at_zero"] == "1/2"
    assert float(d["l_at_one"]) == chi.l_at_one
