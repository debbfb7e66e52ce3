"""Explicit constants c(3/4), c(5/4), c0(d) and C0(d) = L(1, chi) c0(d).

Each constant is a supremum over M >= 1.  It is evaluated exactly for
integer M up to a search limit (integer M suffices, see the two functions)
and capped for larger M by the a priori bounds on the normalized partial
sums and tails of a(n) n^{-s}.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from functools import lru_cache

import numpy as np

from .character import QuadraticCharacter, l_series, quadratic_character
from .convolution import convolution_values
from .special_functions import zeta

S_LOW = 0.75
S_HIGH = 1.25
DEFAULT_M_MAX = 10**6

# d -> (Delta_d, Omega(chi), published upper bound for L(1, chi) c0(d))
PUBLISHED_TABLE = {
    -1: (-4, 1, 2.04),
    -2: (-8, 2, 2.89),
    -3: (-3, 1, 1.58),
    -5: (-20, 4, 3.66),
    -6: (-24, 4, 3.35),
    -7: (-7, 2, 3.09),
    -10: (-40, 4, 2.60),
    -11: (-11, 3, 2.48),
    -13: (-52, 5, 2.30),
    -14: (-56, 8, 4.40),
    -15: (-15, 3, 4.21),
    -17: (-68, 8, 4.01),
    -19: (-19, 3, 1.90),
}


@dataclass(frozen=True)
class ConstantEstimate:
    empirical_max: float
    argmax_M: int
    rigorous_cap: float
    search_limit: int
    lemma_cap: float  # the a priori bound covering every M > search_limit
    m_start: int = 1  # the estimate covers every real M >= m_start


@lru_cache(maxsize=32)
def _zeta_l_product(d: int, s: float) -> float:
    """Upper bound for |zeta(s) L(s, chi)|."""
    chi = quadratic_character(d)
    L, err = l_series(chi, s)
    return abs(zeta(s)) * (abs(L) + err)


def dedekind_sum_bound(chi: QuadraticCharacter, s: float, N: float, form: str = "best") -> float:
    """Upper bound for sum_{n <= N} a(n) / (n^s N^{1-s}), 0 < s < 1.

    form="statement":
        L1/(1-s) + |zeta(s)L(s,chi)|/N^{1-s} + (1/4 + |zeta(s)| + 5/(1-s)) Omega/sqrt(N)
    form="proof" (the sharper inequality the statement is derived from):
        L1/(1-s) + |zeta(s)L(s,chi)|/N^{1-s} + (5 Omega + 1/4)/((1-s) sqrt(N))
        + |zeta(s)| Omega / N^{1-s/2}
    form="best" returns the smaller of the two.
    """
    if not 0 < s < 1:
        raise ValueError("need 0 < s < 1")
    if N < 1:
        raise ValueError("need N >= 1")
    if form == "best":
        return min(dedekind_sum_bound(chi, s, N, "statement"),
                   dedekind_sum_bound(chi, s, N, "proof"))
    L1, om = chi.l_at_one, chi.omega
    z = abs(zeta(s))
    head = L1 / (1 - s) + _zeta_l_product(chi.d, s) / N ** (1 - s)
    if form == "statement":
        return head + (0.25 + z + 5 / (1 - s)) * om / math.sqrt(N)
    if form == "proof":
        return head + (5 * om + 0.25) / ((1 - s) * math.sqrt(N)) + z * om / N ** (1 - s / 2)
    raise ValueError(f"unknown form {form!r}")


def dedekind_sum2_bound(chi: QuadraticCharacter, s: float, N: float) -> float:
    """Upper bound for N^{s-1} sum_{n >= N} a(n)/n^s, s > 1:
    L1/(s-1) + ((3 zeta(s) + 1/(s-1)) Omega + 1/4)/sqrt(N)."""
    if s <= 1:
        raise ValueError("need s > 1")
    if N < 1:
        raise ValueError("need N >= 1")
    return chi.l_at_one / (s - 1) + ((3 * zeta(s) + 1 / (s - 1)) * chi.omega + 0.25) / math.sqrt(N)


def _check_limit(chi, M_max):
    if M_max < chi.modulus:
        raise ValueError(f"M_max={M_max} is below |Delta|={chi.modulus}; the cap would be meaningless")


def normalized_partial_sums(chi: QuadraticCharacter, M_max: int, a=None) -> np.ndarray:
    """sum_{m<=M} a(m) m^{-3/4} / (M^{1/4} L1) for M = 1..M_max."""
    if a is None:
        a = convolution_values(chi, M_max)
    m = np.arange(1, M_max + 1, dtype=np.float64)
    return np.cumsum(a[1:M_max + 1] * m**-S_LOW) / (m**(1 - S_LOW) * chi.l_at_one)


def c_three_quarters(chi: QuadraticCharacter, M_max: int = DEFAULT_M_MAX, a=None) -> ConstantEstimate:
    """sup over M >= 1 of sum_{m<=M} a(m)/(m^{3/4} M^{1/4} L1).

    On [k, k+1) the sum is fixed and M^{-1/4} decreases, so integer M
    suffice.  Beyond M_max the bound of `dedekind_sum_bound` (decreasing in
    N) evaluated at N = M_max takes over.
    """
    _check_limit(chi, M_max)
    vals = normalized_partial_sums(chi, M_max, a)
    i = int(np.argmax(vals))
    lemma = dedekind_sum_bound(chi, S_LOW, M_max) / chi.l_at_one
    emp = float(vals[i])
    return ConstantEstimate(emp, i + 1, max(emp, lemma), M_max, lemma)


def normalized_tails(chi: QuadraticCharacter, M_max: int, cutoff: int, a=None) -> np.ndarray:
    """Upper bounds for M^{1/4} sum_{m>=M} a(m) m^{-5/4} / L1, M = 1..M_max.

    Terms up to cutoff - 1 are summed; the rest is bounded by
    `dedekind_sum2_bound` at N = cutoff.
    """
    if cutoff <= M_max:
        raise ValueError("cutoff must exceed M_max")
    if a is None or len(a) < cutoff:
        a = convolution_values(chi, cutoff - 1)
    m = np.arange(1, cutoff, dtype=np.float64)
    terms = a[1:cutoff] * m**-S_HIGH
    suffix = np.cumsum(terms[::-1])[::-1]  # sum_{M <= m < cutoff}
    far = cutoff ** (1 - S_HIGH) * dedekind_sum2_bound(chi, S_HIGH, cutoff)
    M = m[:M_max]
    return M**(S_HIGH - 1) * (suffix[:M_max] + far) / chi.l_at_one


def c_five_quarters(chi: QuadraticCharacter, M_max: int = DEFAULT_M_MAX, cutoff: int = None,
                    a=None, reading: str = "tail") -> ConstantEstimate:
    """M^{1/4} sum_{m>=M} a(m)/(m^{5/4} L1), bounded over a range of M.

    reading="tail" (default) bounds it for every M >= M_max: the value at
    M_max and the a priori tail bound at N = M_max.  This is the quantity
    the published c0(d) values are consistent with; the small-M values
    (about 4.85 at M = 1 for d = -1) would exceed them.
    reading="sup" bounds it for every M >= 1 instead.

    On (k, k+1] the tail is fixed and M^{1/4} increases, so integer M
    suffice.  Tails are upper bounds (see `normalized_tails`).
    """
    _check_limit(chi, M_max)
    if reading not in ("tail", "sup"):
        raise ValueError(f"unknown reading {reading!r}")
    if cutoff is None:
        cutoff = 4 * M_max
    vals = normalized_tails(chi, M_max, cutoff, a)
    lemma = dedekind_sum2_bound(chi, S_HIGH, M_max) / chi.l_at_one
    if reading == "sup":
        i = int(np.argmax(vals))
        start = 1
    else:
        i = M_max - 1
        start = M_max
    emp = float(vals[i])
    return ConstantEstimate(emp, i + 1, max(emp, lemma), M_max, lemma, start)


def sup_c_five_quarters(chi: QuadraticCharacter, M_max: int = DEFAULT_M_MAX, a=None) -> ConstantEstimate:
    return c_five_quarters(chi, M_max, a=a, reading="sup")


@dataclass(frozen=True)
class TableRow:
    d: int
    delta: int
    omega: int
    l_at_one: float
    c34: ConstantEstimate
    c54: ConstantEstimate
    c0d: float
    C0d: float
    c54_sup: float  # c(5/4) over all M >= 1, diagnostic only
    published: float = math.nan
    verdict: str = "n/a"

    def to_dict(self) -> dict:
        return asdict(self)


def row_verdict(C0d: float, published: float, M_max: int) -> str:
    if math.isnan(published):
        return "n/a"
    if C0d <= published:
        return "pass"
    return "inconclusive" if M_max < DEFAULT_M_MAX else "fail"


@lru_cache(maxsize=64)
def c0_of_d(d: int, M_max: int = DEFAULT_M_MAX) -> TableRow:
    """c0(d) = max(c(3/4), c(5/4))^{2/3} and C0(d) = L(1, chi) c0(d)."""
    chi = quadratic_character(d)
    cutoff = 4 * M_max
    a = convolution_values(chi, cutoff - 1)
    c34 = c_three_quarters(chi, M_max, a)
    c54 = c_five_quarters(chi, M_max, cutoff, a)
    c54_sup = c_five_quarters(chi, M_max, cutoff, a, reading="sup").rigorous_cap
    c0d = max(c34.rigorous_cap, c54.rigorous_cap) ** (2 / 3)
    C0d = chi.l_at_one * c0d
    pub = PUBLISHED_TABLE.get(d, (None, None, math.nan))[2]
    return TableRow(d, chi.delta, chi.omega, chi.l_at_one, c34, c54, c0d, C0d, c54_sup, pub,
                    row_verdict(C0d, pub, M_max))


def reproduce_table(ds=tuple(PUBLISHED_TABLE), M_max: int = DEFAULT_M_MAX) -> list[TableRow]:
    return [c0_of_d(d, M_max) for d in ds]
