"""Quadratic characters of imaginary quadratic fields.

A field Q[sqrt(d)] with d < 0 squarefree has fundamental discriminant
Delta = d (d = 1 mod 4) or 4d, and its character is n -> (Delta/n).
Everything downstream reads chi through the period table built here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import mpmath
import numpy as np


class CharacterConsistencyError(ArithmeticError):
    """The closed-form L(1, chi) and its Dirichlet series disagree."""


def is_squarefree(n: int) -> bool:
    n = abs(n)
    if n == 0:
        return False
    p = 2
    while p * p <= n:
        if n % (p * p) == 0:
            return False
        if n % p == 0:
            n //= p
        p += 1
    return True


def fundamental_discriminant(d: int) -> int:
    """Discriminant of Q[sqrt(d)] for negative squarefree d."""
    if not isinstance(d, (int, np.integer)) or isinstance(d, bool):
        raise TypeError("d must be an integer")
    d = int(d)
    if d >= 0:
        raise ValueError(f"d must be negative, got {d}")
    if not is_squarefree(d):
        raise ValueError(f"d must be squarefree, got {d}")
    return d if d % 4 == 1 else 4 * d


def kronecker(a: int, n: int) -> int:
    """Kronecker symbol (a/n) for n >= 0, by binary Jacobi reduction."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n == 0:
        return 1 if abs(a) == 1 else 0
    if a % 2 == 0 and n % 2 == 0:
        return 0
    v = (n & -n).bit_length() - 1
    n >>= v
    # (a/2) = 0 for even a, +1 for a = +-1 mod 8, -1 for a = +-3 mod 8
    k = 1 if (v % 2 == 0 or a % 8 in (1, 7)) else -1
    a %= n
    while a:
        v = (a & -a).bit_length() - 1
        a >>= v
        if v % 2 and n % 8 in (3, 5):
            k = -k
        if a % 4 == 3 and n % 4 == 3:
            k = -k
        a, n = n % a, a
    return k if n == 1 else 0


@dataclass(frozen=True, eq=False)
class QuadraticCharacter:
    """The character (Delta/.) of Q[sqrt(d)], d < 0, as a period table.

    `sum_r_chi` is the integer sum_{1<=r<=|Delta|} r chi(r); it is negative
    and equals -|Delta| L(0, chi).
    """
    d: int
    delta: int
    values: np.ndarray = field(repr=False)
    omega: int
    sum_r_chi: int
    l_at_zero: Fraction
    l_at_one: float

    @property
    def modulus(self) -> int:
        return -self.delta

    @property
    def secondary_term(self) -> Fraction:
        """(1/(2|Delta|)) sum_{r<=|Delta|} r chi(r) = -L(0, chi)/2."""
        return Fraction(self.sum_r_chi, 2 * self.modulus)

    def __call__(self, n):
        return self.values[np.asarray(n) % self.modulus]

    def l_at_one_mp(self, dps: int = 40):
        """L(1, chi) as an mpmath number carrying `dps` digits."""
        with mpmath.workdps(dps):
            return mpmath.pi * mpmath.mpf(self.l_at_zero.numerator) / (
                self.l_at_zero.denominator * mpmath.sqrt(self.modulus))

    def to_dict(self) -> dict:
        return {
            "d": self.d,
            "delta": self.delta,
            "omega": self.omega,
            "l_at_zero": f"{self.l_at_zero.numerator}/{self.l_at_zero.denominator}",
            "l_at_one": repr(self.l_at_one),
        }


def character_table(delta: int) -> np.ndarray:
    q = abs(delta)
    return np.array([kronecker(delta, r) for r in range(q)], dtype=np.int8)


def partial_char_sum(chi: QuadraticCharacter, L) -> int:
    """sum_{1 <= l <= L} chi(l); whole periods contribute nothing."""
    if L < 0:
        raise ValueError("L must be nonnegative")
    r = int(math.floor(L)) % chi.modulus
    return int(chi.values[1:r + 1].sum(dtype=np.int64))


def _prefix_sums(values: np.ndarray) -> np.ndarray:
    # A(L) for L = 1..q; A(q) = 0
    return np.cumsum(np.roll(values, -1), dtype=np.int64)


def omega_chi(chi: QuadraticCharacter) -> int:
    """max_{L >= 1} |sum_{l <= L} chi(l)|, searched over one period (exact)."""
    return int(np.abs(_prefix_sums(chi.values)).max())


def l_at_zero(chi: QuadraticCharacter) -> Fraction:
    return Fraction(-chi.sum_r_chi, chi.modulus)


def _tail_constant(chi: QuadraticCharacter) -> float:
    """max |B| where B is the periodic running sum of A - mean(A)."""
    A = _prefix_sums(chi.values)
    B = np.cumsum(A * chi.modulus - int(A.sum()))
    return float(np.abs(B).max()) / chi.modulus


def l_one_series(chi: QuadraticCharacter, N: int) -> tuple[float, float]:
    """sum_{n <= N} chi(n)/n plus a tail correction, with a rigorous error bound.

    The partial sums A(n) of chi are periodic with mean A_bar, so the tail
    sum_{n > N} chi(n)/n equals (A_bar - A(N))/(N+1) plus
    sum_{n > N} (A(n) - A_bar)/(n(n+1)); partial summation bounds the last
    piece by 2 max|B| / ((N+1)(N+2)) where B is the (periodic) running sum
    of A - A_bar.  Returns ``(value, bound)``.
    """
    q = chi.modulus
    A = _prefix_sums(chi.values)
    A_bar = Fraction(int(A.sum()), q)
    parts = []
    chunk = 1 << 20
    for lo in range(1, N + 1, chunk):
        n = np.arange(lo, min(lo + chunk, N + 1), dtype=np.int64)
        c = chi.values[n % q].astype(np.float64)
        parts.append(math.fsum(c / n))
    A_N = int(A[(N - 1) % q])
    value = math.fsum(parts) + float(A_bar - A_N) / (N + 1)
    bound = 2 * _tail_constant(chi) / ((N + 1) * (N + 2)) + 4e-16 * (math.log(N) + 1)
    return value, bound


def l_series(chi: QuadraticCharacter, s: float, N: int = 1 << 16) -> tuple[float, float]:
    """L(s, chi) for real s > 0 from N terms plus the mean-partial-sum tail
    correction; returns ``(value, bound)``.

    Same decomposition as `l_one_series` with weights n^{-s}; the fluctuating
    part of the tail is at most 2 max|B| s / (N+1)^{s+1}.
    """
    if s <= 0:
        raise ValueError("need s > 0")
    q = chi.modulus
    A = _prefix_sums(chi.values)
    A_bar = float(Fraction(int(A.sum()), q))
    parts = []
    chunk = 1 << 20
    for lo in range(1, N + 1, chunk):
        n = np.arange(lo, min(lo + chunk, N + 1), dtype=np.float64)
        c = chi.values[n.astype(np.int64) % q].astype(np.float64)
        parts.append(math.fsum(c * n**-s))
    A_N = int(A[(N - 1) % q])
    value = math.fsum(parts) + (A_bar - A_N) * (N + 1) ** -s
    bound = 2 * _tail_constant(chi) * s * (N + 1) ** (-s - 1) + 4e-16 * (math.log(N) + 1) * N ** max(0.0, 1 - s)
    return value, bound


def l_at_one(chi: QuadraticCharacter, precision: float = 1e-10) -> float:
    """L(1, chi) = pi L(0, chi)/sqrt(|Delta|), cross-checked by its series.

    The series is run far enough for its bound to fall below `precision`;
    CharacterConsistencyError is raised if the two disagree beyond the
    combined budget.
    """
    closed = float(chi.l_at_one_mp())
    N = max(10 * chi.modulus, math.isqrt(int(2 * _tail_constant(chi) / precision)) + 1)
    series, bound = l_one_series(chi, N)
    if abs(series - closed) > bound + precision:
        raise CharacterConsistencyError(
            f"L(1,chi) for d={chi.d}: closed form {closed!r}, series {series!r} +- {bound:.3g}")
    return closed


@lru_cache(maxsize=None)
def quadratic_character(d: int) -> QuadraticCharacter:
    """Build (and cache) the character of Q[sqrt(d)] for squarefree d < 0."""
    delta = fundamental_discriminant(d)
    q = -delta
    values = character_table(delta)
    values.setflags(write=False)
    sum_r_chi = int(np.dot(np.arange(q, dtype=np.int64), values.astype(np.int64)))
    # r = q term vanishes, so r = 0..q-1 covers 1..q
    l0 = Fraction(-sum_r_chi, q)
    omega = int(np.abs(_prefix_sums(values)).max())
    partial = QuadraticCharacter(d, delta, values, omega, sum_r_chi, l0, float("nan"))
    l1 = l_at_one(partial)
    return QuadraticCharacter(d, delta, values, omega, sum_r_chi, l0, l1)


def character_for_modulus(modulus: int) -> QuadraticCharacter:
    """The real primitive odd character of conductor 3, 4, ... (|Delta|)."""
    for d in (-modulus, -modulus // 4 if modulus % 4 == 0 else None):
        if d is None or d >= 0 or not is_squarefree(d):
            continue
        if -fundamental_discriminant(d) == modulus:
            return quadratic_character(d)
    raise ValueError(f"no imaginary quadratic field has discriminant -{modulus}")


SQUAREFREE_D_TO_19 = (-1, -2, -3, -5, -6, -7, -10, -11, -13, -14, -15, -17, -19)
