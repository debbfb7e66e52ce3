"""The ideal-counting function a(n) = (1 * chi)(n) and its summatory function.

`sieve_block` produces a(n) on [lo, hi) by pairing each divisor e <= sqrt(n)
with its cofactor; `hyperbola_point` computes S(X) independently by the
Dirichlet hyperbola method.  `scan_error` streams blocks and reports the
worst normalized deviation of S(X) from a linear main term over real X.
"""

from __future__ import annotations

import csv
import io
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Iterator, Optional

import numpy as np

from .character import QuadraticCharacter, quadratic_character

DEFAULT_BLOCK_SIZE = 1 << 22
RATIO_SLOP = 2.0**-40


class SieveOverflowError(OverflowError):
    pass


@dataclass(frozen=True, eq=False)
class ConvolutionTable:
    """a(n) for lo <= n < hi, and S(lo - 1) carried in as `prefix`."""
    lo: int
    hi: int
    values: np.ndarray = field(repr=False)
    prefix: int

    @property
    def total(self) -> int:
        return int(self.values.sum(dtype=np.int64))

    def partial_sums(self) -> np.ndarray:
        """S(n) for lo <= n < hi."""
        return self.prefix + np.cumsum(self.values, dtype=np.int64)

    def with_prefix(self, prefix: int) -> "ConvolutionTable":
        return ConvolutionTable(self.lo, self.hi, self.values, prefix)


def _sieve_values(values: np.ndarray, q: int, lo: int, hi: int) -> np.ndarray:
    n_len = hi - lo
    acc = np.zeros(n_len, dtype=np.int32)
    root = math.isqrt(hi - 1)
    for e in range(1, root + 1):
        # divisor pair (e, n/e) with e <= sqrt(n): add chi(e) once, chi(n/e) once
        # unless n = e^2, where the pair collapses
        first = max(lo, e * e)
        first = -(-first // e) * e
        if first >= hi:
            continue
        start = first - lo
        cof = np.arange(first // e, (hi - 1) // e + 1, dtype=np.int64)
        ce = values[e % q]
        contrib = values[cof % q].astype(np.int32)
        if ce:
            contrib += ce
        if cof[0] == e:
            contrib[0] = ce
        acc[start::e] += contrib
    return acc


def sieve_block(chi: QuadraticCharacter, lo: int, hi: int, prefix: int = 0,
                max_block: Optional[int] = None) -> ConvolutionTable:
    """a(n) = sum_{e | n} chi(e) for lo <= n < hi, stored as int16."""
    if not (1 <= lo < hi):
        raise ValueError(f"need 1 <= lo < hi, got lo={lo}, hi={hi}")
    if max_block is not None and hi - lo > max_block:
        raise ValueError(f"block of length {hi - lo} exceeds {max_block}")
    acc = _sieve_values(chi.values, chi.modulus, lo, hi)
    if acc.size and (acc.max() > np.iinfo(np.int16).max or acc.min() < 0):
        raise SieveOverflowError(f"a(n) out of int16 range or negative on [{lo}, {hi})")
    vals = acc.astype(np.int16)
    vals.setflags(write=False)
    return ConvolutionTable(lo, hi, vals, prefix)


def convolution_values(chi: QuadraticCharacter, N: int) -> np.ndarray:
    """a(n) for 0 <= n <= N as one array (a(0) = 0), for moderate N."""
    out = np.zeros(N + 1, dtype=np.int16)
    for lo in range(1, N + 1, DEFAULT_BLOCK_SIZE):
        hi = min(lo + DEFAULT_BLOCK_SIZE, N + 1)
        out[lo:hi] = sieve_block(chi, lo, hi).values
    return out


def _sieve_job(args):
    d, lo, hi = args
    return sieve_block(quadratic_character(d), lo, hi)


def iter_blocks(chi: QuadraticCharacter, x_max: int, block_size: int = DEFAULT_BLOCK_SIZE,
                workers: int = 1) -> Iterator[ConvolutionTable]:
    """Consecutive tables covering [1, x_max] with continuous prefixes.

    With workers > 1 blocks are sieved in a process pool; they are still
    yielded in order, so results do not depend on the worker count.
    """
    if block_size < 1:
        raise ValueError("block_size must be positive")
    bounds = [(lo, min(lo + block_size, x_max + 1)) for lo in range(1, x_max + 1, block_size)]
    prefix = 0
    if workers <= 1 or len(bounds) == 1:
        tables = (sieve_block(chi, lo, hi) for lo, hi in bounds)
        for t in tables:
            yield t.with_prefix(prefix)
            prefix += t.total
        return
    with ProcessPoolExecutor(max_workers=workers) as pool:
        for t in pool.map(_sieve_job, [(chi.d, lo, hi) for lo, hi in bounds]):
            yield t.with_prefix(prefix)
            prefix += t.total


def hyperbola_point(chi: QuadraticCharacter, X) -> int:
    """S(X) = sum_{l <= X} chi(l) floor(X/l), in O(sqrt X) steps.

    Splits l m <= X at u = floor(sqrt X):
    S = sum_{l<=u} chi(l) floor(X/l) + sum_{m<=u} A(X/m) - u A(u),
    with A the periodic partial sum of chi.
    """
    X = int(math.floor(X))
    if X < 1:
        return 0
    q = chi.modulus
    vals = [int(v) for v in chi.values]
    A = [0] * q
    run = 0
    for r in range(1, q + 1):
        run += vals[r % q]
        A[r % q] = run
    u = math.isqrt(X)
    total = 0
    for k in range(1, u + 1):
        total += vals[k % q] * (X // k) + A[(X // k) % q]
    return total - u * A[u % q]


@dataclass(frozen=True)
class MainTerm:
    """slope * X + constant, with the slope held to ~30 digits as a float triple."""
    slope: float
    constant: Fraction
    label: str
    slope_parts: tuple = field(repr=False, default=())

    @classmethod
    def for_character(cls, chi: QuadraticCharacter, secondary: bool, label: str = "") -> "MainTerm":
        import mpmath
        with mpmath.workdps(40):
            s = chi.l_at_one_mp()
            hi = math.ldexp(math.floor(math.ldexp(float(s), 26)), -26)
            mid = float(s - hi)
            lo = float(s - hi - mid)
        const = chi.secondary_term if secondary else Fraction(0)
        if not label:
            label = "X L(1,chi)" + (" + sum r chi(r)/(2|Delta|)" if secondary else "")
        return cls(float(chi.l_at_one), const, label, (hi, mid, lo))

    def deviation(self, S: np.ndarray, X: np.ndarray) -> np.ndarray:
        """S - (slope X + constant) for integer arrays S, X < 2**27.

        hi has 26 significant bits, so hi * X is exact; the remaining parts
        contribute below 1e-15 absolute.
        """
        hi, mid, lo = self.slope_parts
        Xf = X.astype(np.float64)
        Sf = S.astype(np.float64)
        return ((Sf - hi * Xf) - mid * Xf) - lo * Xf - float(self.constant)

    def __call__(self, X):
        return self.slope * X + float(self.constant)


@dataclass
class ScanReport:
    d: int
    delta: int
    theta: str
    main_term: str
    slope: float
    constant: str
    x_min: int
    x_max: int
    worst_ratio: float
    worst_x: float
    worst_side: str
    claimed_constant: float
    verdict: str
    records: list = field(default_factory=list, repr=False)

    def to_dict(self) -> dict:
        out = asdict(self)
        out.pop("records")
        return out

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["X", "S", "main", "error", "ratio"])
        for row in self.records:
            w.writerow([row[0], row[1], repr(row[2]), repr(row[3]), repr(row[4])])
        w.writerow(["summary", self.worst_x, self.worst_side, self.claimed_constant,
                    repr(self.worst_ratio)])
        return buf.getvalue()


def _as_fraction(theta) -> Fraction:
    return Fraction(theta).limit_denominator(1000) if isinstance(theta, float) else Fraction(theta)


def scan_error(chi: QuadraticCharacter, x_max: int, theta, main: MainTerm,
               claimed_constant: float = math.inf, x_min: int = 1,
               block_size: int = DEFAULT_BLOCK_SIZE, workers: int = 1,
               keep_records: bool = True) -> ScanReport:
    """sup over real X in [x_min, x_max] of |S(X) - main(X)| / X^theta.

    S is constant on [n, n+1) while the main term increases, and
    |S - main(X)|/X^theta is quasi-convex there, so the supremum over each
    cell is attained at X = n or in the limit X -> (n+1)^-.  Both sides are
    evaluated for every integer n; the left limit at x_max + 1 is not.
    Verdict is "pass" iff worst_ratio + 2^-40 <= claimed_constant.
    """
    if x_max < 1:
        raise ValueError("x_max must be >= 1")
    if x_min > x_max:
        raise ValueError(f"x_min={x_min} exceeds x_max={x_max}")
    if x_max >= 1 << 27:
        raise ValueError("scan_error supports x_max < 2**27")
    x_min = max(int(x_min), 1)
    th = _as_fraction(theta)
    thf = float(th)
    worst, worst_x, worst_side = -1.0, 0.0, "at"
    records = []
    for t in iter_blocks(chi, x_max, block_size, workers):
        if t.hi <= x_min:
            continue
        S = t.partial_sums()
        n = np.arange(t.lo, t.hi, dtype=np.int64)
        keep = n >= x_min
        S, n = S[keep], n[keep]
        at = np.abs(main.deviation(S, n)) / n.astype(np.float64) ** thf
        nb = n + 1
        before = np.abs(main.deviation(S, nb)) / nb.astype(np.float64) ** thf
        if n[-1] == x_max:
            before[-1] = -1.0
        # interleave as X = n, (n+1)^-, n+1, ...
        ratio = np.empty(2 * n.size)
        ratio[0::2] = at
        ratio[1::2] = before
        if keep_records:
            # running max carried over from earlier blocks
            prev = np.maximum.accumulate(np.concatenate(([worst], ratio[:-1])))
            for i in np.flatnonzero(ratio > prev):
                k = i // 2
                xv = int(n[k]) + (i % 2)
                side = "before" if i % 2 else "at"
                err = float(main.deviation(S[k:k + 1], np.array([xv]))[0])
                label = f"{xv}-" if side == "before" else str(xv)
                records.append((label, int(S[k]), float(main(xv)), err, float(ratio[i])))
        i = int(np.argmax(ratio))
        if ratio[i] > worst:
            worst = float(ratio[i])
            worst_x = float(n[i // 2] + (i % 2))
            worst_side = "before" if i % 2 else "at"
    verdict = "pass" if worst + RATIO_SLOP <= claimed_constant else "fail"
    return ScanReport(
        d=chi.d, delta=chi.delta, theta=f"{th.numerator}/{th.denominator}",
        main_term=main.label, slope=main.slope, constant=str(main.constant),
        x_min=x_min, x_max=x_max, worst_ratio=worst, worst_x=worst_x,
        worst_side=worst_side, claimed_constant=claimed_constant, verdict=verdict,
        records=records)
