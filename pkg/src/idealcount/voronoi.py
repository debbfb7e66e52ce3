"""Smoothed Voronoi identity for a(n) = (1 * chi)(n) and the estimates built on it.

The triangular weight (1 - n/X) turns the dual side into a J2 series; the
difference of two such sums gives the kernel T(z; a).  The checks here
compare exact left-hand sides (rational arithmetic over sieved a(n)) with
the right-hand sides and the explicit error terms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .character import QuadraticCharacter
from .constants import DEFAULT_M_MAX, c0_of_d, dedekind_sum2_bound, S_HIGH
from .convolution import MainTerm, ScanReport, convolution_values, hyperbola_point, scan_error
from .special_functions import SQRT_2_OVER_PI, bessel_j

_EPS = 2.0**-53
FOUR_PI = 4 * math.pi

REGIMES = {
    # name: (a threshold for T, z upper limit, z limit inclusive, T constants,
    #        first-approx constant, Y/X limit, X/|Delta| floor, main constant)
    "standard": dict(a_min=FOUR_PI, z_max=1 / 3, z_closed=True, small=0.53, large=7 / 3,
                     approx=0.36, y_ratio=1 / 3, x_factor=1, main=0.76),
    "large": dict(a_min=130 * FOUR_PI, z_max=1 / 10, z_closed=False, small=0.4, large=2.1,
                  approx=0.292, y_ratio=1 / 10, x_factor=130**2, main=0.67),
}


def _regime(name):
    try:
        return REGIMES[name]
    except KeyError:
        raise ValueError(f"regime must be one of {sorted(REGIMES)}, got {name!r}") from None


# --- T(z; a) -----------------------------------------------------------------

TAYLOR_SWITCH = 1e-3  # use the expansion in z when z * a is below this


def t_kernel(z, a, with_error: bool = False):
    """T(z; a) = ((1+z) J2(a sqrt(1+z)) - J2(a)) / z.

    For z a < 1e-3 the difference quotient loses too much to cancellation
    and the expansion (a/2) J1(a) + z a^2 J0(a)/8 - z^2 a^3 J1(a)/48 is used
    (z -> 0 gives d/dz[(1+z) J2(a sqrt(1+z))] = (a/2) J1(a)).
    """
    z = np.asarray(z, dtype=np.float64)
    a = np.asarray(a, dtype=np.float64)
    z, a = np.broadcast_arrays(z, a)
    if np.any(z <= 0) or np.any(a <= 0):
        raise ValueError("t_kernel needs z > 0 and a > 0")
    b = a * np.sqrt(1 + z)
    jb = bessel_j(2, b)
    ja = bessel_j(2, a)
    direct = ((1 + z) * jb.value - ja.value) / z
    # b = a sqrt(1+z) carries three roundings: |db| <= 3 eps b, and |J2'| <= 1
    direct_err = ((1 + z) * (jb.abs_error_bound + 3 * _EPS * b) + ja.abs_error_bound) / z + 4 * _EPS * np.abs(
        (1 + z) * jb.value) / z
    small = z * a < TAYLOR_SWITCH
    value = direct
    err = direct_err
    if small.any():
        j1a = bessel_j(1, a)
        j0a = bessel_j(0, a)
        taylor = a / 2 * j1a.value + z * a * a * j0a.value / 8 - z * z * a**3 * j1a.value / 48
        # next term is O(z^3 a^4 J); bound it generously
        taylor_err = (a / 2 + z * a * a / 8 + z * z * a**3 / 48) * np.maximum(
            j1a.abs_error_bound, j0a.abs_error_bound) + (z * a) ** 3 * a / 100
        value = np.where(small, taylor, direct)
        err = np.where(small, taylor_err, direct_err)
    if value.ndim == 0:
        value, err = float(value), float(err)
    return (value, err) if with_error else value


def t_bound(z, a, regime: str = "standard"):
    """The explicit bound min(c1 sqrt(a), c2/(z sqrt(a))) for |T(z; a)|."""
    r = _regime(regime)
    z = np.asarray(z, dtype=np.float64)
    a = np.asarray(a, dtype=np.float64)
    return np.minimum(r["small"] * np.sqrt(a), r["large"] / (z * np.sqrt(a)))


@dataclass
class TBoundReport:
    regime: str
    nodes: int
    worst_slack: float  # min over nodes of bound - |T| - error
    worst_relative_slack: float
    worst_node: tuple
    violations: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations and self.worst_slack > 0


def t_grid(regime: str = "standard", n_z: int = 200, n_a: int = 200, a_span: float = 100.0):
    """z log-spaced from 1e-4 to the regime limit; a at the regime threshold,
    2x, 10x, 1e3 (when admissible) plus `n_a` log-spaced points up to
    `a_span` times the threshold."""
    r = _regime(regime)
    z_hi = r["z_max"] if r["z_closed"] else np.nextafter(r["z_max"], 0)
    z = np.geomspace(1e-4, z_hi, n_z)
    a0 = r["a_min"]
    special = [a0, 2 * a0, 10 * a0, 1e3]
    a = np.unique(np.concatenate([[v for v in special if v >= a0],
                                  np.geomspace(a0, a_span * a0, n_a)]))
    return z, a


def t_bound_scan(regime: str = "standard", n_z: int = 200, n_a: int = 200,
                 raise_on_violation: bool = False) -> TBoundReport:
    """Check |T(z; a)| <= min(c1 sqrt(a), c2/(z sqrt(a))) on the regime's grid."""
    z, a = t_grid(regime, n_z, n_a)
    Z, A = np.meshgrid(z, a, indexing="ij")
    val, err = t_kernel(Z, A, with_error=True)
    bound = t_bound(Z, A, regime)
    slack = bound - np.abs(val) - err
    rel = slack / bound
    k = np.unravel_index(int(np.argmin(slack)), slack.shape)
    bad = np.argwhere(slack < 0)
    violations = [(float(Z[i, j]), float(A[i, j]), float(slack[i, j])) for i, j in bad]
    if violations and raise_on_violation:
        raise AssertionError(f"T bound violated at {violations[:5]}")
    return TBoundReport(regime, int(slack.size), float(slack[k]), float(rel.min()),
                        (float(Z[k]), float(A[k])), violations)


# --- smoothed Voronoi identity -------------------------------------------------

@lru_cache(maxsize=8)
def _values(d: int, N: int) -> np.ndarray:
    from .character import quadratic_character
    return convolution_values(quadratic_character(d), N)


def _coefficients(chi: QuadraticCharacter, N: int) -> np.ndarray:
    return _values(chi.d, N)


@dataclass
class VoronoiCheck:
    d: int
    X: int
    m_cut: int
    lhs: Fraction
    rhs_main: float
    rhs_series: float
    tail_bound: float
    eval_bound: float
    discrepancy: float
    verdict: str

    def to_dict(self) -> dict:
        return {
            "d": self.d, "X": self.X, "m_cut": self.m_cut,
            "lhs": f"{self.lhs.numerator}/{self.lhs.denominator}",
            "lhs_float": float(self.lhs), "rhs_main": self.rhs_main,
            "rhs_series": self.rhs_series, "tail_bound": self.tail_bound,
            "eval_bound": self.eval_bound, "discrepancy": self.discrepancy,
            "verdict": self.verdict,
        }


def smoothed_sum(chi: QuadraticCharacter, X: int, a=None) -> Fraction:
    """sum_{n <= X} (1 - n/X) a(n), exactly."""
    X = int(X)
    if X < 1:
        raise ValueError("X must be >= 1")
    if a is None or len(a) <= X:
        a = _coefficients(chi, X)
    av = a[1:X + 1].astype(np.int64)
    n = np.arange(1, X + 1, dtype=np.int64)
    S = int(av.sum())
    first = int((n * av).sum())
    return Fraction(X * S - first, X)


def voronoi_tail_bound(chi: QuadraticCharacter, X: float, m_cut: int) -> float:
    """Bound for (sqrt|D|/2pi) sum_{m > m_cut} a(m)/m |J2(4 pi sqrt(m X/|D|))|.

    Uses |J2(x)| <= sqrt(2/pi) |x^2 - 15/4|^{-1/4} and
    sum_{m >= N} a(m) m^{-5/4} <= N^{-1/4} B(N) with B the tail bound at
    s = 5/4, N = m_cut + 1.
    """
    q = chi.modulus
    N = m_cut + 1
    x_min = FOUR_PI * math.sqrt(N * X / q)
    if x_min * x_min <= 15 / 4:
        return math.inf
    # |x^2 - 15/4|^{-1/4} <= x^{-1/2} (1 - 15/(4 x_min^2))^{-1/4} for x >= x_min
    kappa = (1 - 15 / (4 * x_min * x_min)) ** -0.25
    per_m = SQRT_2_OVER_PI * kappa * (FOUR_PI * math.sqrt(X / q)) ** -0.5  # times m^{-1/4}
    tail_sum = N ** (1 - S_HIGH) * dedekind_sum2_bound(chi, S_HIGH, N)
    return math.sqrt(q) / (2 * math.pi) * per_m * tail_sum


def voronoi_smooth_check(chi: QuadraticCharacter, X: int, m_cut: int,
                         a=None) -> VoronoiCheck:
    """Compare both sides of the smoothed identity

        sum_{n<=X} (1 - n/X) a(n) = X L1/2 + sum_r r chi(r)/(2|D|)
            + (sqrt|D|/2pi) sum_{m>=1} a(m)/m J2(4 pi sqrt(m X/|D|)),

    truncating the series at m_cut.  Passes when the discrepancy is within
    the tail bound plus the accumulated evaluation error.
    """
    X = int(X)
    q = chi.modulus
    if X < 1:
        raise ValueError("X must be >= 1")
    if m_cut < q:
        raise ValueError(f"m_cut={m_cut} must be at least |Delta|={q}")
    need = max(X, m_cut)
    if a is None or len(a) <= need:
        a = _coefficients(chi, need)
    lhs = smoothed_sum(chi, X, a)
    rhs_main = X * chi.l_at_one / 2 + float(chi.secondary_term)

    m = np.arange(1, m_cut + 1, dtype=np.float64)
    am = a[1:m_cut + 1].astype(np.float64)
    nz = am != 0
    m, am = m[nz], am[nz]
    x = FOUR_PI * np.sqrt(m * X / q)
    ev = bessel_j(2, x)
    terms = am / m * ev.value
    scale = math.sqrt(q) / (2 * math.pi)
    rhs_series = scale * math.fsum(terms)
    # x carries four roundings (4 pi, quotient, sqrt, product) and |J2'| <= 1
    eval_bound = scale * (float(np.sum(am / m * (ev.abs_error_bound + 4 * _EPS * x)))
                          + 4 * _EPS * float(np.sum(np.abs(terms)))) \
        + 4 * _EPS * (abs(rhs_main) + abs(rhs_series) + abs(float(lhs)))
    tail = voronoi_tail_bound(chi, X, m_cut)
    if not math.isfinite(tail) or tail <= 0:
        raise ValueError(f"tail bound unusable for m_cut={m_cut}")
    disc = abs(float(lhs - Fraction(rhs_main)) - rhs_series)
    verdict = "pass" if disc <= tail + eval_bound else "fail"
    return VoronoiCheck(chi.d, X, m_cut, lhs, rhs_main, rhs_series, tail, eval_bound, disc, verdict)


# --- first approximation and the main inequality -------------------------------

def default_C0(chi: QuadraticCharacter, M_max: int = DEFAULT_M_MAX) -> float:
    return c0_of_d(chi.d, M_max).C0d


@dataclass
class FirstApproxReport:
    d: int
    X: float
    Y: float
    regime: str
    lhs: float
    main: float
    deviation: float
    bound: float
    holds: bool


def _trapezoid_lhs(chi, X: Fraction, Y: Fraction) -> Fraction:
    top = int(math.floor(X + Y))
    a = _coefficients(chi, max(top, 1))
    lo = int(math.floor(X))
    total = Fraction(int(a[1:lo + 1].astype(np.int64).sum()))
    for n in range(lo + 1, top + 1):
        if a[n]:
            total += (X + Y - n) / Y * int(a[n])
    return total


def first_approx_check(chi: QuadraticCharacter, X, Y, regime: str = "standard",
                       C0: float = None) -> FirstApproxReport:
    """Check the trapezoid-smoothed count against (2X+Y) L1/2 + secondary term.

    The allowed error is 0.36 C0 sqrt(X |D| / Y) (0.292 in the large regime).
    X and Y may be int, float or Fraction; the left side is exact.
    """
    r = _regime(regime)
    Xf, Yf = Fraction(X), Fraction(Y)
    q = chi.modulus
    if not 0 < Yf <= Xf * Fraction(r["y_ratio"]).limit_denominator(10):
        raise ValueError(f"need 0 < Y <= X*{r['y_ratio']:.3g} in the {regime} regime")
    if Xf < r["x_factor"] * q:
        raise ValueError(f"need X >= {r['x_factor']}|Delta| in the {regime} regime")
    if C0 is None:
        C0 = default_C0(chi)
    lhs = _trapezoid_lhs(chi, Xf, Yf)
    main = float(2 * Xf + Yf) * chi.l_at_one / 2 + float(chi.secondary_term)
    dev = abs(float(lhs) - main)
    bound = r["approx"] * C0 * math.sqrt(float(Xf) * q / float(Yf))
    return FirstApproxReport(chi.d, float(Xf), float(Yf), regime, float(lhs), main, dev, bound,
                             dev <= bound)


def smoothing_length(chi: QuadraticCharacter, X: float, C0: float, regime: str = "standard") -> float:
    """Y = (c C0 sqrt(X) / L1)^{2/3}, c = 0.36 (0.292 in the large regime)."""
    r = _regime(regime)
    return (r["approx"] * C0 * math.sqrt(X) / chi.l_at_one) ** (2 / 3)


def main_threshold(chi: QuadraticCharacter, C0: float, regime: str = "standard") -> float:
    """Smallest X covered: max(|D|, 2 c0(d)), or max(130^2 |D|, 2 c0(d))."""
    r = _regime(regime)
    return max(r["x_factor"] * chi.modulus, 2 * C0 / chi.l_at_one)


@dataclass
class MainCheckReport:
    d: int
    X: float
    regime: str
    S: int
    main: float
    deviation: float
    bound: float
    Y: float
    holds: bool


def main_theorem_check(chi: QuadraticCharacter, X, regime: str = "standard",
                       C0: float = None) -> MainCheckReport:
    """|S(X) - X L1 - secondary| <= 0.76 C0 X^{1/3} (0.67 in the large regime)."""
    r = _regime(regime)
    if C0 is None:
        C0 = default_C0(chi)
    X = float(X)
    lo = main_threshold(chi, C0, regime)
    if X < lo:
        raise ValueError(f"X={X} below the {regime} threshold {lo:.6g}")
    S = hyperbola_point(chi, X)
    main = X * chi.l_at_one + float(chi.secondary_term)
    dev = abs(S - main)
    bound = r["main"] * C0 * X ** (1 / 3)
    return MainCheckReport(chi.d, X, regime, S, main, dev, bound,
                           smoothing_length(chi, X, C0, regime), dev <= bound)


def main_theorem_scan(chi: QuadraticCharacter, x_max: int, regime: str = "standard",
                      C0: float = None, block_size: int = None, workers: int = 1) -> ScanReport:
    """Jump-point certification of the main inequality for all real X in
    [threshold, x_max].  The scan starts at floor(threshold), a superset."""
    r = _regime(regime)
    if C0 is None:
        C0 = default_C0(chi)
    x_min = int(math.floor(main_threshold(chi, C0, regime)))
    kw = {} if block_size is None else {"block_size": block_size}
    return scan_error(chi, x_max, Fraction(1, 3), MainTerm.for_character(chi, secondary=True),
                      claimed_constant=r["main"] * C0, x_min=x_min, workers=workers, **kw)
