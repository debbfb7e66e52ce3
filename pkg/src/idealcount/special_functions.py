"""Bessel functions J0, J1, J2 with explicit error bounds, and related kernels.

Small arguments use the power series evaluated in double-double arithmetic
(the alternating terms reach ~1e7 near x = 20, so plain doubles would lose
about seven digits).  Large arguments use the Hankel expansion with the
remainder bounded by the first omitted term.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

SERIES_CUTOFF = 16.0
SERIES_TERMS = 64
HANKEL_TERMS = 12
_EPS = 2.0**-53
_SPLITTER = 134217729.0  # 2**27 + 1

SQRT_2_OVER_PI = math.sqrt(2.0 / math.pi)


# --- double-double helpers (Dekker / Knuth error-free transforms) ----------

def _two_sum(a, b):
    s = a + b
    bb = s - a
    return s, (a - (s - bb)) + (b - bb)


def _quick_two_sum(a, b):
    s = a + b
    return s, b - (s - a)


def _split(a):
    c = _SPLITTER * a
    hi = c - (c - a)
    return hi, a - hi


def _two_prod(a, b):
    p = a * b
    ah, al = _split(a)
    bh, bl = _split(b)
    return p, ((ah * bh - p) + ah * bl + al * bh) + al * bl


def _dd_add(ah, al, bh, bl):
    s, e = _two_sum(ah, bh)
    t, f = _two_sum(al, bl)
    e = e + t
    s, e = _quick_two_sum(s, e)
    e = e + f
    return _quick_two_sum(s, e)


def _dd_mul(ah, al, bh, bl):
    p, e = _two_prod(ah, bh)
    e = e + (ah * bl + al * bh)
    return _quick_two_sum(p, e)


def _dd_div_scalar(ah, al, b):
    q1 = ah / b
    p1, p2 = _two_prod(q1, b)
    s, e = _two_sum(ah, -p1)
    e = e - p2 + al
    q2 = (s + e) / b
    return _quick_two_sum(q1, q2)


# --- evaluators ------------------------------------------------------------

@dataclass(frozen=True)
class BesselEval:
    """Value of J_order(x) together with a bound on its absolute error.

    `x`, `value` and `abs_error_bound` are floats for scalar input and
    arrays of matching shape otherwise.
    """
    order: int
    x: object
    value: object
    abs_error_bound: object


def _check_order(nu):
    if nu not in (0, 1, 2):
        raise ValueError(f"order must be 0, 1 or 2, got {nu!r}")


def bessel_series(nu: int, x):
    """Power series for J_nu(x) in double-double arithmetic.

    Returns ``(value, error_bound)``.  Accurate for any x the term count
    covers; the error bound grows past x ~ 30 and callers should switch to
    `bessel_hankel` well before that.
    """
    _check_order(nu)
    x = np.asarray(x, dtype=np.float64)
    h = 0.5 * x
    qh, ql = _two_prod(h, h)
    qh, ql = -qh, -ql
    if nu == 0:
        th, tl = np.ones_like(h), np.zeros_like(h)
    elif nu == 1:
        th, tl = h.copy(), np.zeros_like(h)
    else:
        th, tl = 0.5 * (-qh), 0.5 * (-ql)
    sh, sl = np.zeros_like(h), np.zeros_like(h)
    abs_sum = np.zeros_like(h)
    for k in range(SERIES_TERMS):
        sh, sl = _dd_add(sh, sl, th, tl)
        abs_sum += np.abs(th)
        th, tl = _dd_mul(th, tl, qh, ql)
        th, tl = _dd_div_scalar(th, tl, float((k + 1) * (k + 1 + nu)))
    value = sh + sl
    # first omitted term (terms decrease once k > x/2), dd rounding, final rounding
    err = np.abs(th) + 8 * SERIES_TERMS * 2.0**-104 * abs_sum + _EPS * np.abs(value)
    return value, err


def _hankel_coefficients(nu: int, count: int):
    mu = 4.0 * nu * nu
    coeffs = [1.0]
    for k in range(1, count):
        coeffs.append(coeffs[-1] * (mu - (2 * k - 1) ** 2) / (k * 8.0))
    return coeffs


def bessel_hankel(nu: int, x, terms: int = HANKEL_TERMS):
    """Hankel expansion of J_nu(x) for large x; returns ``(value, error_bound)``.

    `terms` terms are kept in each of the P and Q series.  For real x and
    2k > nu - 1/2 the remainder of each series is bounded by the first
    omitted term.  The phase is applied as cos(x)cos(phi) + sin(x)sin(phi)
    so that the argument reduction happens inside libm.
    """
    _check_order(nu)
    x = np.asarray(x, dtype=np.float64)
    a = _hankel_coefficients(nu, 2 * terms + 2)
    inv = 1.0 / x
    p = np.zeros_like(x)
    q = np.zeros_like(x)
    for k in reversed(range(terms)):
        p = p * (-inv * inv) + a[2 * k]
        q = q * (-inv * inv) + a[2 * k + 1]
    q = q * inv
    p_tail = abs(a[2 * terms]) * inv ** (2 * terms)
    q_tail = abs(a[2 * terms + 1]) * inv ** (2 * terms + 1)
    amp = np.sqrt(2.0 / (math.pi * x))
    # phi = (2 nu + 1) pi / 4: cos phi, sin phi are +-sqrt(2)/2
    cphi, sphi = {0: (1.0, 1.0), 1: (-1.0, 1.0), 2: (-1.0, -1.0)}[nu]
    c, s = np.cos(x), np.sin(x)
    cos_chi = (c * cphi + s * sphi) * math.sqrt(0.5)
    sin_chi = (s * cphi - c * sphi) * math.sqrt(0.5)
    value = amp * (p * cos_chi - q * sin_chi)
    err = amp * (p_tail + q_tail) + 8 * _EPS * amp * (np.abs(p) + np.abs(q))
    return value, err


def bessel_j(nu: int, x) -> BesselEval:
    """J_nu(x) for nu in {0, 1, 2} and x >= 0, with an error bound.

    Series below `SERIES_CUTOFF`, Hankel expansion above.
    """
    _check_order(nu)
    scalar = np.ndim(x) == 0
    xs = np.atleast_1d(np.asarray(x, dtype=np.float64))
    if np.any(xs < 0) or np.any(~np.isfinite(xs)):
        raise ValueError("bessel_j needs finite x >= 0")
    value = np.empty_like(xs)
    err = np.empty_like(xs)
    small = xs <= SERIES_CUTOFF
    if small.any():
        value[small], err[small] = bessel_series(nu, xs[small])
    if (~small).any():
        value[~small], err[~small] = bessel_hankel(nu, xs[~small])
    if scalar:
        return BesselEval(nu, float(xs[0]), float(value[0]), float(err[0]))
    return BesselEval(nu, xs, value, err)


def j0(x):
    return bessel_j(0, x).value


def j1(x):
    return bessel_j(1, x).value


def j2(x):
    return bessel_j(2, x).value


# --- closed-form integrals -------------------------------------------------

def bessel_integral_0(a: float, X: float, verify: bool = False) -> float:
    """Closed form of int_0^X J0(a sqrt(t)) dt = (2 sqrt(X)/a) J1(a sqrt(X)).

    With ``verify=True`` the integral is recomputed by quadrature and an
    AssertionError is raised unless the two agree within 1e-9 (1 + X).
    """
    if a <= 0 or X < 0:
        raise ValueError("need a > 0 and X >= 0")
    if X == 0:
        return 0.0
    r = math.sqrt(X)
    value = 2.0 * r / a * j1(a * r)
    if verify:
        ref = quad_bessel_moment(0, a, X)
        if abs(ref - value) > 1e-9 * (1 + X):
            raise AssertionError(f"closed form {value!r} vs quadrature {ref!r} (a={a}, X={X})")
    return value


def bessel_integral_1(a: float, X: float, verify: bool = False, published: bool = False) -> float:
    """Closed form of int_0^X t J0(a sqrt(t)) dt.

    Equals (2 X^{3/2}/a) J1(a sqrt(X)) - (4X/a^2) J2(a sqrt(X)), since
    d/dt (a t^{3/2} J1(a sqrt t)/2 - t J2(a sqrt t)) = a^2 t J0(a sqrt t)/4.
    ``published=True`` returns the variant with +J2 instead, which does not
    match quadrature; it is kept so that the mismatch can be shown.
    The verification tolerance is 1e-9 (1 + X^2).
    """
    if a <= 0 or X < 0:
        raise ValueError("need a > 0 and X >= 0")
    if X == 0:
        return 0.0
    r = math.sqrt(X)
    sign = 1.0 if published else -1.0
    value = sign * 4.0 * X / (a * a) * j2(a * r) + 2.0 * X * r / a * j1(a * r)
    if verify:
        ref = quad_bessel_moment(1, a, X)
        if abs(ref - value) > 1e-9 * (1 + X * X):
            raise AssertionError(f"closed form {value!r} vs quadrature {ref!r} (a={a}, X={X})")
    return value


def quad_bessel_moment(k: int, a: float, X: float) -> float:
    """int_0^X t^k J0(a sqrt(t)) dt by adaptive Gauss-Kronrod quadrature.

    Independent of the closed forms and of this module's Bessel code: the
    integrand uses scipy's j0.  Substituting t = u^2 removes the square-root
    singularity at 0; the u-range is cut into panels of a few half periods
    so each QUADPACK call sees a mildly oscillating integrand.
    """
    from scipy.integrate import IntegrationWarning, quad
    from scipy.special import j0 as sp_j0

    def f(u):
        return 2.0 * u ** (2 * k + 1) * sp_j0(a * u)

    r = math.sqrt(X)
    width = 4 * math.pi / a
    edges = np.append(np.arange(0.0, r, width), r)
    total = 0.0
    parts = []
    for lo, hi in zip(edges[:-1], edges[1:]):
        if hi <= lo:
            continue
        with warnings.catch_warnings():
            # roundoff warnings on panels whose integral nearly cancels
            warnings.simplefilter("ignore", IntegrationWarning)
            val, _ = quad(f, lo, hi, epsabs=1e-13, epsrel=1e-13, limit=200)
        parts.append(val)
    total = math.fsum(parts)
    return total


# --- Krasikov inequalities -------------------------------------------------

class KrasikovSlack(NamedTuple):
    asymptotic: object  # 4|nu^2-1/4|/(5x^{3/2}) - |J_nu(x) - leading Hankel term|
    envelope: object    # sqrt(2/pi) - |x^2-nu^2+1/4|^{1/4} |J_nu(x)|


def krasikov_gap(nu: int, x) -> KrasikovSlack:
    """Slack in both uniform Bessel inequalities; nonnegative means they hold.

    The Bessel values are shifted against the inequality by their error
    bounds, so a nonnegative slack is not an artefact of rounding.
    """
    if nu not in (1, 2):
        raise ValueError("krasikov_gap is defined for nu in {1, 2}")
    x = np.asarray(x, dtype=np.float64)
    if np.any(x <= 0):
        raise ValueError("need x > 0")
    ev = bessel_j(nu, x)
    lead = np.sqrt(2.0 / (math.pi * x)) * np.cos(x - (2 * nu + 1) * math.pi / 4)
    first = (4 * abs(nu * nu - 0.25) / (5 * x**1.5)
             - (np.abs(ev.value - lead) + ev.abs_error_bound))
    second = SQRT_2_OVER_PI - np.abs(x * x - nu * nu + 0.25) ** 0.25 * (
        np.abs(ev.value) + ev.abs_error_bound)
    if np.ndim(first) == 0:
        return KrasikovSlack(float(first), float(second))
    return KrasikovSlack(first, second)


# --- zeta ------------------------------------------------------------------

# B_2, B_4, ..., B_16
_BERNOULLI = (1 / 6, -1 / 30, 1 / 42, -1 / 30, 5 / 66, -691 / 2730, 7 / 6, -3617 / 510)


def zeta(s: float, cut: int = 20) -> float:
    """Riemann zeta at real s != 1 by Euler-Maclaurin (8 Bernoulli terms)."""
    if s == 1:
        raise ValueError("zeta has a pole at s = 1")
    n = cut
    head = math.fsum(m ** -s for m in range(1, n))
    terms = [head, n ** (1 - s) / (s - 1), 0.5 * n ** -s]
    rising = s  # s (s+1) ... (s+2k-2)
    fact = 2.0  # (2k)!
    for k, b in enumerate(_BERNOULLI, start=1):
        terms.append(b / fact * rising * n ** (-s - 2 * k + 1))
        rising *= (s + 2 * k - 1) * (s + 2 * k)
        fact *= (2 * k + 1) * (2 * k + 2)
    return math.fsum(terms)


class ZetaPartial(NamedTuple):
    total: float
    landau_error: float  # sum - M^{1-s}/(1-s) - zeta(s)


class LemmaViolation(ArithmeticError):
    """A numerically checked inequality failed."""


def power_sum(s: float, M: int) -> float:
    """sum_{m <= M} m^{-s}, summed from the small terms up."""
    m = np.arange(M, 0, -1, dtype=np.float64)
    return math.fsum(m**-s)


def zeta_partial(s: float, M: int) -> ZetaPartial:
    """Partial sum of m^{-s} up to M, checked against its zeta approximation.

    Raises LemmaViolation if |sum - M^{1-s}/(1-s) - zeta(s)| > M^{-s}.
    """
    if s <= 0 or s == 1:
        raise ValueError("need s > 0, s != 1")
    if M < 1:
        raise ValueError("need M >= 1")
    total = power_sum(s, M)
    resid = total - M ** (1 - s) / (1 - s) - zeta(s)
    if abs(resid) > M**-s + 1e-13 * max(1.0, total):
        raise LemmaViolation(f"zeta partial sum off by {resid} > M^-s at s={s}, M={M}")
    return ZetaPartial(total, resid)
